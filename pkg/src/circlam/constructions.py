"""Named constructions: Farey, geodesic lifts, Denjoy blow-up and its tessellation, pA-like maps."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .circle import (
    INF,
    AnglePoint,
    BlownUpPoint,
    Chord,
    DenjoyFrame,
    Linking,
    ProjectivePoint,
    TreePoint,
    angle,
    arc_length,
    linked,
    proj,
    sort_cyclic,
)
from .group import ElementKind, GroupAction, Word, classify_element
from .lamination import (
    Certificate,
    Gap,
    Lamination,
    Recipe,
    gaps,
    materialize,
)
from .maps import BlowupRotation, PiecewiseAffine, TreeAutomorphism, collapse
from .scalar import QuadraticScalar, as_scalar

# ---------------------------------------------------------------------------
# Farey


DEFAULT_FAREY_WINDOW = (Fraction(-2), Fraction(2))


def _stern_brocot(Q: int):
    """Farey edges inside [0, 1] with denominators at most Q, as fraction pairs."""
    edges = [((0, 1), (1, 1))]
    stack = [((0, 1), (1, 1))]
    while stack:
        (a, b), (c, d) = stack.pop()
        if b + d > Q:
            continue
        m = (a + c, b + d)
        edges.append(((a, b), m))
        edges.append((m, (c, d)))
        stack.append(((a, b), m))
        stack.append((m, (c, d)))
    return edges


def farey(Q: int, window: Optional[tuple] = None) -> Lamination:
    """Farey edges ``(p/q, r/s)`` with ``|ps - qr| = 1`` and denominators at most Q.

    ``window = (lo, hi)`` restricts finite endpoints to ``[lo, hi]``; infinity
    (``1/0``) is always a vertex.  The default window is ``[-2, 2]``.
    """
    if Q < 1:
        raise ValueError("Q must be at least 1")
    lo, hi = (Fraction(x) for x in (window or DEFAULT_FAREY_WINDOW))
    if not lo < hi:
        raise ValueError("empty window")
    base = _stern_brocot(Q)
    pairs = set()
    for n in range(int(lo.__floor__()), int(hi.__ceil__()) + 1):
        pairs.add(((n, 1), (1, 0)))
        if n + 1 > hi.__ceil__():
            continue
        for (a, b), (c, d) in base:
            pairs.add(((a + n * b, b), (c + n * d, d)))
    leaves, depth = [], {}
    for (a, b), (c, d) in pairs:
        ends = []
        for p, q in ((a, b), (c, d)):
            if q == 0:
                ends.append(INF)
            else:
                x = Fraction(p, q)
                if not lo <= x <= hi:
                    break
                ends.append(ProjectivePoint(as_scalar(x)))
        else:
            ch = Chord(*ends)
            leaves.append(ch)
            depth[ch] = max(b, d, 1)
    return Lamination(leaves, Recipe((Chord(proj(0), INF),), None, Q),
                      closure_note=f"Farey edges with denominators <= {Q} over [{lo}, {hi}] and infinity",
                      leaf_depth=depth, check=False)


def farey_determinant(c: Chord) -> int:
    """``|ps - qr|`` for a chord between rational points or infinity."""
    fr = []
    for p in c.endpoints:
        if p.is_infinite:
            fr.append((1, 0))
        else:
            x = p.value.as_fraction()
            fr.append((x.numerator, x.denominator))
    (p, q), (r, s) = fr
    return abs(p * s - q * r)


# ---------------------------------------------------------------------------
# lifts of closed geodesics


def axis(action: GroupAction, w: Word) -> Chord:
    c = classify_element(action, w, 1)
    if c.kind is not ElementKind.HYPERBOLIC:
        raise ValueError(f"{w} is {c.kind.value}, not hyperbolic")
    return Chord(*c.fixed)


def geodesic_lift_lamination(action: GroupAction, w: Word, radius: int):
    """Orbit of the axis of ``w`` under the ball; a Certificate if leaves link."""
    return materialize([axis(action, w)], action, radius)


# ---------------------------------------------------------------------------
# Denjoy blow-up


@dataclass
class DenjoyScenario:
    alpha: QuadraticScalar
    base: QuadraticScalar
    J: int
    frame: DenjoyFrame
    map: BlowupRotation
    lamination: Lamination
    central_gap: Gap

    def interval_length(self, j: int) -> Fraction:
        return Fraction(1, 2 ** abs(j))

    def leaf(self, j: int) -> Chord:
        """The chord dI_j joining the ends of the blown-up interval I_j."""
        return Chord(BlownUpPoint(self.frame, j, 0), BlownUpPoint(self.frame, j, 1))

    def rotation(self) -> PiecewiseAffine:
        return PiecewiseAffine.rotation(self.alpha)

    def collapse(self, p: BlownUpPoint) -> AnglePoint:
        return collapse(p)


def denjoy(alpha, p=0, J: int = 3) -> DenjoyScenario:
    """Blow up the orbit of ``p`` under rotation by ``alpha``; keep ``dI_j`` for ``|j| <= J``."""
    alpha = as_scalar(alpha)
    if alpha.is_rational:
        raise ValueError("alpha must be irrational")
    if J < 1:
        raise ValueError("J must be at least 1")
    frame = DenjoyFrame(alpha.frac(), as_scalar(p))
    leaves = [Chord(BlownUpPoint(frame, j, 0), BlownUpPoint(frame, j, 1)) for j in range(-J, J + 1)]
    lam = Lamination(leaves, Recipe(tuple(leaves), None, 0),
                     closure_note=f"boundary chords of I_j for |j| <= {J}",
                     leaf_depth={c: 0 for c in leaves})
    central = max(gaps(lam), key=lambda g: g.n_chords)
    return DenjoyScenario(alpha, frame.base, J, frame, BlowupRotation(frame, 1, J), lam, central)


def rotation_linking_witness(alpha, c: Chord, N: int) -> Optional[int]:
    """Least ``n <= N`` with ``c`` and ``R^n(c)`` linked, for rotation by ``alpha``."""
    alpha = as_scalar(alpha)
    a, b = angle(c.a.value), angle(c.b.value)
    if a == b:
        raise ValueError("chord endpoints coincide")
    x, y = a.value, b.value
    for n in range(1, N + 1):
        x, y = x + alpha, y + alpha
        if linked(c, Chord(AnglePoint(x), AnglePoint(y))) is Linking.LINKED:
            return n
    return None


def rotation_linking_witnesses(alpha, chords: Sequence[Chord], N: int) -> list:
    """:func:`rotation_linking_witness` for many chords at once.

    A chord with shorter arc ``l`` is linked with its rotation by ``s`` iff
    ``s`` lies within ``l`` of 0 modulo 1.  So the least witness is the first
    ``n`` at which ``||n alpha||`` drops below ``l``, which is always one of
    the record minima of that sequence; those are computed once.
    """
    alpha = as_scalar(alpha)
    records = []
    best = None
    for n in range(1, N + 1):
        s = (n * alpha).frac()
        d = min(s, 1 - s)
        if best is None or d < best:
            best = d
            records.append((n, d))
    out = []
    for c in chords:
        x, y = angle(c.a.value).value, angle(c.b.value).value
        if x == y:
            raise ValueError("chord endpoints coincide")
        L = (y - x).frac()
        ell = min(L, 1 - L)
        out.append(next((n for n, d in records if d < ell), None))
    return out


# ---------------------------------------------------------------------------
# tessellation by reflected copies of P_R


def _copy_leaves(frame, addr: tuple, J: int) -> list:
    skip = addr[-1] if addr else None
    return [Chord(TreePoint(frame, addr, s, 0), TreePoint(frame, addr, s, 1))
            for s in range(-J, J + 1) if s != skip]


def _labels_ok(p: TreePoint, J: int) -> bool:
    return abs(p.side) <= J and all(abs(a) <= J for a in p.address)


@dataclass
class Tessellation:
    levels: list          # levels[d] is the lamination at depth d
    scenario: DenjoyScenario
    mode: str

    @property
    def lamination(self) -> Lamination:
        return self.levels[-1]


def denjoy_tessellation(scenario: DenjoyScenario, depth: int, mode: str = "full") -> Tessellation:
    """Copies of P_R glued across reflected sides, in the tree-boundary model.

    ``mode="full"``: level d+1 reflects every level-d copy across each of its
    free sides ``|j| <= J``.  ``mode="orbit"``: the orbit of the truncated
    lamination under words of length <= depth in ``R~`` and ``r = r(dI_0)``,
    keeping only leaves whose labels stay within ``|j| <= J``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    frame, J = scenario.frame, scenario.J
    levels = []
    if mode == "full":
        leaves = set(_copy_leaves(frame, (), J))
        depth_of = {c: 0 for c in leaves}
        frontier = [()]
        levels.append(Lamination(leaves, closure_note="depth 0", leaf_depth=depth_of))
        for d in range(1, depth + 1):
            nxt = []
            for addr in frontier:
                for s in range(-J, J + 1):
                    if addr and s == addr[-1]:
                        continue
                    child = addr + (s,)
                    nxt.append(child)
                    for c in _copy_leaves(frame, child, J):
                        if c not in depth_of:
                            depth_of[c] = d
                            leaves.add(c)
            frontier = nxt
            levels.append(Lamination(leaves, closure_note=f"depth {d}", leaf_depth=depth_of))
    elif mode == "orbit":
        R = TreeAutomorphism(frame, ["R"])
        r = TreeAutomorphism.reflection(frame, 0)
        seeds = _copy_leaves(frame, (), J)
        depth_of = {c: 0 for c in seeds}
        layer = [TreeAutomorphism(frame, [])]
        levels.append(Lamination(seeds, closure_note="depth 0", leaf_depth=dict(depth_of)))
        gens = [R, R.inverse(), r]
        seen_words = {()}
        for d in range(1, depth + 1):
            nxt = []
            for g in layer:
                for s in gens:
                    h = g.compose(s)
                    key = _reduce_tree_word(h.ops)
                    if key in seen_words:
                        continue
                    seen_words.add(key)
                    h = TreeAutomorphism(frame, key)
                    nxt.append(h)
                    for c in seeds:
                        a, b = h.apply(c.a), h.apply(c.b)
                        if _labels_ok(a, J) and _labels_ok(b, J):
                            img = Chord(a, b)
                            depth_of.setdefault(img, d)
            layer = nxt
            levels.append(Lamination(depth_of, closure_note=f"depth {d}", leaf_depth=dict(depth_of)))
    else:
        raise ValueError(f"unknown tessellation mode {mode!r}")
    return Tessellation(levels, scenario, mode)


def _reduce_tree_word(ops: tuple) -> tuple:
    out: list = []
    inv = {"R": "R-", "R-": "R", "r": "r"}
    for o in ops:
        if out and out[-1] == inv[o]:
            out.pop()
        else:
            out.append(o)
    return tuple(out)


def density_in_order(coarse: Lamination, fine: Lamination) -> Certificate:
    """Every leaf of ``coarse`` has an endpoint of a newer ``fine`` leaf strictly
    inside its key interval (the side facing away from the root polygon)."""
    old = set(coarse.leaves)
    keys = sorted({p.key() for c in fine.leaves if c not in old for p in c.endpoints})
    for c in coarse.leaves:
        lo, hi = c.sort_key()
        i = bisect.bisect_right(keys, lo)
        if i >= len(keys) or not keys[i] < hi:
            return Certificate.refuted({"kind": "empty_side", "leaf": c})
    return Certificate.proven(leaves=len(coarse), new_endpoints=len(keys))


# ---------------------------------------------------------------------------
# pseudo-Anosov-like maps


@dataclass
class PALikeSpec:
    fixed_points: list
    attracting_flags: list
    map: PiecewiseAffine
    attracting_polygon: list
    repelling_polygon: list

    @property
    def n(self) -> int:
        return len(self.fixed_points) // 2

    def attracting(self) -> list:
        return [p for p, f in zip(self.fixed_points, self.attracting_flags) if f]

    def repelling(self) -> list:
        return [p for p, f in zip(self.fixed_points, self.attracting_flags) if not f]

    def stable_lamination(self) -> Lamination:
        return Lamination(self.attracting_polygon, closure_note="attracting polygon")

    def unstable_lamination(self) -> Lamination:
        return Lamination(self.repelling_polygon, closure_note="repelling polygon")


def hull_boundary(points: Sequence[AnglePoint]) -> list:
    """Boundary chords of the ideal convex hull of at least two circle points."""
    pts = sort_cyclic(set(points))
    if len(pts) < 2:
        return []
    if len(pts) == 2:
        return [Chord(*pts)]
    return [Chord(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


def pa_like_map(points: Sequence, attracting: Sequence[bool]) -> PALikeSpec:
    """A piecewise-affine degree-one map fixing exactly ``points``.

    Between neighbouring fixed points the map has one break at the midpoint,
    which moves a quarter of the way toward the attracting end; slopes are 1/2
    next to an attractor and 3/2 next to a repeller.
    """
    pts = [angle(p) for p in points]
    if len(pts) < 4 or len(pts) % 2:
        raise ValueError("need an even number (at least 4) of fixed points")
    order = sort_cyclic(pts)
    if len(set(pts)) != len(pts):
        raise ValueError("fixed points must be distinct")
    flags = dict(zip(pts, attracting))
    flags_sorted = [bool(flags[p]) for p in order]
    for i in range(len(order)):
        if flags_sorted[i] == flags_sorted[(i + 1) % len(order)]:
            raise ValueError("attracting and repelling points must alternate")
    nodes = []
    n = len(order)
    for i, p in enumerate(order):
        q = order[(i + 1) % n]
        x0 = p.value
        L = arc_length(p, q).to_scalar()
        nodes.append((x0, x0))
        mid = x0 + L / 2
        shift = L / 4 if flags_sorted[(i + 1) % n] else -L / 4
        nodes.append((mid, mid + shift))
    m = PiecewiseAffine(nodes)
    att = [p for p, f in zip(order, flags_sorted) if f]
    rep = [p for p, f in zip(order, flags_sorted) if not f]
    return PALikeSpec(order, flags_sorted, m, hull_boundary(att), hull_boundary(rep))


def chord_distance(c1: Chord, c2: Chord):
    """Largest chart distance between matched endpoints, minimized over matchings."""
    def d(x, y):
        u = arc_length(x, y)
        return min(u, 1 - u)
    return min(max(d(c1.a, c2.a), d(c1.b, c2.b)), max(d(c1.a, c2.b), d(c1.b, c2.a)))
