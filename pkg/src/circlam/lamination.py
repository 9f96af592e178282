"""Finite laminations: materialization, faces, collection checks, rainbows, coverage."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .circle import (
    Arc,
    Chord,
    CirclePoint,
    ProjectivePoint,
    arc_length,
    chart,
    find_linked_pair,
    from_chart,
    sort_cyclic,
    strictly_between,
)
from .group import GroupAction, Word, enumerate_ball
from .multiquad import MultiSurd


class LinkedLeavesError(ValueError):
    """A leaf set that should be a lamination contains a linked pair."""

    def __init__(self, c1, c2):
        super().__init__(f"linked leaves {c1} and {c2}")
        self.pair = (c1, c2)


# ---------------------------------------------------------------------------
# certificates


class Verdict(str, Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass
class Certificate:
    verdict: Verdict
    witness: Optional[dict] = None
    depth: Optional[int] = None
    detail: dict = field(default_factory=dict)

    @classmethod
    def proven(cls, depth=None, **detail):
        return cls(Verdict.PROVEN, None, depth, detail)

    @classmethod
    def refuted(cls, witness: dict, depth=None, **detail):
        return cls(Verdict.REFUTED, witness, depth, detail)

    @classmethod
    def unknown(cls, depth=None, **detail):
        return cls(Verdict.UNKNOWN, None, depth, detail)

    @property
    def is_proven(self) -> bool:
        return self.verdict is Verdict.PROVEN

    @property
    def is_refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED


# ---------------------------------------------------------------------------
# laminations


@dataclass(frozen=True)
class Recipe:
    seeds: tuple
    action: Optional[GroupAction] = None
    depth: int = 0


class Lamination:
    """A finite set of pairwise unlinked chords (shared endpoints allowed).

    ``leaf_depth`` maps each leaf to the recipe depth at which it first
    appears (word length, or largest denominator for Farey leaves).
    """

    def __init__(self, leaves: Iterable[Chord], recipe: Optional[Recipe] = None,
                 closure_note: str = "", leaf_depth: Optional[dict] = None, check: bool = True):
        uniq = set(leaves)
        if check:
            pair = find_linked_pair(uniq)
            if pair is not None:
                raise LinkedLeavesError(*pair)
        self.leaves = tuple(sorted(uniq, key=Chord.sort_key))
        models = {c.model for c in self.leaves}
        if len(models) > 1:
            raise ValueError("leaves from different models")
        self.model = models.pop() if models else None
        self.recipe = recipe
        self.closure_note = closure_note
        self.leaf_depth = dict(leaf_depth or {})
        self._set = frozenset(self.leaves)
        self._incident = None

    def __len__(self):
        return len(self.leaves)

    def __iter__(self):
        return iter(self.leaves)

    def __contains__(self, c: Chord) -> bool:
        return c in self._set

    @property
    def leaf_set(self) -> frozenset:
        return self._set

    def endpoints(self) -> set:
        """The endpoint set E(lam)."""
        return set(self._incidence())

    def _incidence(self) -> dict:
        if self._incident is None:
            inc: dict = {}
            for c in self.leaves:
                inc.setdefault(c.a, []).append(c)
                inc.setdefault(c.b, []).append(c)
            self._incident = inc
        return self._incident

    def incident(self, p: CirclePoint) -> list:
        return list(self._incidence().get(p, ()))

    def truncate(self, depth: int) -> "Lamination":
        """Leaves whose recorded depth is at most ``depth``."""
        keep = [c for c in self.leaves if self.leaf_depth.get(c, 0) <= depth]
        return Lamination(keep, self.recipe, self.closure_note,
                          {c: self.leaf_depth[c] for c in keep if c in self.leaf_depth}, check=False)

    def issubset(self, other: "Lamination") -> bool:
        return self._set <= other._set

    def __repr__(self):
        return f"Lamination({len(self.leaves)} leaves, model={self.model and self.model.value})"


def _image(g, c: Chord) -> Chord:
    return Chord(g.apply(c.a), g.apply(c.b))


def materialize(seeds: Sequence[Chord], action: Optional[GroupAction], depth: int):
    """Orbit of the seeds under the ball of radius ``depth`` (plus the identity).

    Returns a :class:`Lamination`, or a refuting :class:`Certificate` naming
    two linked images and the words producing them.
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("empty seed set")
    model = seeds[0].model
    for s in seeds:
        if s.model is not model:
            raise ValueError("seeds from different models")
    if action is not None and action.model is not model:
        raise ValueError("action and seeds live on different models")
    origin: dict = {}
    for s in seeds:
        origin.setdefault(s, (Word(), s, 0))
    if action is not None and depth > 0:
        for w, g in enumerate_ball(action, depth):
            for s in seeds:
                img = _image(g, s)
                if img not in origin:
                    origin[img] = (w, s, len(w))
    pair = find_linked_pair(origin)
    recipe = Recipe(tuple(seeds), action, depth)
    if pair is not None:
        c1, c2 = pair
        return Certificate.refuted(
            {"kind": "linked_pair", "chords": [c1, c2],
             "words": [str(origin[c1][0]), str(origin[c2][0])],
             "seeds": [origin[c1][1], origin[c2][1]]},
            depth=depth,
            word_length=max(len(origin[c1][0]), len(origin[c2][0])))
    return Lamination(origin, recipe,
                      closure_note=f"orbit of {len(seeds)} seed(s) under the ball of radius {depth}",
                      leaf_depth={c: d for c, (_, _, d) in origin.items()}, check=False)


# ---------------------------------------------------------------------------
# collections


class CollectionMode(str, Enum):
    TRANSVERSE = "transverse"
    STRONGLY_TRANSVERSE = "strongly_transverse"
    PANTS_LIKE = "pants_like"


def rationals_and_infinity(p: CirclePoint) -> bool:
    """Cusp oracle of the modular group: rational points and infinity."""
    if isinstance(p, ProjectivePoint):
        return p.is_infinite or p.value.is_rational
    return False


def explicit_cusps(points: Iterable[CirclePoint]) -> Callable[[CirclePoint], bool]:
    pts = frozenset(points)
    return lambda p: p in pts


def check_collection(collection: Sequence[Lamination], mode: CollectionMode,
                     cusp_oracle: Optional[Callable[[CirclePoint], bool]] = None) -> Certificate:
    """Pairwise transversality-type checks over materialized leaves.

    Transverse: no common leaf.  Strongly transverse: no common endpoint.
    Pants-like: no common leaf, and every common endpoint is a cusp point.
    """
    mode = CollectionMode(mode)
    if mode is CollectionMode.PANTS_LIKE and cusp_oracle is None:
        raise ValueError("pants-like mode needs a cusp oracle")
    models = {lam.model for lam in collection if lam.model is not None}
    if len(models) > 1:
        raise ValueError("laminations live on different models")
    shared_cusps = 0
    for i in range(len(collection)):
        for j in range(i + 1, len(collection)):
            L1, L2 = collection[i], collection[j]
            common = L1.leaf_set & L2.leaf_set
            if common:
                leaf = min(common, key=Chord.sort_key)
                return Certificate.refuted({"kind": "shared_leaf", "pair": [i, j], "leaf": leaf},
                                           mode=mode.value)
            if mode is CollectionMode.TRANSVERSE:
                continue
            ends = L1.endpoints() & L2.endpoints()
            if mode is CollectionMode.STRONGLY_TRANSVERSE and ends:
                p = sort_cyclic(ends)[0]
                return Certificate.refuted({"kind": "shared_endpoint", "pair": [i, j], "point": p},
                                           mode=mode.value)
            if mode is CollectionMode.PANTS_LIKE:
                for p in sort_cyclic(ends):
                    if not cusp_oracle(p):
                        return Certificate.refuted(
                            {"kind": "non_cusp_shared_endpoint", "pair": [i, j], "point": p},
                            mode=mode.value)
                shared_cusps += len(ends)
    depths = [lam.recipe.depth if lam.recipe else None for lam in collection]
    return Certificate.proven(depth=max((d for d in depths if d is not None), default=None),
                              mode=mode.value, depths=depths,
                              leaves=[len(lam) for lam in collection],
                              shared_cusp_endpoints=shared_cusps)


# ---------------------------------------------------------------------------
# faces


class ArcStatus(str, Enum):
    DEGENERATE = "degenerate"
    FRONTIER = "frontier"


@dataclass(frozen=True)
class BoundaryArc:
    start: CirclePoint
    end: CirclePoint
    status: ArcStatus


@dataclass
class Gap:
    """A face of the disk cut along the leaves.

    ``boundary`` alternates arcs and chords counterclockwise.
    """

    boundary: list
    parent: Optional[Chord] = None  # the enclosing chord; None for the outer face

    @property
    def chords(self) -> list:
        return [x for x in self.boundary if isinstance(x, Chord)]

    @property
    def arcs(self) -> list:
        return [x for x in self.boundary if isinstance(x, BoundaryArc)]

    @property
    def n_chords(self) -> int:
        return len(self.chords)

    @property
    def frontier_arcs(self) -> list:
        return [a for a in self.arcs if a.status is ArcStatus.FRONTIER]

    @property
    def is_ideal_polygon(self) -> bool:
        return self.n_chords >= 2 and not self.frontier_arcs

    @property
    def is_lune(self) -> bool:
        return self.n_chords == 1 and len(self.frontier_arcs) == 1

    def vertices(self) -> list:
        out = []
        for c in self.chords:
            for p in c.endpoints:
                if p not in out:
                    out.append(p)
        return out


def _nest(leaves: Sequence[Chord]):
    """Parent of each chord in the laminar family of key intervals."""
    items = sorted(leaves, key=lambda c: c._keys[1], reverse=True)
    items.sort(key=lambda c: c._keys[0])
    parent: dict = {}
    children: dict = {None: []}
    stack: list = []
    for c in items:
        lo = c._keys[0]
        while stack and stack[-1]._keys[1] <= lo:
            stack.pop()
        par = stack[-1] if stack else None
        parent[c] = par
        children.setdefault(par, []).append(c)
        children.setdefault(c, [])
        stack.append(c)
    return parent, children


def _arc(a: CirclePoint, b: CirclePoint) -> BoundaryArc:
    return BoundaryArc(a, b, ArcStatus.DEGENERATE if a == b else ArcStatus.FRONTIER)


def gaps(lam: Lamination) -> list:
    """Faces of the subdivision; ``len(lam) + 1`` of them."""
    parent, children = _nest(lam.leaves)
    out = []
    top = children[None]
    if not top:
        out.append(Gap([], None))
    else:
        bd = []
        for i, c in enumerate(top):
            nxt = top[(i + 1) % len(top)]
            bd.append(c)
            bd.append(_arc(c.b, nxt.a))
        out.append(Gap(bd, None))
    for c in lam.leaves:
        bd = []
        cur = c.a
        for k in children[c]:
            bd.append(_arc(cur, k.a))
            bd.append(k)
            cur = k.b
        bd.append(_arc(cur, c.b))
        bd.append(c)
        out.append(Gap(bd, c))
    return out


@dataclass
class FaceSummary:
    faces: int
    leaves: int
    chord_incidences: int
    max_chords: int
    frontier_lunes: int
    ideal_polygons: int
    other: int

    @property
    def euler_ok(self) -> bool:
        return self.faces == self.leaves + 1 and self.chord_incidences == 2 * self.leaves


def face_summary(lam: Lamination, faces: Optional[list] = None) -> FaceSummary:
    """Very-fullness is reported as (max chords per face, frontier lunes)."""
    faces = gaps(lam) if faces is None else faces
    lunes = sum(1 for f in faces if f.is_lune)
    polys = sum(1 for f in faces if f.is_ideal_polygon)
    return FaceSummary(len(faces), len(lam), sum(f.n_chords for f in faces),
                       max((f.n_chords for f in faces), default=0), lunes, polys,
                       len(faces) - lunes - polys)


def face_of_side(lam: Lamination, c: Chord, x: CirclePoint, faces: Optional[list] = None) -> Gap:
    """The face bordering ``c`` on the side of the open arc containing ``x``."""
    for f in faces if faces is not None else gaps(lam):
        if c not in f.chords:
            continue
        inner = f.parent == c
        # the inner face of c lies over the arc from c.a to c.b
        if inner == strictly_between(c.a, x, c.b):
            return f
    raise ValueError("chord is not a leaf")


# ---------------------------------------------------------------------------
# rainbows


class RainbowKind(str, Enum):
    ENDPOINT = "endpoint"
    RAINBOW = "rainbow"
    UNKNOWN = "unknown"


@dataclass
class RainbowResult:
    kind: RainbowKind
    leaf: Optional[Chord] = None
    chain: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.chain)


def _side_arc(c: Chord, p: CirclePoint) -> Arc:
    return Arc(c.a, c.b) if strictly_between(c.a, p, c.b) else Arc(c.b, c.a)


def _arc_contains_arc(A: Arc, B: Arc) -> bool:
    return A.contains(B.start) and A.contains(B.end) and not (
        B.contains_open(A.start) or B.contains_open(A.end))


def antipode(p: CirclePoint) -> CirclePoint:
    """The point half a turn from ``p`` in the exact chart."""
    return from_chart(p.model, chart(p) + Fraction(1, 2))


def rainbow(lam: Lamination, p: CirclePoint, depth: Optional[int] = None,
            reference: Optional[CirclePoint] = None) -> RainbowResult:
    """Either a leaf ending at ``p`` or the chain of leaves nested around it.

    Only leaves of recorded depth at most ``depth`` are used.  The chain is
    every leaf separating ``p`` from ``reference`` (default: the antipode of
    ``p``) whose ``p``-side arc is at most half the circle.  Such leaves are
    totally ordered by inclusion of their ``p``-side arcs and are listed from
    outermost to innermost.
    """
    leaves = lam.leaves if depth is None else [c for c in lam.leaves if lam.leaf_depth.get(c, 0) <= depth]
    ends = [c for c in leaves if c.has_endpoint(p)]
    if ends:
        return RainbowResult(RainbowKind.ENDPOINT, leaf=ends[0])
    z = antipode(p) if reference is None else reference
    half = Fraction(1, 2)
    sided = [(c, A) for c in leaves
             if not c.has_endpoint(z) and c.separates(p, z)
             for A in [_side_arc(c, p)] if arc_length(A.start, A.end) <= half]
    if not sided:
        return RainbowResult(RainbowKind.UNKNOWN)

    def cmp(x, y):
        if x[0] == y[0]:
            return 0
        return -1 if _arc_contains_arc(x[1], y[1]) else 1

    sided.sort(key=functools.cmp_to_key(cmp))
    return RainbowResult(RainbowKind.RAINBOW, chain=[c for c, _ in sided])


def verify_rainbow(chain: Sequence[Chord], p: CirclePoint) -> bool:
    """Each leaf separates ``p`` from the previous leaf's far side: strict nesting."""
    arcs = [_side_arc(c, p) for c in chain]
    if any(c.has_endpoint(p) for c in chain):
        return False
    return all(_arc_contains_arc(A, B) and A != B for A, B in zip(arcs, arcs[1:]))


# ---------------------------------------------------------------------------
# coverage


@dataclass
class CoverageReport:
    epsilon: Fraction
    window: Arc
    dense: bool
    covering_radius: MultiSurd
    boundary_full: bool
    uncovered_at: Optional[MultiSurd]   # chart offset from the window start
    worst_gaps: list                    # (Arc, length), longest first


def _offset(window: Arc, x: CirclePoint):
    return arc_length(window.start, x)


def coverage_report(lam: Lamination, epsilon, window: Arc, worst: int = 3) -> CoverageReport:
    """Density and boundary-fullness audit at scale ``epsilon`` (chart lengths).

    Dense: every window point is within ``epsilon`` of a leaf endpoint.
    Boundary-full: every window point is within ``epsilon`` of the short arc
    of some leaf whose short arc is shorter than ``epsilon``.
    """
    from .group import covering_radius, cyclic_gaps, gap_meets_window

    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if window.is_full:
        W = MultiSurd.of(1)
    else:
        W = _offset(window, window.end)
    ends = lam.endpoints()
    if ends:
        rad = covering_radius(list(ends), window)
        gl = sorted(((g, L) for g, L in cyclic_gaps(list(ends)) if gap_meets_window(g, window)),
                    key=lambda t: t[1], reverse=True)[:worst]
    else:
        rad, gl = MultiSurd.of(1), []
    dense = rad <= eps

    # open intervals (in window offsets) covered by epsilon-neighborhoods of short leaves
    spans = []
    for c in lam.leaves:
        L1 = arc_length(c.a, c.b)
        s, L = (c.a, L1) if L1 <= Fraction(1, 2) else (c.b, 1 - L1)
        if not L < eps:
            continue
        r = _offset(window, s)
        for shift in (-1, 0, 1):
            spans.append((r + shift - eps, r + shift + L + eps))
    spans.sort(key=lambda t: t[0])
    reach = MultiSurd.of(0)
    uncovered = None
    covered_start = False
    for lo, hi in spans:
        if not covered_start:
            if lo < 0 < hi:
                covered_start, reach = True, hi
            continue
        if reach > W:
            break
        if lo < reach:
            if hi > reach:
                reach = hi
        else:
            uncovered = reach
            break
    if not covered_start:
        uncovered = MultiSurd.of(0)
    elif uncovered is None and not reach > W:
        uncovered = reach
    return CoverageReport(eps, window, dense, rad, uncovered is None, uncovered, gl)
