"""Words, balls, element classification, fixed-point clouds and convergence diagnostics."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .circle import (
    Arc,
    CirclePoint,
    Model,
    arc_length,
    chart,
    from_chart,
    sort_cyclic,
)
from .maps import (
    Behavior,
    CircleMap,
    IdentityMapError,
    MoebiusKind,
    MoebiusMap,
    classify_moebius,
    fixed_points,
    identity_like,
)
from .multiquad import MultiSurd
from .scalar import QuadraticScalar, as_scalar


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    """A freely reduced word; letters are ``(name, +1 or -1)``."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(tuple(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((n, -e) for n, e in reversed(self.letters)))

    def power(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(n if e > 0 else f"{n}^-1" for n, e in self.letters)

    @classmethod
    def parse(cls, text: str, names: Optional[Iterable[str]] = None) -> "Word":
        """Parse ``"A B^-1 A^2"``; with ``names`` given, ``"AB^-1"`` also works."""
        text = text.strip()
        if text in ("", "1", "e", "id"):
            return cls()
        if names is not None:
            alts = "|".join(re.escape(n) for n in sorted(names, key=len, reverse=True))
            pattern = re.compile(rf"\s*({alts})(?:\^(-?\d+))?\s*\*?")
        else:
            pattern = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?\s*\*?")
        letters, pos = [], 0
        while pos < len(text):
            m = pattern.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse word {text!r} at {pos}")
            k = int(m.group(2)) if m.group(2) else 1
            letters.extend([(m.group(1), 1 if k > 0 else -1)] * abs(k))
            pos = m.end()
        return cls(tuple(letters))

    def to_json(self) -> str:
        return str(self)


def _reduce(letters: tuple) -> tuple:
    out: list = []
    for n, e in letters:
        if e not in (1, -1):
            raise ValueError("letter exponents are +1 or -1")
        if out and out[-1] == (n, -e):
            out.pop()
        else:
            out.append((n, e))
    return tuple(out)


# ---------------------------------------------------------------------------
# group actions


class GroupAction:
    """A finitely generated group acting on one circle model."""

    def __init__(self, generators: Mapping[str, CircleMap], assume_free: bool = False,
                 allow_reversing: bool = False):
        if not generators:
            raise ValueError("need at least one generator")
        self.generators = dict(generators)
        self.names = list(self.generators)
        models = {g.model for g in self.generators.values()}
        if len(models) != 1:
            raise ValueError("generators act on different models")
        self.model = models.pop()
        if not allow_reversing and any(g.orientation < 0 for g in self.generators.values()):
            raise ValueError("orientation-reversing generator; pass allow_reversing=True")
        self.assume_free = assume_free
        self._inverses = {n: g.inverse() for n, g in self.generators.items()}

    def letters(self) -> list:
        """Generators and their inverses in canonical order."""
        out = []
        for n in self.names:
            out.append((n, 1))
            out.append((n, -1))
        return out

    def letter_map(self, letter) -> CircleMap:
        n, e = letter
        return self.generators[n] if e > 0 else self._inverses[n]

    def evaluate(self, w: Word) -> CircleMap:
        if not w.letters:
            return identity_like(self.generators[self.names[0]])
        out = self.letter_map(w.letters[0])
        for letter in w.letters[1:]:
            out = out.compose(self.letter_map(letter))
        return out

    def word(self, text: str) -> Word:
        return Word.parse(text, self.names)

    def conjugate(self, c: CircleMap) -> "GroupAction":
        """The action with every generator replaced by ``c g c^-1``."""
        ci = c.inverse()
        return GroupAction({n: c.compose(g).compose(ci) for n, g in self.generators.items()},
                           self.assume_free)

    @property
    def dedupable(self) -> bool:
        return self.model is Model.PROJECTIVE and all(
            isinstance(g, MoebiusMap) for g in self.generators.values())


def enumerate_ball(a: GroupAction, radius: int) -> list:
    """Non-identity elements of word length at most ``radius``.

    Words come in length-lexicographic order.  For Moebius actions, words
    representing an already-listed element (or the identity) are dropped;
    other actions keep every reduced word.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    dedupe = a.dedupable
    seen = set()
    if dedupe:
        seen.add(identity_like(a.generators[a.names[0]]))
    out = []
    layer = [(Word(), None)]
    letters = a.letters()
    for _ in range(radius):
        nxt = []
        for w, m in layer:
            for letter in letters:
                if w.letters and w.letters[-1] == (letter[0], -letter[1]):
                    continue
                lm = a.letter_map(letter)
                g = lm if m is None else m.compose(lm)
                if dedupe:
                    if g in seen:
                        continue
                    seen.add(g)
                nxt.append((Word(w.letters + (letter,)), g))
        out.extend(nxt)
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# classification


class ElementKind(str, Enum):
    IDENTITY = "identity"
    TORSION = "torsion"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    PSEUDO_ANOSOV_LIKE = "pseudo_anosov_like"
    OTHER = "other"


@dataclass(frozen=True)
class ElementClass:
    kind: ElementKind
    order: Optional[int] = None       # torsion order
    power: Optional[int] = None       # first power showing the fixed-point pattern
    fixed_count: Optional[int] = None
    fixed: tuple = ()
    detail: str = ""

    def to_json(self) -> dict:
        d = {"kind": self.kind.value}
        if self.order is not None:
            d["order"] = self.order
        if self.power is not None:
            d["power"] = self.power
        if self.fixed_count is not None:
            d["fixed_count"] = self.fixed_count
        if self.detail:
            d["detail"] = self.detail
        return d


def _alternating(records) -> bool:
    kinds = [r.two_sided for r in records]
    if any(k is None for k in kinds):
        return False
    return all(kinds[i] is not kinds[(i + 1) % len(kinds)] for i in range(len(kinds)))


def classify_map(m: CircleMap, power_bound: int) -> ElementClass:
    if power_bound < 1:
        raise ValueError("power_bound must be at least 1")
    if m.orientation < 0:
        return ElementClass(ElementKind.OTHER, detail="orientation-reversing")
    if isinstance(m, MoebiusMap):
        c = classify_moebius(m)
        if c.kind is MoebiusKind.IDENTITY:
            return ElementClass(ElementKind.IDENTITY, order=1)
        if c.kind is MoebiusKind.PARABOLIC:
            return ElementClass(ElementKind.PARABOLIC, fixed_count=1, fixed=c.fixed)
        if c.kind is MoebiusKind.HYPERBOLIC:
            return ElementClass(ElementKind.HYPERBOLIC, fixed_count=2, fixed=(c.attracting, c.repelling))
        g = m
        for k in range(2, power_bound + 1):
            g = g.compose(m)
            if g.is_identity():
                return ElementClass(ElementKind.TORSION, order=k)
        return ElementClass(ElementKind.ELLIPTIC, fixed_count=0)

    if m.is_identity():
        return ElementClass(ElementKind.IDENTITY, order=1)
    g = m
    for k in range(1, power_bound + 1):
        if k > 1:
            g = g.compose(m)
            if g.is_identity():
                return ElementClass(ElementKind.TORSION, order=k)
        recs = fixed_points(g)
        n = len(recs)
        if n == 0:
            continue
        pts = tuple(r.point for r in recs)
        if k == 1 and n == 1:
            return ElementClass(ElementKind.PARABOLIC, power=1, fixed_count=1, fixed=pts)
        if k == 1 and n == 2 and _alternating(recs):
            att = next(r.point for r in recs if r.two_sided is Behavior.ATTRACTING)
            rep = next(r.point for r in recs if r.two_sided is Behavior.REPELLING)
            return ElementClass(ElementKind.HYPERBOLIC, power=1, fixed_count=2, fixed=(att, rep))
        if n >= 4 and n % 2 == 0 and _alternating(recs):
            return ElementClass(ElementKind.PSEUDO_ANOSOV_LIKE, power=k, fixed_count=n, fixed=pts)
        pattern = "".join("A" if r.two_sided is Behavior.ATTRACTING else
                          "R" if r.two_sided is Behavior.REPELLING else "P" for r in recs)
        return ElementClass(ElementKind.OTHER, power=k, fixed_count=n, fixed=pts,
                            detail=f"fixed-point pattern {pattern} at power {k}")
    return ElementClass(ElementKind.ELLIPTIC, fixed_count=0,
                        detail=f"no fixed points for powers up to {power_bound}")


def classify_element(a: GroupAction, w: Word, power_bound: int) -> ElementClass:
    return classify_map(a.evaluate(w), power_bound)


# ---------------------------------------------------------------------------
# limit sets


@dataclass
class LimitSetReport:
    cloud: list                      # (CirclePoint, Word), cyclically sorted
    epsilon: Optional[Fraction]
    window: Optional[Arc]
    epsilon_dense: Optional[bool]
    largest_gap: Optional[Arc]
    largest_gap_length: Optional[MultiSurd]
    covering_radius: Optional[MultiSurd] = None
    skipped: int = 0                 # elements whose fixed points were not computable

    @property
    def points(self) -> list:
        return [p for p, _ in self.cloud]


def cyclic_gaps(points: Sequence[CirclePoint]) -> list:
    """``(arc, chart length)`` for each arc between cyclically consecutive points."""
    seq = sort_cyclic(set(points))
    if len(seq) == 1:
        return [(Arc(seq[0], seq[0]), MultiSurd.of(1))]
    return [(Arc(a, b), arc_length(a, b)) for a, b in zip(seq, seq[1:] + seq[:1])]


def gap_meets_window(gap: Arc, window: Optional[Arc]) -> bool:
    if window is None or window.is_full or gap.is_full:
        return True
    return (gap.contains_open(window.start) or window.contains_open(gap.start)
            or window.contains_open(gap.end) or (gap.start == window.start and gap.end == window.end))


def covering_radius(points: Sequence[CirclePoint], window: Optional[Arc] = None):
    """Largest chart distance from a window point to the nearest of ``points``."""
    best = MultiSurd.of(0)
    for gap, L in cyclic_gaps(points):
        if not gap_meets_window(gap, window):
            continue
        half = L * Fraction(1, 2)
        lo, hi = MultiSurd.of(0), L
        if window is not None and not window.is_full:
            if gap.is_full or gap.contains_open(window.start):
                lo = arc_length(gap.start, window.start) if not gap.is_full else lo
            if gap.is_full or gap.contains_open(window.end):
                hi = arc_length(gap.start, window.end) if not gap.is_full else hi
        if lo <= half <= hi:
            r = half
        else:
            r = max(min(u, L - u) for u in (lo, hi))
        if r > best:
            best = r
    return best


def largest_gap(points: Sequence[CirclePoint], window: Optional[Arc] = None):
    """The longest arc between consecutive points that meets the window."""
    gaps = [(g, L) for g, L in cyclic_gaps(points) if gap_meets_window(g, window)] if points else []
    if not gaps:
        return None, None
    return max(gaps, key=lambda t: t[1])


def fixed_point_cloud(a: GroupAction, radius: int, power_bound: int = 1,
                      epsilon=None, window: Optional[Arc] = None) -> LimitSetReport:
    """Approximate the limit set by fixed points of ball elements.

    Lengths are chart lengths (the whole circle has length 1).
    ``epsilon_dense`` means every point of the window lies within distance
    ``epsilon`` of the cloud.
    """
    cloud = {}
    skipped = 0
    for w, g in enumerate_ball(a, radius):
        for k in range(1, power_bound + 1):
            try:
                pts = g.power(k).fixed_set() if k > 1 else g.fixed_set()
            except IdentityMapError:
                break
            except NotImplementedError:
                skipped += 1
                break
            for p in pts:
                cloud.setdefault(p, w)
            if pts:
                break
    order = sort_cyclic(cloud)
    pts = [(p, cloud[p]) for p in order]
    gap, glen = largest_gap(order, window)
    radius_ = covering_radius(order, window) if order else None
    dense = None
    if epsilon is not None:
        dense = radius_ is not None and radius_ <= as_scalar(epsilon)
    return LimitSetReport(pts, None if epsilon is None else Fraction(epsilon), window,
                          dense, gap, glen, radius_, skipped)


# ---------------------------------------------------------------------------
# proper discontinuity on triples


def _arcs_meet(x: Arc, y: Arc) -> bool:
    return x.contains(y.start) or y.contains(x.start)


def _image_arc(g: CircleMap, arc: Arc) -> Arc:
    s, e = g.apply(arc.start), g.apply(arc.end)
    return Arc(s, e) if g.orientation > 0 else Arc(e, s)


@dataclass
class TripleReport:
    return_count: int
    witnesses: list  # indices into the element list


def triple_discontinuity(elements: Sequence[CircleMap], arcs: Sequence[Arc]) -> TripleReport:
    """Count elements ``g`` with ``g(K) ∩ K`` nonempty for ``K = A1 x A2 x A3``.

    Since K is a product of arcs, this happens iff ``g(A_i)`` meets ``A_i`` for
    every ``i``.
    """
    if len(arcs) != 3:
        raise ValueError("K is given by three arcs")
    for A in arcs:
        if A.is_full:
            raise ValueError("degenerate arc")
    for i in range(3):
        for j in range(i + 1, 3):
            if _arcs_meet(arcs[i], arcs[j]):
                raise ValueError("arcs of K must be pairwise disjoint")
    wit = []
    for idx, g in enumerate(elements):
        if all(_arcs_meet(_image_arc(g, A), A) for A in arcs):
            wit.append(idx)
    return TripleReport(len(wit), wit)


# ---------------------------------------------------------------------------
# north-south dynamics


@dataclass
class ContractionEntry:
    a: CirclePoint
    b: CirclePoint
    diameter: QuadraticScalar


@dataclass
class NorthSouthReport:
    epsilon: Fraction
    entries: list
    monotone: bool
    strictly_decreasing: bool
    contracting: bool  # every element beats the isometric bound 1 - 2*epsilon

    def diameters(self) -> list:
        return [e.diameter for e in self.entries]


def _default_candidates(model: Model, n: int = 16) -> list:
    return [from_chart(model, Fraction(k, n)) for k in range(n)]


def _distance_to_arc(p: CirclePoint, arc: Arc):
    if arc.contains(p):
        return MultiSurd.of(0)
    return min(arc_length(p, arc.start), arc_length(arc.end, p))


def north_south_diagnostic(sequence: Sequence[CircleMap], epsilon,
                           candidates: Optional[Sequence[CirclePoint]] = None) -> NorthSouthReport:
    """Measure how well each element contracts the complement of a small arc.

    For each element and each candidate repelling point ``b`` (its fixed points,
    else ``candidates``), the closed arc ``C`` outside the chart
    epsilon-neighborhood of ``b`` is mapped forward; the chart length of ``g(C)``
    is the diameter.  ``a`` is the fixed point closest to ``g(C)``.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < Fraction(1, 4):
        raise ValueError("epsilon must lie in (0, 1/4)")
    entries = []
    for g in sequence:
        model = g.model
        try:
            fixed = list(g.fixed_set())
        except (IdentityMapError, NotImplementedError):
            fixed = []
        bs = fixed or list(candidates or _default_candidates(model))
        best = None
        for b in bs:
            t = chart(b)
            C = Arc(from_chart(model, t + eps), from_chart(model, t - eps))
            img = _image_arc(g, C)
            diam = arc_length(img.start, img.end)
            if best is None or diam < best.diameter:
                a = min(fixed, key=lambda p: _distance_to_arc(p, img)) if fixed else img.start
                best = ContractionEntry(a, b, diam)
        entries.append(best)
    d = [e.diameter for e in entries]
    mono = all(x >= y for x, y in zip(d, d[1:]))
    strict = all(x > y for x, y in zip(d, d[1:]))
    contracting = all(x < 1 - 2 * eps for x in d)
    return NorthSouthReport(eps, entries, mono, strict, contracting)
