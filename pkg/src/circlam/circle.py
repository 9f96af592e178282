"""Circle models, cyclic order, chords and the linking predicate.

Every point type provides a ``key()`` that is a linear order on its model,
obtained by cutting the circle at one place.  Cyclic order of three points is
the parity of the permutation that sorts their keys, so it never depends on
where the cut is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .scalar import QuadraticScalar, Sign, as_scalar


class Model(str, Enum):
    PROJECTIVE = "projective"
    ANGLE = "angle"
    BLOWN_UP = "blownup"
    TREE = "tree"


class ModelMismatchError(TypeError):
    """Points or maps from different circle models were combined."""


class CirclePoint:
    model: Model

    def key(self) -> tuple:
        raise NotImplementedError

    def _frame(self):
        return None

    def check_same_model(self, other: "CirclePoint") -> None:
        if self.model is not other.model or self._frame() != other._frame():
            raise ModelMismatchError(f"{self.model.value} point vs {other.model.value} point")


@dataclass(frozen=True)
class ProjectivePoint(CirclePoint):
    """A point of the real projective line; ``value=None`` is infinity."""

    value: Optional[QuadraticScalar]
    model = Model.PROJECTIVE

    def __post_init__(self):
        if self.value is not None and not isinstance(self.value, QuadraticScalar):
            object.__setattr__(self, "value", as_scalar(self.value))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def key(self) -> tuple:
        return (1,) if self.value is None else (0, self.value)

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


INF = ProjectivePoint(None)


def proj(x) -> ProjectivePoint:
    if isinstance(x, ProjectivePoint):
        return x
    if x is None or (isinstance(x, str) and x.lower() in ("inf", "oo", "infinity")):
        return INF
    return ProjectivePoint(as_scalar(x))


@dataclass(frozen=True)
class AnglePoint(CirclePoint):
    """A point of R/Z, stored as its representative in [0, 1)."""

    value: QuadraticScalar
    model = Model.ANGLE

    def __post_init__(self):
        v = self.value if isinstance(self.value, QuadraticScalar) else as_scalar(self.value)
        object.__setattr__(self, "value", v.frac())

    def key(self) -> tuple:
        return (self.value,)

    def __str__(self):
        return f"<{self.value}>"


def angle(x) -> AnglePoint:
    return x if isinstance(x, AnglePoint) else AnglePoint(as_scalar(x))


@dataclass(frozen=True)
class DenjoyFrame:
    """Blow-up data shared by the symbolic and tessellation models.

    The orbit point ``p + j*alpha`` is replaced by the interval ``I_j`` for
    every integer ``j``; ``position(j)`` is its location on the collapsed
    circle.
    """

    alpha: QuadraticScalar
    base: QuadraticScalar

    def __post_init__(self):
        if self.alpha.is_rational:
            raise ValueError("the blow-up needs an irrational rotation angle")
        object.__setattr__(self, "base", self.base.frac())

    def position(self, j: int) -> QuadraticScalar:
        return (self.base + j * self.alpha).frac()

    def orbit_index(self, x: QuadraticScalar) -> Optional[int]:
        """``j`` with ``x == p + j*alpha (mod 1)``, or None if ``x`` is off the orbit."""
        diff = x - self.base
        if diff.radicand not in (0, self.alpha.radicand):
            return None
        j = diff.surd_coefficient / self.alpha.surd_coefficient
        if j.denominator != 1:
            return None
        rest = diff - int(j) * self.alpha
        return int(j) if rest.is_rational and rest.as_fraction().denominator == 1 else None


@dataclass(frozen=True)
class BlownUpPoint(CirclePoint):
    """A point of the Denjoy blow-up circle.

    Either a base point off the blown-up orbit (``index is None``) or the
    point at relative position ``t`` in ``[0, 1]`` of the interval ``I_index``.
    """

    frame: DenjoyFrame
    index: Optional[int] = None
    t: Fraction = Fraction(0)
    base: Optional[QuadraticScalar] = None
    model = Model.BLOWN_UP

    def __post_init__(self):
        if self.index is None:
            if self.base is None:
                raise ValueError("base point needs a coordinate")
            b = as_scalar(self.base).frac()
            if self.frame.orbit_index(b) is not None:
                raise ValueError(f"{b} lies on the blown-up orbit; use an interval point")
            object.__setattr__(self, "base", b)
            object.__setattr__(self, "t", Fraction(0))
        else:
            t = Fraction(self.t)
            if not 0 <= t <= 1:
                raise ValueError("interval coordinate must lie in [0, 1]")
            object.__setattr__(self, "t", t)
            object.__setattr__(self, "base", None)

    def _frame(self):
        return self.frame

    def position(self) -> QuadraticScalar:
        return self.base if self.index is None else self.frame.position(self.index)

    def key(self) -> tuple:
        k = self.__dict__.get("_key")
        if k is None:
            k = (self.position(), self.t)
            object.__setattr__(self, "_key", k)
        return k

    def __str__(self):
        return f"b{self.base}" if self.index is None else f"I{self.index}[{self.t}]"


@dataclass(frozen=True)
class TreePoint(CirclePoint):
    """An endpoint of a side in the tessellation by reflected copies of P_R.

    ``address`` is the sequence of sides crossed from the root polygon;
    ``side`` labels a side of that copy and ``end`` is 0 or 1 (the image of
    the left or right end of ``I_side``).
    """

    frame: DenjoyFrame
    address: tuple
    side: int
    end: int
    model = Model.TREE

    def __post_init__(self):
        addr = tuple(self.address)
        if any(a == b for a, b in zip(addr, addr[1:])):
            raise ValueError("tree addresses never cross the same side twice in a row")
        if addr and addr[-1] == self.side:
            addr = addr[:-1]
        object.__setattr__(self, "address", addr)
        if self.end not in (0, 1):
            raise ValueError("end must be 0 or 1")

    def _frame(self):
        return self.frame

    def key(self) -> tuple:
        k = self.__dict__.get("_key")
        if k is None:
            k = tree_key(self.frame, self.address, self.side, self.end)
            object.__setattr__(self, "_key", k)
        return k

    def __str__(self):
        return f"T{list(self.address)}:{self.side}.{self.end}"


def tree_key(frame: DenjoyFrame, address: tuple, side: int, end: int) -> tuple:
    # a copy at depth i has orientation (-1)**i and lists its sides by signed
    # offset from the side it was entered through; 1 descends into a hidden arc
    out = []
    entry = None
    orient = 1
    labels = address + (side,)
    for i, s in enumerate(labels):
        pos = frame.position(s)
        rel = pos if entry is None else (pos - entry).frac()
        out.append(rel if orient > 0 else -rel)
        if i < len(address):
            out.append(1)
            entry = pos
            orient = -orient
    out.append(2 * end if orient > 0 else 2 - 2 * end)
    return tuple(out)


# ---------------------------------------------------------------------------
# cyclic order


def _check(points: Sequence[CirclePoint]) -> None:
    first = points[0]
    for p in points[1:]:
        first.check_same_model(p)


def cyclic_order(a: CirclePoint, b: CirclePoint, c: CirclePoint) -> Sign:
    """Orientation of the triple: POSITIVE when ``a, b, c`` run counterclockwise."""
    _check((a, b, c))
    ka, kb, kc = a.key(), b.key(), c.key()
    if ka == kb or kb == kc or ka == kc:
        return Sign.ZERO
    # a rotation of (a, b, c) is increasing iff the triple is positive
    if (ka < kb < kc) or (kb < kc < ka) or (kc < ka < kb):
        return Sign.POSITIVE
    return Sign.NEGATIVE


def strictly_between(a: CirclePoint, x: CirclePoint, b: CirclePoint) -> bool:
    """True if ``x`` lies in the open counterclockwise arc from ``a`` to ``b``.

    With ``a == b`` the arc is the whole circle minus that point.
    """
    if a == b:
        return x != a
    return cyclic_order(a, x, b) is Sign.POSITIVE


@dataclass(frozen=True)
class Arc:
    """The closed counterclockwise arc from ``start`` to ``end``.

    ``start == end`` denotes the full circle.
    """

    start: CirclePoint
    end: CirclePoint

    def __post_init__(self):
        self.start.check_same_model(self.end)

    @property
    def is_full(self) -> bool:
        return self.start == self.end

    def contains(self, x: CirclePoint) -> bool:
        if self.is_full or x == self.start or x == self.end:
            return True
        return strictly_between(self.start, x, self.end)

    def contains_open(self, x: CirclePoint) -> bool:
        return strictly_between(self.start, x, self.end)


def sort_cyclic(points: Iterable[CirclePoint], start: Optional[CirclePoint] = None) -> list:
    """Sort points counterclockwise, beginning at ``start`` (or the model's cut)."""
    pts = list(points)
    pts.sort(key=lambda p: p.key())
    if start is not None and pts:
        k = start.key()
        i = next((n for n, p in enumerate(pts) if p.key() >= k), 0)
        pts = pts[i:] + pts[:i]
    return pts


# ---------------------------------------------------------------------------
# chords


class Linking(str, Enum):
    LINKED = "linked"
    UNLINKED = "unlinked"
    SHARED_ENDPOINT = "shared_endpoint"
    IDENTICAL = "identical"


@dataclass(frozen=True)
class Chord:
    """An unordered pair of distinct points; stored in key order."""

    a: CirclePoint
    b: CirclePoint
    _keys: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        self.a.check_same_model(self.b)
        ka, kb = self.a.key(), self.b.key()
        if ka == kb:
            raise ValueError("a chord needs two distinct endpoints")
        if kb < ka:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
            ka, kb = kb, ka
        object.__setattr__(self, "_keys", (ka, kb))

    @property
    def model(self) -> Model:
        return self.a.model

    @property
    def endpoints(self) -> tuple:
        return (self.a, self.b)

    def sort_key(self) -> tuple:
        return self._keys

    def has_endpoint(self, p: CirclePoint) -> bool:
        return p == self.a or p == self.b

    def other(self, p: CirclePoint) -> CirclePoint:
        if p == self.a:
            return self.b
        if p == self.b:
            return self.a
        raise ValueError(f"{p} is not an endpoint of {self}")

    def separates(self, x: CirclePoint, y: CirclePoint) -> bool:
        """True if ``x`` and ``y`` lie in different open arcs cut by the chord."""
        return strictly_between(self.a, x, self.b) != strictly_between(self.a, y, self.b)

    def __str__(self):
        return f"({self.a}, {self.b})"


def chord(x, y) -> Chord:
    return Chord(x, y)


def linked(c1: Chord, c2: Chord) -> Linking:
    """Decide whether two chords cross inside the disk."""
    c1.a.check_same_model(c2.a)
    if c1 == c2:
        return Linking.IDENTICAL
    if c1.has_endpoint(c2.a) or c1.has_endpoint(c2.b):
        return Linking.SHARED_ENDPOINT
    (k1, k2), (u, v) = c1._keys, c2._keys
    if (k1 < u < k2) != (k1 < v < k2):
        return Linking.LINKED
    return Linking.UNLINKED


def find_linked_pair(chords: Iterable[Chord]) -> Optional[tuple]:
    """Return some linked pair among ``chords`` or None, in O(n log n).

    Sorted by (left key, -right key), an unlinked family is a well-nested
    parenthesis system; the first chord that closes past the stack top is
    linked with it.
    """
    items = sorted(set(chords), key=lambda c: c._keys[1], reverse=True)
    items.sort(key=lambda c: c._keys[0])
    stack: list[Chord] = []
    for c in items:
        lo, hi = c._keys
        while stack and stack[-1]._keys[1] <= lo:
            stack.pop()
        if stack:
            top = stack[-1]
            if top._keys[1] < hi:
                return top, c
        stack.append(c)
    return None


# ---------------------------------------------------------------------------
# exact arc length


def chart(p: CirclePoint) -> QuadraticScalar:
    """Coordinate in [0, 1) used to measure arcs exactly.

    Angle points use their value.  The projective line uses the monotone
    rational chart ``x -> x / (2 (1 + |x|))`` shifted into [0, 1), which sends
    0 to 0 and infinity to 1/2.
    """
    if isinstance(p, AnglePoint):
        return p.value
    if isinstance(p, ProjectivePoint):
        if p.value is None:
            return as_scalar(Fraction(1, 2))
        x = p.value
        return (x / (2 * (1 + abs(x)))).frac()
    if isinstance(p, BlownUpPoint):
        return p.position()
    raise NotImplementedError(f"no arc length on the {p.model.value} model")


def from_chart(model: Model, t) -> CirclePoint:
    """Inverse of :func:`chart` for the angle and projective models."""
    t = as_scalar(t).frac()
    if model is Model.ANGLE:
        return AnglePoint(t)
    if model is Model.PROJECTIVE:
        if t == Fraction(1, 2):
            return INF
        s = t if t < Fraction(1, 2) else t - 1
        return ProjectivePoint(2 * s / (1 - 2 * abs(s)))
    raise NotImplementedError(f"no chart inverse on the {model.value} model")


def arc_length(a: CirclePoint, b: CirclePoint):
    """Chart length of the counterclockwise arc from ``a`` to ``b`` (0 if equal).

    Returns a :class:`~circlam.multiquad.MultiSurd`, since the two endpoints may
    come from different quadratic fields.
    """
    from .multiquad import MultiSurd
    d = MultiSurd.of(chart(b)) - chart(a)
    return d + 1 if d.sign() < 0 else d
