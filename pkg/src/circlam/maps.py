"""Self-maps of the circle models with exact evaluation.

Composition follows function notation: ``f.compose(g)`` is ``f o g``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .circle import (
    INF,
    AnglePoint,
    BlownUpPoint,
    CirclePoint,
    DenjoyFrame,
    Model,
    ModelMismatchError,
    ProjectivePoint,
    TreePoint,
    angle,
    cyclic_order,
    sort_cyclic,
    strictly_between,
)
from .scalar import ONE, ZERO, QuadraticScalar, Sign, as_scalar


class IdentityMapError(ValueError):
    """The map is the identity, so every point is fixed."""


class OrientationError(ValueError):
    """An orientation-preserving map was required."""


class Behavior(str, Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"


@dataclass(frozen=True)
class FixedPointRecord:
    point: CirclePoint
    left: Behavior   # clockwise side
    right: Behavior  # counterclockwise side

    @property
    def two_sided(self) -> Optional[Behavior]:
        return self.left if self.left is self.right else None


class CircleMap:
    model: Model
    orientation: int = 1

    def apply(self, p: CirclePoint) -> CirclePoint:
        raise NotImplementedError

    def __call__(self, p: CirclePoint) -> CirclePoint:
        return self.apply(p)

    def inverse(self) -> "CircleMap":
        raise NotImplementedError

    def compose(self, other: "CircleMap") -> "CircleMap":
        _same_model(self, other)
        return Composite((self, other))

    def power(self, k: int) -> "CircleMap":
        if k == 0:
            return identity_like(self)
        base = self if k > 0 else self.inverse()
        out = None
        k = abs(k)
        while k:
            if k & 1:
                out = base if out is None else out.compose(base)
            k >>= 1
            if k:
                base = base.compose(base)
        return out

    def is_identity(self) -> bool:
        raise NotImplementedError

    def fixed_set(self) -> list:
        """Fixed points in cyclic order; raises IdentityMapError for the identity."""
        raise NotImplementedError

    def sample_point(self) -> CirclePoint:
        raise NotImplementedError

    def _check_point(self, p: CirclePoint) -> None:
        if p.model is not self.model:
            raise ModelMismatchError(f"{self.model.value} map applied to {p.model.value} point")


def _same_model(f: CircleMap, g: CircleMap) -> None:
    if f.model is not g.model:
        raise ModelMismatchError(f"cannot compose {f.model.value} and {g.model.value} maps")


# ---------------------------------------------------------------------------
# Moebius maps on the projective line


class MoebiusMap(CircleMap):
    """``x -> (a x + b) / (c x + d)`` with exact quadratic entries."""

    model = Model.PROJECTIVE

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = (as_scalar(x) for x in (a, b, c, d))
        det = self.a * self.d - self.b * self.c
        if not det:
            raise ValueError("singular matrix")
        self.det = det
        self.orientation = 1 if det.sign() > 0 else -1
        lead = next(x for x in (self.a, self.b, self.c, self.d) if x)
        self._canon = tuple(x / lead for x in (self.a, self.b, self.c, self.d))

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence]) -> "MoebiusMap":
        (a, b), (c, d) = m
        return cls(a, b, c, d)

    @property
    def matrix(self) -> tuple:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def trace(self) -> QuadraticScalar:
        return self.a + self.d

    def normalized_trace_squared(self) -> QuadraticScalar:
        """``tr^2 / det``, invariant under rescaling the matrix."""
        return self.trace * self.trace / self.det

    def __eq__(self, other):
        return isinstance(other, MoebiusMap) and self._canon == other._canon

    def __hash__(self):
        return hash(self._canon)

    def __repr__(self):
        return f"MoebiusMap([[{self.a}, {self.b}], [{self.c}, {self.d}]])"

    def apply(self, p: CirclePoint) -> ProjectivePoint:
        self._check_point(p)
        a, b, c, d = self.a, self.b, self.c, self.d
        if p.value is None:
            return INF if not c else ProjectivePoint(a / c)
        x = p.value
        den = c * x + d
        if not den:
            return INF
        return ProjectivePoint((a * x + b) / den)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: CircleMap) -> CircleMap:
        if not isinstance(other, MoebiusMap):
            return super().compose(other)
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def is_identity(self) -> bool:
        return self._canon == (ONE, ZERO, ZERO, ONE)

    def fixed_set(self) -> list:
        if self.is_identity():
            raise IdentityMapError("identity map")
        a, b, c, d = self.a, self.b, self.c, self.d
        pts = []
        if not c:
            pts.append(INF)
            if a != d:
                pts.append(ProjectivePoint(b / (d - a)))
        else:
            # c x^2 + (d - a) x - b = 0
            disc = (d - a) * (d - a) + 4 * b * c
            s = disc.sign()
            if s == 0:
                pts.append(ProjectivePoint((a - d) / (2 * c)))
            elif s > 0:
                root = QuadraticScalar.sqrt_of(disc)
                pts.append(ProjectivePoint((a - d + root) / (2 * c)))
                pts.append(ProjectivePoint((a - d - root) / (2 * c)))
        return sort_cyclic(set(pts))

    def sample_point(self) -> CirclePoint:
        return ProjectivePoint(ZERO)


def moebius(a, b, c, d) -> MoebiusMap:
    return MoebiusMap(a, b, c, d)


# ---------------------------------------------------------------------------
# piecewise-affine maps of R/Z


class PiecewiseAffine(CircleMap):
    """A degree-one piecewise-affine map of R/Z, given by a lift.

    ``nodes`` are ``(x_i, y_i)`` with ``0 = x_0 < ... < x_n = 1``,
    ``y`` strictly increasing and ``y_n = y_0 + 1``; between nodes the lift is
    affine.  Construction normalizes any node list with period-one extension.
    """

    model = Model.ANGLE
    orientation = 1

    def __init__(self, nodes):
        pts = [(as_scalar(x), as_scalar(y)) for x, y in nodes]
        self.nodes = _normalize_nodes(pts)
        self._xs = [x for x, _ in self.nodes]

    @classmethod
    def rotation(cls, alpha) -> "PiecewiseAffine":
        a = as_scalar(alpha)
        return cls([(ZERO, a), (ONE, a + 1)])

    def lift(self, x: QuadraticScalar) -> QuadraticScalar:
        k = x.floor()
        xr = x - k
        i = bisect.bisect_right(self._xs, xr) - 1
        (x0, y0), (x1, y1) = self.nodes[i], self.nodes[i + 1]
        return y0 + (xr - x0) * (y1 - y0) / (x1 - x0) + k

    def apply(self, p: CirclePoint) -> AnglePoint:
        self._check_point(p)
        return AnglePoint(self.lift(p.value))

    def inverse(self) -> "PiecewiseAffine":
        return PiecewiseAffine([(y, x) for x, y in self.nodes])

    def compose(self, other: CircleMap) -> CircleMap:
        if not isinstance(other, PiecewiseAffine):
            return super().compose(other)
        g, ginv = other, other.inverse()
        xs = set(x for x, _ in g.nodes[:-1])
        xs.update(ginv.lift(u) for u, _ in self.nodes[:-1])
        xs = sorted(x.frac() for x in xs)
        pts = [(x, self.lift(g.lift(x))) for x in xs]
        return PiecewiseAffine(pts)

    def slopes(self) -> list:
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:])]

    def is_identity(self) -> bool:
        disp = {y - x for x, y in self.nodes}
        return len(disp) == 1 and next(iter(disp)).is_rational and \
            next(iter(disp)).as_fraction().denominator == 1

    def fixed_set(self) -> list:
        if self.is_identity():
            raise IdentityMapError("identity map")
        found = set()
        for (x0, y0), (x1, y1) in zip(self.nodes, self.nodes[1:]):
            d0, d1 = y0 - x0, y1 - x1
            lo, hi = (d0, d1) if d0 <= d1 else (d1, d0)
            for k in range(-((-lo).floor()), hi.floor() + 1):
                if d0 == d1:
                    raise ValueError("map fixes a whole interval")
                x = x0 + (k - d0) * (x1 - x0) / (d1 - d0)
                if x0 <= x < x1:
                    found.add(AnglePoint(x))
        return sort_cyclic(found)

    def sample_point(self) -> CirclePoint:
        return AnglePoint(ZERO)

    def __eq__(self, other):
        return isinstance(other, PiecewiseAffine) and self.nodes == other.nodes

    def __hash__(self):
        return hash(tuple(self.nodes))

    def __repr__(self):
        return "PiecewiseAffine([" + ", ".join(f"({x}, {y})" for x, y in self.nodes) + "])"


def _normalize_nodes(pts):
    if len(pts) < 2:
        raise ValueError("need at least two nodes")
    pts = sorted(pts, key=lambda n: n[0])
    x0, y0 = pts[0]
    xn, yn = pts[-1]
    if xn - x0 != 1 or yn - y0 != 1:
        # a single period without the closing node: close it
        if xn - x0 < 1:
            pts.append((x0 + 1, y0 + 1))
        else:
            raise ValueError("nodes must span exactly one period")
    for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
        if not (xa < xb and ya < yb):
            raise ValueError("lift must be strictly increasing")
    # evaluate the periodic lift on [0, 1)
    period = pts[:-1]

    def lift(x):
        k = (x - pts[0][0]).floor()
        xr = x - k
        for (xa, ya), (xb, yb) in zip(pts, pts[1:]):
            if xa <= xr < xb:
                return ya + (xr - xa) * (yb - ya) / (xb - xa) + k
        raise AssertionError("unreachable")

    xs = sorted({x.frac() for x, _ in period} | {ZERO})
    nodes = [(x, lift(x)) for x in xs]
    shift = nodes[0][1].floor()
    nodes = [(x, y - shift) for x, y in nodes]
    nodes.append((ONE, nodes[0][1] + 1))
    # drop nodes interior to an affine stretch
    out = [nodes[0]]
    for i in range(1, len(nodes) - 1):
        (xa, ya), (xb, yb), (xc, yc) = out[-1], nodes[i], nodes[i + 1]
        if (yb - ya) * (xc - xb) != (yc - yb) * (xb - xa):
            out.append(nodes[i])
    out.append(nodes[-1])
    return out


# ---------------------------------------------------------------------------
# Denjoy blow-up of an irrational rotation


class BlowupRotation(CircleMap):
    """The blown-up rotation R~ (to the power ``steps``).

    Interval points move ``I_j -> I_{j+steps}`` keeping their relative
    position; base points rotate by ``steps * alpha``.  ``truncation`` is the
    bound J used when materializing the leaves ``dI_j``.
    """

    model = Model.BLOWN_UP
    orientation = 1

    def __init__(self, frame: DenjoyFrame, steps: int = 1, truncation: int = 0):
        self.frame = frame
        self.steps = steps
        self.truncation = truncation

    def apply(self, p: CirclePoint) -> BlownUpPoint:
        self._check_point(p)
        if p.frame != self.frame:
            raise ModelMismatchError("different blow-up frames")
        if p.index is not None:
            return BlownUpPoint(self.frame, p.index + self.steps, p.t)
        return BlownUpPoint(self.frame, base=p.base + self.steps * self.frame.alpha)

    def inverse(self):
        return BlowupRotation(self.frame, -self.steps, self.truncation)

    def compose(self, other):
        if isinstance(other, BlowupRotation) and other.frame == self.frame:
            return BlowupRotation(self.frame, self.steps + other.steps, self.truncation)
        return super().compose(other)

    def is_identity(self) -> bool:
        return self.steps == 0

    def fixed_set(self) -> list:
        if self.steps == 0:
            raise IdentityMapError("identity map")
        return []

    def sample_point(self) -> CirclePoint:
        return BlownUpPoint(self.frame, 0, Fraction(1, 2))

    def __eq__(self, other):
        return isinstance(other, BlowupRotation) and (self.frame, self.steps) == (other.frame, other.steps)

    def __hash__(self):
        return hash((self.frame, self.steps))

    def __repr__(self):
        return f"BlowupRotation(alpha={self.frame.alpha}, steps={self.steps})"


def collapse(p: BlownUpPoint) -> AnglePoint:
    """The monotone map collapsing every ``I_j`` back to its orbit point."""
    return AnglePoint(p.position())


# ---------------------------------------------------------------------------
# arc-affine involution


class ArcAffineInvolution(CircleMap):
    """Fixes the endpoints of a chord of R/Z and swaps the two arcs affinely."""

    model = Model.ANGLE
    orientation = -1

    def __init__(self, a, b):
        self.a, self.b = angle(a), angle(b)
        if self.a == self.b:
            raise ValueError("degenerate chord")
        self._l1 = (self.b.value - self.a.value).frac()
        self._l2 = 1 - self._l1

    def apply(self, p: CirclePoint) -> AnglePoint:
        self._check_point(p)
        u = (p.value - self.a.value).frac()
        if u <= self._l1:
            return AnglePoint(self.a.value - u * self._l2 / self._l1)
        return AnglePoint(self.a.value + (1 - u) * self._l1 / self._l2)

    def inverse(self):
        return self

    def is_identity(self) -> bool:
        return False

    def fixed_set(self) -> list:
        return sort_cyclic([self.a, self.b])

    def sample_point(self) -> CirclePoint:
        return self.a

    def __repr__(self):
        return f"ArcAffineInvolution({self.a}, {self.b})"


# ---------------------------------------------------------------------------
# automorphisms of the tessellation tree


class TreeAutomorphism(CircleMap):
    """A word in ``R`` (shift sides by one), ``R-`` and ``r`` (reflect across dI_0).

    Letters act right to left, as in function composition.
    """

    model = Model.TREE

    def __init__(self, frame: DenjoyFrame, ops: Sequence[str]):
        for op in ops:
            if op not in ("R", "R-", "r"):
                raise ValueError(f"unknown tree letter {op!r}")
        self.frame = frame
        self.ops = tuple(ops)
        self.orientation = -1 if self.ops.count("r") % 2 else 1

    @classmethod
    def reflection(cls, frame: DenjoyFrame, side: int = 0) -> "TreeAutomorphism":
        """Reflection across the side ``dI_side`` of the root polygon."""
        shift = ["R"] * side if side >= 0 else ["R-"] * (-side)
        back = ["R-"] * side if side >= 0 else ["R"] * (-side)
        return cls(frame, shift + ["r"] + back)

    def apply(self, p: CirclePoint) -> TreePoint:
        self._check_point(p)
        addr, side, end = p.address, p.side, p.end
        for op in reversed(self.ops):
            if op == "R":
                addr, side = tuple(a + 1 for a in addr), side + 1
            elif op == "R-":
                addr, side = tuple(a - 1 for a in addr), side - 1
            else:
                addr = addr[1:] if addr and addr[0] == 0 else (0,) + addr
                if addr and addr[-1] == side:
                    addr = addr[:-1]
        return TreePoint(self.frame, addr, side, end)

    def inverse(self):
        inv = {"R": "R-", "R-": "R", "r": "r"}
        return TreeAutomorphism(self.frame, [inv[o] for o in reversed(self.ops)])

    def compose(self, other):
        if isinstance(other, TreeAutomorphism) and other.frame == self.frame:
            return TreeAutomorphism(self.frame, self.ops + other.ops)
        return super().compose(other)

    def is_identity(self) -> bool:
        return not self.ops

    def fixed_set(self) -> list:
        raise NotImplementedError("fixed points of tree automorphisms are not computed")

    def sample_point(self) -> CirclePoint:
        return TreePoint(self.frame, (), 0, 0)

    def __repr__(self):
        return f"TreeAutomorphism({' '.join(self.ops) or 'id'})"


# ---------------------------------------------------------------------------
# fallback composition


class Composite(CircleMap):
    def __init__(self, maps: Sequence[CircleMap]):
        flat = []
        for m in maps:
            flat.extend(m.maps if isinstance(m, Composite) else [m])
        self.maps = tuple(flat)
        self.model = flat[0].model
        o = 1
        for m in flat:
            o *= m.orientation
        self.orientation = o

    def apply(self, p):
        for m in reversed(self.maps):
            p = m.apply(p)
        return p

    def inverse(self):
        return Composite([m.inverse() for m in reversed(self.maps)])

    def is_identity(self) -> bool:
        raise NotImplementedError("identity test for composite maps")

    def fixed_set(self) -> list:
        raise NotImplementedError("fixed points of composite maps are not computed")

    def sample_point(self):
        return self.maps[0].sample_point()


class _Identity(CircleMap):
    def __init__(self, model, sample):
        self.model = model
        self._sample = sample

    def apply(self, p):
        self._check_point(p)
        return p

    def inverse(self):
        return self

    def compose(self, other):
        return other

    def is_identity(self):
        return True

    def fixed_set(self):
        raise IdentityMapError("identity map")

    def sample_point(self):
        return self._sample


def identity_like(m: CircleMap) -> CircleMap:
    if isinstance(m, MoebiusMap):
        return MoebiusMap(1, 0, 0, 1)
    if isinstance(m, PiecewiseAffine):
        return PiecewiseAffine.rotation(0)
    if isinstance(m, BlowupRotation):
        return BlowupRotation(m.frame, 0, m.truncation)
    if isinstance(m, TreeAutomorphism):
        return TreeAutomorphism(m.frame, ())
    return _Identity(m.model, m.sample_point())


def powers(m: CircleMap, n: int) -> list:
    """``[m, m^2, ..., m^n]``, each obtained from the previous one."""
    out = []
    g = m
    for _ in range(n):
        out.append(g)
        g = g.compose(m)
    return out


def apply(m: CircleMap, p: CirclePoint) -> CirclePoint:
    return m.apply(p)


def compose(f: CircleMap, g: CircleMap) -> CircleMap:
    return f.compose(g)


# ---------------------------------------------------------------------------
# fixed points and their dynamics


def point_between(a: CirclePoint, b: CirclePoint) -> CirclePoint:
    """Some point strictly inside the counterclockwise arc from ``a`` to ``b``."""
    a.check_same_model(b)
    if isinstance(a, ProjectivePoint):
        if a.is_infinite:
            return ProjectivePoint(ZERO) if b.is_infinite else ProjectivePoint(b.value - 1)
        if b.is_infinite or not a.value < b.value:
            return ProjectivePoint(a.value + 1)
        return ProjectivePoint((a.value + b.value) / 2)
    if isinstance(a, AnglePoint):
        gap = (b.value - a.value).frac() or ONE
        return AnglePoint(a.value + gap / 2)
    if isinstance(a, BlownUpPoint):
        if a.index is not None and a.t < 1:
            if b.index == a.index and a.t < b.t:
                return BlownUpPoint(a.frame, a.index, (a.t + b.t) / 2)
            return BlownUpPoint(a.frame, a.index, (a.t + 1) / 2)
        if b.index is not None and b.t > 0 and a.position() != b.position():
            return BlownUpPoint(a.frame, b.index, b.t / 2)
        pa, pb = a.position(), b.position()
        gap = (pb - pa).frac() or ONE
        for w in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 5)):
            x = (pa + gap * w).frac()
            if a.frame.orbit_index(x) is None:
                return BlownUpPoint(a.frame, base=x)
        raise AssertionError("no base point found")
    raise NotImplementedError(f"no sample points for {a.model.value} model")


def _arc_direction(m: CircleMap, a: CirclePoint, b: CirclePoint) -> int:
    s = point_between(a, b)
    img = m.apply(s)
    if img == s:
        raise AssertionError("sample point is fixed; fixed-point list incomplete")
    return 1 if strictly_between(s, img, b) else -1


def fixed_points(m: CircleMap) -> list:
    """Fixed points in cyclic order with their one-sided dynamics.

    Behavior on each side comes from the sign of the displacement at a sample
    point between consecutive fixed points.
    """
    if m.orientation < 0:
        raise OrientationError("side behavior needs an orientation-preserving map")
    pts = m.fixed_set()
    n = len(pts)
    if n == 0:
        return []
    dirs = [_arc_direction(m, pts[i], pts[(i + 1) % n]) for i in range(n)]
    out = []
    for i, p in enumerate(pts):
        before, after = dirs[i - 1], dirs[i]
        out.append(FixedPointRecord(
            p,
            Behavior.ATTRACTING if before > 0 else Behavior.REPELLING,
            Behavior.ATTRACTING if after < 0 else Behavior.REPELLING,
        ))
    return out


class MoebiusKind(str, Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class MoebiusClass:
    kind: MoebiusKind
    fixed: tuple = ()
    attracting: Optional[ProjectivePoint] = None
    repelling: Optional[ProjectivePoint] = None


def classify_moebius(m: MoebiusMap) -> MoebiusClass:
    if m.orientation < 0:
        raise OrientationError("classification is defined for orientation-preserving maps")
    if m.is_identity():
        return MoebiusClass(MoebiusKind.IDENTITY)
    t = m.normalized_trace_squared() - 4
    s = t.sign()
    if s < 0:
        return MoebiusClass(MoebiusKind.ELLIPTIC)
    recs = fixed_points(m)
    pts = tuple(r.point for r in recs)
    if s == 0:
        return MoebiusClass(MoebiusKind.PARABOLIC, pts)
    att = next(r.point for r in recs if r.two_sided is Behavior.ATTRACTING)
    rep = next(r.point for r in recs if r.two_sided is Behavior.REPELLING)
    return MoebiusClass(MoebiusKind.HYPERBOLIC, pts, att, rep)


# ---------------------------------------------------------------------------
# rotation number


@dataclass(frozen=True)
class RotationInterval:
    """Closed interval of the rotation number, a value in [0, 1]."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = as_scalar(x)
        return self.lo <= x <= self.hi

    def contains_mod1(self, x) -> bool:
        x = as_scalar(x).frac()
        return self.contains(x) or self.contains(x + 1) or self.contains(x - 1)


def rotation_number(m: CircleMap, iterations: int) -> RotationInterval:
    """Certified enclosure of the rotation number, width at most ``1/iterations``.

    A map with a fixed point has rotation number 0.  Otherwise the lift with
    displacement in (0, 1) is used: after ``n`` steps the orbit of ``x0`` has
    wound ``k`` times past ``x0``, so ``F^n(x0) - x0`` lies in ``[k, k+1)``
    and ``n*rho`` lies within 1 of it.
    """
    if m.orientation < 0:
        raise OrientationError("rotation number needs an orientation-preserving map")
    if iterations < 1:
        raise ValueError("iterations must be positive")
    try:
        fixed = m.fixed_set()
    except IdentityMapError:
        fixed = [m.sample_point()]
    if fixed:
        return RotationInterval(Fraction(0), Fraction(0))
    n = 3 * iterations
    x0 = m.sample_point()
    x, k = x0, 0
    for _ in range(n):
        y = m.apply(x)
        if y == x0 or strictly_between(x, x0, y):
            k += 1
        x = y
    lo = max(Fraction(0), Fraction(k - 1, n))
    hi = min(Fraction(1), Fraction(k + 2, n))
    return RotationInterval(lo, hi)


def preserves_order(m: CircleMap, a: CirclePoint, b: CirclePoint, c: CirclePoint) -> bool:
    s = cyclic_order(a, b, c)
    t = cyclic_order(m.apply(a), m.apply(b), m.apply(c))
    return t == (s if m.orientation > 0 else Sign(-s))
