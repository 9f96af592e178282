from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from circlam.circle import INF, BlownUpPoint, DenjoyFrame, angle, cyclic_order, proj
from circlam.constructions import pa_like_map
from circlam.maps import (
    ArcAffineInvolution,
    Behavior,
    BlowupRotation,
    MoebiusKind,
    PiecewiseAffine,
    classify_moebius,
    fixed_points,
    moebius,
    rotation_number,
)
from circlam.scalar import QuadraticScalar, golden_angle

F = Fraction
PHI = QuadraticScalar(F(1, 2), F(1, 2), 5)
PSI = QuadraticScalar(F(1, 2), F(-1, 2), 5)


def test_apply_examples():
    assert moebius(1, 1, 0, 1).apply(INF) == INF
    assert moebius(2, 1, 1, 1).apply(proj(0)) == proj(1)
    fr = DenjoyFrame(golden_angle(), QuadraticScalar(0))
    R = BlowupRotation(fr)
    assert R.apply(BlownUpPoint(fr, 0, F(1, 2))) == BlownUpPoint(fr, 1, F(1, 2))


def test_classify_moebius_examples():
    c = classify_moebius(moebius(1, 1, 0, 1))
    assert c.kind is MoebiusKind.PARABOLIC and c.fixed == (INF,)
    c = classify_moebius(moebius(2, 1, 1, 1))
    assert c.kind is MoebiusKind.HYPERBOLIC
    assert set(c.fixed) == {proj(PHI), proj(PSI)}
    # the larger root attracts: h(x) - x = (1 + x - x^2)/(x + 1)
    assert c.attracting == proj(PHI) and c.repelling == proj(PSI)
    assert classify_moebius(moebius(0, -1, 1, 0)).kind is MoebiusKind.ELLIPTIC
    assert classify_moebius(moebius(2, 0, 0, 2)).kind is MoebiusKind.IDENTITY


def test_fixed_points_by_substitution():
    h = moebius(2, 1, 1, 1)
    for r in fixed_points(h):
        assert h.apply(r.point) == r.point


def test_fixed_points_examples():
    pa = pa_like_map([0, F(1, 4), F(1, 2), F(3, 4)], [True, False, True, False])
    recs = fixed_points(pa.map)
    assert [r.point for r in recs] == [angle(0), angle(F(1, 4)), angle(F(1, 2)), angle(F(3, 4))]
    assert [r.two_sided for r in recs] == [Behavior.ATTRACTING, Behavior.REPELLING] * 2
    (r,) = fixed_points(moebius(1, 1, 0, 1))
    assert r.point == INF and r.two_sided is None and {r.left, r.right} == {Behavior.ATTRACTING, Behavior.REPELLING}
    assert fixed_points(PiecewiseAffine.rotation(F(1, 3))) == []


def test_rotation_number_examples():
    ri = rotation_number(PiecewiseAffine.rotation(golden_angle()), 100)
    assert ri.width <= F(1, 100)
    assert ri.contains(golden_angle())
    assert rotation_number(moebius(2, 1, 1, 1), 100).contains(0)
    fr = DenjoyFrame(golden_angle(), QuadraticScalar(0))
    assert rotation_number(BlowupRotation(fr), 300).contains(golden_angle())


def test_inverse_and_compose():
    h = moebius(2, 1, 1, 1)
    assert h.compose(h.inverse()).is_identity()
    f = PiecewiseAffine([(0, 0), (F(1, 2), F(1, 3))])
    g = PiecewiseAffine.rotation(F(1, 5))
    fg = f.compose(g)
    for x in [F(0), F(1, 7), F(2, 3)]:
        p = angle(x)
        assert fg.apply(p) == f.apply(g.apply(p))
    assert f.compose(f.inverse()).is_identity()


def test_involution_reverses_orientation():
    s = ArcAffineInvolution(F(1, 4), F(3, 4))
    assert s.orientation == -1
    for x in [F(0), F(1, 8), F(1, 2), F(9, 10)]:
        assert s.apply(s.apply(angle(x))) == angle(x)


ints = st.integers(min_value=-6, max_value=6)
unit = st.fractions(min_value=0, max_value=1, max_denominator=30).filter(lambda x: x < 1)


@settings(max_examples=150, deadline=None)
@given(ints, ints, ints, ints)
def test_moebius_composition_is_matrix_product(a, b, c, d):
    if a * d - b * c <= 0:
        return
    m, h = moebius(a, b, c, d), moebius(2, 1, 1, 1)
    mh = m.compose(h)
    for x in [proj(0), proj(1), INF, proj(F(-5, 3))]:
        assert mh.apply(x) == m.apply(h.apply(x))


@settings(max_examples=150, deadline=None)
@given(unit, unit, unit)
def test_orientation_preserving_maps_preserve_cyclic_order(x, y, z):
    pa = pa_like_map([0, F(1, 6), F(1, 3), F(1, 2), F(2, 3), F(5, 6)], [True, False] * 3)
    a, b, c = angle(x), angle(y), angle(z)
    m = pa.map
    assert cyclic_order(m.apply(a), m.apply(b), m.apply(c)) == cyclic_order(a, b, c)
