import random
from fractions import Fraction

import pytest

from circlam.circle import BlownUpPoint, Chord, Linking, angle, linked, proj
from circlam.constructions import (
    chord_distance,
    denjoy,
    denjoy_tessellation,
    density_in_order,
    farey,
    farey_determinant,
    geodesic_lift_lamination,
    pa_like_map,
    rotation_linking_witness,
    rotation_linking_witnesses,
)
from circlam.group import GroupAction
from circlam.lamination import Certificate, Lamination, check_collection, CollectionMode
from circlam.maps import moebius
from circlam.scalar import golden_angle

F = Fraction


def pc(x, y):
    return Chord(proj(x), proj(y))


def test_farey_small_windows():
    f1 = farey(1, (-2, 2))
    expected = {pc(n, n + 1) for n in range(-2, 2)} | {pc(n, None) for n in range(-2, 3)}
    assert set(f1.leaves) == expected
    f2 = farey(2, (0, 1))
    assert set(f2.leaves) == {pc(0, 1), pc(0, F(1, 2)), pc(F(1, 2), 1), pc(0, None), pc(1, None)}


def test_farey_determinant_and_depth():
    lam = farey(20)
    assert all(farey_determinant(c) == 1 for c in lam)
    assert lam.truncate(5).issubset(lam)
    assert set(lam.truncate(5).leaves) == set(farey(5).leaves)


def test_denjoy_examples():
    ds = denjoy(golden_angle(), 0, 3)
    assert len(ds.lamination) == 7
    R = ds.map
    img = Chord(R.apply(ds.leaf(0).a), R.apply(ds.leaf(0).b))
    assert img == ds.leaf(1)
    assert ds.central_gap.n_chords == 7


def test_denjoy_semiconjugacy():
    ds = denjoy(golden_angle(), 0, 3)
    rng = random.Random(5)
    Rt, R = ds.map, ds.rotation()
    for _ in range(100):
        if rng.random() < 0.5:
            p = BlownUpPoint(ds.frame, rng.randint(-20, 20), F(rng.randint(0, 9), 9))
        else:
            p = BlownUpPoint(ds.frame, base=F(rng.randint(0, 999), 1000))
        assert ds.collapse(Rt.apply(p)) == R.apply(ds.collapse(p))


def test_denjoy_rejects_rational():
    with pytest.raises(ValueError):
        denjoy(F(1, 3), 0, 3)


def test_rotation_linking_examples():
    a = golden_angle()
    assert rotation_linking_witness(a, Chord(angle(0), angle(F(1, 2))), 1000) == 1
    n = rotation_linking_witness(a, Chord(angle(0), angle(F(1, 4))), 1000)
    assert n is not None and n <= 1000


def test_batched_witnesses_agree():
    a = golden_angle()
    rng = random.Random(11)
    chords = []
    while len(chords) < 60:
        x, y = F(rng.randint(0, 99), 100), F(rng.randint(0, 99), 100)
        if x != y:
            chords.append(Chord(angle(x), angle(y)))
    assert rotation_linking_witnesses(a, chords, 1000) == [rotation_linking_witness(a, c, 1000) for c in chords]


def test_tessellation_counts():
    ds = denjoy(golden_angle(), 0, 3)
    orbit = denjoy_tessellation(ds, 1, "orbit")
    assert [len(L) for L in orbit.levels] == [7, 13]
    full = denjoy_tessellation(ds, 2, "full")
    assert len(full.levels[0]) == 7
    for a, b in zip(full.levels, full.levels[1:]):
        assert density_in_order(a, b).is_proven


def test_pa_like_examples():
    pa = pa_like_map([0, F(1, 4), F(1, 2), F(3, 4)], [True, False, True, False])
    assert pa.attracting_polygon == [Chord(angle(0), angle(F(1, 2)))]
    for c in pa.attracting_polygon + pa.repelling_polygon:
        assert Chord(pa.map.apply(c.a), pa.map.apply(c.b)) == c
    pa6 = pa_like_map([0, F(1, 6), F(1, 3), F(1, 2), F(2, 3), F(5, 6)], [True, False] * 3)
    assert set(pa6.attracting_polygon) == {Chord(angle(0), angle(F(1, 3))),
                                          Chord(angle(F(1, 3)), angle(F(2, 3))),
                                          Chord(angle(F(2, 3)), angle(0))}
    with pytest.raises(ValueError):
        pa_like_map([0, F(1, 4), F(1, 2), F(3, 4)], [True, True, False, False])


def test_pa_like_orbit_approaches_polygon():
    pa = pa_like_map([0, F(1, 4), F(1, 2), F(3, 4)], [True, False, True, False])
    c = Chord(angle(F(1, 8)), angle(F(5, 8)))
    for _ in range(200):
        c = Chord(pa.map.apply(c.a), pa.map.apply(c.b))
    assert chord_distance(c, pa.attracting_polygon[0]) < F(1, 1000)


def test_punctured_torus_lifts_are_transverse():
    g = GroupAction({"C": moebius(1, 1, 1, 2), "D": moebius(1, -1, -1, 2)})
    # the commutator is parabolic: the quotient is a once-punctured torus
    comm = g.evaluate(g.word("C D C^-1 D^-1"))
    assert comm.normalized_trace_squared() == 4
    lams = [geodesic_lift_lamination(g, g.word(w), 4) for w in ("C", "D", "C D")]
    assert all(isinstance(L, Lamination) for L in lams)
    assert check_collection(lams, CollectionMode.TRANSVERSE).is_proven


def test_non_simple_axis_is_refuted():
    sanov = GroupAction({"A": moebius(1, 2, 0, 1), "B": moebius(1, 0, 2, 1)}, assume_free=True)
    out = geodesic_lift_lamination(sanov, sanov.word("A B"), 3)
    assert isinstance(out, Certificate) and out.is_refuted
    c1, c2 = out.witness["chords"]
    assert linked(c1, c2) is Linking.LINKED
    with pytest.raises(ValueError):
        geodesic_lift_lamination(sanov, sanov.word("A"), 2)
