from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlam.circle import INF, Arc, Chord, Linking, angle, linked, proj
from circlam.constructions import farey, farey_determinant
from circlam.group import GroupAction
from circlam.lamination import (
    Certificate,
    CollectionMode,
    Lamination,
    LinkedLeavesError,
    RainbowKind,
    check_collection,
    coverage_report,
    face_summary,
    gaps,
    materialize,
    rainbow,
    rationals_and_infinity,
    verify_rainbow,
)
from circlam.maps import PiecewiseAffine, moebius
from circlam.scalar import QuadraticScalar, golden_angle

F = Fraction
PHI = QuadraticScalar(F(1, 2), F(1, 2), 5)
PSI = QuadraticScalar(F(1, 2), F(-1, 2), 5)


def pc(x, y):
    return Chord(proj(x), proj(y))


def ac(x, y):
    return Chord(angle(x), angle(y))


def modular():
    return GroupAction({"S": moebius(0, -1, 1, 0), "T": moebius(1, 1, 0, 1)})


def test_lamination_rejects_linked_leaves():
    with pytest.raises(LinkedLeavesError):
        Lamination([ac(0, F(1, 2)), ac(F(1, 4), F(3, 4))])


def test_materialize_examples():
    lam = materialize([pc(0, None)], modular(), 6)
    assert isinstance(lam, Lamination) and len(lam) > 10
    assert all(farey_determinant(c) == 1 for c in lam)
    axis = Chord(proj(PHI), proj(PSI))
    h = GroupAction({"H": moebius(2, 1, 1, 1)})
    for d in (0, 3, 7):
        lam = materialize([axis], h, d)
        assert list(lam.leaves) == [axis]
    rot = GroupAction({"R": PiecewiseAffine.rotation(golden_angle())})
    cert = materialize([ac(0, F(1, 2))], rot, 3)
    assert isinstance(cert, Certificate) and cert.is_refuted
    c1, c2 = cert.witness["chords"]
    assert linked(c1, c2) is Linking.LINKED
    assert cert.detail["word_length"] == 1


def test_check_collection_examples():
    f10 = farey(10)
    for mode in CollectionMode:
        c = check_collection([f10, f10], mode, rationals_and_infinity)
        assert c.is_refuted and c.witness["kind"] == "shared_leaf"
    # Farey(10) against the orbit of the axis of [[2,1],[1,1]] (irrational endpoints)
    other = Lamination([Chord(proj(PHI), proj(PSI))])
    assert check_collection([f10, other], CollectionMode.PANTS_LIKE, rationals_and_infinity).is_proven
    # a lamination sharing only rational endpoints with Farey(10)
    half = Lamination([pc(0, 2), pc(F(1, 3), 1)])
    assert check_collection([f10, half], CollectionMode.PANTS_LIKE, rationals_and_infinity).is_proven
    c = check_collection([f10, half], CollectionMode.STRONGLY_TRANSVERSE)
    assert c.is_refuted and c.witness["kind"] == "shared_endpoint"
    irr = Lamination([Chord(proj(0), proj(PHI))])
    c = check_collection([f10, irr], CollectionMode.PANTS_LIKE, lambda p: p.is_infinite)
    assert c.is_refuted and c.witness["kind"] == "non_cusp_shared_endpoint"
    with pytest.raises(ValueError):
        check_collection([f10, irr], CollectionMode.PANTS_LIKE)


def test_gaps_examples():
    faces = gaps(Lamination([ac(0, F(1, 2))]))
    assert len(faces) == 2
    assert all(f.n_chords == 1 and len(f.frontier_arcs) == 1 for f in faces)
    f1 = farey(1, (0, 1))
    tri = [f for f in gaps(f1) if set(f.vertices()) == {proj(0), proj(1), INF}]
    assert len(tri) == 1 and tri[0].is_ideal_polygon and tri[0].n_chords == 3
    f3 = farey(3)
    lune = [f for f in gaps(f3) if f.chords == [pc(F(1, 3), F(1, 2))]]
    assert len(lune) == 1 and lune[0].is_lune


def test_face_euler_count():
    for lam in (farey(5), farey(8, (0, 1)), Lamination([ac(0, F(1, 3)), ac(F(1, 3), F(2, 3))])):
        assert face_summary(lam).euler_ok


def test_rainbow_examples():
    lam = farey(100)
    r = rainbow(lam, proj(F(3, 7)))
    assert r.kind is RainbowKind.ENDPOINT and r.leaf.has_endpoint(proj(F(3, 7)))
    assert rainbow(lam, INF).kind is RainbowKind.ENDPOINT
    r = rainbow(lam, proj(PHI))
    assert r.kind is RainbowKind.RAINBOW and r.length >= 8
    assert verify_rainbow(r.chain, proj(PHI))
    # consecutive convergents of the golden ratio appear in the chain
    assert pc(1, 2) in r.chain and pc(F(3, 2), 2) in r.chain and pc(F(3, 2), F(5, 3)) in r.chain
    for c in r.chain:
        assert farey_determinant(c) == 1


def test_coverage_examples():
    Q = 12
    rep = coverage_report(farey(Q, (0, 1)), F(1, Q), Arc(proj(0), proj(1)))
    assert rep.dense
    single = Lamination([ac(0, F(1, 2))])
    rep = coverage_report(single, F(1, 10), Arc(angle(0), angle(0)))
    assert not rep.dense and rep.worst_gaps
    near_half = Arc(proj(F(2, 5)), proj(F(3, 5)))
    assert coverage_report(farey(50), F(1, 10), near_half).boundary_full


unit = st.fractions(min_value=0, max_value=1, max_denominator=24).filter(lambda x: x < 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(unit, unit), min_size=1, max_size=12))
def test_faces_of_random_unlinked_sets(pairs):
    leaves = []
    for x, y in pairs:
        if x == y:
            continue
        c = ac(x, y)
        if all(linked(c, d) is not Linking.LINKED for d in leaves):
            leaves.append(c)
    if not leaves:
        return
    lam = Lamination(leaves)
    faces = gaps(lam)
    assert len(faces) == len(set(leaves)) + 1
    # every chord borders exactly two faces
    for c in lam:
        assert sum(c in f.chords for f in faces) == 2
