"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Oracles are computed independently of the package where possible: Farey
counts from Euler's totient, traces from plain integer matrices, rotation
linking with high-precision decimals, nesting by a parenthesis sweep.

Run with ``pytest tests/test_acceptance.py -v`` or as a script.
"""

import random
import sys
from decimal import Decimal, getcontext
from fractions import Fraction
from math import gcd

import pytest

from circlam.circle import INF, Arc, BlownUpPoint, Chord, angle, proj
from circlam.constructions import (
    chord_distance,
    denjoy,
    denjoy_tessellation,
    density_in_order,
    farey,
    geodesic_lift_lamination,
    pa_like_map,
    rotation_linking_witnesses,
)
from circlam.group import (
    ElementKind,
    GroupAction,
    classify_element,
    fixed_point_cloud,
    north_south_diagnostic,
    triple_discontinuity,
)
from circlam.lamination import (
    ArcStatus,
    CollectionMode,
    Lamination,
    RainbowKind,
    check_collection,
    face_summary,
    gaps,
    rainbow,
    verify_rainbow,
)
from circlam.maps import PiecewiseAffine, moebius, powers, rotation_number
from circlam.moore import induced_fixed_classes, looseness_check, moore_complex
from circlam.scalar import QuadraticScalar, golden_angle

F = Fraction
getcontext().prec = 60
ALPHA_DEC = (Decimal(5).sqrt() - 1) / 2

# tolerances and sizes, pinned
FAREY_Q = 50
RAINBOW_DEPTHS = range(10, 101, 10)
RAINBOW_MIN_CHAIN = 8
N_WORDS, WORD_LEN = 1000, 6
GRID_DEN, N_RANDOM_CHORDS, ROT_N = 40, 100, 1000
ROT_ITER = 10 ** 4
TESS_J, TESS_DEPTH = 3, 4
SANOV_RADIUS = 6
FAN_QS = (10, 20, 40)
PA_TOL, PA_ITER = F(1, 1000), 200
NS_POWERS = 12
LIMIT_RADIUS, LIMIT_EPS = 8, F(1, 20)
SCHOTTKY_RADIUS, SCHOTTKY_GAP = 4, F(1, 10)


@pytest.fixture
def say(capsys):
    """Print one verdict line past pytest's output capture."""
    def line(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:>2}] {'PASS' if ok else 'FAIL'}  {detail}")
    return line


def modular():
    return GroupAction({"S": moebius(0, -1, 1, 0), "T": moebius(1, 1, 0, 1)})


def totient(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def to_dec(x):
    """Decimal value of a rational or quadratic scalar."""
    if isinstance(x, QuadraticScalar):
        r, s, d = x.rational_part, x.surd_coefficient, x.radicand
        v = to_dec(r)
        return v + to_dec(s) * Decimal(d).sqrt() if s else v
    x = F(x)
    return Decimal(x.numerator) / Decimal(x.denominator)


def _frac(x):
    # Decimal's % keeps the sign of the dividend
    return x - x.to_integral_value(rounding="ROUND_FLOOR")


def _chart_dec(p):
    if p.is_infinite:
        return Decimal(1) / 2
    x = to_dec(p.value)
    return _frac(x / (2 * (1 + abs(x))))


def nested_sweep(keys):
    """True iff the intervals ``(lo, hi)`` are pairwise nested or disjoint."""
    events = []
    for i, (lo, hi) in enumerate(keys):
        events.append((lo, 1, i))
        events.append((hi, 0, i))
    events.sort(key=lambda e: (e[0], e[1]))
    stack = []
    for _, opening, i in events:
        if opening:
            stack.append(i)
        elif not stack or stack.pop() != i:
            return False
    return True


# 1 ---------------------------------------------------------------------------

def test_c01_farey_structure(say):
    lam = farey(FAREY_Q, (0, 1))
    faces = gaps(lam)
    ends = lam.endpoints()

    def det(c):
        fr = [(1, 0) if p.is_infinite else (p.value.rational_part.numerator, p.value.rational_part.denominator)
              for p in c.endpoints]
        (p, q), (r, s) = fr
        return abs(p * s - q * r)

    dets_ok = all(det(c) == 1 for c in lam)
    tri = lune = bad = 0
    for f in faces:
        arcs = f.arcs
        if f.n_chords == 3 and all(a.status is ArcStatus.DEGENERATE for a in arcs):
            tri += 1
        elif f.n_chords == 1 and len(f.frontier_arcs) == 1:
            a = f.frontier_arcs[0]
            inner = Arc(a.start, a.end)
            if any(inner.contains(p) and p not in (a.start, a.end) for p in ends):
                bad += 1
            else:
                lune += 1
        else:
            bad += 1
    # oracle: n = |F_Q| points in [0, 1] triangulate an n-gon (2n - 3 chords,
    # n - 2 triangles) and 0, 1 join infinity
    n = 1 + sum(totient(q) for q in range(1, FAREY_Q + 1))
    summ = face_summary(lam, faces)
    ok = (dets_ok and bad == 0 and summ.euler_ok and len(lam) == 2 * n - 3 + 2
          and tri == n - 1 and lune == n + 1 and len(faces) == len(lam) + 1)
    say(1, ok, f"farey({FAREY_Q}) on [0,1]: {len(lam)} leaves (oracle {2 * n - 1}), "
                 f"{tri} triangles, {lune} lunes, {bad} other, euler={summ.euler_ok}")
    assert ok


# 2 ---------------------------------------------------------------------------

def test_c02_rainbow_dichotomy(say):
    lam = farey(100)
    phi = QuadraticScalar(F(1, 2), F(1, 2), 5)
    root2 = QuadraticScalar(0, 1, 2)
    pts = {"3/7": (proj(F(3, 7)), RainbowKind.ENDPOINT), "inf": (INF, RainbowKind.ENDPOINT),
           "phi": (proj(phi), RainbowKind.RAINBOW), "sqrt2": (proj(root2), RainbowKind.RAINBOW)}
    ok, parts = True, []
    for name, (p, want) in pts.items():
        kinds = set()
        for d in RAINBOW_DEPTHS:
            r = rainbow(lam, p, d)
            kinds.add(r.kind)
            if r.kind is RainbowKind.ENDPOINT:
                ok &= r.leaf is not None and r.leaf.has_endpoint(p) and not r.chain
            elif r.kind is RainbowKind.RAINBOW:
                ok &= r.leaf is None and verify_rainbow(r.chain, p)
        final = rainbow(lam, p, 100)
        ok &= kinds == {want} and final.kind is want
        if want is RainbowKind.RAINBOW:
            ok &= final.length >= RAINBOW_MIN_CHAIN
            # oracle: in decimal chart positions, p sits strictly inside the arc
            # cut off by each chain leaf, and these arcs shrink strictly
            x = _chart_dec(p)
            spans = []
            for c in final.chain:
                t1, t2 = (_chart_dec(e) for e in c.endpoints)
                if not 0 < _frac(x - t1) < _frac(t2 - t1):
                    t1, t2 = t2, t1
                ok &= 0 < _frac(x - t1) < _frac(t2 - t1)
                spans.append(_frac(t2 - t1))
            ok &= all(a > b for a, b in zip(spans, spans[1:]))
            parts.append(f"{name}: chain {final.length}")
        else:
            parts.append(f"{name}: endpoint")
    say(2, ok, f"depths {RAINBOW_DEPTHS.start}-{RAINBOW_DEPTHS.stop - 1}; " + ", ".join(parts))
    assert ok


# 3 ---------------------------------------------------------------------------

MATS = {"S": (0, -1, 1, 0), "T": (1, 1, 0, 1), "S^-1": (0, 1, -1, 0), "T^-1": (1, -1, 0, 1)}


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _is_root(x, m):
    """``c x^2 + (d - a) x - b == 0`` in exact rational/surd parts."""
    a, b, c, d = m
    r, s, rad = x.rational_part, x.surd_coefficient, x.radicand or 0
    rat = c * (r * r + s * s * rad) + (d - a) * r - b
    sur = c * 2 * r * s + (d - a) * s
    return rat == 0 and sur == 0


def test_c03_classification_conformance(say):
    rng = random.Random(20261019)
    a = modular()
    tally, mismatches, fixed_bad = {}, 0, 0
    for _ in range(N_WORDS):
        letters = [rng.choice(list(MATS)) for _ in range(rng.randint(1, WORD_LEN))]
        m = (1, 0, 0, 1)
        for x in letters:
            m = _mul(m, MATS[x])
        tr = abs(m[0] + m[3])
        cls = classify_element(a, a.word(" ".join(letters)), 12)
        allowed = ({ElementKind.TORSION, ElementKind.ELLIPTIC} if tr < 2 else
                   {ElementKind.PARABOLIC, ElementKind.IDENTITY} if tr == 2 else {ElementKind.HYPERBOLIC})
        if cls.kind not in allowed:
            mismatches += 1
        tally[cls.kind.value] = tally.get(cls.kind.value, 0) + 1
        if cls.kind is ElementKind.HYPERBOLIC:
            g = a.evaluate(a.word(" ".join(letters)))
            if len(cls.fixed) != 2 or not all(
                    g.apply(p) == p and (p.is_infinite and m[2] == 0 or not p.is_infinite and _is_root(p.value, m))
                    for p in cls.fixed):
                fixed_bad += 1
    ok = mismatches == 0 and fixed_bad == 0
    say(3, ok, f"{N_WORDS} words: {mismatches} trace-rule mismatches, {fixed_bad} bad fixed points; {tally}")
    assert ok


# 4 ---------------------------------------------------------------------------

def _dec_linked(x, y, t):
    """Linking of (x, y) with its rotation by t, all in [0, 1), by decimals."""
    def between(a, b, c):  # b strictly inside the ccw arc from a to c
        return 0 < _frac(b - a) < _frac(c - a)
    u, v = _frac(x + t), _frac(y + t)
    return between(x, u, y) != between(x, v, y) and len({x, y, u, v}) == 4


def test_c04_rotation_has_no_invariant_lamination(say):
    alpha = golden_angle()
    grid = sorted({F(p, q) for q in range(1, GRID_DEN + 1) for p in range(q)})
    pairs = [(x, y) for i, x in enumerate(grid) for y in grid[i + 1:]]
    rng = random.Random(7)
    while len(pairs) < len(grid) * (len(grid) - 1) // 2 + N_RANDOM_CHORDS:
        x, y = F(rng.randint(0, 10 ** 6 - 1), 10 ** 6), F(rng.randint(0, 10 ** 6 - 1), 10 ** 6)
        if x != y:
            pairs.append((x, y))
    chords = [Chord(angle(x), angle(y)) for x, y in pairs]
    ns = rotation_linking_witnesses(alpha, chords, ROT_N)
    missing = sum(1 for n in ns if n is None)
    oracle_bad = 0
    for (x, y), n in zip(pairs, ns):
        if n is not None and not _dec_linked(to_dec(x), to_dec(y), _frac(n * ALPHA_DEC)):
            oracle_bad += 1
    worst = max((n for n in ns if n is not None), default=None)
    ok = missing == 0 and oracle_bad == 0
    say(4, ok, f"{len(chords)} chords ({len(grid)} grid points, +{N_RANDOM_CHORDS} random): "
                 f"{missing} without witness <= {ROT_N}, {oracle_bad} rejected by decimal oracle, max n = {worst}")
    assert ok


# 5 ---------------------------------------------------------------------------

def test_c05_denjoy_exactness(say):
    ds = denjoy(golden_angle(), 0, 3)
    Rt, R = ds.map, ds.rotation()
    rng = random.Random(55)
    semi_bad = 0
    for _ in range(100):
        if rng.random() < 0.5:
            p = BlownUpPoint(ds.frame, rng.randint(-50, 50), F(rng.randint(0, 97), 97))
        else:
            p = BlownUpPoint(ds.frame, base=F(rng.randint(0, 10 ** 4 - 1), 10 ** 4))
        if ds.collapse(Rt.apply(p)) != R.apply(ds.collapse(p)):
            semi_bad += 1
    ri = rotation_number(Rt, ROT_ITER)
    bnd_ok = all(Chord(Rt.apply(ds.leaf(j).a), Rt.apply(ds.leaf(j).b)) == ds.leaf(j + 1)
                 for j in range(-ds.J + 1, ds.J))
    ok = semi_bad == 0 and ri.contains(golden_angle()) and ri.width <= F(1, ROT_ITER) and bnd_ok
    say(5, ok, f"semiconjugacy failures {semi_bad}/100; rotation interval width {ri.width} "
                 f"contains alpha={ri.contains(golden_angle())}; boundary map ok={bnd_ok}")
    assert ok


# 6 ---------------------------------------------------------------------------

def test_c06_tessellation_lamination(say):
    ds = denjoy(golden_angle(), 0, TESS_J)
    tess = denjoy_tessellation(ds, TESS_DEPTH, "full")
    # a linked pair would have raised while building the levels; recheck by sweep
    unlinked = all(isinstance(L, Lamination) and nested_sweep([c.sort_key() for c in L.leaves])
                   for L in tess.levels)
    dens = [density_in_order(a, b).is_proven for a, b in zip(tess.levels, tess.levels[1:])]
    ok = unlinked and all(dens)
    say(6, ok, f"J={TESS_J} depth {TESS_DEPTH}: levels {[len(L) for L in tess.levels]}, "
                 f"unlinked={unlinked}, density per level {dens}")
    assert ok


# 7 ---------------------------------------------------------------------------

SANOV_WORDS = ("A B", "A^2 B", "A B^2")


def test_c07_col_infinity_evidence_sanov(say):
    """Literal criterion; expected to fail.

    The Sanov subgroup is free of rank 2 with quotient a thrice-punctured
    sphere, which carries no non-peripheral simple closed geodesic, so every
    hyperbolic axis orbit contains linked translates.
    """
    s = GroupAction({"A": moebius(1, 2, 0, 1), "B": moebius(1, 0, 2, 1)}, assume_free=True)
    lams = [geodesic_lift_lamination(s, s.word(w), SANOV_RADIUS) for w in SANOV_WORDS]
    linked_words = [w for w, L in zip(SANOV_WORDS, lams) if not isinstance(L, Lamination)]
    if linked_words:
        ok, detail = False, f"axis orbits of {linked_words} already contain linked leaves at radius {SANOV_RADIUS}"
    else:
        c = check_collection(lams, CollectionMode.TRANSVERSE)
        ok, detail = c.is_proven and c.depth == SANOV_RADIUS, f"transverse {c.verdict.value} at depth {c.depth}"
    say(7, ok, f"Sanov {SANOV_WORDS}: {detail}")
    assert ok


def test_c07_supplement_punctured_torus(say):
    g = GroupAction({"C": moebius(1, 1, 1, 2), "D": moebius(1, -1, -1, 2)})
    words = ("C", "D", "C D")
    lams = [geodesic_lift_lamination(g, g.word(w), SANOV_RADIUS) for w in words]
    ok = all(isinstance(L, Lamination) for L in lams)
    detail = "linked orbit"
    if ok:
        # oracle: the three leaf sets are pairwise disjoint
        disjoint = all(not set(a.leaves) & set(b.leaves) for i, a in enumerate(lams) for b in lams[i + 1:])
        c = check_collection(lams, CollectionMode.TRANSVERSE)
        ok = disjoint and c.is_proven and c.depth == SANOV_RADIUS
        detail = f"leaves {[len(L) for L in lams]}, transverse {c.verdict.value} at depth {c.depth}"
    say(7, ok, f"(supplementary) once-punctured torus {words} at radius {SANOV_RADIUS}: {detail}")
    assert ok


# 8 ---------------------------------------------------------------------------

def test_c08_parabolic_fan(say):
    counts = []
    for Q in FAN_QS:
        lam = farey(Q, (-Q, Q))
        counts.append(sum(1 for c in lam if c.has_endpoint(INF)))
    # oracle: (n, inf) has determinant 1 exactly for integers n, so 2Q + 1 leaves
    ok = (all(n >= 2 * Q for n, Q in zip(counts, FAN_QS)) and all(x < y for x, y in zip(counts, counts[1:]))
          and counts == [2 * Q + 1 for Q in FAN_QS])
    say(8, ok, f"leaves at infinity for Q={FAN_QS}: {counts}")
    assert ok


# 9 ---------------------------------------------------------------------------

def test_c09_pseudo_anosov_polygons(say):
    specs = {4: pa_like_map([0, F(1, 4), F(1, 2), F(3, 4)], [True, False, True, False]),
             6: pa_like_map([F(k, 6) for k in range(6)], [True, False] * 3)}
    seeds = {4: Chord(angle(F(1, 8)), angle(F(5, 8))), 6: Chord(angle(F(1, 12)), angle(F(5, 12)))}
    ok, parts = True, []
    for n, pa in specs.items():
        inv = all(Chord(pa.map.apply(c.a), pa.map.apply(c.b)) in set(poly)
                  for poly in (pa.attracting_polygon, pa.repelling_polygon) for c in poly)
        imgs_att = {Chord(pa.map.apply(c.a), pa.map.apply(c.b)) for c in pa.attracting_polygon}
        imgs_rep = {Chord(pa.map.apply(c.a), pa.map.apply(c.b)) for c in pa.repelling_polygon}
        inv = inv and imgs_att == set(pa.attracting_polygon) and imgs_rep == set(pa.repelling_polygon)
        c = seeds[n]
        for _ in range(PA_ITER):
            c = Chord(pa.map.apply(c.a), pa.map.apply(c.b))
        dist = min(chord_distance(c, d) for d in pa.attracting_polygon)
        ok &= inv and dist < PA_TOL
        parts.append(f"{n}-point: invariant={inv}, distance after {PA_ITER} = {float(dist):.2e}")
    say(9, ok, "; ".join(parts))
    assert ok


# 10 --------------------------------------------------------------------------

def test_c10_convergence_diagnostics(say):
    eps = F(1, 8)
    h = moebius(2, 1, 1, 1)
    ns = north_south_diagnostic(powers(h, NS_POWERS), eps)
    d = ns.diameters()
    hyp_ok = all(x > y for x, y in zip(d, d[1:]))
    arcs = [Arc(angle(0), angle(F(1, 10))), Arc(angle(F(1, 3)), angle(F(2, 5))),
            Arc(angle(F(2, 3)), angle(F(3, 4)))]
    R = PiecewiseAffine.rotation(golden_angle())
    rot = [triple_discontinuity(powers(R, N), arcs).return_count for N in (50, 200, 800)]
    # wide enough that h itself returns K; later powers crush it towards the fixed points
    parcs = [Arc(proj(-1), proj(0)), Arc(proj(F(1, 2)), proj(2)), Arc(proj(F(5, 2)), proj(F(-3, 2)))]
    hyp = [triple_discontinuity(powers(h, N), parcs).return_count for N in (10, 40, 160)]
    T = moebius(1, 1, 0, 1)
    par = north_south_diagnostic(powers(T, NS_POWERS), eps)
    pd = par.diameters()
    par_ok = all(e.a == e.b == INF for e in par.entries) and all(x > y for x, y in zip(pd, pd[1:]))
    ok = hyp_ok and len(set(hyp)) == 1 and hyp[0] >= 1 and rot[0] < rot[1] < rot[2] and par_ok
    say(10, ok, f"hyperbolic diameters strictly decreasing={hyp_ok}; triple counts hyperbolic {hyp}, "
                  f"rotation {rot}; parabolic a=b=inf and decreasing={par_ok}")
    assert ok


# 11 --------------------------------------------------------------------------

def test_c11_moore_quotient(say):
    pa = pa_like_map([0, F(1, 4), F(1, 2), F(3, 4)], [True, False, True, False])
    st, un = pa.stable_lamination(), pa.unstable_lamination()
    loose = looseness_check(st).is_proven and looseness_check(un).is_proven
    mc = moore_complex(st, un)
    rep = induced_fixed_classes(mc, pa.map)
    ok = loose and mc.all_finite and rep.count == 2 and rep.count <= 2
    say(11, ok, f"looseness={loose}, {len(mc.classes)} classes all finite={mc.all_finite}, "
                  f"fixed classes {rep.count} ({rep.status})")
    assert ok


# 12 --------------------------------------------------------------------------

def test_c12_limit_set_approximation(say):
    win = Arc(proj(0), proj(1))
    rep = fixed_point_cloud(modular(), LIMIT_RADIUS, epsilon=LIMIT_EPS, window=win)
    # oracle: decimal chart positions inside [0, 1/4], worst distance to the cloud
    lo, hi = Decimal(0), Decimal(1) / 4
    xs = sorted(t for t in (_chart_dec(p) for p in rep.points) if lo <= t <= hi)
    worst = max([xs[0] - lo, hi - xs[-1]] + [(b - a) / 2 for a, b in zip(xs, xs[1:])]) if xs else hi
    dense = rep.epsilon_dense and worst <= to_dec(LIMIT_EPS)
    sch = GroupAction({"A": moebius(9, 0, 0, 1), "B": moebius(5, 4, 4, 5)}, assume_free=True)
    srep = fixed_point_cloud(sch, SCHOTTKY_RADIUS)
    gap_ok = srep.largest_gap_length >= SCHOTTKY_GAP
    ok = dense and gap_ok
    say(12, ok, f"PSL(2,Z) radius {LIMIT_RADIUS}: {len(rep.cloud)} points, covering radius "
                  f"{float(rep.covering_radius):.4f} (oracle {float(worst):.4f}) <= {LIMIT_EPS}; "
                  f"Schottky largest gap {float(srep.largest_gap_length):.4f} >= {SCHOTTKY_GAP}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
