"""Scenario files, check orchestration and reports.

A scenario is a JSON object (version 1) naming a circle model, generators,
an optional lamination source and an ordered list of checks.  Running it
produces a :class:`Report` whose refuting witnesses can be re-verified
after reloading.  The format is documented in ``docs/formats.md``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from .circle import INF, Arc, Chord, Linking, Model, ProjectivePoint, angle, linked
from .constructions import (
    density_in_order,
    denjoy,
    denjoy_tessellation,
    farey,
    geodesic_lift_lamination,
    pa_like_map,
    rotation_linking_witness,
)
from .group import (
    GroupAction,
    Word,
    classify_map,
    fixed_point_cloud,
    north_south_diagnostic,
    triple_discontinuity,
)
from .lamination import (
    Certificate,
    CollectionMode,
    Lamination,
    RainbowKind,
    Verdict,
    check_collection,
    coverage_report,
    explicit_cusps,
    face_summary,
    gaps,
    materialize,
    rainbow,
    rationals_and_infinity,
    verify_rainbow,
)
from .maps import (
    ArcAffineInvolution,
    MoebiusMap,
    PiecewiseAffine,
    powers,
    rotation_number,
)
from .moore import NotLooseError, induced_fixed_classes, looseness_check, moore_complex
from .serialize import (
    FormatError,
    chord_to_json,
    frame_from_json,
    frame_to_json,
    from_json,
    scalar_from_json,
    scalar_to_json,
    to_json,
)

VERSION = 1
MODELS = {"projective": Model.PROJECTIVE, "angle": Model.ANGLE}
# leaves beyond this many are summarized rather than listed in a report
REPORT_LEAF_LIMIT = 50000


def _keys(obj: dict, path: str, required=(), optional=()) -> None:
    if not isinstance(obj, dict):
        raise FormatError(path, "expected an object")
    extra = set(obj) - set(required) - set(optional)
    if extra:
        raise FormatError(path, f"unknown field(s) {sorted(extra)}")
    for k in required:
        if k not in obj:
            raise FormatError(path, f"missing field {k!r}")


def _int(v, path, lo=None):
    if type(v) is not int or (lo is not None and v < lo):
        raise FormatError(path, f"expected an integer{'' if lo is None else f' >= {lo}'}")
    return v


# ---------------------------------------------------------------------------
# scenario


@dataclass
class Scenario:
    model: Model
    radicand: int = 0
    generators: dict = field(default_factory=dict)   # name -> spec dict (canonical JSON)
    seeds: list = field(default_factory=list)        # Chords
    depth: int = 3
    lamination: Optional[dict] = None                # canonical JSON
    cusps: object = None                             # None, "rationals-and-infinity" or list of points
    checks: list = field(default_factory=list)       # canonical JSON dicts
    name: str = ""

    # -- points in the scenario's model

    def point(self, v, path: str):
        if self.model is Model.PROJECTIVE:
            if v == "inf":
                return INF
            p = ProjectivePoint(scalar_from_json(v, path))
        else:
            p = angle(scalar_from_json(v, path))
        x = p.value
        if x is not None and not x.is_rational and x.radicand != self.radicand:
            raise FormatError(path, f"radicand {x.radicand} outside the declared field Q(sqrt({self.radicand}))")
        return p

    def chord(self, v, path: str) -> Chord:
        if not isinstance(v, list) or len(v) != 2:
            raise FormatError(path, "a chord is a pair of points")
        a, b = self.point(v[0], path + "[0]"), self.point(v[1], path + "[1]")
        if a == b:
            raise FormatError(path, "chord endpoints coincide")
        return Chord(a, b)

    def point_json(self, p):
        return "inf" if getattr(p, "value", 0) is None else scalar_to_json(p.value)

    # -- generators

    def action(self) -> Optional[GroupAction]:
        if not self.generators:
            return None
        gens = {n: _build_map(spec, self) for n, spec in self.generators.items()}
        reversing = any(g.orientation < 0 for g in gens.values())
        return GroupAction(gens, allow_reversing=reversing)

    def to_json(self) -> dict:
        out = {"version": VERSION}
        if self.name:
            out["name"] = self.name
        out["model"] = next(k for k, v in MODELS.items() if v is self.model)
        out["radicand"] = self.radicand
        out["generators"] = self.generators
        out["seeds"] = [[self.point_json(c.a), self.point_json(c.b)] for c in self.seeds]
        out["depth"] = self.depth
        if self.lamination is not None:
            out["lamination"] = self.lamination
        if self.cusps is not None:
            out["cusps"] = self.cusps if isinstance(self.cusps, str) else [self.point_json(p) for p in self.cusps]
        out["checks"] = self.checks
        return out


def _build_map(spec: dict, sc: Scenario):
    k = spec["kind"]
    if k == "moebius":
        return MoebiusMap.from_matrix([[scalar_from_json(x) for x in row] for row in spec["matrix"]])
    if k == "rotation":
        return PiecewiseAffine.rotation(scalar_from_json(spec["alpha"]))
    if k == "piecewise":
        return PiecewiseAffine([(scalar_from_json(x), scalar_from_json(y)) for x, y in spec["nodes"]])
    if k == "involution":
        return ArcAffineInvolution(scalar_from_json(spec["a"]), scalar_from_json(spec["b"]))
    raise AssertionError(k)


_GEN_FIELDS = {
    "moebius": ("matrix",),
    "rotation": ("alpha",),
    "piecewise": ("nodes",),
    "involution": ("a", "b"),
}
_GEN_MODEL = {"moebius": Model.PROJECTIVE, "rotation": Model.ANGLE,
              "piecewise": Model.ANGLE, "involution": Model.ANGLE}


def _canon_scalar(v, path, radicand):
    x = scalar_from_json(v, path)
    if not x.is_rational and x.radicand != radicand:
        raise FormatError(path, f"radicand {x.radicand} outside the declared field")
    return x.to_triple()


def _parse_generator(name, spec, path, model, radicand) -> dict:
    if not isinstance(spec, dict) or spec.get("kind") not in _GEN_FIELDS:
        raise FormatError(path, f"generator kind must be one of {sorted(_GEN_FIELDS)}")
    kind = spec["kind"]
    _keys(spec, path, ("kind",) + _GEN_FIELDS[kind])
    if _GEN_MODEL[kind] is not model:
        raise FormatError(path, f"{kind} generators act on the {_GEN_MODEL[kind].value} model")
    out = {"kind": kind}
    if kind == "moebius":
        m = spec["matrix"]
        if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
            raise FormatError(path + ".matrix", "expected a 2x2 matrix")
        out["matrix"] = [[_canon_scalar(x, f"{path}.matrix[{i}][{j}]", radicand) for j, x in enumerate(r)]
                         for i, r in enumerate(m)]
    elif kind == "piecewise":
        nodes = spec["nodes"]
        if not isinstance(nodes, list) or not all(isinstance(n, list) and len(n) == 2 for n in nodes):
            raise FormatError(path + ".nodes", "expected a list of [x, y] pairs")
        out["nodes"] = [[_canon_scalar(x, f"{path}.nodes[{i}][0]", radicand),
                         _canon_scalar(y, f"{path}.nodes[{i}][1]", radicand)] for i, (x, y) in enumerate(nodes)]
    else:
        for f in _GEN_FIELDS[kind]:
            out[f] = _canon_scalar(spec[f], f"{path}.{f}", radicand)
    return out


# check name -> (required params, optional params)
CHECKS = {
    "unlinked": ((), ()),
    "gap_audit": ((), ()),
    "looseness": ((), ()),
    "coverage": (("epsilon",), ("window",)),
    "rainbow": (("point",), ("depth",)),
    "classify": ((), ("word", "matrix", "power_bound")),
    "rotation_witness": (("chord",), ("alpha", "max_n")),
    "transverse": (("words",), ("radius", "mode")),
    "limit_set": (("epsilon",), ("radius", "window", "power_bound")),
    "north_south": (("word",), ("powers", "epsilon")),
    "triple": (("word", "arcs"), ("powers",)),
    "rotation_number": (("word",), ("iterations",)),
    "moore": ((), ()),
    "denjoy": ((), ("alpha", "J", "depth", "mode")),
}

_SOURCES = {
    "orbit": ((), ()),
    "farey": (("qmax",), ("window",)),
    "pa_like": (("points", "attracting"), ()),
}


def parse_scenario(data) -> Scenario:
    """Validate a decoded JSON object; raises :class:`FormatError`."""
    _keys(data, "$", ("version", "model", "checks"),
          ("name", "radicand", "generators", "seeds", "depth", "lamination", "cusps"))
    if data["version"] != VERSION:
        raise FormatError("$.version", f"unsupported version {data['version']!r}")
    if data["model"] not in MODELS:
        raise FormatError("$.model", f"model must be one of {sorted(MODELS)}")
    model = MODELS[data["model"]]
    radicand = _int(data.get("radicand", 0), "$.radicand", 0)
    sc = Scenario(model, radicand, name=str(data.get("name", "")))
    gens = data.get("generators", {})
    if not isinstance(gens, dict):
        raise FormatError("$.generators", "expected an object")
    for n, spec in gens.items():
        if not n.isalpha() or not n[0].isupper() or n.endswith("-"):
            raise FormatError(f"$.generators.{n}", "generator names are capitalized letters")
        sc.generators[n] = _parse_generator(n, spec, f"$.generators.{n}", model, radicand)
    names = sorted(sc.generators, key=len, reverse=True)
    for a in names:
        for b in names:
            if a != b and a.startswith(b):
                raise FormatError("$.generators", f"generator {b!r} is a prefix of {a!r}")
    seeds = data.get("seeds", [])
    if not isinstance(seeds, list):
        raise FormatError("$.seeds", "expected a list of chords")
    sc.seeds = [sc.chord(c, f"$.seeds[{i}]") for i, c in enumerate(seeds)]
    sc.depth = _int(data.get("depth", 3), "$.depth", 0)

    lam = data.get("lamination")
    if lam is None and sc.seeds:
        lam = {"source": "orbit"}
    if lam is not None:
        src = lam.get("source") if isinstance(lam, dict) else None
        if src not in _SOURCES:
            raise FormatError("$.lamination.source", f"must be one of {sorted(_SOURCES)}")
        req, opt = _SOURCES[src]
        _keys(lam, "$.lamination", ("source",) + req, opt)
        canon = {"source": src}
        if src == "orbit" and not sc.seeds:
            raise FormatError("$.seeds", "the orbit source needs seeds")
        if src == "farey":
            if model is not Model.PROJECTIVE:
                raise FormatError("$.lamination", "Farey laminations live on the projective model")
            canon["qmax"] = _int(lam["qmax"], "$.lamination.qmax", 1)
            w = lam.get("window")
            if w is not None:
                if not (isinstance(w, list) and len(w) == 2):
                    raise FormatError("$.lamination.window", "expected [lo, hi]")
                lo, hi = (scalar_from_json(x, f"$.lamination.window[{i}]") for i, x in enumerate(w))
                if not (lo.is_rational and hi.is_rational and lo < hi):
                    raise FormatError("$.lamination.window", "expected rational lo < hi")
                canon["window"] = [lo.to_triple(), hi.to_triple()]
        if src == "pa_like":
            if model is not Model.ANGLE:
                raise FormatError("$.lamination", "pa_like maps live on the angle model")
            pts, att = lam["points"], lam["attracting"]
            if not (isinstance(pts, list) and isinstance(att, list) and len(pts) == len(att)
                    and all(isinstance(b, bool) for b in att)):
                raise FormatError("$.lamination", "points and attracting flags must be equal-length lists")
            canon["points"] = [_canon_scalar(p, f"$.lamination.points[{i}]", radicand) for i, p in enumerate(pts)]
            canon["attracting"] = list(att)
        sc.lamination = canon

    cusps = data.get("cusps")
    if cusps is not None:
        if cusps == "rationals-and-infinity":
            sc.cusps = cusps
        elif isinstance(cusps, list):
            sc.cusps = [sc.point(p, f"$.cusps[{i}]") for i, p in enumerate(cusps)]
        else:
            raise FormatError("$.cusps", "expected \"rationals-and-infinity\", a list of points or null")

    if not isinstance(data["checks"], list):
        raise FormatError("$.checks", "expected a list")
    for i, ch in enumerate(data["checks"]):
        sc.checks.append(_parse_check(ch, f"$.checks[{i}]", sc))
    return sc


def _parse_check(ch, path, sc: Scenario) -> dict:
    if not isinstance(ch, dict) or ch.get("check") not in CHECKS:
        raise FormatError(path, f"check must be one of {sorted(CHECKS)}")
    name = ch["check"]
    req, opt = CHECKS[name]
    _keys(ch, path, ("check",) + req, opt)
    out = dict(ch)
    needs_lam = {"unlinked", "gap_audit", "looseness", "coverage", "rainbow", "moore"}
    if name in needs_lam and sc.lamination is None:
        raise FormatError(path, f"{name} needs a lamination source or seeds")
    if name == "moore" and sc.lamination["source"] != "pa_like":
        raise FormatError(path, "moore needs the pa_like lamination source")
    needs_gens = {"transverse", "limit_set", "north_south", "triple", "rotation_number"}
    if name in needs_gens or (name == "classify" and "word" in ch):
        if not sc.generators:
            raise FormatError(path, f"{name} needs generators")
    for k in ("word",):
        if k in ch:
            _check_word(ch[k], f"{path}.{k}", sc)
    if name == "transverse":
        if not isinstance(ch["words"], list) or len(ch["words"]) < 2:
            raise FormatError(path + ".words", "expected at least two words")
        for j, w in enumerate(ch["words"]):
            _check_word(w, f"{path}.words[{j}]", sc)
        if ch.get("mode", "transverse") not in [m.value for m in CollectionMode]:
            raise FormatError(path + ".mode", "unknown mode")
        if ch.get("mode") == "pants_like" and sc.cusps is None:
            raise FormatError(path, "pants_like mode needs a cusp oracle")
    if name == "classify":
        if ("word" in ch) == ("matrix" in ch):
            raise FormatError(path, "give exactly one of word, matrix")
        if "matrix" in ch:
            m = ch["matrix"]
            if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
                raise FormatError(path + ".matrix", "expected a 2x2 matrix")
            out["matrix"] = [[scalar_from_json(x, f"{path}.matrix").to_triple() for x in r] for r in m]
    for k in ("epsilon", "alpha"):
        if k in ch:
            out[k] = scalar_from_json(ch[k], f"{path}.{k}").to_triple()
    if "point" in ch:
        out["point"] = sc.point_json(sc.point(ch["point"], path + ".point"))
    if "chord" in ch:
        if sc.model is not Model.ANGLE:
            raise FormatError(path, "rotation witnesses live on the angle model")
        c = sc.chord(ch["chord"], path + ".chord")
        out["chord"] = [sc.point_json(c.a), sc.point_json(c.b)]
    for k in ("depth", "max_n", "radius", "powers", "power_bound", "iterations", "J"):
        if k in ch:
            _int(ch[k], f"{path}.{k}", 0)
    if "window" in ch and ch["window"] is not None:
        if not (isinstance(ch["window"], list) and len(ch["window"]) == 2):
            raise FormatError(path + ".window", "expected [start, end]")
        out["window"] = [sc.point_json(sc.point(p, f"{path}.window[{j}]")) for j, p in enumerate(ch["window"])]
    if name == "triple":
        arcs = ch["arcs"]
        if not (isinstance(arcs, list) and len(arcs) == 3):
            raise FormatError(path + ".arcs", "expected three arcs")
        out["arcs"] = []
        for j, a in enumerate(arcs):
            c = sc.chord(a, f"{path}.arcs[{j}]")
            out["arcs"].append([sc.point_json(sc.point(a[0], "")), sc.point_json(sc.point(a[1], ""))])
    if name == "rotation_witness" and "alpha" not in ch:
        rot = [g for g in sc.generators.values() if g["kind"] == "rotation"]
        if len(rot) != 1:
            raise FormatError(path, "give alpha or declare exactly one rotation generator")
    if name == "denjoy" and "mode" in ch and ch["mode"] not in ("full", "orbit"):
        raise FormatError(path + ".mode", "mode is full or orbit")
    return out


def _check_word(w, path, sc: Scenario):
    if not isinstance(w, str):
        raise FormatError(path, "a word is a string")
    try:
        Word.parse(w, list(sc.generators))
    except ValueError as e:
        raise FormatError(path, str(e)) from None
    for n, _ in Word.parse(w, list(sc.generators)).letters:
        if n not in sc.generators:
            raise FormatError(path, f"unknown generator {n!r}")


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError("$", f"invalid JSON: {e}") from None
    return parse_scenario(data)


# ---------------------------------------------------------------------------
# running


@dataclass
class CheckResult:
    check: str
    params: dict
    certificate: Certificate
    counts: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)   # chords for rendering, e.g. a rainbow chain
    seconds: float = 0.0

    def to_json(self) -> dict:
        c = self.certificate
        return {"check": self.check, "params": self.params, "verdict": c.verdict.value,
                "depth": c.depth, "witness": to_json(c.witness), "detail": to_json(c.detail),
                "counts": self.counts, "payload": to_json(self.payload),
                "seconds": round(self.seconds, 3)}


@dataclass
class Report:
    scenario: Scenario
    results: list
    lamination: Optional[Lamination] = None
    frame: object = None

    @property
    def exit_code(self) -> int:
        return exit_code([r.certificate.verdict for r in self.results])

    def to_json(self) -> dict:
        out = {"version": VERSION, "scenario": self.scenario.to_json(),
               "checks": [r.to_json() for r in self.results],
               "exit_code": self.exit_code}
        if self.frame is not None:
            out["frame"] = frame_to_json(self.frame)
        lam = self.lamination
        if lam is not None:
            out["lamination"] = {"model": lam.model.value if lam.model else None,
                                 "leaf_count": len(lam),
                                 "closure_note": lam.closure_note}
            if len(lam) <= REPORT_LEAF_LIMIT:
                out["lamination"]["leaves"] = [chord_to_json(c) for c in lam.leaves]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def exit_code(verdicts) -> int:
    verdicts = list(verdicts)
    if any(v is Verdict.REFUTED for v in verdicts):
        return 1
    if any(v is Verdict.UNKNOWN for v in verdicts):
        return 2
    return 0


class _Context:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self._action = None
        self._lam = None
        self._lam_cert = None
        self._pa = None

    @property
    def action(self):
        if self._action is None:
            self._action = self.sc.action()
        return self._action

    def pa(self):
        if self._pa is None:
            src = self.sc.lamination
            pts = [scalar_from_json(p) for p in src["points"]]
            self._pa = pa_like_map(pts, src["attracting"])
        return self._pa

    def lamination(self):
        """The scenario lamination, or a refuting certificate if the orbit links."""
        if self._lam is None and self._lam_cert is None:
            src = self.sc.lamination
            kind = src["source"]
            if kind == "farey":
                w = src.get("window")
                window = tuple(scalar_from_json(x).as_fraction() for x in w) if w else None
                self._lam = farey(src["qmax"], window)
            elif kind == "pa_like":
                self._lam = self.pa().stable_lamination()
            else:
                out = materialize(self.sc.seeds, self.action, self.sc.depth)
                if isinstance(out, Certificate):
                    self._lam_cert = out
                else:
                    self._lam = out
        return self._lam if self._lam is not None else self._lam_cert

    def cusp_oracle(self):
        c = self.sc.cusps
        if c is None:
            return None
        if c == "rationals-and-infinity":
            return rationals_and_infinity
        return explicit_cusps(c)


def _window_arc(sc: Scenario, w) -> Optional[Arc]:
    if w is None:
        return None
    return Arc(sc.point(w[0], "window"), sc.point(w[1], "window"))


def _run_check(ctx: _Context, ch: dict) -> CheckResult:
    sc = ctx.sc
    name = ch["check"]
    params = {k: v for k, v in ch.items() if k != "check"}
    res = CheckResult(name, params, Certificate.unknown())

    if name in ("unlinked", "gap_audit", "looseness", "coverage", "rainbow"):
        lam = ctx.lamination()
        if isinstance(lam, Certificate):
            # the orbit is linked; every lamination check inherits the refutation
            res.certificate = lam
            return res
        res.counts["leaves"] = len(lam)

    if name == "unlinked":
        res.certificate = Certificate.proven(depth=sc.depth if sc.lamination["source"] == "orbit" else None,
                                             leaves=len(lam))
    elif name == "gap_audit":
        faces = gaps(lam)
        fs = face_summary(lam, faces)
        by_sides: dict = {}
        for f in faces:
            by_sides[f.n_chords] = by_sides.get(f.n_chords, 0) + 1
        polygons = sum(f.is_ideal_polygon for f in faces)
        lunes = sum(f.is_lune for f in faces)
        res.counts.update(faces=len(faces), ideal_polygons=polygons, lunes=lunes,
                          faces_by_chords={str(k): v for k, v in sorted(by_sides.items())})
        ok = fs.euler_ok and polygons + lunes == len(faces)
        res.certificate = (Certificate.proven(euler=True) if ok else
                           Certificate.unknown(euler=fs.euler_ok, other_faces=len(faces) - polygons - lunes))
    elif name == "looseness":
        res.certificate = looseness_check(lam)
    elif name == "coverage":
        eps = scalar_from_json(ch["epsilon"]).as_fraction()
        window = _window_arc(sc, ch.get("window"))
        if window is None:
            p0 = sc.point(0, "window")
            window = Arc(p0, p0)
        rep = coverage_report(lam, eps, window)
        detail = {"covering_radius": rep.covering_radius, "boundary_full": rep.boundary_full,
                  "worst_gaps": [[g.start, g.end, L] for g, L in rep.worst_gaps]}
        res.certificate = (Certificate.proven(**detail) if rep.dense and rep.boundary_full
                           else Certificate.unknown(**detail))
    elif name == "rainbow":
        p = sc.point(ch["point"], "point")
        r = rainbow(lam, p, ch.get("depth"))
        if r.kind is RainbowKind.ENDPOINT:
            res.certificate = Certificate.proven(kind="endpoint", leaf=r.leaf, point=p)
        elif r.kind is RainbowKind.RAINBOW and verify_rainbow(r.chain, p):
            res.certificate = Certificate.proven(kind="rainbow", point=p, length=r.length)
            res.payload["chain"] = r.chain
            res.counts["chain"] = r.length
        else:
            res.certificate = Certificate.unknown(kind="none", point=p)
    elif name == "classify":
        pb = ch.get("power_bound", 12)
        if "word" in ch:
            m = ctx.action.evaluate(ctx.action.word(ch["word"]))
        else:
            m = MoebiusMap.from_matrix([[scalar_from_json(x) for x in r] for r in ch["matrix"]])
        cls = classify_map(m, pb)
        res.certificate = Certificate.proven(**{"class": cls.to_json()})
    elif name == "rotation_witness":
        c = sc.chord(ch["chord"], "chord")
        if "alpha" in ch:
            alpha = scalar_from_json(ch["alpha"])
        else:
            alpha = scalar_from_json(next(g for g in sc.generators.values() if g["kind"] == "rotation")["alpha"])
        N = ch.get("max_n", 1000)
        n = rotation_linking_witness(alpha, c, N)
        if n is None:
            res.certificate = Certificate.unknown(depth=N)
        else:
            img = PiecewiseAffine.rotation(alpha).power(n)
            res.certificate = Certificate.refuted(
                {"kind": "rotation_linking", "alpha": alpha, "n": n, "chord": c,
                 "image": Chord(img.apply(c.a), img.apply(c.b))}, depth=n)
    elif name == "transverse":
        radius = ch.get("radius", sc.depth)
        lams = []
        for w in ch["words"]:
            out = geodesic_lift_lamination(ctx.action, ctx.action.word(w), radius)
            if isinstance(out, Certificate):
                res.certificate = out
                return res
            lams.append(out)
        res.counts["leaves"] = [len(L) for L in lams]
        res.certificate = check_collection(lams, CollectionMode(ch.get("mode", "transverse")), ctx.cusp_oracle())
        if res.certificate.is_refuted:
            res.certificate.witness["words"] = list(ch["words"])
            res.certificate.witness["radius"] = radius
    elif name == "limit_set":
        eps = scalar_from_json(ch["epsilon"]).as_fraction()
        window = _window_arc(sc, ch.get("window"))
        rep = fixed_point_cloud(ctx.action, ch.get("radius", sc.depth), ch.get("power_bound", 1), eps, window)
        res.counts["cloud"] = len(rep.cloud)
        detail = {"covering_radius": rep.covering_radius, "largest_gap": rep.largest_gap_length,
                  "gap": [rep.largest_gap.start, rep.largest_gap.end] if rep.largest_gap else None}
        res.certificate = (Certificate.proven(**detail) if rep.epsilon_dense else Certificate.unknown(**detail))
    elif name in ("north_south", "triple", "rotation_number"):
        g = ctx.action.evaluate(ctx.action.word(ch["word"]))
        if name == "north_south":
            eps = scalar_from_json(ch.get("epsilon", [1, 8])).as_fraction()
            seq = powers(g, ch.get("powers", 12))
            rep = north_south_diagnostic(seq, eps)
            detail = {"diameters": rep.diameters(), "a": [e.a for e in rep.entries],
                      "b": [e.b for e in rep.entries], "strictly_decreasing": rep.strictly_decreasing}
            res.certificate = (Certificate.proven(**detail) if rep.strictly_decreasing and rep.contracting
                               else Certificate.unknown(**detail))
        elif name == "triple":
            arcs = [Arc(sc.point(a[0], "arc"), sc.point(a[1], "arc")) for a in ch["arcs"]]
            N = ch.get("powers", 12)
            rep = triple_discontinuity(powers(g, N), arcs)
            res.counts["returns"] = rep.return_count
            res.certificate = Certificate.proven(return_count=rep.return_count,
                                                 returning_powers=[i + 1 for i in rep.witnesses])
        else:
            it = ch.get("iterations", 1000)
            ri = rotation_number(g, it)
            res.certificate = Certificate.proven(lo=ri.lo, hi=ri.hi, iterations=it)
    elif name == "moore":
        pa = ctx.pa()
        try:
            mc = moore_complex(pa.stable_lamination(), pa.unstable_lamination())
        except NotLooseError as e:
            res.certificate = e.certificate
            return res
        fc = induced_fixed_classes(mc, pa.map)
        res.counts.update(classes=len(mc.classes), fixed_classes=fc.count)
        classes = [list(c) for c in mc.classes]
        if fc.count is None:
            res.certificate = Certificate.unknown(reason=fc.detail)
        elif fc.count <= 2:
            res.certificate = Certificate.proven(fixed=fc.fixed, classes=classes)
        else:
            res.certificate = Certificate.refuted({"kind": "too_many_fixed_classes",
                                                   "classes": [classes[i] for i in fc.fixed]})
    elif name == "denjoy":
        alpha = scalar_from_json(ch.get("alpha", "golden"))
        ds = denjoy(alpha, 0, ch.get("J", 3))
        tess = denjoy_tessellation(ds, ch.get("depth", 3), ch.get("mode", "full"))
        res.counts["levels"] = [len(L) for L in tess.levels]
        ctx.frame = ds.frame
        cert = Certificate.proven(levels=len(tess.levels))
        for d, (a, b) in enumerate(zip(tess.levels, tess.levels[1:])):
            c = density_in_order(a, b)
            if c.is_refuted:
                c.witness["level"] = d
                cert = c
                break
        res.certificate = cert
    return res


def run_scenario(sc: Scenario) -> Report:
    ctx = _Context(sc)
    ctx.frame = None
    results = []
    for ch in sc.checks:
        t0 = time.perf_counter()
        r = _run_check(ctx, ch)
        r.seconds = time.perf_counter() - t0
        results.append(r)
    lam = ctx._lam
    return Report(sc, results, lam, ctx.frame)


# ---------------------------------------------------------------------------
# reloading and re-verification


def load_report(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


def report_body(data: dict) -> dict:
    """The report without timing fields, for determinism comparisons."""
    out = dict(data)
    out["checks"] = [{k: v for k, v in c.items() if k != "seconds"} for c in data["checks"]]
    return out


def verify_witness(w: dict, sc: Scenario, frame=None, params: Optional[dict] = None) -> bool:
    """Re-check a refuting witness with the circle-core predicates.

    Witnesses about membership in generated laminations (shared leaves or
    endpoints, looseness, density) regenerate those laminations from the
    scenario and test membership; linking witnesses are checked directly.
    """
    w = from_json(w, frame)
    kind = w["kind"]
    if kind == "linked_pair":
        c1, c2 = w["chords"]
        if linked(c1, c2) is not Linking.LINKED:
            return False
        a = sc.action()
        if a is None:
            return True
        for c, word, seed in zip(w["chords"], w["words"], w["seeds"]):
            g = a.evaluate(a.word(word)) if word else None
            img = seed if g is None else Chord(g.apply(seed.a), g.apply(seed.b))
            if img != c:
                return False
        return True
    if kind == "rotation_linking":
        alpha = scalar_from_json(w["alpha"])
        c = w["chord"]
        g = PiecewiseAffine.rotation(alpha).power(w["n"])
        return Chord(g.apply(c.a), g.apply(c.b)) == w["image"] and linked(c, w["image"]) is Linking.LINKED
    if kind in ("shared_leaf", "shared_endpoint", "non_cusp_shared_endpoint"):
        a = sc.action()
        i, j = w["pair"]
        lams = [geodesic_lift_lamination(a, a.word(w["words"][k]), w["radius"]) for k in (i, j)]
        if kind == "shared_leaf":
            return all(w["leaf"] in L for L in lams)
        ok = all(w["point"] in L.endpoints() for L in lams)
        if kind == "non_cusp_shared_endpoint":
            ctx = _Context(sc)
            ok = ok and not ctx.cusp_oracle()(w["point"])
        return ok
    if kind == "not_loose":
        lam = _Context(sc).lamination()
        p = w["point"]
        c1, c2 = w["leaves"]
        if not (c1 in lam and c2 in lam and c1.has_endpoint(p) and c2.has_endpoint(p)):
            return False
        faces = gaps(lam)
        return not any(c1 in f.chords and c2 in f.chords for f in faces)
    if kind == "too_many_fixed_classes":
        m = _Context(sc).pa().map
        classes = [frozenset(c) for c in w["classes"]]
        return len(set(classes)) > 2 and all({m.apply(p) for p in c} == c for c in classes)
    if kind == "empty_side":
        params = params or {}
        ds = denjoy(scalar_from_json(params.get("alpha", "golden")), 0, params.get("J", 3))
        tess = denjoy_tessellation(ds, w["level"] + 1, params.get("mode", "full"))
        coarse, fine = tess.levels[w["level"]], tess.levels[w["level"] + 1]
        c = w["leaf"]
        if c not in coarse:
            return False
        lo, hi = c.sort_key()
        return not any(lo < p.key() < hi for d in fine.leaves if d not in coarse for p in d.endpoints)
    raise ValueError(f"unknown witness kind {kind!r}")


def verify_report(data: dict) -> list:
    """``(check index, ok)`` for every refuted check of a reloaded report."""
    sc = parse_scenario(data["scenario"])
    frame = frame_from_json(data["frame"]) if "frame" in data else None
    out = []
    for i, c in enumerate(data["checks"]):
        if c["verdict"] == Verdict.REFUTED.value:
            out.append((i, verify_witness(c["witness"], sc, frame, c["params"])))
    return out
