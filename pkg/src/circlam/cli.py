"""Command line entry point: ``circlam <subcommand> ...``.

Exit codes: 0 when every check is proven, 1 when any check is refuted,
2 when only unknown outcomes remain or the input is invalid.
"""

from __future__ import annotations

import argparse
import json
import sys

from .render import render_svg
from .scenario import (
    FormatError,
    Report,
    parse_scenario,
    run_scenario,
)
from .serialize import chord_from_json, frame_from_json, from_json, parse_scalar_text

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN = 0, 1, 2


def _summary(report: Report, out) -> None:
    name = report.scenario.name or "scenario"
    print(f"{name}: {len(report.results)} check(s)", file=out)
    for r in report.results:
        counts = ", ".join(f"{k}={v}" for k, v in r.counts.items())
        line = f"  {r.check:<16} {r.certificate.verdict.value:<8}"
        if counts:
            line += f" {counts}"
        if r.certificate.is_refuted:
            w = r.certificate.witness
            line += f"  witness: {w.get('kind')}"
        print(line, file=out)
    print(f"exit {report.exit_code}", file=out)


def _emit(report: Report, args) -> int:
    _summary(report, sys.stdout)
    if getattr(args, "report", None):
        with open(args.report, "w") as f:
            f.write(report.dumps())
    if getattr(args, "svg", None):
        _write_svg(report.to_json(), args.svg, geodesic=True)
    return report.exit_code


def _apply_overrides(data: dict, args) -> dict:
    if getattr(args, "depth", None) is not None:
        data["depth"] = args.depth
        for ch in data.get("checks", []):
            if "depth" in ch:
                ch["depth"] = args.depth
    if getattr(args, "epsilon", None) is not None:
        for ch in data.get("checks", []):
            if "epsilon" in ch:
                ch["epsilon"] = args.epsilon
    return data


def _load_json(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError("$", f"invalid JSON: {e}") from None


def cmd_run(args) -> int:
    data = _apply_overrides(_load_json(args.scenario), args)
    return _emit(run_scenario(parse_scenario(data)), args)


def cmd_farey(args) -> int:
    lam = {"source": "farey", "qmax": args.qmax}
    if args.window:
        lam["window"] = args.window
    data = {"version": 1, "name": f"farey({args.qmax})", "model": "projective",
            "lamination": lam, "checks": [{"check": "unlinked"}, {"check": "gap_audit"}]}
    return _emit(run_scenario(parse_scenario(data)), args)


def cmd_classify(args) -> int:
    entries = args.matrix.split(",")
    if len(entries) != 4:
        raise FormatError("--matrix", "expected four comma-separated entries a,b,c,d")
    m = [[entries[0], entries[1]], [entries[2], entries[3]]]
    data = {"version": 1, "name": "classify", "model": "projective",
            "radicand": _radicand(entries),
            "checks": [{"check": "classify", "matrix": m, "power_bound": args.power_bound}]}
    report = run_scenario(parse_scenario(data))
    r = report.results[0]
    print(json.dumps(r.certificate.detail["class"], sort_keys=True))
    if args.report:
        with open(args.report, "w") as f:
            f.write(report.dumps())
    return report.exit_code


def _radicand(texts) -> int:
    rads = {parse_scalar_text(t).radicand for t in texts} - {0}
    if len(rads) > 1:
        raise FormatError("--matrix", "entries from different quadratic fields")
    return rads.pop() if rads else 0


def cmd_rainbow(args) -> int:
    data = _load_json(args.scenario)
    p = parse_scalar_text(args.point) if args.point != "inf" else None
    if p is not None and not p.is_rational:
        data["radicand"] = p.radicand
    check = {"check": "rainbow", "point": args.point}
    if args.depth is not None:
        check["depth"] = args.depth
    data["checks"] = [check]
    return _emit(run_scenario(parse_scenario(data)), args)


def cmd_denjoy(args) -> int:
    alpha = parse_scalar_text(args.alpha)
    data = {"version": 1, "name": f"denjoy(J={args.J})", "model": "angle",
            "radicand": alpha.radicand,
            "checks": [{"check": "denjoy", "alpha": args.alpha, "J": args.J,
                        "depth": args.depth, "mode": args.mode}]}
    return _emit(run_scenario(parse_scenario(data)), args)


def cmd_moore(args) -> int:
    data = _load_json(args.scenario)
    data["checks"] = [{"check": "looseness"}, {"check": "moore"}]
    return _emit(run_scenario(parse_scenario(data)), args)


def _write_svg(data: dict, out: str, geodesic: bool) -> int:
    frame = frame_from_json(data["frame"]) if "frame" in data else None
    lam = data.get("lamination")
    if lam is None or "leaves" not in lam:
        raise FormatError("$.lamination", "report carries no leaf list to draw")
    leaves = [chord_from_json(c, frame) for c in lam["leaves"]]
    chain = []
    for c in data.get("checks", []):
        if c.get("check") == "rainbow" and c.get("payload", {}).get("chain"):
            chain = from_json(c["payload"]["chain"], frame)
            break
    title = data.get("scenario", {}).get("name", "")
    svg = render_svg(leaves, chain, geodesic=geodesic, title=title)
    with open(out, "w") as f:
        f.write(svg)
    return len(leaves)


def cmd_render(args) -> int:
    data = _load_json(args.input)
    if "exit_code" not in data:
        # a scenario: run it first to obtain the lamination
        data = run_scenario(parse_scenario(data)).to_json()
    n = _write_svg(data, args.out, geodesic=not args.straight)
    print(f"wrote {args.out} ({n} leaves)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circlam", description="Exact laminations of circle actions.")
    sub = p.add_subparsers(dest="command", required=True)

    def outputs(sp, svg=True):
        sp.add_argument("--report", metavar="OUT.json", help="write the JSON report here")
        if svg:
            sp.add_argument("--svg", metavar="OUT.svg", help="draw the lamination here")

    sp = sub.add_parser("run", help="run a scenario file")
    sp.add_argument("scenario")
    sp.add_argument("--depth", type=int, help="override the scenario depth")
    sp.add_argument("--epsilon", help="override every epsilon parameter (exact, e.g. 1/20)")
    outputs(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("farey", help="Farey lamination and its face audit")
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--window", nargs=2, metavar=("A", "B"))
    outputs(sp)
    sp.set_defaults(func=cmd_farey)

    sp = sub.add_parser("classify", help="classify a Moebius map")
    sp.add_argument("--matrix", required=True, help="a,b,c,d (exact entries)")
    sp.add_argument("--power-bound", type=int, default=12)
    outputs(sp, svg=False)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("rainbow", help="endpoint certificate or rainbow chain at a point")
    sp.add_argument("--point", required=True)
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--depth", type=int)
    outputs(sp)
    sp.set_defaults(func=cmd_rainbow)

    sp = sub.add_parser("denjoy", help="Denjoy tessellation and its density audit")
    sp.add_argument("--alpha", default="golden")
    sp.add_argument("--J", type=int, default=3)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--mode", choices=["full", "orbit"], default="full")
    outputs(sp)
    sp.set_defaults(func=cmd_denjoy)

    sp = sub.add_parser("moore", help="looseness and induced fixed classes of a pa_like pair")
    sp.add_argument("--scenario", required=True)
    outputs(sp)
    sp.set_defaults(func=cmd_moore)

    sp = sub.add_parser("render", help="draw a scenario or report as SVG")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--straight", action="store_true", help="straight chords instead of geodesics")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
