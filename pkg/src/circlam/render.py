"""SVG drawings of laminations in the Poincaré disk.

Floating point is used here and nowhere else; pictures are illustrations,
never evidence.  Placement on the boundary circle:

* projective points go through the Cayley transform ``x -> (x - i)/(x + i)``,
  i.e. the boundary angle ``2*atan(x) - pi`` (so ``inf`` sits at angle 0 and
  ``0`` at angle ``pi``);
* angle points sit at ``2*pi*x``;
* blown-up points use their chart position plus a small offset per unit of
  interval coordinate;
* tree points have no metric, so they are spaced evenly in cyclic order.

Leaves are geodesics (arcs orthogonal to the boundary) or straight chords.
Output is deterministic: coordinates are printed with fixed precision.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

from .circle import AnglePoint, BlownUpPoint, Chord, CirclePoint, ProjectivePoint, TreePoint, sort_cyclic

SIZE = 600
RADIUS = 280.0


def boundary_angle(p: CirclePoint) -> float:
    if isinstance(p, ProjectivePoint):
        return 0.0 if p.is_infinite else 2 * math.atan(float(p.value)) - math.pi
    if isinstance(p, AnglePoint):
        return 2 * math.pi * float(p.value)
    if isinstance(p, BlownUpPoint):
        x = float(p.position())
        if p.index is not None:
            x += 0.02 * float(p.t) / (1 + abs(p.index))
        return 2 * math.pi * x
    raise TypeError(f"no metric placement for {type(p).__name__}")


def _angles(points: Iterable[CirclePoint]) -> dict:
    pts = list(set(points))
    if pts and isinstance(pts[0], TreePoint):
        order = sort_cyclic(pts)
        return {p: 2 * math.pi * i / len(order) for i, p in enumerate(order)}
    return {p: boundary_angle(p) for p in pts}


def _xy(theta: float) -> tuple:
    # SVG's y axis points down; flip so angles run counterclockwise on screen
    return SIZE / 2 + RADIUS * math.cos(theta), SIZE / 2 - RADIUS * math.sin(theta)


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def chord_path(t1: float, t2: float, geodesic: bool = True) -> str:
    (x1, y1), (x2, y2) = _xy(t1), _xy(t2)
    delta = abs((t2 - t1 + math.pi) % (2 * math.pi) - math.pi)
    if not geodesic or abs(delta - math.pi) < 1e-9 or delta < 1e-12:
        return f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"
    # orthogonal circle: radius R*tan(delta/2), centered on the bisecting ray
    r = RADIUS * math.tan(delta / 2)
    mid = math.atan2(math.sin(t1) + math.sin(t2), math.cos(t1) + math.cos(t2))
    cx, cy = _xy(mid)
    cx = SIZE / 2 + (cx - SIZE / 2) / math.cos(delta / 2)
    cy = SIZE / 2 + (cy - SIZE / 2) / math.cos(delta / 2)
    cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if cross > 0 else 0
    return f"M {_f(x1)} {_f(y1)} A {_f(r)} {_f(r)} 0 0 {sweep} {_f(x2)} {_f(y2)}"


def render_svg(leaves: Sequence[Chord], highlight: Sequence[Chord] = (), geodesic: bool = True,
               title: str = "", labels: Optional[dict] = None) -> str:
    """One ``<path class="leaf">`` per leaf, one ``<path class="chain">`` per highlighted chord."""
    angles = _angles([p for c in list(leaves) + list(highlight) for p in c.endpoints])
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
             f'viewBox="0 0 {SIZE} {SIZE}">']
    if title:
        lines.append(f"<title>{_escape(title)}</title>")
    lines.append(f'<circle cx="{SIZE // 2}" cy="{SIZE // 2}" r="{_f(RADIUS)}" fill="none" stroke="black" '
                 f'stroke-width="1.5"/>')
    lines.append('<g fill="none" stroke="#1f4e99" stroke-width="0.6">')
    for c in leaves:
        lines.append(f'<path class="leaf" d="{chord_path(angles[c.a], angles[c.b], geodesic)}"/>')
    lines.append("</g>")
    if highlight:
        lines.append('<g fill="none" stroke="#c0392b" stroke-width="1.8">')
        for c in highlight:
            lines.append(f'<path class="chain" d="{chord_path(angles[c.a], angles[c.b], geodesic)}"/>')
        lines.append("</g>")
    for p, text in sorted((labels or {}).items(), key=lambda kv: angles[kv[0]]):
        x, y = _xy(angles[p])
        x = SIZE / 2 + (x - SIZE / 2) * 1.05
        y = SIZE / 2 + (y - SIZE / 2) * 1.05
        lines.append(f'<text x="{_f(x)}" y="{_f(y)}" font-size="11" text-anchor="middle">{_escape(text)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def count_leaves(svg: str) -> int:
    return svg.count('class="leaf"')


def count_chain(svg: str) -> int:
    return svg.count('class="chain"')
