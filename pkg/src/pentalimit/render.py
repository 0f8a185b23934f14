"""Static SVG drawings of pentagram orbits."""

from __future__ import annotations

from typing import Optional, Sequence

from .geom import Point2, Polygon

MARGIN = 0.05
SIZE = 600


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(polygons: Sequence[Polygon], limit: Optional[Point2] = None, title: str = "") -> str:
    """Nested outlines, outermost first; y is flipped so the plane reads upright."""
    pts = [(float(p.x), float(p.y)) for A in polygons for p in A]
    if limit is not None:
        pts.append((float(limit.x), float(limit.y)))
    xmin, xmax = min(p[0] for p in pts), max(p[0] for p in pts)
    ymin, ymax = min(p[1] for p in pts), max(p[1] for p in pts)
    span = max(xmax - xmin, ymax - ymin) or 1.0
    pad = MARGIN * span
    vx, vy = xmin - pad, -ymax - pad
    vw, vh = (xmax - xmin) + 2 * pad, (ymax - ymin) + 2 * pad
    stroke = _fmt(span / 400)
    width = SIZE
    height = int(round(SIZE * vh / vw)) if vw else SIZE

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
    ]
    if title:
        safe = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        lines.append(f"  <title>{safe}</title>")
    for k, A in enumerate(polygons):
        coords = " ".join(f"{_fmt(float(p.x))},{_fmt(-float(p.y))}" for p in A)
        lines.append(
            f'  <polygon id="T{k}" points="{coords}" fill="none" stroke="black" '
            f'stroke-width="{stroke}"/>'
        )
    if limit is not None:
        lines.append(
            f'  <circle id="limit" cx="{_fmt(float(limit.x))}" cy="{_fmt(-float(limit.y))}" '
            f'r="{_fmt(span / 150)}" fill="red"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
