"""Axis-aligned 2m-gons: detection, closed-form ``L_A``, and the point of collapse.

Canonical labelling (0-based): vertex ``2i`` is ``(x_{2i+1}, y_{2i})`` and
vertex ``2i+1`` is ``(x_{2i+1}, y_{2i+2})``, with ``y_0 = y_{2m}``. So edges
leaving even vertices are vertical and edges leaving odd vertices are
horizontal. Inputs whose first edge is horizontal are matched after rotating
the labels by one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import geom
from .collineation import Collineation, apply
from .errors import GeometryError, NotAxisAligned
from .geom import EXACT, Mat3, Point2, Polygon, convert, det3
from .pentagram import pentagram_homogeneous

VERTICAL_FIRST = "vertical-first"
HORIZONTAL_FIRST = "horizontal-first"
DEFAULT_MAX_M = 6


@dataclass(frozen=True)
class AxisAlignedShape:
    m: int
    xs: tuple  # x_1, x_3, ..., x_{2m-1}
    ys: tuple  # y_2, y_4, ..., y_{2m}
    phase: str
    offset: int  # canonical vertex k is input vertex (k + offset) % 2m

    def __post_init__(self):
        if self.m < 2 or len(self.xs) != self.m or len(self.ys) != self.m:
            raise ValueError("shape needs m >= 2 odd x's and even y's")
        for i in range(self.m):
            if geom.is_zero(self.xs[i] - self.xs[(i + 1) % self.m]):
                raise NotAxisAligned(f"consecutive odd x-coordinates {i}, {(i + 1) % self.m} coincide")
            if geom.is_zero(self.ys[i] - self.ys[(i + 1) % self.m]):
                raise NotAxisAligned(f"consecutive even y-coordinates {i}, {(i + 1) % self.m} coincide")

    @property
    def mode(self) -> str:
        return geom.mode_of(self.xs[0])

    def canonical(self) -> Polygon:
        pts = []
        for i in range(self.m):
            pts.append(Point2(self.xs[i], self.ys[i - 1]))
            pts.append(Point2(self.xs[i], self.ys[i]))
        return Polygon(tuple(pts))

    def polygon(self) -> Polygon:
        """The input polygon in its original labelling."""
        return self.canonical().rotated(-self.offset)


def detect(A: Polygon) -> Optional[AxisAlignedShape]:
    """Match ``A`` against the axis-aligned pattern, or return None."""
    n = A.n
    if n % 2 or n < 4:
        return None

    def vertical(k):
        return geom.is_zero(A[k].x - A[k + 1].x)

    def horizontal(k):
        return geom.is_zero(A[k].y - A[k + 1].y)

    for offset, phase in ((0, VERTICAL_FIRST), (1, HORIZONTAL_FIRST)):
        if all(vertical(offset + 2 * i) and horizontal(offset + 2 * i + 1) for i in range(n // 2)):
            xs = tuple(A[offset + 2 * i].x for i in range(n // 2))
            ys = tuple(A[offset + 2 * i + 1].y for i in range(n // 2))
            try:
                return AxisAlignedShape(n // 2, xs, ys, phase, offset)
            except NotAxisAligned:
                return None
    return None


def require(A: Polygon) -> AxisAlignedShape:
    shape = detect(A)
    if shape is None:
        raise NotAxisAligned("polygon is not an axis-aligned 2m-gon")
    return shape


def la_closed_form(s: AxisAlignedShape) -> Collineation:
    m = convert(s.m, s.mode)
    zero = convert(0, s.mode)
    sx, sy = sum(s.xs, zero), sum(s.ys, zero)
    mat = Mat3(((m, zero, sx), (zero, m, sy), (zero, zero, 2 * m)))
    return Collineation(mat, 2 * s.m)


def collapse_point(s: AxisAlignedShape) -> Point2:
    """Vertex centroid, written through the odd x's and even y's."""
    m = convert(s.m, s.mode)
    zero = convert(0, s.mode)
    return Point2(sum(s.xs, zero) / m, sum(s.ys, zero) / m)


def midpoint_map(s: AxisAlignedShape, p: Point2) -> Point2:
    c = collapse_point(s)
    half = convert(Fraction(1, 2), s.mode)
    return Point2((p.x + c.x) * half, (p.y + c.y) * half)


def midpoint_map_projective(s: AxisAlignedShape, p: Point2) -> Point2:
    """The same map, evaluated by applying the closed-form matrix to the lift."""
    return geom.project(apply(la_closed_form(s), geom.lift(p)))


@dataclass
class IncidenceReport:
    m: int
    steps: int
    odd_collinear: bool
    even_collinear: bool
    max_deviation: float
    meet: Optional[Point2]
    expected: Point2
    meet_matches: bool
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.odd_collinear and self.even_collinear and self.meet_matches


def _line_through(lifts: list) -> tuple:
    """Line through the first two points plus the largest residual determinant of the rest."""
    line = geom.join(lifts[0], lifts[1])
    worst = 0.0
    collinear = True
    for w in lifts[2:]:
        d = det3(lifts[0], lifts[1], w)
        worst = max(worst, abs(float(d)))
        if not geom.is_zero(d):
            collinear = False
    return line, collinear, worst


def verify_incidence(s: AxisAlignedShape, max_m: int = DEFAULT_MAX_M) -> IncidenceReport:
    """Iterate ``m - 2`` times; odd and even vertices must each be collinear, meeting at the centroid."""
    if s.m > max_m:
        raise ValueError(f"m = {s.m} exceeds the cap {max_m}")
    expected = collapse_point(s)
    vs = s.canonical().lifts()
    steps = s.m - 2
    done = 0
    try:
        # intermediate vertices may legitimately sit at infinity, so stay projective
        for done in range(1, steps + 1):
            vs = pentagram_homogeneous(vs)
        done = 0
        odd_line, odd_ok, odd_dev = _line_through(list(vs[0::2]))
        even_line, even_ok, even_dev = _line_through(list(vs[1::2]))
        q = geom.project(geom.meet(odd_line, even_line))
    except GeometryError as exc:
        step = f" at step {done}" if done else ""
        return IncidenceReport(s.m, steps, False, False, float("inf"), None, expected, False,
                               f"{type(exc).__name__}{step}: {exc}")
    matches = geom.is_zero(q.x - expected.x) and geom.is_zero(q.y - expected.y)
    return IncidenceReport(s.m, steps, odd_ok, even_ok, max(odd_dev, even_dev), q, expected, matches)


def random_shape(rng: random.Random, m: int, bound: int = 1000, mode: str = EXACT) -> AxisAlignedShape:
    """Random integer axis-aligned 2m-gon (generally self-intersecting)."""

    def cycle():
        vals = [rng.randint(-bound, bound)]
        while len(vals) < m:
            v = rng.randint(-bound, bound)
            if v != vals[-1] and (len(vals) < m - 1 or v != vals[0]):
                vals.append(v)
        return tuple(convert(v, mode) for v in vals)

    return AxisAlignedShape(m, cycle(), cycle(), VERTICAL_FIRST, 0)


__all__ = [
    "AxisAlignedShape",
    "IncidenceReport",
    "collapse_point",
    "detect",
    "la_closed_form",
    "midpoint_map",
    "midpoint_map_projective",
    "random_shape",
    "require",
    "verify_incidence",
]
