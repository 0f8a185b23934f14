"""From ``L_A`` to the limit point.

The characteristic polynomial is formed in whatever mode the polygon is in
(exact for rational input), its real roots are found in closed form and
polished with Newton steps, and each simple real root gives a candidate
eigenvector by row reduction. The limit point is the candidate whose
projection lies in the convex hull of the polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import geom
from .collineation import Collineation, CubicPoly, apply, build_LA, charpoly
from .errors import (
    AmbiguousSelection,
    DegeneratePolygon,
    EigenvectorAtInfinity,
    GeometryError,
    NoCandidateInHull,
    NonSimpleEigenvalue,
    NotAnEigenvalue,
    NotConvex,
)
from .geom import HomoVec, Point2, Polygon
from .pentagram import limit_by_iteration

# pivots below PIVOT_RTOL * ||L||_inf are treated as zero
PIVOT_RTOL = 1e-8
NEWTON_STEPS = 2


@dataclass(frozen=True)
class CubicRoots:
    """Real roots in ascending order, repeated according to multiplicity."""

    real: tuple
    complex_pair: bool

    def __iter__(self):
        return iter(self.real)

    def __len__(self):
        return len(self.real)

    def simple(self) -> list:
        return [r for r in self.real if self.real.count(r) == 1]


def _newton(p: CubicPoly, x: float, steps: int = NEWTON_STEPS) -> float:
    exact = isinstance(p.c2, Fraction)
    for _ in range(steps):
        if exact:
            xf = Fraction(x)
            val, der = float(p(xf)), float(p.derivative(xf))
        else:
            val, der = p(x), p.derivative(x)
        if der == 0.0 or val == 0.0:
            break
        nxt = x - val / der
        if not math.isfinite(nxt):
            break
        x = nxt
    return x


def solve_cubic(p: CubicPoly) -> CubicRoots:
    """Real roots of a monic cubic.

    The root structure (three simple / one simple / repeated) is decided on
    the discriminant, exactly when the coefficients are Fractions. Roots come
    from the trigonometric or Cardano form of the depressed cubic and are then
    polished by Newton steps on the original polynomial; repeated roots are
    returned from their closed form unpolished.
    """
    c2, c1, c0 = p.coefficients
    shift = c2 / 3
    # depressed cubic t^3 + a t + b with λ = t - c2/3
    a = c1 - c2 * c2 / 3
    b = 2 * c2 ** 3 / 27 - c2 * c1 / 3 + c0
    disc = -(4 * a ** 3 + 27 * b ** 2)

    if isinstance(disc, Fraction):
        zero_disc = disc == 0
        zero_a = a == 0
    else:
        scale = max(abs(a) ** 3, b * b, 1.0)
        zero_disc = abs(disc) <= 1e-12 * scale
        zero_a = abs(a) <= 1e-12 * max(abs(c2) ** 2, abs(c1), 1.0)

    fs = float(shift)
    if zero_disc:
        if zero_a:
            r = -fs
            return CubicRoots((r, r, r), False)
        double = float(-3 * b / (2 * a)) - fs
        single = float(3 * b / a) - fs
        single = _newton(p, single)
        return CubicRoots(tuple(sorted((double, double, single))), False)

    fa, fb = float(a), float(b)
    if disc > 0:
        m = 2.0 * math.sqrt(-fa / 3.0)
        arg = 3.0 * fb / (fa * m)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ts = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
        roots = sorted(_newton(p, t - fs) for t in ts)
        return CubicRoots(tuple(roots), False)

    # one real root
    if fa == 0.0:
        t = -math.copysign(abs(fb) ** (1.0 / 3.0), fb)
    elif fa < 0:
        m = 2.0 * math.sqrt(-fa / 3.0)
        arg = -3.0 * abs(fb) / (fa * m)
        t = -math.copysign(1.0, fb) * m * math.cosh(math.acosh(arg) / 3.0)
    else:
        m = 2.0 * math.sqrt(fa / 3.0)
        t = -m * math.sinh(math.asinh(3.0 * fb / (fa * m)) / 3.0)
    return CubicRoots((_newton(p, t - fs),), True)


def _row_reduce(rows: list, tol: float) -> tuple:
    """Row echelon form by Gaussian elimination with partial pivoting.

    Returns the reduced rows and the list of pivot columns.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(3):
        best = max(range(r, 3), key=lambda i: abs(rows[i][col]), default=None)
        if best is None or abs(rows[best][col]) <= tol:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        for i in range(r + 1, 3):
            f = rows[i][col] / rows[r][col]
            for j in range(col, 3):
                rows[i][j] -= f * rows[r][j]
        pivots.append(col)
        r += 1
        if r == 3:
            break
    return rows, pivots


def eigenvector_for(L, lam: float, normalise: bool = True) -> HomoVec:
    """Kernel vector of ``L - λI``, scaled to third coordinate 1 when ``normalise``."""
    M = (L.matrix if isinstance(L, Collineation) else L).to_float()
    lam = float(lam)
    norm = M.norm_inf()
    tol = PIVOT_RTOL * max(norm, 1.0)
    rows = [[M[i, j] - (lam if i == j else 0.0) for j in range(3)] for i in range(3)]
    rows, pivots = _row_reduce(rows, tol)
    free = [c for c in range(3) if c not in pivots]
    if len(free) >= 2:
        raise NonSimpleEigenvalue(f"λ = {lam!r} has an eigenspace of dimension {len(free)}")
    if not free:
        raise NotAnEigenvalue(f"L - {lam!r} I has full rank")
    v = [0.0, 0.0, 0.0]
    v[free[0]] = 1.0
    for r in reversed(range(len(pivots))):
        col = pivots[r]
        s = sum(rows[r][j] * v[j] for j in range(col + 1, 3))
        v[col] = -s / rows[r][col]
    if not normalise:
        return HomoVec(*v)
    if abs(v[2]) <= PIVOT_RTOL * max(abs(t) for t in v):
        raise EigenvectorAtInfinity(f"eigenvector for λ = {lam!r} lies on the line at infinity")
    return HomoVec(v[0] / v[2], v[1] / v[2], 1.0)


def residual(L, lam: float, v: HomoVec) -> float:
    """``||L v - λ v||_inf`` in floats."""
    M = (L.matrix if isinstance(L, Collineation) else L).to_float()
    w = M @ v.to_float()
    return max(abs(a - lam * b) for a, b in zip(w, v.to_float()))


@dataclass(frozen=True)
class RationalForm:
    """``X = x_num(λ)/den(λ)``, ``Y = y_num(λ)/den(λ)`` from the first two eigen-equations.

    Each polynomial is a coefficient tuple, highest degree first.
    """

    x_num: tuple
    y_num: tuple
    den: tuple

    def evaluate(self, lam: float) -> tuple:
        ev = lambda c: sum(float(a) * lam ** (len(c) - 1 - i) for i, a in enumerate(c))  # noqa: E731
        d = ev(self.den)
        return ev(self.x_num) / d, ev(self.y_num) / d


def rational_form(L) -> RationalForm:
    """Cramer's rule on rows one and two of ``(L - λI)[X, Y, 1]ᵀ = 0``."""
    m = (L.matrix if isinstance(L, Collineation) else L).rows
    (p11, p12, p13), (p21, p22, p23) = m[0], m[1]
    # (p11 - λ)X + p12 Y = -p13 ;  p21 X + (p22 - λ)Y = -p23
    den = (geom.convert(1, geom.mode_of(p11)), -(p11 + p22), p11 * p22 - p12 * p21)
    x_num = (p13, -p13 * p22 + p12 * p23)
    y_num = (p23, -p23 * p11 + p13 * p21)
    return RationalForm(x_num, y_num, den)


@dataclass
class Candidate:
    eigenvalue: float
    point: Optional[Point2]
    in_hull: bool
    residual: Optional[float]
    note: str = ""


@dataclass
class LimitResult:
    limit: Point2
    eigenvalue: float
    eigenvalues: list
    charpoly: CubicPoly
    collineation: Collineation
    residual: float
    candidates: list = field(default_factory=list)
    complex_pair: bool = False
    largest_root: bool = False
    iteration_limit: Optional[Point2] = None
    iteration_deviation: Optional[float] = None
    rational_form: Optional[RationalForm] = None


def limit_point(
    A: Polygon,
    cross_check: bool = False,
    tol: float = 1e-9,
    max_iterations: int | None = None,
) -> LimitResult:
    """Limit of the pentagram orbit of a convex polygon, via the eigenvectors of ``L_A``."""
    if A.n < 5:
        raise DegeneratePolygon(f"limit_point needs n >= 5, got {A.n}")
    if not geom.is_convex(A):
        raise NotConvex("limit_point requires a convex polygon")
    L = build_LA(A)
    p = charpoly(L)
    roots = solve_cubic(p)
    hull_poly = A.to_float()

    candidates = []
    for lam in roots.simple():
        try:
            v = eigenvector_for(L, lam)
        except GeometryError as exc:
            candidates.append(Candidate(lam, None, False, None, type(exc).__name__))
            continue
        pt = geom.project(v)
        candidates.append(Candidate(lam, pt, geom.in_hull(hull_poly, pt), residual(L, lam, v)))

    iter_pt = None
    if cross_check:
        kwargs = {} if max_iterations is None else {"max_iterations": max_iterations}
        iter_pt = limit_by_iteration(A, tol, **kwargs)

    inside = [c for c in candidates if c.in_hull]
    if not inside:
        raise NoCandidateInHull(
            "no eigenvector of L_A projects into the hull; roots " + ", ".join(f"{r:.6g}" for r in roots)
        )
    if len(inside) > 1:
        if iter_pt is None:
            raise AmbiguousSelection(
                f"{len(inside)} eigenvectors project into the hull; enable cross_check to resolve"
            )
        inside.sort(key=lambda c: math.dist((c.point.x, c.point.y), (iter_pt.x, iter_pt.y)))
    chosen = inside[0]

    result = LimitResult(
        limit=chosen.point,
        eigenvalue=chosen.eigenvalue,
        eigenvalues=list(roots.real),
        charpoly=p,
        collineation=L,
        residual=chosen.residual,
        candidates=candidates,
        complex_pair=roots.complex_pair,
        largest_root=chosen.eigenvalue == max(roots.real),
    )
    if iter_pt is not None:
        result.iteration_limit = iter_pt
        result.iteration_deviation = max(abs(chosen.point.x - iter_pt.x), abs(chosen.point.y - iter_pt.y))
    if A.n <= 7:
        result.rational_form = rational_form(L)
    return result


__all__ = [
    "Candidate",
    "CubicRoots",
    "LimitResult",
    "RationalForm",
    "eigenvector_for",
    "limit_point",
    "rational_form",
    "residual",
    "solve_cubic",
]
