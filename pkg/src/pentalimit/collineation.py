"""The conserved linear map ``L_A`` of a polygon and the checks built on it.

For lifts ``u_j`` of the vertices,

    L_A(v) = n v - sum_j |u_{j-1}, v, u_{j+1}| / |u_{j-1}, u_j, u_{j+1}| u_j

The map does not depend on how the vertices are lifted, so every function
here accepts either a :class:`~pentalimit.geom.Polygon` or an explicit
sequence of homogeneous vectors (which may be line coordinates, as for the
dual sequences produced by ``alpha1``/``alpha2``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import geom
from .errors import DegenerateTriple, ModeMismatch, SingularTransform
from .geom import EXACT, POINT, HomoVec, Mat3, Point2, Polygon, Scalar, convert, det3
from .pentagram import alpha1, alpha2, iterate, pentagram

PolygonLike = Union[Polygon, Sequence[HomoVec]]


@dataclass(frozen=True)
class Collineation:
    matrix: Mat3
    n: int

    @property
    def mode(self) -> str:
        return self.matrix.mode

    def __getitem__(self, ij) -> Scalar:
        return self.matrix[ij]


@dataclass(frozen=True)
class CubicPoly:
    """Monic ``λ³ + c2 λ² + c1 λ + c0``."""

    c2: Scalar
    c1: Scalar
    c0: Scalar

    @property
    def coefficients(self) -> tuple:
        return (self.c2, self.c1, self.c0)

    def __call__(self, x):
        return ((x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x):
        return (3 * x + 2 * self.c2) * x + self.c1

    def __str__(self) -> str:
        terms = ["λ³"]
        for coeff, power in ((self.c2, "λ²"), (self.c1, "λ"), (self.c0, "")):
            if coeff == 0:
                continue
            mag = abs(coeff)
            body = f"{mag}{power}" if (mag != 1 or not power) else power
            terms.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(terms)


def _vectors(A: PolygonLike) -> tuple:
    vs = A.lifts() if isinstance(A, Polygon) else tuple(A)
    if len(vs) < 3:
        raise ValueError("need at least 3 vertices")
    return vs


def _denominators(vs: Sequence[HomoVec]) -> list:
    n = len(vs)
    dens = []
    for j in range(n):
        d = det3(vs[j - 1], vs[j], vs[(j + 1) % n])
        if geom.is_zero(d):
            raise DegenerateTriple(j, n)
        dens.append(d)
    return dens


def build_LA(A: PolygonLike) -> Collineation:
    """Matrix of ``L_A``, assembled entry by entry.

    Entry (i, j) is ``n δ_ij - Σ_k C_jk · a_ik / D_k`` where ``a_ik`` is the
    i-th coordinate of the k-th lift, ``D_k`` the determinant of the
    consecutive triple around k, and ``C_jk`` the 2x2 minor of rows j-1, j+1
    (mod 3) taken from the neighbouring lifts ``u_{k-1}``, ``u_{k+1}``.
    """
    vs = _vectors(A)
    n = len(vs)
    mode = geom.common_mode(x for v in vs for x in v)
    dens = _denominators(vs)
    zero, nn = convert(0, mode), convert(n, mode)
    rows = [[nn if i == j else zero for j in range(3)] for i in range(3)]
    for k in range(n):
        prev, nxt = vs[k - 1], vs[(k + 1) % n]
        for j in range(3):
            jm, jp = (j - 1) % 3, (j + 1) % 3
            minor = prev[jm] * nxt[jp] - nxt[jm] * prev[jp]
            if minor == 0:
                continue
            ratio = minor / dens[k]
            for i in range(3):
                rows[i][j] -= ratio * vs[k][i]
    return Collineation(Mat3(tuple(tuple(r) for r in rows)), n)


def apply(L: Collineation, v: HomoVec) -> HomoVec:
    return L.matrix @ v


def apply_direct(A: PolygonLike, v: HomoVec) -> HomoVec:
    """Evaluate ``L_A(v)`` straight from the defining sum, without a matrix."""
    vs = _vectors(A)
    n = len(vs)
    dens = _denominators(vs)
    out = v.scaled(n)
    for j in range(n):
        coeff = det3(vs[j - 1], v.retag(vs[j].tag), vs[(j + 1) % n]) / dens[j]
        out = out - vs[j].retag(v.tag).scaled(coeff)
    return out


def apply_cramer(A: PolygonLike, v: HomoVec) -> HomoVec:
    """Evaluate ``L_A(v)`` through the Cramer-rule form, which has no ``n v`` term."""
    vs = _vectors(A)
    n = len(vs)
    dens = _denominators(vs)
    w = v.retag(vs[0].tag)
    out = HomoVec.zero(v.mode, v.tag)
    for j in range(n):
        um, u, up = vs[j - 1], vs[j], vs[(j + 1) % n]
        out = out + um.retag(v.tag).scaled(det3(w, u, up) / dens[j])
        out = out + up.retag(v.tag).scaled(det3(um, u, w) / dens[j])
    return out


def hull_coefficients(A: PolygonLike, v: HomoVec) -> list:
    """Coefficients ``c_j`` with ``L_A(v) = Σ c_j u_j`` (Cramer form regrouped per vertex).

    For a convex polygon lifted to ``z = 1`` and ``v`` the lift of a point in
    its hull, every coefficient is strictly positive.
    """
    vs = _vectors(A)
    n = len(vs)
    w = v.retag(vs[0].tag)
    coeffs = []
    for j in range(n):
        a, b, c = vs[j - 2], vs[j - 1], vs[j]
        d, e = vs[(j + 1) % n], vs[(j + 2) % n]
        den1, den2 = det3(a, b, c), det3(c, d, e)
        if geom.is_zero(den1):
            raise DegenerateTriple((j - 1) % n, n)
        if geom.is_zero(den2):
            raise DegenerateTriple((j + 1) % n, n)
        coeffs.append(det3(a, b, w) / den1 + det3(w, d, e) / den2)
    return coeffs


def trace(L: Collineation) -> Scalar:
    return L.matrix.trace()


def charpoly(L) -> CubicPoly:
    """``det(λI - M)`` as a monic cubic."""
    m = L.matrix if isinstance(L, Collineation) else L
    r = m.rows
    minors = (
        r[0][0] * r[1][1] - r[0][1] * r[1][0]
        + r[0][0] * r[2][2] - r[0][2] * r[2][0]
        + r[1][1] * r[2][2] - r[1][2] * r[2][1]
    )
    return CubicPoly(-m.trace(), minors, -m.det())


def conjugate(L: Collineation, psi: Mat3) -> Collineation:
    if psi.mode != L.mode:
        raise ModeMismatch("transform and matrix modes differ")
    inv = psi.inverse()  # raises SingularTransform
    return Collineation(psi @ L.matrix @ inv, L.n)


def transformed_lifts(psi: Mat3, A: PolygonLike) -> tuple:
    """Lifts of ``psi(A)``; projecting is unnecessary since ``L`` ignores lift scale."""
    return tuple(psi @ u for u in _vectors(A))


def random_unimodular(rng: random.Random, steps: int = 6, bound: int = 2, mode: str = EXACT) -> Mat3:
    """Random integer matrix with determinant ±1, built from shears and swaps."""
    m = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        if rng.random() < 0.2:
            m[i], m[j] = m[j], m[i]
        else:
            k = rng.choice([t for t in range(-bound, bound + 1) if t != 0])
            m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    return Mat3(tuple(tuple(convert(x, mode) for x in r) for r in m))


# -- verification reports ---------------------------------------------------


@dataclass
class ConservationReport:
    equal: bool
    deviation: float
    before: Collineation
    after: Collineation

    @property
    def passed(self) -> bool:
        return self.equal


def verify_conservation(A: Polygon, tol: float | None = None) -> ConservationReport:
    """Compare ``L_A`` with ``L_{T(A)}``: exact equality, or max deviation within ``tol`` for floats."""
    before = build_LA(A)
    after = build_LA(pentagram(A))
    deviation = before.matrix.max_abs_diff(after.matrix)
    if A.mode == EXACT:
        equal = before.matrix == after.matrix
    else:
        equal = deviation <= (geom.get_epsilon() if tol is None else tol)
    return ConservationReport(equal, deviation, before, after)


@dataclass
class SmallNReport:
    n: int
    iterate_power: int
    matched: bool
    shift: int | None
    reversed: bool
    permutation: list | None
    images: list = field(repr=False)
    targets: list = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.matched


def _same_point(p: Point2, q: Point2) -> bool:
    return geom.is_zero(p.x - q.x) and geom.is_zero(p.y - q.y)


def verify_small_n(A: Polygon) -> SmallNReport:
    """Check that ``L_A - 3I`` carries a pentagon onto T(A) and a hexagon onto T²(A).

    Points are compared as sets; the report records the index correspondence
    ``images[i] == targets[permutation[i]]`` and, when it is a cyclic shift
    (possibly reversed), that shift.
    """
    if A.n not in (5, 6):
        raise ValueError("verify_small_n applies to pentagons and hexagons only")
    power = A.n - 4
    L = build_LA(A)
    three = Mat3.identity(A.mode).scaled(convert(3, A.mode))
    M = L.matrix - three
    images = [geom.project(M @ u) for u in A.lifts()]
    targets = list(iterate(A, power).vertices)
    n = A.n

    perm = []
    for p in images:
        hits = [k for k, q in enumerate(targets) if _same_point(p, q)]
        if len(hits) != 1:
            break
        perm.append(hits[0])
    matched = len(perm) == n and len(set(perm)) == n
    shift, rev = None, False
    if matched:
        if all((perm[i] - perm[0]) % n == i for i in range(n)):
            shift = perm[0]
        elif all((perm[0] - perm[i]) % n == i for i in range(n)):
            shift, rev = perm[0], True
    return SmallNReport(n, power, matched, shift, rev, perm if matched else None, images, targets)


@dataclass
class DualityReport:
    alpha1_transpose: bool
    alpha2_transpose: bool
    alpha1_deviation: float
    alpha2_deviation: float

    @property
    def passed(self) -> bool:
        return self.alpha1_transpose and self.alpha2_transpose


def verify_duality(A: PolygonLike) -> DualityReport:
    """``L`` of either dual sequence equals the transpose of ``L_A``."""
    LT = build_LA(A).matrix.transpose()
    out = []
    for alpha in (alpha1, alpha2):
        M = build_LA(alpha(A)).matrix
        dev = M.max_abs_diff(LT)
        ok = M == LT if M.mode == EXACT else dev <= geom.get_epsilon()
        out.append((ok, dev))
    (ok1, dev1), (ok2, dev2) = out
    return DualityReport(ok1, ok2, dev1, dev2)


@dataclass
class HullReport:
    points_checked: int
    min_coefficient: Scalar
    all_positive: bool
    all_inside: bool
    cramer_matches: bool

    @property
    def passed(self) -> bool:
        return self.all_positive and self.all_inside and self.cramer_matches


def random_hull_point(rng: random.Random, A: Polygon) -> Point2:
    """Random convex combination of the vertices (exact weights in exact mode)."""
    weights = [rng.randint(0, 1000) for _ in range(A.n)]
    if not any(weights):
        weights[0] = 1
    total = sum(weights)
    if A.mode == EXACT:
        w = [Fraction(k, total) for k in weights]
    else:
        w = [k / total for k in weights]
    return Point2(sum(c * p.x for c, p in zip(w, A)), sum(c * p.y for c, p in zip(w, A)))


def verify_hull(A: Polygon, points: Sequence[Point2]) -> HullReport:
    """For each point Q of conv(A): positive coefficients and L_A(Q) in conv(A)."""
    L = build_LA(A)
    lifts = A.lifts()
    min_coeff = None
    positive = inside = cramer = True
    for q in points:
        v = geom.lift(q)
        coeffs = hull_coefficients(A, v)
        lo = min(coeffs)
        min_coeff = lo if min_coeff is None else min(min_coeff, lo)
        if geom.sign(lo) <= 0:
            positive = False
        image = apply(L, v)
        combo = HomoVec.zero(A.mode)
        for c, u in zip(coeffs, lifts):
            combo = combo + u.scaled(c)
        if not all(geom.is_zero(a - b) for a, b in zip(image, combo)):
            cramer = False
        if not geom.in_hull(A, geom.project(image)):
            inside = False
    return HullReport(len(points), min_coeff, positive, inside, cramer)


__all__ = [
    "Collineation",
    "ConservationReport",
    "CubicPoly",
    "DualityReport",
    "HullReport",
    "SingularTransform",
    "SmallNReport",
    "apply",
    "apply_cramer",
    "apply_direct",
    "build_LA",
    "charpoly",
    "conjugate",
    "hull_coefficients",
    "random_hull_point",
    "random_unimodular",
    "trace",
    "transformed_lifts",
    "verify_conservation",
    "verify_duality",
    "verify_hull",
    "verify_small_n",
]
