"""Scalars, homogeneous coordinates and the planar predicates used everywhere else.

Two scalar modes exist: exact (``fractions.Fraction``) and float. Values of
different modes are never combined implicitly; use :func:`to_exact` or
:func:`to_float` to convert. Homogeneous vectors are never normalised, and
projective equality is tested by proportionality.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    DegenerateJoin,
    DegenerateMeet,
    DegeneratePolygon,
    ModeMismatch,
    NotConvex,
    PointAtInfinity,
    SingularTransform,
    TagMismatch,
)

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

POINT = "point"
LINE = "line"

DEFAULT_EPSILON = 1e-9
_epsilon = contextvars.ContextVar("pentalimit_epsilon", default=DEFAULT_EPSILON)


def get_epsilon() -> float:
    return _epsilon.get()


@contextlib.contextmanager
def tolerance(eps: float):
    """Temporarily override the absolute float tolerance in the current context."""
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    token = _epsilon.set(float(eps))
    try:
        yield
    finally:
        _epsilon.reset(token)


# -- scalars -----------------------------------------------------------------


def mode_of(x) -> str:
    t = type(x)
    if t is float:
        return FLOAT
    if t is Fraction or t is int:
        return EXACT
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (Fraction, int)):
        return EXACT
    if isinstance(x, float):
        return FLOAT
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def common_mode(values: Iterable) -> str:
    modes = {mode_of(v) for v in values}
    if len(modes) != 1:
        if not modes:
            raise ValueError("no values")
        raise ModeMismatch("exact and float scalars mixed")
    return modes.pop()


def coerce(x, mode: str) -> Scalar:
    """Normalise ``x`` to the canonical type of ``mode`` without changing modes."""
    if mode_of(x) != mode:
        raise ModeMismatch(f"{x!r} is not a {mode} scalar")
    if mode == EXACT:
        return Fraction(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x!r}")
    return x


def to_exact(x) -> Fraction:
    return Fraction(x)


def to_float(x) -> float:
    return float(x)


def convert(x, mode: str) -> Scalar:
    return Fraction(x) if mode == EXACT else float(x)


def is_zero(x: Scalar) -> bool:
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return abs(x) <= get_epsilon()


def sign(x: Scalar) -> int:
    if is_zero(x):
        return 0
    return 1 if x > 0 else -1


# -- points and homogeneous vectors ------------------------------------------


@dataclass(frozen=True)
class Point2:
    x: Scalar
    y: Scalar

    def __post_init__(self):
        mode = common_mode((self.x, self.y))
        object.__setattr__(self, "x", coerce(self.x, mode))
        object.__setattr__(self, "y", coerce(self.y, mode))

    @property
    def mode(self) -> str:
        return mode_of(self.x)

    def __iter__(self) -> Iterator[Scalar]:
        yield self.x
        yield self.y

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def to_float(self) -> "Point2":
        return Point2(float(self.x), float(self.y))

    def to_exact(self) -> "Point2":
        return Point2(Fraction(self.x), Fraction(self.y))


@dataclass(frozen=True)
class HomoVec:
    """A triple of homogeneous coordinates, tagged as a point or a line."""

    a: Scalar
    b: Scalar
    c: Scalar
    tag: str = POINT

    def __post_init__(self):
        if self.tag not in (POINT, LINE):
            raise ValueError(f"unknown tag {self.tag!r}")
        mode = common_mode((self.a, self.b, self.c))
        for name in "abc":
            object.__setattr__(self, name, coerce(getattr(self, name), mode))

    @classmethod
    def zero(cls, mode: str = EXACT, tag: str = POINT) -> "HomoVec":
        z = convert(0, mode)
        return cls(z, z, z, tag)

    @property
    def mode(self) -> str:
        return mode_of(self.a)

    def __iter__(self) -> Iterator[Scalar]:
        yield self.a
        yield self.b
        yield self.c

    def __getitem__(self, i: int) -> Scalar:
        return (self.a, self.b, self.c)[i]

    def is_zero(self) -> bool:
        return all(is_zero(t) for t in self)

    def scaled(self, k) -> "HomoVec":
        return HomoVec(self.a * k, self.b * k, self.c * k, self.tag)

    def __add__(self, other: "HomoVec") -> "HomoVec":
        return HomoVec(self.a + other.a, self.b + other.b, self.c + other.c, self.tag)

    def __sub__(self, other: "HomoVec") -> "HomoVec":
        return HomoVec(self.a - other.a, self.b - other.b, self.c - other.c, self.tag)

    def dot(self, other: "HomoVec") -> Scalar:
        return self.a * other.a + self.b * other.b + self.c * other.c

    def cross(self, other: "HomoVec") -> tuple:
        return (
            self.b * other.c - self.c * other.b,
            self.c * other.a - self.a * other.c,
            self.a * other.b - self.b * other.a,
        )

    def retag(self, tag: str) -> "HomoVec":
        return HomoVec(self.a, self.b, self.c, tag)

    def proportional(self, other: "HomoVec") -> bool:
        """Projective equality: the cross product vanishes."""
        _check_modes(self, other)
        return all(is_zero(t) for t in self.cross(other))

    def to_float(self) -> "HomoVec":
        return HomoVec(float(self.a), float(self.b), float(self.c), self.tag)

    def to_exact(self) -> "HomoVec":
        return HomoVec(Fraction(self.a), Fraction(self.b), Fraction(self.c), self.tag)


def _check_modes(*vecs) -> str:
    modes = {v.mode for v in vecs}
    if len(modes) != 1:
        raise ModeMismatch("operands mix exact and float scalars")
    return modes.pop()


def det3(u: HomoVec, v: HomoVec, w: HomoVec) -> Scalar:
    """Determinant of the matrix with columns ``u, v, w``."""
    _check_modes(u, v, w)
    if not u.tag == v.tag == w.tag:
        raise TagMismatch("det3 operands carry different tags")
    return (
        u.a * (v.b * w.c - v.c * w.b)
        - v.a * (u.b * w.c - u.c * w.b)
        + w.a * (u.b * v.c - u.c * v.b)
    )


def lift(p: Point2) -> HomoVec:
    one = convert(1, p.mode)
    return HomoVec(p.x, p.y, one, POINT)


def project(v: HomoVec) -> Point2:
    if v.tag != POINT:
        raise TagMismatch("only point vectors can be projected")
    if is_zero(v.c):
        raise PointAtInfinity(f"homogeneous point {tuple(v)} has no affine image")
    return Point2(v.a / v.c, v.b / v.c)


def join(p: HomoVec, q: HomoVec) -> HomoVec:
    """The line through two points."""
    if p.tag != POINT or q.tag != POINT:
        raise TagMismatch("join takes two points")
    _check_modes(p, q)
    line = HomoVec(*p.cross(q), LINE)
    if line.is_zero():
        raise DegenerateJoin(f"points {tuple(p)} and {tuple(q)} coincide")
    return line


def meet(l1: HomoVec, l2: HomoVec) -> HomoVec:
    """The intersection point of two lines (possibly at infinity)."""
    if l1.tag != LINE or l2.tag != LINE:
        raise TagMismatch("meet takes two lines")
    _check_modes(l1, l2)
    point = HomoVec(*l1.cross(l2), POINT)
    if point.is_zero():
        raise DegenerateMeet(f"lines {tuple(l1)} and {tuple(l2)} coincide")
    return point


def dual_cross(u: HomoVec, v: HomoVec) -> HomoVec:
    """Join of two points or meet of two lines, whichever the tags call for."""
    return join(u, v) if u.tag == POINT else meet(u, v)


# -- 3x3 matrices -------------------------------------------------------------


@dataclass(frozen=True)
class Mat3:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("Mat3 needs a 3x3 array")
        mode = common_mode(itertools.chain.from_iterable(rows))
        rows = tuple(tuple(coerce(x, mode) for x in r) for r in rows)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, mode: str = EXACT) -> "Mat3":
        one, zero = convert(1, mode), convert(0, mode)
        return cls(tuple(tuple(one if i == j else zero for j in range(3)) for i in range(3)))

    @classmethod
    def from_columns(cls, cols: Sequence[HomoVec]) -> "Mat3":
        return cls(tuple(tuple(cols[j][i] for j in range(3)) for i in range(3)))

    @property
    def mode(self) -> str:
        return mode_of(self.rows[0][0])

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int, tag: str = POINT) -> HomoVec:
        return HomoVec(self.rows[0][j], self.rows[1][j], self.rows[2][j], tag)

    def entries(self) -> Iterator[Scalar]:
        return itertools.chain.from_iterable(self.rows)

    def __matmul__(self, other):
        if isinstance(other, HomoVec):
            if other.mode != self.mode:
                raise ModeMismatch("matrix and vector modes differ")
            r = self.rows
            return HomoVec(
                r[0][0] * other.a + r[0][1] * other.b + r[0][2] * other.c,
                r[1][0] * other.a + r[1][1] * other.b + r[1][2] * other.c,
                r[2][0] * other.a + r[2][1] * other.b + r[2][2] * other.c,
                other.tag,
            )
        if isinstance(other, Mat3):
            if other.mode != self.mode:
                raise ModeMismatch("matrix modes differ")
            a, b = self.rows, other.rows
            return Mat3(
                tuple(
                    tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                    for i in range(3)
                )
            )
        return NotImplemented

    def __add__(self, other: "Mat3") -> "Mat3":
        return Mat3(tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Mat3") -> "Mat3":
        return Mat3(tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def scaled(self, k) -> "Mat3":
        return Mat3(tuple(tuple(x * k for x in r) for r in self.rows))

    def transpose(self) -> "Mat3":
        return Mat3(tuple(zip(*self.rows)))

    def trace(self) -> Scalar:
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def det(self) -> Scalar:
        return det3(self.column(0), self.column(1), self.column(2))

    def inverse(self) -> "Mat3":
        d = self.det()
        if is_zero(d):
            raise SingularTransform("matrix is singular")
        m = self.rows
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                cof[i][j] = minor if (i + j) % 2 == 0 else -minor
        # adjugate is the transposed cofactor matrix
        return Mat3(tuple(tuple(cof[j][i] / d for j in range(3)) for i in range(3)))

    def norm_inf(self) -> float:
        return max(sum(abs(float(x)) for x in r) for r in self.rows)

    def max_abs_diff(self, other: "Mat3") -> float:
        return max(abs(float(x) - float(y)) for x, y in zip(self.entries(), other.entries()))

    def to_float(self) -> "Mat3":
        return Mat3(tuple(tuple(float(x) for x in r) for r in self.rows))

    def to_exact(self) -> "Mat3":
        return Mat3(tuple(tuple(Fraction(x) for x in r) for r in self.rows))


# -- polygons -------------------------------------------------------------------


@dataclass(frozen=True)
class Polygon:
    """Cyclically indexed sequence of at least three plane points."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(v if isinstance(v, Point2) else Point2(*v) for v in self.vertices)
        if len(verts) < 3:
            raise DegeneratePolygon(f"a polygon needs at least 3 vertices, got {len(verts)}")
        common_mode(v.x for v in verts)
        n = len(verts)
        for i in range(n):
            p, q = verts[i], verts[(i + 1) % n]
            if is_zero(p.x - q.x) and is_zero(p.y - q.y):
                raise DegeneratePolygon(f"consecutive vertices {i} and {(i + 1) % n} coincide")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_coords(cls, coords: Iterable, mode: str | None = None) -> "Polygon":
        """Build from ``(x, y)`` pairs. ints, Fractions and "p/q" strings are exact."""
        pts = []
        for x, y in coords:
            x, y = _parse_scalar(x), _parse_scalar(y)
            if mode is not None:
                x, y = convert(x, mode), convert(y, mode)
            pts.append((x, y))
        if mode is None and any(isinstance(t, float) for p in pts for t in p):
            pts = [(float(x), float(y)) for x, y in pts]
        return cls(tuple(Point2(x, y) for x, y in pts))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def mode(self) -> str:
        return self.vertices[0].mode

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Point2]:
        return iter(self.vertices)

    def __getitem__(self, i: int) -> Point2:
        return self.vertices[i % len(self.vertices)]

    def lifts(self) -> tuple:
        return tuple(lift(p) for p in self.vertices)

    def coords(self) -> list:
        return [(p.x, p.y) for p in self.vertices]

    def rotated(self, k: int) -> "Polygon":
        k %= self.n
        return Polygon(self.vertices[k:] + self.vertices[:k])

    def reversed(self) -> "Polygon":
        return Polygon(self.vertices[::-1])

    def to_float(self) -> "Polygon":
        return Polygon(tuple(p.to_float() for p in self.vertices))

    def to_exact(self) -> "Polygon":
        return Polygon(tuple(p.to_exact() for p in self.vertices))

    def with_mode(self, mode: str) -> "Polygon":
        return self if mode == self.mode else (self.to_exact() if mode == EXACT else self.to_float())


def _parse_scalar(x) -> Scalar:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, int):
        return Fraction(x)
    return x


def transform(psi: Mat3, A: Polygon) -> Polygon:
    """Image of a polygon under the projective transformation ``psi``."""
    if psi.mode != A.mode:
        raise ModeMismatch("transform and polygon modes differ")
    return Polygon(tuple(project(psi @ u) for u in A.lifts()))


def translation(dx, dy) -> Mat3:
    mode = common_mode((dx, dy))
    one, zero = convert(1, mode), convert(0, mode)
    return Mat3(((one, zero, dx), (zero, one, dy), (zero, zero, one)))


def centroid(points: Sequence[Point2]) -> Point2:
    n = len(points)
    return Point2(sum(p.x for p in points) / n, sum(p.y for p in points) / n)


def diameter(points: Sequence[Point2]) -> float:
    best = 0.0
    for p, q in itertools.combinations(points, 2):
        best = max(best, math.hypot(float(p.x) - float(q.x), float(p.y) - float(q.y)))
    return best


def orient(p: Point2, q: Point2, r: Point2) -> Scalar:
    """Twice the signed area of triangle pqr."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


# -- predicates -------------------------------------------------------------------


def orientation(A: Polygon) -> int:
    """+1 for a counter-clockwise convex polygon, -1 clockwise, 0 if not strictly convex."""
    n = A.n
    signs = {sign(orient(A[i - 1], A[i], A[i + 1])) for i in range(n)}
    if len(signs) != 1 or 0 in signs:
        return 0
    s = signs.pop()
    # equal turn signs still admit star polygons; every vertex must sit on the
    # inner side of every edge line
    for i in range(n):
        p, q = A[i], A[i + 1]
        for j in range(n):
            if sign(orient(p, q, A[j])) == -s:
                return 0
    return s


def is_convex(A: Polygon) -> bool:
    return orientation(A) != 0


def is_generic(A, strict: bool = False) -> bool:
    """Consecutive mode: no three consecutive vertices collinear. Strict: no three at all."""
    lifts = A.lifts() if isinstance(A, Polygon) else tuple(A)
    n = len(lifts)
    if strict:
        triples = itertools.combinations(range(n), 3)
    else:
        triples = (((j - 1) % n, j, (j + 1) % n) for j in range(n))
    return all(not is_zero(det3(lifts[i], lifts[j], lifts[k])) for i, j, k in triples)


def in_hull(A: Polygon, p: Point2) -> bool:
    """Weak containment of ``p`` in a convex polygon."""
    s = orientation(A)
    if s == 0:
        raise NotConvex("in_hull requires a convex polygon")
    if p.mode != A.mode:
        raise ModeMismatch("point and polygon modes differ")
    return all(sign(orient(A[i], A[i + 1], p)) != -s for i in range(A.n))
