"""The pentagram map, its two involutive factors, and iteration.

Index conventions (0-based, all indices mod n):

* ``alpha1(A)[j] = A[j] A[j+1]``
* ``alpha2(A)[j] = A[j-1] A[j+1]``
* ``pentagram(A)[i] = A[i-1]A[i+1] ∩ A[i]A[i+2]``, which is exactly
  ``alpha1(alpha2(A))[i]`` with no reindexing.
* ``pentagram_inverse(B)[i] = B[i-2]B[i-1] ∩ B[i]B[i+1]``, chosen so that
  ``pentagram_inverse(pentagram(A)) == A`` vertex for vertex.

Composing the raw involutions twice shifts labels by the constants below.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

from . import geom
from .errors import (
    DegenerateJoin,
    DegenerateMeet,
    DegenerateOutput,
    DegeneratePolygon,
    GeometryError,
    IterationLimitExceeded,
    NotConvex,
    PointAtInfinity,
)
from .geom import EXACT, HomoVec, Point2, Polygon

# alpha1(alpha1(A))[j] = A[j + ALPHA1_SHIFT], alpha2(alpha2(A))[j] = A[j + ALPHA2_SHIFT]
ALPHA1_SHIFT = 1
ALPHA2_SHIFT = 0
# pentagram(A)[i] is alpha1(alpha2(A))[i + PENTAGRAM_SHIFT]
PENTAGRAM_SHIFT = 0
# alpha2(alpha1(B))[i] is pentagram_inverse(B)[i + INVERSE_SHIFT]
INVERSE_SHIFT = 1

DEFAULT_MAX_ITERATIONS = 10_000

PolygonLike = Union[Polygon, Sequence[HomoVec]]


def _as_vectors(A: PolygonLike) -> tuple:
    return A.lifts() if isinstance(A, Polygon) else tuple(A)


def alpha1(A: PolygonLike) -> tuple:
    """Joins (or meets) of consecutive entries; points and lines swap roles."""
    vs = _as_vectors(A)
    n = len(vs)
    return tuple(geom.dual_cross(vs[j], vs[(j + 1) % n]) for j in range(n))


def alpha2(A: PolygonLike) -> tuple:
    """Joins (or meets) of the two neighbours of each entry."""
    vs = _as_vectors(A)
    n = len(vs)
    if n < 4:
        raise DegeneratePolygon("alpha2 needs at least 4 entries; for n = 3 second neighbours are first neighbours")
    return tuple(geom.dual_cross(vs[(j - 1) % n], vs[(j + 1) % n]) for j in range(n))


def _to_polygon(points: Sequence[HomoVec]) -> Polygon:
    pts = [geom.project(v) for v in points]
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        if geom.is_zero(p.x - q.x) and geom.is_zero(p.y - q.y):
            raise DegenerateOutput(f"output vertices {i} and {(i + 1) % n} coincide")
    return Polygon(tuple(pts))


def pentagram(A: Polygon) -> Polygon:
    """One step of the pentagram map."""
    if A.n < 4:
        raise DegeneratePolygon(f"the pentagram map needs at least 4 vertices, got {A.n}")
    return _to_polygon(alpha1(alpha2(A)))


def pentagram_homogeneous(vs: Sequence[HomoVec]) -> tuple:
    """The pentagram map on lifted points, never leaving homogeneous coordinates.

    Vertices may land on the line at infinity; only coincident consecutive
    vertices are rejected.
    """
    if len(vs) < 4:
        raise DegeneratePolygon(f"the pentagram map needs at least 4 vertices, got {len(vs)}")
    out = alpha1(alpha2(vs))
    n = len(out)
    for i in range(n):
        if out[i].proportional(out[(i + 1) % n]):
            raise DegenerateOutput(f"output vertices {i} and {(i + 1) % n} coincide")
    return out


def pentagram_inverse(B: Polygon) -> Polygon:
    if B.n < 4:
        raise DegeneratePolygon(f"the inverse map needs at least 4 vertices, got {B.n}")
    pts = alpha2(alpha1(B))
    n = len(pts)
    return _to_polygon([pts[(i - INVERSE_SHIFT) % n] for i in range(n)])


def iterate(A: Polygon, k: int, exact_steps: int | None = None) -> Polygon:
    """Apply the pentagram map ``k`` times.

    With ``exact_steps`` set, an exact polygon is converted to floats before
    step ``exact_steps + 1``. Failures carry the 1-based failing step in
    ``exc.step``.
    """
    return orbit(A, k, exact_steps)[-1]


def orbit(A: Polygon, k: int, exact_steps: int | None = None) -> list:
    """``[A, T(A), ..., T^k(A)]``, with the same conventions as :func:`iterate`."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = [A]
    current = A
    for step in range(1, k + 1):
        if exact_steps is not None and step > exact_steps and current.mode == EXACT:
            current = current.to_float()
        try:
            current = pentagram(current)
        except GeometryError as exc:
            exc.step = step
            raise
        out.append(current)
    return out


def _normalise(points: list) -> tuple:
    """Affinely whiten a float point set: returns (local points, centre, 2x2 factor)."""
    n = len(points)
    cx = sum(p[0] for p in points) / n
    cy = sum(p[1] for p in points) / n
    sxx = sum((p[0] - cx) ** 2 for p in points) / n
    syy = sum((p[1] - cy) ** 2 for p in points) / n
    sxy = sum((p[0] - cx) * (p[1] - cy) for p in points) / n
    # Cholesky factor C = L L^T, L lower triangular
    l11 = math.sqrt(sxx)
    l21 = sxy / l11
    l22 = math.sqrt(max(syy - l21 * l21, 0.0))
    if l11 == 0.0 or l22 == 0.0:
        raise DegenerateOutput("iterate collapsed onto a line")
    local = []
    for x, y in points:
        u = (x - cx) / l11
        v = ((y - cy) - l21 * u) / l22
        local.append((u, v))
    return local, (cx, cy), ((l11, 0.0), (l21, l22))


def _step_float(pts: list, eps: float) -> list:
    """One pentagram step on raw float pairs; same construction and checks as :func:`pentagram`."""
    n = len(pts)
    lines = []
    for j in range(n):
        (ax, ay), (bx, by) = pts[j - 1], pts[(j + 1) % n]
        line = (ay - by, bx - ax, ax * by - ay * bx)
        if max(abs(t) for t in line) <= eps:
            raise DegenerateJoin(f"vertices {(j - 1) % n} and {(j + 1) % n} coincide")
        lines.append(line)
    out = []
    for i in range(n):
        (a1, b1, c1), (a2, b2, c2) = lines[i], lines[(i + 1) % n]
        x, y, z = b1 * c2 - c1 * b2, c1 * a2 - a1 * c2, a1 * b2 - b1 * a2
        if max(abs(x), abs(y), abs(z)) <= eps:
            raise DegenerateMeet(f"diagonals through vertex {i} coincide")
        if abs(z) <= eps:
            raise PointAtInfinity(f"output vertex {i} lies at infinity")
        out.append((x / z, y / z))
    for i in range(n):
        (px, py), (qx, qy) = out[i], out[(i + 1) % n]
        if abs(px - qx) <= eps and abs(py - qy) <= eps:
            raise DegenerateOutput(f"output vertices {i} and {(i + 1) % n} coincide")
    return out


def limit_by_iteration(
    A: Polygon,
    tol: float = 1e-9,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    exact_steps: int = 0,
) -> Point2:
    """Iterate until the vertex set has diameter below ``tol``; return its centroid.

    The first ``exact_steps`` steps run in exact arithmetic. Afterwards every
    float step is carried out on an affinely normalised copy of the iterate
    (the map commutes with affine maps), with the accumulated affine frame
    tracked separately. This keeps the degeneracy tests meaningful however
    small the real polygon becomes.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if A.n < 5:
        raise DegeneratePolygon("limit_by_iteration needs n >= 5")
    if not geom.is_convex(A):
        raise NotConvex("limit_by_iteration requires a convex polygon")

    current = A
    steps = 0
    if current.mode == EXACT:
        for _ in range(exact_steps):
            if geom.diameter(current.vertices) < tol:
                break
            steps += 1
            try:
                current = pentagram(current)
            except GeometryError as exc:
                exc.step = steps
                raise

    eps = geom.get_epsilon()
    pts = [(float(p.x), float(p.y)) for p in current]
    local, offset, frame = _normalise(pts)

    def real_diameter():
        (a, _), (c, d) = frame
        real = [(a * u, c * u + d * v) for u, v in local]
        return max(math.dist(p, q) for p in real for q in real)

    while real_diameter() >= tol:
        if steps >= max_iterations:
            raise IterationLimitExceeded(
                f"diameter still {real_diameter():.3e} after {steps} iterations"
            )
        steps += 1
        try:
            image = _step_float(local, eps)
        except GeometryError as exc:
            exc.step = steps
            raise
        new_local, (cu, cv), ((m11, _), (m21, m22)) = _normalise(image)
        (a, _), (c, d) = frame
        offset = (offset[0] + a * cu, offset[1] + c * cu + d * cv)
        frame = ((a * m11, 0.0), (c * m11 + d * m21, d * m22))
        local = new_local
    return Point2(offset[0], offset[1])


__all__ = [
    "ALPHA1_SHIFT",
    "ALPHA2_SHIFT",
    "INVERSE_SHIFT",
    "PENTAGRAM_SHIFT",
    "alpha1",
    "alpha2",
    "iterate",
    "limit_by_iteration",
    "orbit",
    "pentagram",
    "pentagram_homogeneous",
    "pentagram_inverse",
]
