"""Reference polygons and random generators used by the tests and ``verify``."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .geom import EXACT, Polygon, is_convex, is_generic

HEPTAGON = Polygon.from_coords([(2, 0), (3, 1), (3, 2), (2, 3), (1, 3), (0, 2), (0, 1)])
AXIS_HEXAGON = Polygon.from_coords([(0, 0), (0, 2), (3, 2), (3, 3), (5, 3), (5, 0)])
UNIT_SQUARE = Polygon.from_coords([(0, 0), (0, 1), (1, 1), (1, 0)])

# first through fifth iterates of HEPTAGON as printed (4 decimals), in drawing order
HEPTAGON_ITERATES = [
    [(1.0000, 1.0000), (2.5000, 1.0000), (2.7500, 1.5000), (2.3333, 2.3333), (1.5000, 2.7500), (0.6667, 2.3333), (0.3333, 1.6667)],
    [(1.7778, 1.2222), (2.4483, 1.4138), (2.3929, 1.8571), (1.9167, 2.3333), (1.0513, 2.3333), (0.7391, 2.0435), (0.8750, 1.5000)],
    [(1.4675, 1.4675), (1.9878, 1.4390), (2.2670, 1.7273), (2.1401, 1.9469), (1.4057, 2.2075), (1.0037, 2.1086), (0.9540, 1.8736)],
    [(1.7227, 1.5504), (2.0534, 1.6579), (2.1019, 1.8194), (1.7817, 1.9979), (1.2286, 2.0766), (1.0972, 1.9794), (1.2698, 1.7408)],
    [(1.4771, 1.7189), (1.8975, 1.6744), (1.9886, 1.7390), (1.8697, 1.8878), (1.5198, 1.9908), (1.2401, 1.9833), (1.2537, 1.8721)],
]


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> Polygon:
    cx, cy = center
    return Polygon.from_coords(
        [
            (cx + radius * math.cos(phase + 2 * math.pi * k / n), cy + radius * math.sin(phase + 2 * math.pi * k / n))
            for k in range(n)
        ]
    )


def random_convex_polygon(
    rng: random.Random,
    n: int,
    mode: str = EXACT,
    denominator: int = 1000,
    jitter: float = 0.15,
) -> Polygon:
    """Sorted random angles on a randomly perturbed unit circle, rejection-sampled for convexity.

    In exact mode coordinates are rounded to multiples of ``1/denominator``.
    """
    while True:
        angles = sorted(rng.uniform(0.0, 2 * math.pi) for _ in range(n))
        radii = [1.0 + rng.uniform(-jitter, jitter) for _ in range(n)]
        coords = [(r * math.cos(t), r * math.sin(t)) for r, t in zip(radii, angles)]
        if mode == EXACT:
            coords = [
                (Fraction(round(x * denominator), denominator), Fraction(round(y * denominator), denominator))
                for x, y in coords
            ]
        try:
            A = Polygon.from_coords(coords, mode=mode)
        except ValueError:
            continue
        if is_convex(A) and is_generic(A, strict=True):
            return A
