"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line (see conftest.record) before asserting.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from conftest import record
from pentalimit import geom
from pentalimit.axis_aligned import collapse_point, la_closed_form, random_shape, require, verify_incidence
from pentalimit.collineation import (
    apply,
    build_LA,
    charpoly,
    conjugate,
    hull_coefficients,
    random_hull_point,
    random_unimodular,
    trace,
    verify_small_n,
)
from pentalimit.errors import DegenerateOutput, DegenerateTriple, NotConvex
from pentalimit.geom import Mat3, Point2, Polygon
from pentalimit.limit import eigenvector_for, limit_point, residual, solve_cubic
from pentalimit.pentagram import iterate, limit_by_iteration, pentagram
from pentalimit.samples import AXIS_HEXAGON, HEPTAGON, HEPTAGON_ITERATES, UNIT_SQUARE, random_convex_polygon

F = Fraction


def oracle_polygons():
    rng = random.Random(4)
    return [random_convex_polygon(rng, rng.randint(5, 9)) for _ in range(50)]


def conservation_polygons():
    rng = random.Random(5)
    return [random_convex_polygon(rng, rng.randint(5, 8)) for _ in range(25)]


def test_criterion_01_heptagon_matrix():
    L = build_LA(HEPTAGON)
    want = [[-6, -4, 49], [-1, -7, 51], [-1, -3, 27]]
    got = [list(row) for row in L.matrix.rows]
    ok = all(isinstance(x, Fraction) for row in got for x in row) and got == [[F(x) for x in r] for r in want]
    record(1, ok, f"L_A = {[[str(x) for x in r] for r in got]}")
    assert ok


def test_criterion_02_heptagon_charpoly():
    p = charpoly(build_LA(HEPTAGON))
    roots = solve_cubic(p)
    exact = p.coefficients == (F(-14), F(-111), F(-116))
    close = len(roots.real) == 3 and all(
        abs(r - w) < 1e-3 for r, w in zip(roots.real, (-4.613, -1.265, 19.878))
    )
    ok = exact and close
    record(2, ok, f"{p}; roots {[round(r, 6) for r in roots.real]}")
    assert ok


def test_criterion_03_heptagon_limit():
    res = limit_point(HEPTAGON)
    X, Y = float(res.limit.x), float(res.limit.y)
    lam = res.eigenvalue
    den = lam * lam + 13 * lam + 38
    cx, cy = (49 * lam + 139) / den, (51 * lam + 257) / den
    near = abs(X - 1.609) < 1e-3 and abs(Y - 1.838) < 1e-3
    closed = abs(X - cx) < 1e-9 and abs(Y - cy) < 1e-9
    ok = near and closed
    record(3, ok, f"limit ({X:.9f}, {Y:.9f}) at λ = {lam:.9f}; closed-form gap {max(abs(X - cx), abs(Y - cy)):.2e}")
    assert ok


def test_criterion_04_oracle_agreement():
    polys = [HEPTAGON] + oracle_polygons()
    start = time.perf_counter()
    worst = 0.0
    for A in polys:
        eig = limit_point(A).limit
        it = limit_by_iteration(A, tol=1e-9)
        worst = max(worst, math.hypot(float(eig.x) - float(it.x), float(eig.y) - float(it.y)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 10.0
    record(4, ok, f"{len(polys)} polygons, max deviation {worst:.2e}, {elapsed:.2f} s")
    assert ok


def test_criterion_05_conservation():
    polys = conservation_polygons()
    bad = [A.n for A in polys if build_LA(pentagram(A)).matrix != build_LA(A).matrix]
    ok = not bad
    record(5, ok, f"{len(polys)} polygons, n in {sorted({A.n for A in polys})}, mismatches {len(bad)}")
    assert ok


def test_criterion_06_trace():
    polys = [HEPTAGON] + oracle_polygons() + conservation_polygons()
    bad = [A for A in polys if trace(build_LA(A)) != 2 * A.n or not isinstance(trace(build_LA(A)), Fraction)]
    ok = not bad
    record(6, ok, f"{len(polys)} polygons, trace = 2n exactly on all" if ok else f"{len(bad)} failures")
    assert ok


def test_criterion_07_projective_invariance():
    rng = random.Random(7)
    checked = failed = 0
    for _ in range(10):
        A = random_convex_polygon(rng, rng.randint(5, 9))
        L = build_LA(A)
        want = charpoly(L).coefficients
        for _ in range(10):
            psi = random_unimodular(rng)
            assert psi.det() in (1, -1)
            checked += 1
            if charpoly(conjugate(L, psi)).coefficients != want:
                failed += 1
            # also rebuild L from the transformed polygon itself
            moved = geom.transform(psi, A)
            if charpoly(build_LA(moved)).coefficients != want:
                failed += 1
    ok = failed == 0
    record(7, ok, f"{checked} conjugations over 10 polygons, {failed} mismatches")
    assert ok


def test_criterion_08_hull_contraction():
    rng = random.Random(8)
    total = 0
    bad = 0
    min_coeff = None
    for _ in range(10):
        A = random_convex_polygon(rng, rng.randint(5, 9))
        L = build_LA(A)
        for _ in range(100):
            q = random_hull_point(rng, A)
            assert geom.in_hull(A, q)
            v = geom.lift(q)
            coeffs = hull_coefficients(A, v)
            lo = min(coeffs)
            min_coeff = lo if min_coeff is None else min(min_coeff, lo)
            image = geom.project(apply(L, v))
            total += 1
            if not (all(c > 0 for c in coeffs) and geom.in_hull(A, image)):
                bad += 1
    ok = bad == 0
    record(8, ok, f"{total} hull points, min coefficient {float(min_coeff):.4g}, failures {bad}")
    assert ok


def _same_vertex_set(P, Q):
    return len(P) == len(Q) and {(p.x, p.y) for p in P} == {(q.x, q.y) for q in Q}


def test_criterion_09_small_n():
    rng = random.Random(9)
    results = {5: 0, 6: 0}
    for n in (5, 6):
        for _ in range(10):
            A = random_convex_polygon(rng, n)
            M = build_LA(A).matrix - Mat3.identity().scaled(F(3))
            images = [geom.project(M @ u) for u in A.lifts()]
            target = iterate(A, n - 4)
            if _same_vertex_set(images, list(target)) and verify_small_n(A).passed:
                results[n] += 1
    ok = results == {5: 10, 6: 10}
    record(9, ok, f"pentagon→T(A) {results[5]}/10, hexagon→T²(A) {results[6]}/10")
    assert ok


def test_criterion_10_axis_aligned():
    rng = random.Random(10)
    closed_ok = 0
    closed_total = 0
    for m in range(2, 6):
        for _ in range(10):
            s = random_shape(rng, m)
            closed_total += 1
            if la_closed_form(s).matrix == build_LA(s.polygon()).matrix:
                closed_ok += 1
    incidence_ok = 0
    incidence_total = 0
    for m in (2, 3, 4):
        for _ in range(10):
            s = random_shape(rng, m)
            incidence_total += 1
            rep = verify_incidence(s)
            cp = collapse_point(s)
            c = geom.centroid(list(s.polygon()))
            if rep.passed and cp == c and cp == Point2(sum(s.xs) / m, sum(s.ys) / m):
                incidence_ok += 1
    sample = collapse_point(require(AXIS_HEXAGON))
    sample_ok = sample == Point2(F(8, 3), F(5, 3))
    ok = closed_ok == closed_total and incidence_ok == incidence_total and sample_ok
    record(
        10,
        ok,
        f"closed form {closed_ok}/{closed_total}, incidence+collapse {incidence_ok}/{incidence_total}, "
        f"sample hexagon collapse ({sample.x}, {sample.y})",
    )
    assert ok


def _cyclic_match(P, Q, tol):
    n = len(P)
    if n != len(Q):
        return False
    for direction in (1, -1):
        for s in range(n):
            if all(
                abs(float(P[i].x) - Q[(s + direction * i) % n][0]) < tol
                and abs(float(P[i].y) - Q[(s + direction * i) % n][1]) < tol
                for i in range(n)
            ):
                return True
    return False


def test_criterion_11_printed_iterates():
    matched = [k for k, want in enumerate(HEPTAGON_ITERATES, 1) if _cyclic_match(list(iterate(HEPTAGON, k)), want, 1e-3)]
    ok = matched == [1, 2, 3, 4, 5]
    record(11, ok, f"iterates matched for k = {matched}")
    assert ok


def test_criterion_12_degree_three():
    worst_p = worst_r = 0.0
    for A in [HEPTAGON] + oracle_polygons()[:20]:
        res = limit_point(A)
        p = res.charpoly
        assert isinstance(p.c0, Fraction)
        worst_p = max(worst_p, abs(float(p(Fraction(res.eigenvalue)))))
        v = eigenvector_for(res.collineation, res.eigenvalue)
        worst_r = max(worst_r, residual(res.collineation, res.eigenvalue, v))
    ok = worst_p < 1e-6 and worst_r < 1e-9
    record(12, ok, f"max |p(λ)| {worst_p:.2e}, max row-reduction residual {worst_r:.2e}")
    assert ok


def test_criterion_13_negative_controls():
    outcomes = {}
    try:
        pentagram(UNIT_SQUARE)
        outcomes["square"] = False
    except DegenerateOutput:
        outcomes["square"] = True
    try:
        limit_point(Polygon.from_coords([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)]))
        outcomes["nonconvex"] = False
    except NotConvex:
        outcomes["nonconvex"] = True
    try:
        build_LA(Polygon.from_coords([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]))
        outcomes["collinear"] = False
    except DegenerateTriple:
        outcomes["collinear"] = True
    ok = all(outcomes.values())
    record(13, ok, ", ".join(f"{k} {'raised' if v else 'did not raise'}" for k, v in outcomes.items()))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
