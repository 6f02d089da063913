import itertools
import random
from fractions import Fraction

import pytest

from ivtest.core import CapacityError, ConsistencyError, CondDist, Dims, ShapeError
from ivtest.linear_tests import LinearTest, five_term_test, pearl_statistic, pearl_suite, variations
from ivtest.polyhedra import (
    Polytope,
    UnboundedError,
    canonical_form,
    certificate_inequality,
    compatible_polytope,
    extreme_rays,
    facet_classes,
    facet_enum,
    implied_by_test,
    in_convex_hull,
    lp_feasible,
    reduced_facets,
    solve_nonneg,
    sufficiency_check,
    suite_polytope,
    vertex_enum,
)
from ivtest.polyhedra.linalg import integerize, nullspace, rank, rref
from ivtest.response import distinct_columns, random_cond_dist, response_matrix, vertex_dist

F = Fraction


def unit(i, d):
    return tuple(F(int(i == t)) for t in range(d))


# ------------------------------------------------------------ linear algebra


def test_rref_rank_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    R, piv = rref(rows)
    assert piv == [0, 1] and rank(rows) == 2
    (v,) = nullspace(rows, 3)
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert integerize([F(1, 2), F(-3, 4)]) == [2, -3]


# ------------------------------------------------------------ simplex


def test_solve_nonneg_feasible_and_witness():
    cols = [[(0, 1)], [(1, 1)], [(0, 1), (1, 1)]]
    out = solve_nonneg(cols, [F(1, 2), F(3, 4)])
    assert out.feasible
    total = [F(0), F(0)]
    for j, w in out.x.items():
        assert w >= 0
        for r, v in cols[j]:
            total[r] += w * v
    assert total == [F(1, 2), F(3, 4)]


def test_solve_nonneg_certificate():
    cols = [[(0, 1), (1, 1)]]
    out = solve_nonneg(cols, [1, 2])
    assert not out.feasible
    y = out.y
    assert y[0] + y[1] <= 0 and y[0] + 2 * y[1] > 0


def test_solve_nonneg_negative_rhs_and_fraction_columns():
    cols = [[(0, F(-1, 3))], [(0, F(1, 2))]]
    out = solve_nonneg(cols, [F(-2)])
    assert out.feasible and out.x[0] * F(-1, 3) == -2


def test_pivot_rules_agree():
    rng = random.Random(4)
    for _ in range(40):
        d = random_cond_dist(Dims(3, 2, 2), rng)
        assert lp_feasible(d, rule="bland").feasible == lp_feasible(d, rule="dantzig").feasible
    with pytest.raises(ValueError):
        solve_nonneg([[(0, 1)]], [1], rule="steepest")


def test_degenerate_problem_terminates():
    # many identical columns and a zero right-hand side entry
    cols = [[(0, 1), (1, 1)]] * 30 + [[(1, 1), (2, 1)]] * 30
    out = solve_nonneg(cols, [0, 1, 1], rule="dantzig")
    assert out.feasible


def test_large_coefficients_use_exact_fallback():
    big = 10**30
    cols = [[(0, big), (1, 1)], [(0, 1), (1, big)]]
    out = solve_nonneg(cols, [big + 1, big + 1])
    assert out.feasible and out.x == {0: 1, 1: 1}


# ------------------------------------------------------------ membership


def test_lp_feasible_on_vertices():
    d = Dims(3, 2, 2)
    for col, _ in distinct_columns(d):
        res = lp_feasible(vertex_dist(d, col))
        assert res.feasible and sum(res.support().values()) == 1


def test_lp_feasible_rejects_invalid():
    with pytest.raises(ShapeError):
        lp_feasible(CondDist(Dims(1, 1, 2), ["1/2", "1/3"]))


def test_infeasible_binary_and_certificate():
    d = Dims(2, 2, 2)
    p = [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]]
    dist = CondDist.from_nested(d, p)
    res = lp_feasible(dist)
    assert not res.feasible and res.witness is None
    ineq = certificate_inequality(res.certificate, d, dist)
    assert ineq.value(dist) > ineq.bound
    # dominated by the violated instrumental inequality
    assert any(implied_by_test(ineq, t) for t in pearl_suite(d))


def test_certificate_scaling_invariance():
    d = Dims(2, 2, 2)
    dist = CondDist.from_nested(d, [[["1", "0"], ["0", "0"]], [["0", "1"], ["0", "0"]]])
    pi0, pi = lp_feasible(dist).certificate
    a = certificate_inequality((pi0, pi), d)
    b = certificate_inequality((2 * pi0, tuple(2 * v for v in pi)), d)
    c = certificate_inequality((F(1, 3) * pi0, tuple(F(1, 3) * v for v in pi)), d)
    assert a == b == c


def test_certificate_validation():
    d = Dims(2, 2, 2)
    with pytest.raises(ShapeError):
        certificate_inequality((F(1), (F(0),) * 3), d)
    # positive on the all-x1,y1 column
    bad = (F(0), tuple(F(1) for _ in range(8)))
    with pytest.raises(ConsistencyError):
        certificate_inequality(bad, d)


def test_canonical_form():
    d = Dims(1, 1, 2)
    assert canonical_form(d, [F(3), F(5)], F(7)) == ((0, 1), 2)


def test_lp_matches_convex_hull_oracle():
    # second method: hull of the raw response columns, with duplicates
    rng = random.Random(9)
    for dims in [(2, 2, 2), (3, 2, 2), (2, 2, 3)]:
        d = Dims(*dims)
        gens = [response_matrix(d).column_vector(c) for c in range(d.n_pairs)]
        for _ in range(25):
            dist = random_cond_dist(d, rng)
            assert lp_feasible(dist).feasible == in_convex_hull(dist.values, gens)


def test_lp_matches_facets():
    d = Dims(3, 2, 2)
    poly = compatible_polytope(d)
    rng = random.Random(10)
    for _ in range(60):
        dist = random_cond_dist(d, rng)
        assert lp_feasible(dist).feasible == poly.contains(dist.values)


def test_l_one_everything_feasible():
    rng = random.Random(3)
    for m, n in itertools.product(range(1, 4), repeat=2):
        for _ in range(3):
            assert lp_feasible(random_cond_dist(Dims(1, m, n), rng)).feasible


# ------------------------------------------------------------ double description


def test_extreme_rays_orthant():
    rays = extreme_rays([[1, 0], [0, 1]])
    assert sorted(rays) == [[0, 1], [1, 0]]
    with pytest.raises(UnboundedError):
        extreme_rays([[1, 0]])
    with pytest.raises(ShapeError):
        extreme_rays([[0, 0]])


def test_simplex_roundtrip():
    verts = [unit(i, 3) for i in range(3)]
    poly = facet_enum(verts)
    assert len(poly.equalities) == 1 and len(poly.inequalities) == 3
    assert vertex_enum(poly) == sorted(verts)
    h = Polytope(3, equalities=[((F(1),) * 3, F(1))], inequalities=[(tuple(-v for v in unit(i, 3)), F(0)) for i in range(3)])
    assert vertex_enum(h) == sorted(verts)


def test_square_with_interior_point():
    verts = [(F(a), F(b)) for a in (0, 1) for b in (0, 1)] + [(F(1, 2), F(1, 2))]
    poly = facet_enum(verts)
    assert len(poly.inequalities) == 4 and len(poly.vertices) == 4


def test_single_point_and_segment():
    assert facet_enum([(F(1), F(2))]).vertices == [(F(1), F(2))]
    seg = facet_enum([(F(0), F(0)), (F(2), F(2))])
    assert len(seg.equalities) == 1 and len(seg.inequalities) == 2


def test_vertex_enum_unbounded_and_empty():
    half = Polytope(2, inequalities=[((F(-1), F(0)), F(0)), ((F(0), F(-1)), F(0))])
    with pytest.raises(UnboundedError):
        vertex_enum(half)
    empty = Polytope(1, inequalities=[((F(1),), F(-1)), ((F(-1),), F(0))])
    assert vertex_enum(empty) == []
    inconsistent = Polytope(1, equalities=[((F(0),), F(1))])
    assert vertex_enum(inconsistent) == []


def test_ray_budget():
    with pytest.raises(CapacityError):
        facet_enum([vertex_dist(Dims(3, 2, 2), c).values for c, _ in distinct_columns(Dims(3, 2, 2))], budget=5)


def test_binary_facets_are_pearl_and_nonnegativity():
    d = Dims(2, 2, 2)
    poly = compatible_polytope(d)
    assert len(poly.equalities) == 2 and len(poly.vertices) == 12
    reduced = set(reduced_facets(d))
    hard = {canonical_form(d, t.tau, t.alpha) for t in pearl_suite(d) if t.name in {"pearl[2]", "pearl[3]", "pearl[6]", "pearl[7]"}}
    assert reduced == hard


def test_facet_classes_322():
    classes = facet_classes(Dims(3, 2, 2))
    sizes = sorted(len(c) for c in classes)
    assert sizes == [12, 24]
    base = five_term_test()
    big = max(classes, key=len)
    assert canonical_form(base.dims, base.tau, base.alpha) in big


def test_h_to_v_to_h_roundtrip():
    d = Dims(2, 2, 2)
    poly = compatible_polytope(d)
    verts = vertex_enum(poly)
    again = facet_enum(verts)
    assert sorted(again.inequalities) == sorted(poly.inequalities)


# ------------------------------------------------------------ sufficiency


def test_suite_polytope_binary():
    d = Dims(2, 2, 2)
    verts = vertex_enum(suite_polytope(d, pearl_suite(d)))
    assert set(verts) == {vertex_dist(d, c).values for c, _ in distinct_columns(d)}


def test_suite_polytope_322_strict_superset():
    d = Dims(3, 2, 2)
    verts = set(vertex_enum(suite_polytope(d, pearl_suite(d))))
    compat = {vertex_dist(d, c).values for c, _ in distinct_columns(d)}
    assert compat < verts and len(verts) == 76


def test_sufficiency_flags_unnecessary_suite():
    d = Dims(2, 2, 2)
    wrong = LinearTest.from_terms(d, [(1, 1, 1), (1, 1, 2)], 1, "wrong")
    res = sufficiency_check(d, [wrong])
    assert res.kind == "not-necessary" and not res.equal


def test_implied_by_single_test():
    d = Dims(3, 2, 2)
    t = five_term_test()
    ineq = certificate_inequality((F(-2), tuple(F(v) for v in t.tau)), d)
    assert implied_by_test(ineq, t)
    assert not any(implied_by_test(ineq, p) for p in pearl_suite(d))
    assert sum(implied_by_test(ineq, v) for v in variations(t)) == 1
