import itertools
import random
from fractions import Fraction

import pytest

from ivtest.core import CapacityError, ConsistencyError, CondDist, Dims, ShapeError, index, validate
from ivtest.counting import count_extreme_compatible
from ivtest.linear_tests import pearl_statistic
from ivtest.response import (
    BinaryMatrix,
    ResponseDist,
    composite_matrix,
    distinct_columns,
    duplicate_key,
    enumerate_pairs,
    pearl_matrix,
    random_cond_dist,
    random_simplex_point,
    response_matrix,
    sample_compatible,
    sample_response_dist,
)


@pytest.mark.parametrize("dims,count", [((1, 1, 1), 1), ((2, 2, 2), 16), ((3, 2, 2), 32), ((2, 3, 2), 36)])
def test_pair_count(dims, count):
    pairs = enumerate_pairs(Dims(*dims))
    assert len(pairs) == count
    assert len(set(pairs)) == count


def test_pair_order_g_major():
    pairs = enumerate_pairs(Dims(2, 2, 2))
    assert pairs[0].g == (1, 1) and pairs[0].h == (1, 1)
    assert pairs[1].g == (1, 1) and pairs[1].h == (1, 2)
    assert pairs[4].g == (1, 2)
    assert pairs == sorted(pairs, key=lambda p: (p.g, p.h))


def test_capacity_guard():
    with pytest.raises(CapacityError):
        enumerate_pairs(Dims(3, 3, 3), cap=100)


def test_response_matrix_constant_column():
    d = Dims(2, 2, 2)
    A = response_matrix(d)
    assert A.shape == (8, 16)
    # g constant x1, h constant y1 is the first pair
    assert A.cols[0] == (index(d, 1, 1, 1), index(d, 1, 1, 2))


@pytest.mark.parametrize("dims", [(2, 2, 2), (3, 2, 2), (2, 3, 3), (1, 2, 3)])
def test_every_column_is_a_distribution(dims):
    d = Dims(*dims)
    A = response_matrix(d)
    for c in range(A.n_cols):
        assert validate(CondDist(d, A.column_vector(c))) == []


def test_pearl_matrix_shape_and_rows():
    assert pearl_matrix(Dims(2, 2, 2)).shape == (8, 8)
    A1 = pearl_matrix(Dims(3, 2, 2))
    assert A1.shape == (18, 12)
    assert all(len(r) == 2 for r in A1.rows())


@pytest.mark.parametrize("dims", [(2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 2, 3)])
def test_composite_is_binary_and_matches_product(dims):
    d = Dims(*dims)
    A1, A2, A3 = pearl_matrix(d).dense(), response_matrix(d).dense(), composite_matrix(d).dense()
    prod = [[sum(A1[r][t] * A2[t][c] for t in range(d.dim_f)) for c in range(d.n_pairs)] for r in range(d.dim_t)]
    assert prod == A3
    assert {v for row in A3 for v in row} <= {0, 1}


def test_composite_shape_binary():
    assert composite_matrix(Dims(2, 2, 2)).shape == (8, 16)


def test_dedup_rule_matches_raw_equality():
    for dims in itertools.product(range(1, 4), repeat=3):
        d = Dims(*dims)
        by_vector: dict = {}
        by_rule: dict = {}
        A = response_matrix(d)
        for c, p in enumerate(enumerate_pairs(d)):
            by_vector.setdefault(A.cols[c], set()).add(c)
            by_rule.setdefault(duplicate_key(p), set()).add(c)
        assert sorted(map(sorted, by_vector.values())) == sorted(map(sorted, by_rule.values()))


@pytest.mark.parametrize("dims,count", [((2, 2, 2), 12), ((3, 2, 2), 28), ((1, 3, 2), 6), ((1, 2, 4), 8)])
def test_distinct_counts(dims, count):
    d = Dims(*dims)
    assert len(distinct_columns(d)) == count == count_extreme_compatible(d)


def test_point_mass_gives_column():
    d = Dims(2, 2, 2)
    A = response_matrix(d)
    for pos in range(d.n_pairs):
        f = sample_compatible(ResponseDist.point_mass(d, pos))
        assert f.values == A.column_vector(pos)


def test_uniform_response_block_sums():
    d = Dims(2, 2, 2)
    f = sample_compatible(ResponseDist.uniform(d))
    assert validate(f) == []
    # each (x, y | z) is reached by 2 * 2 of the 16 pairs
    assert set(f.values) == {Fraction(1, 4)}


def test_response_dist_validation():
    d = Dims(1, 1, 1)
    with pytest.raises(ShapeError):
        ResponseDist(d, (Fraction(1, 2),))
    with pytest.raises(ShapeError):
        ResponseDist(Dims(1, 1, 2), (Fraction(3, 2), Fraction(-1, 2)))


def test_random_simplex_point_is_exact_and_seeded():
    a = random_simplex_point(random.Random(3), 10)
    b = random_simplex_point(random.Random(3), 10)
    assert a == b and sum(a) == 1 and min(a) >= 0


def test_random_cond_dist_valid():
    rng = random.Random(0)
    for _ in range(20):
        assert validate(random_cond_dist(Dims(3, 2, 3), rng)) == []


def test_samples_pass_pearl():
    rng = random.Random(5)
    for _ in range(50):
        f = sample_compatible(sample_response_dist(Dims(3, 2, 2), rng))
        assert pearl_statistic(f) <= 1


def test_binary_matrix_format_has_labels():
    text = response_matrix(Dims(1, 1, 2)).format()
    assert "P(x1,y1|z1)" in text


def test_composite_consistency_error(monkeypatch):
    import ivtest.response as resp

    d = Dims(2, 2, 2)
    # a row holding P(x1,y1|z1) + P(x1,y1|z2): the constant responses hit it twice
    cols = [() for _ in range(d.dim_f)]
    cols[index(d, 1, 1, 1)] = (0,)
    cols[index(d, 1, 1, 2)] = (0,)
    fake = BinaryMatrix(1, tuple(cols))
    monkeypatch.setattr(resp, "pearl_matrix", lambda dims, cap=None: fake)
    with pytest.raises(ConsistencyError):
        resp.composite_matrix(d)
