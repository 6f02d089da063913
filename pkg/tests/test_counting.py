import itertools
from fractions import Fraction
from math import factorial

import pytest

from ivtest.core import CapacityError, Dims
from ivtest.counting import (
    count_extreme_ambient,
    count_extreme_compatible,
    count_maps_with_image_size,
    extreme_counts,
    finite_difference,
    finite_difference_recursive,
    trend_report,
    vertex_ratio,
)


def _surjections(k, l):
    return sum(1 for f in itertools.product(range(k), repeat=l) if len(set(f)) == k)


@pytest.mark.parametrize("k,l", [(k, l) for k in range(5) for l in range(6)])
def test_difference_counts_surjections(k, l):
    assert finite_difference(k, l) == _surjections(k, l)


def test_recursive_form_at_other_points():
    # Delta^k x^k is the constant k!
    for k in range(6):
        assert finite_difference_recursive(k, k, x=3) == factorial(k)


def test_known_values():
    assert finite_difference(2, 3) == 6
    assert finite_difference(3, 5) == 150


def test_negative_arguments():
    with pytest.raises(ValueError):
        finite_difference(-1, 2)
    with pytest.raises(ValueError):
        count_maps_with_image_size(2, 2, -1)


def test_binary_counts():
    c = extreme_counts(Dims(2, 2, 2))
    assert (c.ext_b, c.ext_f, c.ratio) == (12, 16, Fraction(3, 4))


@pytest.mark.parametrize("l,m", [(1, 1), (1, 3), (3, 1), (2, 1), (1, 2)])
def test_ratio_one_when_z_or_y_trivial(l, m):
    for n in range(1, 4):
        assert vertex_ratio(Dims(l, m, n)) == 1


def test_ratio_below_one_otherwise():
    for l, m, n in itertools.product(range(2, 4), repeat=3):
        assert vertex_ratio(Dims(l, m, n)) < 1


def test_ambient():
    assert count_extreme_ambient(Dims(3, 2, 2)) == 64


def test_single_x():
    # only constant g exists; h(x1) is free
    for l in range(1, 4):
        for m in range(1, 4):
            assert count_extreme_compatible(Dims(l, m, 1)) == m


def test_trend_report():
    rep = trend_report("n", {"l": 2, "m": 2}, range(2, 6))
    assert rep.strictly_increasing and rep.expected == "increasing" and rep.consistent
    assert rep.csv().splitlines()[1].startswith("2,2,2,2,12,16,3/4")
    rep = trend_report("m", {"l": 2, "n": 3}, range(2, 5))
    assert rep.expected == "bounded" and rep.consistent


def test_trend_errors():
    with pytest.raises(ValueError):
        trend_report("q", {}, [1])
    with pytest.raises(ValueError):
        trend_report("n", {"l": 2, "m": 2}, [3, 2])
    with pytest.raises(CapacityError):
        trend_report("n", {"l": 2, "m": 2}, [10**6])
