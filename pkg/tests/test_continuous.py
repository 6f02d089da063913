import json
import random
from fractions import Fraction

import pytest

from ivtest.core import Dims, ShapeError
from ivtest.continuous import (
    PartitionTable,
    ThresholdModel,
    partition_statistic,
    random_table,
    random_threshold_model,
    refine_partition,
    table_from_dist,
    table_from_json,
    table_to_json,
)
from ivtest.linear_tests import pearl_statistic
from ivtest.response import random_cond_dist, sample_compatible, sample_response_dist

F = Fraction


def two_cell():
    return PartitionTable(1, ("a", "b"), ("z1", "z2"), (((1, 0),), ((0, 1),)))


def test_forced_violation():
    rep = partition_statistic(two_cell())
    assert rep.value == 2 and rep.rejects
    assert rep.argmax == ((0,), (1,))


def test_merge_all_cells_is_at_most_one():
    rng = random.Random(0)
    for _ in range(30):
        t = random_table(rng, 3, 5, 4)
        assert refine_partition(t, [0] * 5).coarse.value <= 1


def test_matches_discrete_statistic():
    rng = random.Random(1)
    for _ in range(30):
        d = random_cond_dist(Dims(3, 3, 2), rng)
        assert partition_statistic(table_from_dist(d)).value == pearl_statistic(d)


def test_compatible_discrete_tables_stay_below_one_under_merging():
    rng = random.Random(2)
    for _ in range(30):
        f = sample_compatible(sample_response_dist(Dims(3, 4, 2), rng))
        t = table_from_dist(f)
        assert partition_statistic(t).value <= 1
        assert refine_partition(t, [0, 1, 0, 1]).coarse.value <= 1


def test_remainder_bound():
    t = PartitionTable(1, ("a",), ("z1", "z2"), (((F(1, 2), F(1, 4)),),))
    rep = partition_statistic(t)
    assert rep.value == F(1, 2)
    assert rep.with_remainder == F(1, 2) + F(3, 4)
    assert not t.complete


def test_table_validation():
    with pytest.raises(ShapeError):
        PartitionTable(1, (), ("z",), ())
    with pytest.raises(ShapeError):
        PartitionTable(1, ("a",), ("z",), (((F(3, 2),),),))
    with pytest.raises(ShapeError):
        PartitionTable(1, ("a", "b"), ("z",), (((F(2, 3),),), ((F(2, 3),),)))
    with pytest.raises(ShapeError):
        PartitionTable(2, ("a",), ("z",), (((F(1),),),))


def test_refine_mapping_errors():
    t = two_cell()
    for bad in ([0], [0, 2], [-1, 0], [1, 1]):
        with pytest.raises(ShapeError):
            refine_partition(t, bad)
    with pytest.raises(ShapeError):
        refine_partition(t, [0, 1], labels=["only one"])


def test_model_tables():
    m = ThresholdModel(
        2,
        (F(1, 2), F(1, 2)),
        ((F(1, 2),), (F(2),)),
        ((F(0), F(1)), (F(1, 3), F(2, 3))),
    )
    t = m.table([F(0), F(1)], [F(1, 2)])
    assert t.complete
    # u=0 switches to x2 above z=1/2, u=1 never does
    assert t.p[1][1] == (F(0), F(1, 2))
    assert partition_statistic(t).value <= 1


def test_random_models_never_reject():
    rng = random.Random(3)
    for _ in range(50):
        m = random_threshold_model(rng, 3, 5)
        t = m.table([F(k, 7) for k in range(8)], [F(k, 5) for k in range(1, 5)])
        assert partition_statistic(t).value <= 1


def test_json_roundtrip():
    t = random_table(random.Random(4), 2, 3, 2)
    assert table_from_json(json.dumps(table_to_json(t))) == t
    with pytest.raises(ShapeError):
        table_from_json("{}")
    with pytest.raises(ShapeError):
        table_from_json("[")


def test_report_dict():
    t = two_cell()
    obj = partition_statistic(t).as_dict(t)
    assert obj["statistic"] == "2" and obj["maximizing_probe"] == [["z1"], ["z2"]]
