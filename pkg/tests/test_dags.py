import pytest

from mdlbn import CapacityError, Schema, enumerate_dags
from oracles import brute_force_dag_count, brute_force_dags


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 3), (3, 25), (4, 543)])
def test_counts_match_brute_force(n, expected):
    assert brute_force_dag_count(n) == expected
    assert len(enumerate_dags(Schema.binary(n))) == expected


def test_five_nodes():
    assert len(enumerate_dags(Schema.binary(5))) == 29281


@pytest.mark.parametrize("n", [2, 3, 4])
def test_canonical_order_and_uniqueness(n):
    dags = enumerate_dags(Schema.binary(n))
    edge_sets = [g.edges for g in dags]
    assert len(set(edge_sets)) == len(edge_sets)
    assert edge_sets == brute_force_dags(n)


def test_first_is_empty():
    assert enumerate_dags(Schema.binary(3))[0].edges == ()


def test_limit():
    with pytest.raises(CapacityError):
        enumerate_dags(Schema.binary(6))
    with pytest.raises(CapacityError):
        enumerate_dags(Schema.binary(3), limit=2)
