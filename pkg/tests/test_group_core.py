import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgext.group_core import (
    GroupError,
    build_group,
    cyclic_group,
    direct_product,
    group_from_permutations,
    group_from_table,
    semidirect_product,
    swap_semidirect,
    symmetric_group,
    validate_table,
)


def _is_group(G):
    validate_table(G.table, exhaustive_limit=10**6)
    t = G.table
    assert np.array_equal(t[np.arange(G.order), G.inverse], np.zeros(G.order, dtype=np.int64))


@given(st.integers(1, 12))
def test_cyclic_group_is_abelian_group(n):
    G = cyclic_group(n)
    _is_group(G)
    assert np.array_equal(G.table, G.table.T)
    assert G.element_order(1 % n) == n


@given(st.integers(1, 6), st.integers(1, 6))
@settings(max_examples=25)
def test_direct_product_order_and_axioms(m, n):
    G = direct_product(cyclic_group(m), cyclic_group(n))
    assert G.order == m * n
    _is_group(G)


@given(st.integers(2, 5))
@settings(max_examples=10)
def test_swap_semidirect_is_nonabelian_of_right_order(m):
    G = swap_semidirect(m)
    assert G.order == 2 * m * m
    _is_group(G)
    assert not np.array_equal(G.table, G.table.T)


@pytest.mark.parametrize("k, order", [(1, 1), (2, 2), (3, 6), (4, 24)])
def test_symmetric_group_orders(k, order):
    G = symmetric_group(k)
    assert G.order == order
    _is_group(G)


def test_kac_paljutkin_group_has_center_of_order_two():
    G = swap_semidirect(2)
    assert len(G.center()) == 2


def test_generated_subgroup_of_four_cycle():
    G = symmetric_group(4)
    cyc = G.generated_subgroup([G.labels.index("(1 2 3 4)")])
    assert len(cyc) == 4
    assert G.is_subgroup(cyc)


@given(st.lists(st.permutations(list(range(4))), min_size=1, max_size=3))
@settings(max_examples=30, deadline=None)
def test_permutation_groups_are_subgroups_of_s4(gens):
    G = group_from_permutations(gens, 4)
    assert 24 % G.order == 0
    _is_group(G)


def test_semidirect_product_rejects_non_automorphism():
    N, H = cyclic_group(4), cyclic_group(2)
    bad = np.array([[0, 1, 2, 3], [0, 2, 1, 3]])
    with pytest.raises(GroupError):
        semidirect_product(N, H, bad)


@pytest.mark.parametrize("table, message", [
    ([[0, 1], [1, 1]], "inverse"),
    ([[1, 0], [0, 1]], "identity"),
    ([[0, 1, 2], [1, 2, 0], [2, 1, 0]], "inverse|permutation|associative"),
    ([[0, 3], [3, 0]], "range"),
])
def test_invalid_tables_are_rejected(table, message):
    with pytest.raises(GroupError, match=message):
        group_from_table(table)


def test_non_associative_latin_square_is_rejected():
    # a loop of order 5 with identity 0 that is not a group
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError, match="associative"):
        group_from_table(t)


def test_build_group_round_trips_through_json():
    G = swap_semidirect(3)
    H = build_group(G.to_json())
    assert np.array_equal(G.table, H.table)
    S = build_group({"name": "S3", "degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]})
    assert S.order == 6


def test_build_group_needs_a_table_or_generators():
    with pytest.raises(GroupError):
        build_group({"name": "nothing"})
    with pytest.raises(GroupError, match="order"):
        build_group({"order": 3, "table": [[0, 1], [1, 0]]})


def test_tables_are_read_only():
    G = cyclic_group(3)
    with pytest.raises(ValueError):
        G.table[0, 0] = 1
