import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kset_recon.core import Graph, InvalidParameter, KSetInstance, complete_graph, connected_ksets, path_graph
from kset_recon.reference import (
    ConsistencyClasses,
    GraphFilter,
    all_graphs,
    brute_force_consistent,
    graph_table,
    random_triangle_free_connected,
)


def test_p4_oracle(p4, p4_swapped):
    flt = GraphFilter(connected=True, triangle_free=True)
    assert brute_force_consistent(connected_ksets(p4, 3), flt) == {p4, p4_swapped}


def test_triangle_oracle():
    out = brute_force_consistent(connected_ksets(complete_graph(3), 3), GraphFilter(connected=True))
    assert len(out) == 4
    assert complete_graph(3) in out
    assert sum(1 for g in out if len(g.edges) == 2) == 3


def test_c5_oracle(c5):
    assert brute_force_consistent(connected_ksets(c5, 3), GraphFilter(connected=True, max_degree=2)) == {c5}


def test_cap():
    with pytest.raises(InvalidParameter):
        brute_force_consistent(KSetInstance(9, 3, frozenset()))


def test_oracle_contains_source():
    for g in itertools.islice(all_graphs(5), 0, None, 7):
        for k in (2, 3, 4, 5):
            assert g in brute_force_consistent(connected_ksets(g, k))


@pytest.mark.parametrize("n, k", [(4, 3), (5, 3), (5, 4)])
def test_numpy_classes_agree_with_pruned_search(n, k):
    total = 0
    for inst, graphs in ConsistencyClasses(n, k):
        assert brute_force_consistent(inst) == graphs
        total += len(graphs)
    assert total == 2 ** (n * (n - 1) // 2)


def test_graph_table_flags():
    t = graph_table(5)
    for m in range(0, 1 << 10, 37):
        g = t.graph(m)
        assert t.mask_of(g) == m
        assert bool(t.connected[m]) == g.is_connected()
        assert bool(t.triangle_free[m]) == g.is_triangle_free()
        assert int(t.max_degree[m]) == g.max_degree()


def test_filter_counts():
    # 38 of the 64 labelled graphs on 4 vertices are connected
    graphs = list(all_graphs(4))
    assert len(graphs) == 64
    assert len(list(all_graphs(4, GraphFilter(connected=True)))) == sum(g.is_connected() for g in graphs) == 38


def test_random_generator_small():
    assert random_triangle_free_connected(2, 0) == complete_graph(2)
    with pytest.raises(InvalidParameter):
        random_triangle_free_connected(1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10**6))
def test_random_generator_properties(n, seed):
    g = random_triangle_free_connected(n, seed)
    assert g.n == n and g.is_connected() and g.is_triangle_free()
    assert random_triangle_free_connected(n, seed) == g


def test_path_graph_labels():
    assert path_graph([0, 2, 1, 3]).sorted_edges() == [(0, 2), (1, 2), (1, 3)]
    assert Graph.from_edges(3, [(2, 0)]).sorted_edges() == [(0, 2)]
    assert all(a < b for a, b in itertools.chain.from_iterable(g.sorted_edges() for g in all_graphs(3)))
