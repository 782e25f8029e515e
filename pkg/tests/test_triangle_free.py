import itertools

import pytest

from kset_recon.core import (
    ContractError,
    InvalidParameter,
    KSetInstance,
    PartialGraph,
    UnsupportedInstance,
    complete_graph,
    connected_ksets,
    cycle_graph,
    path_graph,
    star_graph,
    to_ids,
)
from kset_recon.layering import ProbeStats
from kset_recon.reference import ConsistencyClasses, GraphFilter
from kset_recon.triangle_free import tf_enumerate, tf_finish, tf_kernel, tf_large_degree


def known_around(g, t):
    """Partial graph knowing g on every pair inside N[t]."""
    closed = set(t)
    for v in t:
        closed |= g.neighbors(v)
    b = PartialGraph.empty(g.n).builder()
    for u, v in itertools.combinations(sorted(closed), 2):
        b.set(u, v, int(g.has_edge(u, v)))
    for v in t:
        for w in range(g.n):
            if w != v:
                b.set(v, w, int(g.has_edge(v, w)))
    return b.freeze()


def test_finish_p4(p4):
    assert tf_finish(connected_ksets(p4, 3), known_around(p4, {0, 1}), {0, 1}) == p4


def test_finish_c6(c6):
    assert tf_finish(connected_ksets(c6, 3), known_around(c6, {0, 1}), {0, 1}) == c6


def test_finish_contract_on_fabricated_premise():
    inst = KSetInstance.build(3, 3, connected=[(0, 1, 2)])
    with pytest.raises(ContractError):
        tf_finish(inst, PartialGraph.empty(3), {0, 1})


def test_kernel_star():
    g = star_graph(5)
    x, y, h = tf_kernel(connected_ksets(g, 3), 0, [1, 2])
    assert to_ids(x) == (1, 2, 3, 4, 5)
    assert y == 0
    assert h.num_unknown() == 0 and h.to_graph() == g


def test_kernel_c6(c6):
    x, y, h = tf_kernel(connected_ksets(c6, 3), 0, [1, 5])
    assert to_ids(x) == (1, 5)
    assert to_ids(y) == (2, 4)
    assert h.admits(c6)
    for a in (0, 1, 5, 2, 4):
        assert not h.unknown_row(a)


def test_kernel_wrong_guess_never_wrong_answer(c6):
    inst = connected_ksets(c6, 3)
    res = tf_kernel(inst, 0, [1, 2])
    if res is not None:
        assert tf_large_degree(inst, 0, [1, 2]) in (None, c6)


@pytest.mark.parametrize("xs", [[1], [1, 1], [0, 1], [1, 2, 3]])
def test_kernel_bad_xs(c6, xs):
    with pytest.raises(InvalidParameter):
        tf_kernel(connected_ksets(c6, 3), 0, xs)


def test_large_degree_examples(c6, p4):
    assert tf_large_degree(connected_ksets(star_graph(3), 3), 0, [1, 2]) == star_graph(3)
    assert tf_large_degree(connected_ksets(c6, 3), 0, [1, 5]) == c6
    assert tf_large_degree(connected_ksets(p4, 3), 1, [0, 2]) == p4


def test_enumerate_p4(p4, p4_swapped):
    assert tf_enumerate(connected_ksets(p4, 3)) == {p4, p4_swapped}


@pytest.mark.parametrize("r", range(3, 9))
def test_enumerate_stars(r):
    assert tf_enumerate(connected_ksets(star_graph(r), 3)) == {star_graph(r)}


def test_enumerate_c5(c5):
    assert tf_enumerate(connected_ksets(c5, 3)) == {c5}


def test_enumerate_k2_direct():
    assert tf_enumerate(connected_ksets(path_graph(range(3)), 2)) == {path_graph(range(3))}
    assert tf_enumerate(connected_ksets(complete_graph(3), 2)) == set()


def test_enumerate_small_n():
    assert tf_enumerate(KSetInstance(2, 2, frozenset({0b11}))) == {complete_graph(2)}
    with pytest.raises(UnsupportedInstance):
        tf_enumerate(KSetInstance(2, 3, frozenset()))


def test_requires_complete_instance():
    inst = KSetInstance.build(4, 3, connected=[(0, 1, 2)], complete=False)
    with pytest.raises(ContractError):
        tf_enumerate(inst)


def test_disconnected_instance_gives_nothing():
    assert tf_enumerate(KSetInstance(4, 3, frozenset())) == set()


def test_deterministic(c6):
    inst = connected_ksets(c6, 3)
    assert sorted(g.key() for g in tf_enumerate(inst)) == sorted(g.key() for g in tf_enumerate(inst))


@pytest.mark.parametrize("n, k", [(4, 3), (5, 3), (6, 3), (4, 4), (5, 4), (6, 4)])
def test_exact_against_oracle(n, k):
    flt = GraphFilter(connected=True, triangle_free=True)
    stats = ProbeStats()
    for inst, expected in ConsistencyClasses(n, k, flt):
        got = tf_enumerate(inst, stats)
        assert got == expected, inst
    assert not stats.violations()


def test_every_output_is_valid():
    for g in (cycle_graph(7), star_graph(6), path_graph(range(7))):
        for k in (3, 4):
            for h in tf_enumerate(connected_ksets(g, k)):
                assert h.is_connected() and h.is_triangle_free()
                assert connected_ksets(h, k) == connected_ksets(g, k)
