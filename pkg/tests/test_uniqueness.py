import random

import pytest
from conftest import atlas, consistent_pair_unions, lemma_violations

from kset_recon.core import (
    ContractError,
    Graph,
    InvalidParameter,
    KSetInstance,
    complete_graph,
    connected_ksets,
    cycle_graph,
    is_consistent,
    path_graph,
    star_graph,
    to_ids,
)
from kset_recon.reference import random_triangle_free_connected
from kset_recon.uniqueness import (
    certify_unique,
    clear_non_neighbors,
    fake_neighbor_analysis,
    isolated_certificate,
    pair_report_line,
    parse_class,
    swap_property_holds,
)

# -- swap property ----------------------------------------------------------------


def test_swap_vacuous_when_k_is_n(p4):
    assert swap_property_holds(p4, 4, 1, 2)


def test_swap_p4(p4):
    assert swap_property_holds(p4, 3, 1, 2) and swap_property_holds(p4, 3, 2, 1)


def test_swap_c5(c5):
    for u, v in c5.sorted_edges():
        assert swap_property_holds(c5, 3, u, v) and swap_property_holds(c5, 3, v, u)


def test_swap_needs_edge(p4):
    with pytest.raises(ContractError):
        swap_property_holds(p4, 3, 0, 2)


# -- clear / fake ------------------------------------------------------------------


def test_clear_examples(c6, p4):
    assert clear_non_neighbors(connected_ksets(c6, 3), 0, 3)
    assert not clear_non_neighbors(connected_ksets(p4, 3), 0, 2)
    assert not clear_non_neighbors(connected_ksets(path_graph(range(3)), 3), 0, 2)


def test_clear_errors(p4):
    with pytest.raises(InvalidParameter):
        clear_non_neighbors(connected_ksets(p4, 3), 1, 1)
    with pytest.raises(ContractError):
        clear_non_neighbors(KSetInstance.build(4, 3, connected=[(0, 1, 2)], complete=False), 0, 3)


def test_isolated_certificate_examples(c6, p4):
    assert to_ids(isolated_certificate(c6, 0, 3)) == (2, 3, 4)
    for k in (2, 3, 4):
        assert isolated_certificate(star_graph(4), 0, k) is None
    assert isolated_certificate(p4, 0, 3) is None


def test_fake_p3():
    g = path_graph(range(3))
    rep = fake_neighbor_analysis(g, 3, 0, 2)
    assert to_ids(rep.c_u) == (0,) and to_ids(rep.c_v) == (2,)
    assert rep.union_size == 2 and rep.bound_ok
    assert rep.witness == complete_graph(3)
    assert is_consistent(rep.witness, connected_ksets(g, 3))


def test_fake_p4(p4):
    rep = fake_neighbor_analysis(p4, 3, 0, 2)
    assert to_ids(rep.c_u) == (0,) and to_ids(rep.c_v) == (2, 3)
    assert rep.bound_ok and rep.union_size == 3 and rep.witness is None


def test_fake_contract(c6, p4):
    with pytest.raises(ContractError):
        fake_neighbor_analysis(p4, 3, 0, 1)
    with pytest.raises(ContractError):
        fake_neighbor_analysis(c6, 3, 0, 3)


def test_report_lines(c6, p4):
    assert pair_report_line(c6, 3, 0, 3) == "pair 0 3: clear c_u=- c_v=- witness=no"
    assert pair_report_line(p4, 3, 0, 2) == "pair 0 2: fake c_u=0 c_v=2,3 witness=no"
    assert pair_report_line(path_graph(range(3)), 3, 0, 2) == "pair 0 2: fake c_u=0 c_v=2 witness=yes"


# -- the structural lemmas on every graph up to isomorphism ------------------------


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
@pytest.mark.parametrize("k", [3, 4])
def test_structural_lemmas_up_to_isomorphism(n, k):
    if k > n:
        pytest.skip("k > n")
    table, sig, unions = consistent_pair_unions(n, k)
    for g in atlas(n):
        union = unions[int(sig[table.mask_of(g)])]
        assert lemma_violations(g, k, union, table.pairs) == [], g


# -- certification -------------------------------------------------------------------


@pytest.mark.parametrize("r", [3, 4, 6])
def test_stars_unique(r):
    res = certify_unique(star_graph(r), 3, "triangle-free")
    assert res.unique and res.others == ()


def test_p4_not_unique(p4, p4_swapped):
    res = certify_unique(p4, 3, "triangle-free")
    assert not res.unique and res.others == (p4_swapped,)
    res = certify_unique(p4, 3, "bounded-degree 2")
    assert res.others == (p4_swapped,)


def test_large_random_unique():
    g = random_triangle_free_connected(20, 5)
    assert certify_unique(g, 3).unique


def test_certify_rejects_out_of_class(c5):
    with pytest.raises(InvalidParameter):
        certify_unique(complete_graph(3), 3, "triangle-free")
    with pytest.raises(InvalidParameter):
        certify_unique(star_graph(4), 3, "bounded-degree 3")
    with pytest.raises(InvalidParameter):
        certify_unique(Graph.from_edges(4, [(0, 1)]), 3)
    with pytest.raises(InvalidParameter):
        certify_unique(c5, 3, "planar")


def test_parse_class():
    assert parse_class("triangle-free") is None
    assert parse_class(" bounded-degree 3 ") == 3
    with pytest.raises(InvalidParameter):
        parse_class("bounded-degree")


def test_certify_agrees_with_enumeration_on_cycles():
    rng = random.Random(3)
    for n in (5, 6, 7):
        g = cycle_graph(n).relabel(rng.sample(range(n), n))
        assert certify_unique(g, 3, "bounded-degree 2").unique
