import pytest

import oracles as O
from zerodiv import catalog
from zerodiv.classify import (
    check_lemmas,
    check_local_annihilator,
    check_pir_product,
    check_pirloc,
    classification,
    compare_poset_and_graph,
    find_staircase_product,
    local_annihilator_witness,
    local_products,
    recognize_staircase,
    staircase,
    staircase_loops,
    staircase_product,
    staircase_tuples,
)
from zerodiv.errors import PreconditionError
from zerodiv.relations import ASSOCIATED, relation_partition
from zerodiv.ring import build_product, build_zn, local_data
from zerodiv.zdgraph import Graph, are_isomorphic, zeta


def assoc_graph(A):
    return zeta(A, relation_partition(A, ASSOCIATED))


@pytest.mark.parametrize("k", range(13))
def test_staircase_shape(k):
    G = staircase(k)
    assert G.sorted_edges() == O.staircase_edges(k)
    assert len(G.looped) == staircase_loops(k)
    assert sorted(G.degrees) == list(range(1, k + 2))


@pytest.mark.parametrize("k", range(13))
def test_recognize_staircase_roundtrip(k):
    rep = recognize_staircase(staircase(k))
    assert rep.index == k and rep.witness_map.is_isomorphism


def test_recognize_rejects_path():
    # P_3 with no loops: right vertex count for SG_2 but no loop
    G = Graph(("a", "b", "c"), frozenset({(0, 1), (1, 2)}))
    rep = recognize_staircase(G)
    assert not rep.ok and "looped" in rep.failure_reason


def test_recognize_staircase_pairwise_distinct():
    for i in range(8):
        for j in range(i + 1, 8):
            assert are_isomorphic(staircase(i), staircase(j)) is None


@pytest.mark.parametrize("p,k", [(p, k) for p in (2, 3, 5) for k in range(1, 5)])
def test_zpk_is_staircase_of_index_k(p, k):
    rep = recognize_staircase(assoc_graph(build_zn(p ** k)))
    assert rep.index == k
    # vertex of degree 1 is the class of 1, the top vertex is [0]
    assert rep.witness_map.map[0] == k


def test_non_pir_local_failure_reason():
    rep = recognize_staircase(assoc_graph(catalog.ring("f2xy_x2_xy_y2")))
    assert not rep.ok
    assert rep.failure_reason.startswith("4 looped vertices where SG_4 has 3")


def test_local_annihilator_z12_witness():
    A = build_zn(12)
    assert local_annihilator_witness(A) == (4, 4)
    rep = check_local_annihilator(A)
    assert not rep.holds and not rep.is_local and rep.agrees


@pytest.mark.parametrize("stem", list(catalog.CATALOG))
def test_local_annihilator_agrees(stem):
    A = catalog.ring(stem)
    rep = check_local_annihilator(A)
    assert rep.agrees and rep.is_local == (stem in catalog.LOCAL)


def test_local_annihilator_excludes_zero_ring():
    with pytest.raises(PreconditionError):
        check_local_annihilator(build_zn(1))


@pytest.mark.parametrize("stem", catalog.LOCAL)
def test_pirloc_consistent(stem):
    rep = check_pirloc(catalog.ring(stem))
    assert rep.consistent
    if rep.is_local_pir:
        assert rep.staircase_index == rep.nilpotency_index


def test_pirloc_values():
    assert check_pirloc(catalog.ring("z4x_2x_x2m2")).staircase_index == 3
    rep = check_pirloc(catalog.ring("z4x_2x_x2"))
    assert not rep.is_local_pir and rep.staircase_index is None
    with pytest.raises(PreconditionError):
        check_pirloc(build_zn(12))


def test_staircase_tuples():
    assert list(staircase_tuples(12)) == [(11,), (5, 1), (3, 2), (2, 1, 1)]
    assert list(staircase_tuples(1)) == []


def test_find_staircase_product_z12():
    # Z/12 = Z/4 x Z/3, indices 2 and 1
    assert find_staircase_product(assoc_graph(build_zn(12))) == [2, 1]
    assert find_staircase_product(staircase_product([3, 2, 1])) == [3, 2, 1]


@pytest.mark.parametrize("stem", list(catalog.CATALOG))
def test_pir_product_both_directions(stem):
    assert check_pir_product(catalog.ring(stem)).ok


def test_non_pir_product_has_no_staircase_form():
    A = build_product([build_zn(2), catalog.ring("f2xy_x2_xy_y2")])
    rep = check_pir_product(A)
    assert not rep.is_pir and rep.staircase_indices is None and rep.ok


def test_pir_product_of_local_pirs():
    A = build_product([catalog.ring("z4x_2x_x2m2"), build_zn(9)])
    rep = check_pir_product(A)
    assert rep.is_pir and rep.ok and rep.staircase_indices == [3, 2]
    assert sorted(rep.factor_indices) == [2, 3]


@pytest.mark.parametrize("stem", list(catalog.CATALOG))
def test_lemma_suite(stem):
    rep = check_lemmas(catalog.ring(stem), partner=build_zn(6))
    assert rep.ok, rep.to_dict()
    assert set(rep.results) == {
        "ann_union_strict", "monotone_neighbourhoods", "staircase_powers", "local_annihilator",
        "side_subgraphs", "orthogonal_annihilators", "principal_bijection",
    }


def test_lemma_applicability():
    res = check_lemmas(build_zn(27)).results
    assert res["staircase_powers"].status == "pass"
    assert res["ann_union_strict"].status == "pass"
    res = check_lemmas(build_zn(30)).results
    assert res["ann_union_strict"].status == "n/a"


def test_poset_vs_graph_pair():
    cmp = compare_poset_and_graph(catalog.ring("f2xy_x2_y2"), catalog.ring("f2xy_xy_x2my2"))
    assert cmp.poset_iso and not cmp.graph_iso
    assert cmp.looped == (5, 3)
    assert "x" in {d["element"] for d in cmp.loop_discrepancies}


def test_classification_dict():
    d = classification(build_zn(8))
    assert d["is_local"] and d["is_pir"] and d["staircase"]["index"] == 3


def test_local_products_bounded():
    rings = [build_zn(2), build_zn(4), build_zn(8)]
    combos = local_products(rings, 2, 16)
    assert all(len(c) <= 2 for c in combos)
    assert max(len(c) for c in combos) == 2
    assert all(local_data(c[0]).is_local for c in combos)
