import math

import pytest
from hypothesis import given

from ksetrecon.core import Graph, KSetCollection, extract_ksets
from ksetrecon.oracle import enumerate_consistent, enumerate_trees, gen_path, gen_star, gen_tree, relabelled
from ksetrecon.tree import (
    DEG2,
    LEAF,
    OTHER,
    VertexTripleIndex,
    base_case_five,
    classify_vertex,
    dominates,
    leaf_neighbour,
    five_vertex_shapes,
    reconstruct_tree,
)

from conftest import trees


def index_of(g):
    kc = extract_ksets(g, 3)
    return VertexTripleIndex(range(g.n), kc.sets, g.n, [0])


def test_domination_examples():
    idx = index_of(gen_path(5))
    assert dominates(1, 0, idx)
    assert dominates(2, 0, idx)  # T_a is the single triple abc
    star = index_of(gen_star(4))
    assert all(dominates(0, leaf, star) for leaf in range(1, 5))
    assert not dominates(1, 0, star)
    assert not dominates(1, 2, star)


def test_vertex_index_sizes():
    g = gen_tree(12, 4)
    idx = index_of(g)
    assert sum(len(v) for v in idx.T.values()) == 3 * len(extract_ksets(g, 3))
    assert all(lst == sorted(lst) for lst in idx.T.values())


def test_classification_examples():
    idx = index_of(gen_path(5))
    c = classify_vertex(0, idx)
    assert c.kind == LEAF and c.witnesses == (1, 2)
    assert leaf_neighbour(0, idx) == 1  # of two dominators the dominated one is the neighbour
    c = classify_vertex(2, idx)
    assert c.kind == DEG2 and set(c.witnesses) == {1, 3}
    spider = Graph.from_edges(9, [(0, i) for i in range(1, 5)] + [(i, i + 4) for i in range(1, 5)])
    assert classify_vertex(0, index_of(spider)).kind == OTHER


def test_five_vertex_profiles_distinct():
    shapes = five_vertex_shapes()
    assert len(shapes) == 3
    assert len({p for p, _ in shapes}) == 3


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 1), (0, 2), (0, 3), (0, 4)],
        [(0, 1), (1, 2), (2, 3), (3, 4)],
        [(0, 1), (0, 2), (0, 3), (3, 4)],
    ],
)
def test_base_case_five(edges):
    g = relabelled(Graph.from_edges(5, edges), 2)
    placed = base_case_five(range(5), extract_ksets(g, 3).sets)
    assert {(min(a, b), max(a, b)) for a, b in placed} == set(g.edges())


def test_star_centre_occurs_in_every_triple():
    kc = extract_ksets(gen_star(4), 3)
    assert all(0 in s for s in kc.sets) and len(kc) == math.comb(4, 2)


def test_paper_example_path():
    kc = KSetCollection.build(3, list("abcde"), [(0, 1, 2), (1, 2, 3), (2, 3, 4)])
    res = reconstruct_tree(kc)
    assert res.is_unique and res.graph.edge_set() == gen_path(5).edge_set()


def test_small_ambiguities_match_oracle():
    three = reconstruct_tree(extract_ksets(gen_path(3), 3))
    assert three.status == "ambiguous" and len(three.witnesses) == 3
    path4 = extract_ksets(gen_path(4), 3)
    res = reconstruct_tree(path4)
    assert res.status == "ambiguous" and len(res.witnesses) == 2
    oracle = enumerate_consistent(path4, filters=("tree",))
    assert {g.edge_set() for g in res.witnesses} == {g.edge_set() for g in oracle.witnesses}
    star = reconstruct_tree(extract_ksets(gen_star(3), 3))
    assert star.is_unique and star.graph.degree(0) == 3


def test_inconsistent_input():
    kc = KSetCollection.build(3, list("abcde"), [(0, 1, 2), (2, 3, 4)])
    assert reconstruct_tree(kc).status == "inconsistent"


def test_exhaustive_small_trees():
    for n in range(5, 7):
        for g in enumerate_trees(n):
            res = reconstruct_tree(extract_ksets(g, 3))
            assert res.is_unique and res.graph.edge_set() == g.edge_set()


def test_large_tree_and_reduction_rounds():
    g = gen_tree(200, 11)
    res = reconstruct_tree(extract_ksets(g, 3), verify=True)
    assert res.graph.edge_set() == g.edge_set()
    rounds = res.stats["rounds"]
    for before, after in zip(rounds, rounds[1:]):
        assert after <= math.ceil(before / 2) + 5


def test_reduction_log_replays_to_the_tree():
    g = gen_tree(60, 2)
    res = reconstruct_tree(extract_ksets(g, 3))
    assert res.stats["log"].records  # something was stripped or contracted


@given(trees(min_n=5, max_n=60))
def test_round_trip_property(g):
    kc = extract_ksets(g, 3)
    res = reconstruct_tree(kc)
    assert res.is_unique and res.graph.edge_set() == g.edge_set()
    assert res.stats["touches"] <= 80 * len(kc)


def test_wrong_promise_is_caught_by_verify():
    cyc = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    res = reconstruct_tree(extract_ksets(cyc, 3), verify=True)
    assert res.status == "inconsistent"
