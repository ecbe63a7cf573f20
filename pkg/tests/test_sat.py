from itertools import product

import pytest
from hypothesis import given

from ksetrecon.core import KSetCollection, extract_ksets
from ksetrecon.oracle import enumerate_consistent, gen_gnp, gen_path
from ksetrecon.sat import (
    NEGATIVE,
    POSITIVE,
    Formula2Sat,
    assignment_graph,
    build_full_formula,
    build_pruned_formula,
    check_unique,
    iter_solutions,
    pair_witnesses,
    reconstruct_any,
    solve_2sat,
)

from conftest import graphs


def triples(letters, *names):
    pos = {c: i for i, c in enumerate(letters)}
    return KSetCollection.build(3, list(letters), [[pos[c] for c in s] for s in names])


def solution_edges(f, labels):
    return {assignment_graph(f, labels, s).edge_set() for s in iter_solutions(f)}


def test_full_formula_counts():
    f = build_full_formula(triples("abc", "abc"))
    assert f.tags.count(POSITIVE) == 3 and f.tags.count(NEGATIVE) == 0
    f = build_full_formula(triples("abcd", "abc", "bcd"))
    assert f.tags.count(POSITIVE) == 6 and f.tags.count(NEGATIVE) == 6
    f = build_full_formula(triples("abcde", "abc", "bcd", "cde"))
    assert f.tags.count(POSITIVE) == 9 and f.tags.count(NEGATIVE) == 21


def test_formulas_need_triples():
    kc = extract_ksets(gen_path(5), 4)
    for build in (build_full_formula, build_pruned_formula):
        with pytest.raises(ValueError):
            build(kc)


def test_pruned_drops_unwitnessed_pairs():
    # d and e lie in no triple, so their pair stays free (an isolated edge fits)
    f = build_pruned_formula(triples("abcde", "abc"))
    assert f.tags.count(NEGATIVE) == 0
    assert f.variables == [(0, 1), (0, 2), (1, 2), (3, 4)]
    assert len(solution_edges(f, tuple("abcde"))) == 8


def test_uncovered_vertices_admit_one_isolated_edge():
    kc = triples("abc")
    assert len(solution_edges(build_pruned_formula(kc), kc.labels)) == 4
    assert not check_unique(kc).unique
    assert enumerate_consistent(kc).count == 4


def test_pair_witness_matrix():
    m = pair_witnesses(triples("abcd", "abd", "acd", "bcd"))
    assert m[(0, 3)] == [1, 2] and m[(0, 1)] == [3]
    assert sum(len(v) for v in m.values()) == 9


def test_pruned_matches_full_on_path():
    kc = triples("abcde", "abc", "bcd", "cde")
    full = solution_edges(build_full_formula(kc), kc.labels)
    assert full == solution_edges(build_pruned_formula(kc), kc.labels)


def test_star_centre_solutions():
    kc = triples("abcd", "abd", "acd", "bcd")
    got = solution_edges(build_pruned_formula(kc), kc.labels)
    star = {(0, 3), (1, 3), (2, 3)}
    assert got == {frozenset(star | extra) for extra in (set(), {(0, 1)}, {(0, 2)}, {(1, 2)})}


def test_solver_edge_cases():
    assert solve_2sat(Formula2Sat(3, [(0, 1), (0, 2), (1, 2)])) == [False, False, False]
    f = Formula2Sat(3, [(0, 1)])
    f.add(1, 1, POSITIVE)
    f.add(-1, -1, NEGATIVE)
    assert solve_2sat(f) is None
    assert solve_2sat(build_pruned_formula(triples("abcde", "abc", "cde"))) is None


def test_solver_against_truth_tables():
    # every formula over three variables built from a fixed clause pool
    pool = [(1, 2), (-1, 3), (-2, -3), (2, -3), (-1, -2), (1, 3), (3, 3), (-2, 1)]
    for mask in range(1 << len(pool)):
        f = Formula2Sat(3, [(0, 1), (0, 2), (1, 2)])
        for i, c in enumerate(pool):
            if mask >> i & 1:
                f.add(*c, POSITIVE)

        def sat(a):
            return all(any(a[abs(x) - 1] == (x > 0) for x in c) for c in f.clauses)

        models = [list(a) for a in product([False, True], repeat=3) if sat(a)]
        sol = solve_2sat(f)
        assert (sol is None) == (not models)
        if sol is not None:
            assert sat(sol)
        assert sorted(map(tuple, iter_solutions(f))) == sorted(map(tuple, models))


def test_reconstruct_any_examples():
    res = reconstruct_any(triples("abcde", "abc", "bcd", "cde"), require_connected=True)
    assert res.graph.edge_set() == gen_path(5).edge_set()
    assert reconstruct_any(triples("abcde", "abc", "cde")).status == "inconsistent"
    res = reconstruct_any(triples("abcd", "abc", "bcd"), require_connected=True)
    assert res.status == "found" and res.graph.is_connected()


def test_check_unique_examples():
    assert check_unique(triples("abcde", "abc", "bcd", "cde")).unique
    rep = check_unique(triples("abcd", "abd", "acd", "bcd"))
    assert not rep.unique and rep.solution_count_lower_bound >= 2
    rep = check_unique(triples("abc", "abc"))
    assert not rep.unique
    assert check_unique(triples("abcde", "abc", "cde")).status == "inconsistent"


def test_check_unique_connected_only():
    # the triples of a 4-vertex path fit more than one connected graph
    rep = check_unique(triples("abcd", "abc", "bcd"), connected_only=True)
    assert not rep.unique and rep.connected_unique is False


def test_dimacs_dump():
    f = build_pruned_formula(triples("abc", "abc"))
    text = f.to_dimacs(("a", "b", "c"))
    assert "p cnf 3 3" in text and "c var 1 = a-b" in text


@given(graphs(min_n=3, max_n=9))
def test_reconstruct_any_round_trips(g):
    kc = extract_ksets(g, 3)
    res = reconstruct_any(kc)
    assert extract_ksets(res.graph, 3).same_sets(kc)


@given(graphs(min_n=3, max_n=7))
def test_pruned_and_full_agree(g):
    kc = extract_ksets(g, 3)
    assert solution_edges(build_pruned_formula(kc), kc.labels) == solution_edges(
        build_full_formula(kc), kc.labels
    )


@given(graphs(min_n=3, max_n=6))
def test_check_unique_matches_oracle(g):
    kc = extract_ksets(g, 3)
    assert check_unique(kc).unique == (enumerate_consistent(kc, cap=2).count == 1)


def test_random_dense_round_trip():
    for s in range(10):
        kc = extract_ksets(gen_gnp(9, 0.4, s), 3)
        assert extract_ksets(reconstruct_any(kc).graph, 3).same_sets(kc)
