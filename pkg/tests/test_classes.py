import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from ksetrecon.classes import (
    OrderedTripleList,
    find_degree2_vertex_outerplanar,
    find_size3_separators,
    reconstruct_max_planar,
    reconstruct_max_planar_4connected,
    reconstruct_outerplanar_2connected,
    reconstruct_outerplanar_six,
    reconstruct_triangle_free,
    six_vertex_profiles,
    small_planar_side,
)
from ksetrecon.core import Graph, KSetCollection, extract_ksets
from ksetrecon.oracle import (
    all_cycle_chord_graphs,
    enumerate_consistent,
    gen_apollonian,
    gen_apollonian_depth,
    gen_bipartite,
    gen_bipyramid,
    gen_cycle,
    gen_cycle_chords,
    gen_fan,
    gen_icosahedron,
    gen_octahedron,
    gen_petersen,
    gen_stacked,
    is_maximal_planar,
    is_outerplanar,
    is_triangle_free,
    relabelled,
)


def round_trip(fn, g):
    res = fn(extract_ksets(g, 3))
    assert res.is_unique, res.reason
    assert res.graph.edge_set() == g.edge_set()
    return res


# ---------------------------------------------------------------- triangle-free


def test_ordered_triple_list():
    kc = extract_ksets(gen_petersen(), 3)
    otl = OrderedTripleList(kc)
    assert len(otl) == 3 * len(kc)
    assert otl.rows == sorted(otl.rows)
    for a, b in combinations(range(10), 2):
        want = sorted(x for x in range(10) if x not in (a, b) and (a, b, x) in kc)
        assert sorted(otl.thirds(a, b)) == want


@pytest.mark.parametrize(
    "g",
    [
        gen_cycle(5),
        gen_petersen(),
        Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]),  # C4 plus a pendant
        Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5)]),  # pendants on opposite corners
        Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6)]),
    ],
)
def test_triangle_free_examples(g):
    round_trip(reconstruct_triangle_free, relabelled(g, 3))


def test_triangle_free_unique_among_triangle_free():
    rep = enumerate_consistent(extract_ksets(gen_cycle(5), 3), filters=("connected", "triangle-free"))
    assert rep.count == 1


def test_triangle_free_four_vertices_goes_to_the_oracle():
    res = reconstruct_triangle_free(extract_ksets(gen_cycle(4), 3))
    assert res.status == "ambiguous" and len(res.witnesses) == 3
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert reconstruct_triangle_free(extract_ksets(path, 3)).status == "ambiguous"


def test_triangle_free_is_order_independent():
    # the same graph under many labellings gives the same answer
    base = Graph.from_edges(9, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4), (2, 8)])
    for seed in range(20):
        round_trip(reconstruct_triangle_free, relabelled(base, seed))


def test_triangle_free_wrong_promise():
    g = gen_fan(6)
    res = reconstruct_triangle_free(extract_ksets(g, 3), verify=True)
    assert res.status == "inconsistent" or res.graph.edge_set() == g.edge_set()


@given(st.integers(5, 40), st.integers(0, 10**6))
def test_bipartite_round_trip(n, seed):
    g = gen_bipartite(n, 0.3, seed)
    assert is_triangle_free(g)
    round_trip(reconstruct_triangle_free, g)


# ---------------------------------------------------------------- outerplanar


def test_six_vertex_profiles():
    profiles = six_vertex_profiles()
    assert len(profiles) == 9
    assert len({p for p, _ in profiles}) == 9
    assert profiles[0][0] == (3, 3, 3, 3, 3, 3)  # the hexagon


def test_degree_two_vertex():
    v, w1, w2 = find_degree2_vertex_outerplanar(extract_ksets(gen_cycle(6), 3))
    assert {w1, w2} == {(v + 1) % 6, (v - 1) % 6}
    fan = gen_fan(7)
    v, w1, w2 = find_degree2_vertex_outerplanar(extract_ksets(fan, 3))
    assert fan.degree(v) == 2 and set(fan.neighbors(v)) == {w1, w2}
    for g in all_cycle_chord_graphs(6):
        v, w1, w2 = find_degree2_vertex_outerplanar(extract_ksets(g, 3))
        assert g.degree(v) == 2 and set(g.neighbors(v)) == {w1, w2}


def test_outerplanar_six():
    for g in (gen_cycle(6), gen_fan(6), gen_cycle_chords(6, 3, 1)):
        g = relabelled(g, 4)
        assert reconstruct_outerplanar_six(extract_ksets(g, 3)).edge_set() == g.edge_set()
    with pytest.raises(ValueError):
        reconstruct_outerplanar_six(extract_ksets(gen_octahedron(), 3))


@pytest.mark.parametrize(
    "g",
    [
        gen_cycle(7),
        Graph.from_edges(8, [(i, (i + 1) % 8) for i in range(8)] + [(0, 4), (4, 6)]),
        gen_fan(6),
        gen_fan(12),
    ],
)
def test_outerplanar_examples(g):
    round_trip(reconstruct_outerplanar_2connected, g)


def test_outerplanar_needs_six():
    with pytest.raises(ValueError):
        reconstruct_outerplanar_2connected(extract_ksets(gen_cycle(5), 3))


@given(st.integers(6, 30), st.integers(0, 10**6), st.floats(0, 1))
def test_outerplanar_random(n, seed, frac):
    g = relabelled(gen_cycle_chords(n, int(frac * (n - 3)), seed), seed)
    if n <= 16:  # the outerplanarity oracle is exhaustive
        assert is_outerplanar(g)
    round_trip(reconstruct_outerplanar_2connected, g)


# ---------------------------------------------------------------- maximal planar


def test_separators():
    assert find_size3_separators(extract_ksets(gen_octahedron(), 3)) == []
    g = gen_apollonian_depth(2)
    certs = find_size3_separators(extract_ksets(g, 3))
    # every separating triangle of g: a triangle whose removal disconnects g
    want = []
    for s in combinations(range(g.n), 3):
        rest = [v for v in range(g.n) if v not in s]
        if all(g.has_edge(a, b) for a, b in combinations(s, 2)) and not g.induced(rest).is_connected():
            want.append(s)
    assert [c.separator for c in certs] == want
    for c in certs:
        a, b = c.components
        assert a and b and not a & b and a | b | set(c.separator) == set(range(g.n))


def test_separators_need_six_vertices():
    glued = Graph.from_edges(5, [p for p in combinations(range(5), 2) if p != (3, 4)])
    with pytest.raises(ValueError):
        find_size3_separators(extract_ksets(glued, 3))


def test_small_sides():
    g = gen_stacked(gen_octahedron(), (0, 1, 4), 1)
    side = small_planar_side(extract_ksets(g, 3), (0, 1, 4), {6})
    assert set(side.neighbors(6)) == {0, 1, 4}
    # an octahedron with its outer face stacked: the far side is a triangle
    octa = gen_octahedron()
    outer = next(f for f in combinations(range(6), 3) if all(octa.has_edge(a, b) for a, b in combinations(f, 2)))
    h = gen_stacked(octa, outer, 1)
    rest = frozenset(range(6)) - set(outer)
    side = small_planar_side(extract_ksets(h, 3), outer, rest)
    assert all(side.has_edge(a, b) for a, b in combinations(sorted(rest), 2))


def test_small_side_on_five_wheel():
    # triangulated 5-wheel glued onto a tetrahedron face: S degrees (5, 4, 3) towards the side
    for seed in range(5):
        g = relabelled(gen_stacked(gen_bipyramid(4), (0, 1, 4), 1), seed)
        round_trip(reconstruct_max_planar, gen_stacked(g, next(
            f for f in combinations(range(g.n), 3) if all(g.has_edge(a, b) for a, b in combinations(f, 2))
        ), 1))


@pytest.mark.parametrize("g", [gen_icosahedron(), gen_bipyramid(5), gen_bipyramid(8)])
def test_four_connected(g):
    g = relabelled(g, 1)
    assert reconstruct_max_planar_4connected(extract_ksets(g, 3)).edge_set() == g.edge_set()
    res = round_trip(reconstruct_max_planar, g)
    assert res.stats["four_connected"] == 1 and res.stats["split"] == 0


def test_four_connected_needs_seven():
    with pytest.raises(ValueError):
        reconstruct_max_planar_4connected(extract_ksets(gen_octahedron(), 3))
    with pytest.raises(ValueError):
        reconstruct_max_planar(extract_ksets(gen_octahedron(), 3))


def test_apollonian_uses_separators():
    res = round_trip(reconstruct_max_planar, gen_apollonian(9, 0))
    assert res.stats["split"] >= 1


def test_mixed_branches():
    g = relabelled(gen_stacked(gen_icosahedron(), (0, 1, 2), 3), 9)
    assert is_maximal_planar(g)
    res = round_trip(reconstruct_max_planar, g)
    assert res.stats["four_connected"] >= 1 and res.stats["split"] >= 1


@given(st.integers(7, 30), st.integers(0, 10**6))
def test_apollonian_random(n, seed):
    round_trip(reconstruct_max_planar, relabelled(gen_apollonian(n, seed), seed))


def test_wrong_promise_never_silently_unique():
    for g in (gen_petersen(), gen_cycle_chords(9, 3, 0)):
        kc = extract_ksets(g, 3)
        res = reconstruct_max_planar(kc)
        assert res.status == "inconsistent" or extract_ksets(res.graph, 3).same_sets(kc)


def test_separator_certificate_invariant():
    rng = random.Random(3)
    for _ in range(5):
        g = gen_apollonian(rng.randint(8, 14), rng.randint(0, 99))
        kc = extract_ksets(g, 3)
        for c in find_size3_separators(kc, only_triples=True):
            a, b = c.components
            for s in kc.sets:
                if set(s) & a and set(s) & b:
                    assert set(s) & set(c.separator)


def test_triples_only_inputs():
    kc = KSetCollection.build(4, list("abcd"), [(0, 1, 2, 3)])
    for fn in (reconstruct_triangle_free, reconstruct_outerplanar_2connected, reconstruct_max_planar):
        with pytest.raises(ValueError):
            fn(kc)
