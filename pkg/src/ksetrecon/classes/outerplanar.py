"""2-connected outerplanar graphs from connected triples."""

from __future__ import annotations

from functools import lru_cache

from ..core import (
    Graph,
    KSetCollection,
    ReconstructionResult,
    extract_ksets,
    inconsistent,
    unique,
    verify_result,
)
from ..tree import _occurrences, place_by_profile


class _Fail(Exception):
    pass


class _Triples:
    """Mutable triple set over integer vertices with per-vertex incidence."""

    def __init__(self, vertices, triples) -> None:
        self.vertices = set(vertices)
        self.sets: set[tuple[int, int, int]] = set()
        self.at: dict[int, set] = {v: set() for v in self.vertices}
        for s in triples:
            self.add(s)

    def add(self, s) -> None:
        s = tuple(sorted(s))
        if s not in self.sets:
            self.sets.add(s)
            for v in s:
                self.at[v].add(s)

    def discard(self, s) -> None:
        if s in self.sets:
            self.sets.remove(s)
            for v in s:
                self.at[v].discard(s)

    def has(self, a: int, b: int, c: int) -> bool:
        return tuple(sorted((a, b, c))) in self.sets

    def remove_vertex(self, v: int) -> None:
        for s in list(self.at[v]):
            self.discard(s)
        del self.at[v]
        self.vertices.remove(v)


def _covering_pairs(v: int, tr: _Triples) -> list[tuple[int, int]]:
    """Pairs {w1, w2} such that every triple at v contains w1 or w2."""
    ts = sorted(tr.at[v])
    if not ts:
        return []
    out = set()
    a, b = (x for x in ts[0] if x != v)
    for w1 in (a, b):
        rest = [s for s in ts if w1 not in s]
        if not rest:
            continue  # every triple at v holds w1; cannot happen for 2-connected n >= 6
        common = set(rest[0]) - {v}
        for s in rest[1:]:
            common &= set(s)
        for w2 in common:
            out.add((min(w1, w2), max(w1, w2)))
    return sorted(out)


def _covered_by(pair: tuple[int, int], tr: _Triples) -> list[int]:
    w1, w2 = pair
    return [
        u for u in sorted(tr.vertices)
        if u not in pair and tr.at[u] and all(w1 in s or w2 in s for s in tr.at[u])
    ]


def _degree_two(tr: _Triples, skip=()) -> dict[int, tuple[int, int]]:
    """Every vertex recognised as having degree two, mapped to its neighbour pair."""
    out = {}
    for v in sorted(tr.vertices):
        if v in skip:
            continue
        for pair in _covering_pairs(v, tr):
            if _covered_by(pair, tr) == [v]:
                out[v] = pair
                break
    return out


def find_degree2_vertex_outerplanar(t: KSetCollection) -> tuple[int, int, int]:
    """Smallest vertex of degree two with its two neighbours, as ``(v, w1, w2)``.

    v qualifies with neighbours P when every triple at v meets P and no
    other vertex has that property for the same P.
    """
    tr = _Triples(range(t.n), t.sets)
    found = _degree_two(tr)
    if not found:
        raise ValueError("no vertex is recognisable as having degree two")
    v = min(found)
    return (v, *found[v])


def _first_degree_two(tr: _Triples):
    for v in sorted(tr.vertices):
        for pair in _covering_pairs(v, tr):
            if _covered_by(pair, tr) == [v]:
                return v, pair
    raise _Fail("no vertex is recognisable as having degree two")


def _is_degree_two_with(u: int, v: int, tr: _Triples):
    """u's neighbour pair if u has degree two and v is one of its neighbours."""
    for pair in _covering_pairs(u, tr):
        if v in pair and _covered_by(pair, tr) == [u]:
            return pair
    return None


@lru_cache(maxsize=None)
def six_vertex_profiles() -> tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...]], ...]:
    """(sorted occurrence profile, edge list) per 2-connected outerplanar class on six vertices.

    Computed from every hexagon dissection, reduced up to isomorphism.
    Raises if two classes share a profile, since placement relies on it.
    """
    from ..oracle import all_cycle_chord_graphs, iso_classes

    out = {}
    for g in iso_classes(all_cycle_chord_graphs(6)):
        occ = [0] * 6
        for s in extract_ksets(g, 3).sets:
            for v in s:
                occ[v] += 1
        key = tuple(sorted(occ))
        if key in out:
            raise AssertionError(f"two six-vertex classes share the profile {key}")
        out[key] = tuple(g.edges())
    return tuple(sorted(out.items()))


def _six(vertices, triples) -> list[tuple[int, int]]:
    key = tuple(sorted(_occurrences(vertices, triples).values()))
    for prof, edges in six_vertex_profiles():
        if prof == key:
            placed = place_by_profile(vertices, triples, edges, 6)
            if placed is None:
                break
            return placed
    raise _Fail("no six-vertex 2-connected outerplanar graph has these triples")


def reconstruct_outerplanar_six(t: KSetCollection) -> Graph:
    """The 2-connected outerplanar graph on exactly six vertices with triples ``t``."""
    if t.k != 3 or t.n != 6:
        raise ValueError("needs k = 3 and exactly six vertices")
    try:
        return Graph.from_edges(t.labels, _six(range(6), t.sets))
    except _Fail as exc:
        raise ValueError(str(exc)) from None


def _reduce(tr: _Triples, log: list) -> None:
    while len(tr.vertices) > 6:
        v, (w1, w2) = _first_degree_two(tr)
        merged = False
        for u, a in ((w1, w2), (w2, w1)):
            pair = _is_degree_two_with(u, v, tr)
            if pair is None:
                continue
            b = pair[0] if pair[1] == v else pair[1]
            # contract the edge uv into v: v now sits between a and b
            for s in list(tr.at[u]):
                tr.discard(s)
                if v not in s:
                    tr.add(tuple(v if x == u else x for x in s))
            tr.at.pop(u)
            tr.vertices.remove(u)
            tr.add((a, v, b))
            log.append(("merge", v, u, a, b))
            merged = True
            break
        if merged:
            continue
        others = [x for x in tr.vertices if x not in (v, w1, w2)]
        apart = any(
            not tr.has(w1, w2, x) and (tr.has(v, w1, x) or tr.has(v, w2, x)) for x in others
        )
        if apart:
            nbrs = [x for x in others if tr.has(v, w1, x) or tr.has(v, w2, x)]
        tr.remove_vertex(v)
        if apart:
            for x in nbrs:
                tr.add((w1, w2, x))
        log.append(("ear", v, w1, w2, apart))


def _replay(edges: set, log: list) -> set:
    out = set(edges)

    def e(a, b):
        return (min(a, b), max(a, b))

    for rec in reversed(log):
        if rec[0] == "merge":
            _, v, u, a, b = rec
            out.discard(e(v, b))
            out.add(e(v, u))
            out.add(e(u, b))
        else:
            _, v, w1, w2, apart = rec
            if apart:
                out.discard(e(w1, w2))
            out.add(e(v, w1))
            out.add(e(v, w2))
    return out


def reconstruct_outerplanar_2connected(t: KSetCollection, verify: bool = False) -> ReconstructionResult:
    """Reconstruct a 2-connected outerplanar graph on at least six vertices."""
    if t.k != 3:
        raise ValueError("outerplanar reconstruction needs k = 3")
    if t.n < 6:
        raise ValueError("2-connected outerplanar graphs are only determined from six vertices on")
    tr = _Triples(range(t.n), t.sets)
    log: list = []
    try:
        _reduce(tr, log)
        rest = sorted(tr.vertices)
        base = _six(rest, tr.sets)
    except _Fail as exc:
        return inconsistent(str(exc), steps=len(log))
    edges = _replay({(min(a, b), max(a, b)) for a, b in base}, log)
    res = unique(Graph.from_edges(t.labels, sorted(edges)), steps=len(log), log=log)
    return verify_result(res, t) if verify else res
