"""Tree reconstruction from connected triples by leaf stripping and path contraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .core import (
    Graph,
    KSetCollection,
    ReconstructionResult,
    ambiguous,
    extract_ksets,
    inconsistent,
    sort_ksets,
    unique,
    verify_result,
)

LEAF = "leaf"
DEG2 = "degree-two-or-three-with-leaf"
OTHER = "other"


class _Abort(Exception):
    pass


@dataclass
class VertexClass:
    kind: str
    witnesses: tuple[int, ...] = ()


@dataclass
class ReductionLog:
    """Removed leaves ``("leaf", v, nbr)`` and contracted paths ``("path", x1, [v1..vl], x2)``."""

    records: list[tuple] = field(default_factory=list)

    def replay(self, edges: set[tuple[int, int]]) -> set[tuple[int, int]]:
        out = set(edges)
        for rec in reversed(self.records):
            if rec[0] == "leaf":
                _, v, w = rec
                out.add((min(v, w), max(v, w)))
            else:
                _, x1, path, x2 = rec
                out.discard((min(x1, x2), max(x1, x2)))
                chain = [x1] + list(path) + [x2]
                for a, b in zip(chain, chain[1:]):
                    out.add((min(a, b), max(a, b)))
        return out


class VertexTripleIndex:
    """T_v for every live vertex, built from the three rotations of each triple.

    ``touches`` accumulates the number of triple records read, as a
    machine-independent work measure.
    """

    def __init__(self, vertices, triples, n: int, touches: list[int]) -> None:
        rot = []
        for a, b, c in triples:
            rot += [(a, b, c), (b, c, a), (c, a, b)]
        touches[0] += len(rot)
        rot = sort_ksets(rot, n)
        touches[0] += len(rot)
        self.T: dict[int, list[tuple[int, int, int]]] = {v: [] for v in vertices}
        for r in rot:
            self.T.setdefault(r[0], []).append(r)
        self.touches = touches
        self.vertices = list(vertices)
        self._dom: dict[int, list[int]] | None = None
        self._dominates_some: set[int] | None = None

    def scan(self, v: int) -> list[tuple[int, int, int]]:
        tv = self.T[v]
        self.touches[0] += len(tv)
        return tv

    def dominators(self, u: int) -> list[int]:
        tu = self.T[u]
        if not tu:
            return []
        _, a, b = tu[0]
        return [w for w in (a, b) if all(w in t for t in self.scan(u))]

    def _compute_domination(self) -> None:
        self._dom = {u: self.dominators(u) for u in self.vertices}
        self._dominates_some = {w for ws in self._dom.values() for w in ws}

    def dom(self, u: int) -> list[int]:
        if self._dom is None:
            self._compute_domination()
        return self._dom[u]  # type: ignore[index]

    def dominates_some(self, v: int) -> bool:
        if self._dom is None:
            self._compute_domination()
        return v in self._dominates_some  # type: ignore[operator]

    def covering_pairs(self, v: int) -> list[tuple[int, int | None]]:
        """Pairs (w1, w2) such that every triple of T_v meets {w1, w2}.

        w1 ranges over the two other vertices of the first triple of T_v;
        w2 over the two other vertices of the first triple avoiding w1.
        A None w2 marks the vacuous case where every triple contains w1.
        """
        tv = self.T[v]
        if not tv:
            return []
        out: list[tuple[int, int | None]] = []
        _, a, b = tv[0]
        for w1 in (a, b):
            rest = [t for t in self.scan(v) if w1 not in t]
            if not rest:
                out.append((w1, None))
                continue
            _, c, d = rest[0]
            for w2 in (c, d):
                self.touches[0] += len(rest)
                if all(w2 in t for t in rest):
                    out.append((w1, w2))
        return out


def dominates(v: int, u: int, index: VertexTripleIndex) -> bool:
    """True iff v lies in every triple containing u."""
    tu = index.T.get(u, [])
    if not tu:
        raise ValueError("T_u is empty")
    return all(v in t for t in index.scan(u))


def classify_vertex(v: int, index: VertexTripleIndex) -> VertexClass:
    dom = index.dom(v)
    if dom and not index.dominates_some(v):
        return VertexClass(LEAF, tuple(dom))
    pairs = index.covering_pairs(v)
    if pairs:
        # near a path end several pairs cover T_v; true neighbours occur in more of its triples
        occ: dict[int, int] = {}
        for t in index.T[v]:
            for u in t[1:]:
                occ[u] = occ.get(u, 0) + 1
        w1, w2 = max(pairs, key=lambda p: occ[p[0]] + (occ[p[1]] if p[1] is not None else 0))
        return VertexClass(DEG2, (w1,) if w2 is None else (w1, w2))
    return VertexClass(OTHER)


def leaf_neighbour(v: int, index: VertexTripleIndex) -> int:
    """The neighbour of a leaf: its single dominator, or the dominated one of two."""
    dom = index.dom(v)
    if len(dom) == 1:
        return dom[0]
    if len(dom) == 2:
        w, w2 = dom
        w_under = w2 in index.dom(w)
        w2_under = w in index.dom(w2)
        if w_under and not w2_under:
            return w
        if w2_under and not w_under:
            return w2
    raise _Abort(f"cannot place leaf {v}")


def _leaves(index: VertexTripleIndex) -> dict[int, int]:
    out = {}
    for v in index.vertices:
        if classify_vertex(v, index).kind == LEAF:
            out[v] = leaf_neighbour(v, index)
    return out


def _degree_two_neighbours(v: int, index: VertexTripleIndex, leaf_of: dict[int, int], present) -> tuple[int, int]:
    attached = [u for u, w in leaf_of.items() if w == v]
    if len(attached) > 1:
        raise _Abort(f"vertex {v} carries two leaves but should have degree two")
    if attached:
        q = attached[0]
        tq = index.scan(q)
        if len(tq) != 1:
            raise _Abort(f"leaf {q} next to a degree-two vertex lies in {len(tq)} triples")
        _, a, b = tq[0]
        p = b if a == v else a
        return p, q
    found = set()
    for w1, w2 in index.covering_pairs(v):
        if w2 is not None and present(v, w1, w2):
            found.add((min(w1, w2), max(w1, w2)))
    if len(found) != 1:
        raise _Abort(f"no unique neighbour pair for {v}")
    return next(iter(found))


def _keep_budget(candidates, alive: int, floor: int = 5) -> list[int]:
    """Removable vertices after retaining the smallest ones so that ``floor`` remain."""
    cands = sorted(candidates)
    allowed = max(0, alive - floor)
    if len(cands) <= allowed:
        return cands
    return cands[len(cands) - allowed:]


@lru_cache(maxsize=None)
def five_vertex_shapes() -> tuple[tuple[tuple[int, ...], tuple[tuple[int, int], ...]], ...]:
    """(sorted occurrence profile, edge list) for each unlabelled tree on five vertices.

    Profiles are computed by extracting the triples of one representative
    per isomorphism class found among all labelled trees.
    """
    from .oracle import enumerate_trees

    shapes = {}
    for g in enumerate_trees(5):
        occ = [0] * 5
        for s in extract_ksets(g, 3).sets:
            for v in s:
                occ[v] += 1
        key = tuple(sorted(occ))
        shapes.setdefault(key, tuple(g.edges()))
    return tuple(sorted(shapes.items()))


def _occurrences(vertices, triples) -> dict[int, int]:
    occ = {v: 0 for v in vertices}
    for s in triples:
        for v in s:
            occ[v] += 1
    return occ


def place_by_profile(vertices, triples, template_edges, n_template: int):
    """Map template vertices to labels with matching occurrence counts and identical triples.

    Candidates are tried class by class (vertices sharing an occurrence
    count permute among themselves); returns the placed edge list or None.
    """
    verts = list(vertices)
    occ = _occurrences(verts, triples)
    t_occ = [0] * n_template
    t_adj = [0] * n_template
    for a, b in template_edges:
        t_adj[a] |= 1 << b
        t_adj[b] |= 1 << a
    tg = Graph.from_edges(n_template, template_edges)
    t_triples = extract_ksets(tg, 3).sets
    for s in t_triples:
        for v in s:
            t_occ[v] += 1
    target = {tuple(sorted(s)) for s in triples}
    classes: dict[int, tuple[list[int], list[int]]] = {}
    for v in verts:
        classes.setdefault(occ[v], ([], []))[0].append(v)
    for i in range(n_template):
        classes.setdefault(t_occ[i], ([], []))[1].append(i)
    for labs, slots in classes.values():
        if len(labs) != len(slots):
            return None
    groups = list(classes.values())

    def rec(gi: int, mapping: dict[int, int]):
        if gi == len(groups):
            placed = {tuple(sorted(mapping[x] for x in s)) for s in t_triples}
            if placed == target:
                return [(mapping[a], mapping[b]) for a, b in template_edges]
            return None
        labs, slots = groups[gi]
        for perm in permutations(labs):
            m2 = dict(mapping)
            m2.update(zip(slots, perm))
            res = rec(gi + 1, m2)
            if res is not None:
                return res
        return None

    return rec(0, {})


def base_case_five(vertices, triples) -> list[tuple[int, int]] | None:
    """Edges of the tree on five vertices with the given triples, or None if no shape fits."""
    occ = _occurrences(vertices, triples)
    key = tuple(sorted(occ.values()))
    for prof, edges in five_vertex_shapes():
        if prof == key:
            return place_by_profile(vertices, triples, edges, 5)
    return None


def _small_cases(t: KSetCollection) -> ReconstructionResult:
    n, labels = t.n, t.labels
    if n == 1:
        return unique(Graph.from_edges(labels, []))
    if n == 2:
        return unique(Graph.from_edges(labels, [(0, 1)]))
    if n == 3:
        if t.sets != ((0, 1, 2),):
            return inconsistent("a tree on three vertices has exactly one triple")
        paths = [
            Graph.from_edges(labels, [(0, 1), (1, 2)]),
            Graph.from_edges(labels, [(0, 1), (0, 2)]),
            Graph.from_edges(labels, [(0, 2), (1, 2)]),
        ]
        return ambiguous(paths, "the missing edge of a 3-vertex tree is undetermined")
    occ = _occurrences(range(4), t.sets)
    if len(t.sets) == 3:
        centre = [v for v in range(4) if occ[v] == 3]
        if len(centre) != 1:
            return inconsistent("three triples on four vertices but no common vertex")
        c = centre[0]
        return unique(Graph.from_edges(labels, [(c, v) for v in range(4) if v != c]))
    if len(t.sets) == 2:
        mids = [v for v in range(4) if occ[v] == 2]
        ends = [v for v in range(4) if occ[v] == 1]
        if len(mids) != 2 or len(ends) != 2:
            return inconsistent("two triples on four vertices must share a pair")
        x, y = ends
        m1, m2 = mids
        return ambiguous(
            [
                Graph.from_edges(labels, [(x, m1), (m1, m2), (m2, y)]),
                Graph.from_edges(labels, [(x, m2), (m2, m1), (m1, y)]),
            ],
            "the order of the two middle vertices of a 4-vertex path is undetermined",
        )
    return inconsistent("no tree on four vertices has these triples")


def reconstruct_tree(t: KSetCollection, verify: bool = False) -> ReconstructionResult:
    """Reconstruct a tree from its connected triples (input promised to come from a tree)."""
    if t.k != 3:
        raise ValueError("tree reconstruction needs k = 3")
    if t.n <= 4:
        res = _small_cases(t)
        return verify_result(res, t) if verify else res
    touches = [0]
    try:
        edges, log, rounds = _reduce(t, touches)
    except _Abort as exc:
        return inconsistent(str(exc), touches=touches[0])
    g = Graph.from_edges(t.labels, sorted(edges))
    res = unique(g, touches=touches[0], rounds=rounds, log=log)
    return verify_result(res, t) if verify else res


def _reduce(t: KSetCollection, touches: list[int]):
    n = t.n
    alive = set(range(n))
    triples = list(t.sets)
    log = ReductionLog()
    rounds = [n]

    def strip(remove, nbr_of):
        nonlocal triples
        rm = set(remove)
        for v in remove:
            log.records.append(("leaf", v, nbr_of[v]))
        touches[0] += len(triples)
        triples = [s for s in triples if not (s[0] in rm or s[1] in rm or s[2] in rm)]
        alive.difference_update(rm)

    while len(alive) > 5:
        before = len(alive)
        idx = VertexTripleIndex(sorted(alive), triples, n, touches)
        leaf_of = _leaves(idx)
        second = [v for v in idx.vertices if v not in leaf_of and idx.covering_pairs(v)]
        strip(_keep_budget(leaf_of, len(alive)), leaf_of)

        if len(alive) > 5 and second:
            idx2 = VertexTripleIndex(sorted(alive), triples, n, touches)
            leaf2 = _leaves(idx2)
            live_second = [v for v in second if v in alive]
            W = [v for v in live_second if v not in leaf2]
            present_set = set(triples)

            def present(a, b, c):
                return tuple(sorted((a, b, c))) in present_set

            nbrs = {v: _degree_two_neighbours(v, idx2, leaf2, present) for v in W}
            contract = set(_keep_budget(W, len(alive)))
            runs = _runs(contract, nbrs)
            if runs:
                triples = _contract(triples, runs, touches)
            for run, x1, x2 in runs:
                log.records.append(("path", x1, run, x2))
                alive.difference_update(run)

            if len(alive) > 5:
                idx3 = VertexTripleIndex(sorted(alive), triples, n, touches)
                late = [v for v in live_second if v in alive and v not in nbrs]
                leaf3 = {v: leaf_neighbour(v, idx3) for v in late if classify_vertex(v, idx3).kind == LEAF}
                strip(_keep_budget(leaf3, len(alive)), leaf3)
        if len(alive) == before:
            raise _Abort("reduction made no progress; input is not the triple set of a tree")
        rounds.append(len(alive))

    verts = sorted(alive)
    if len(verts) < 5:
        raise _Abort("reduction fell below five vertices")
    base = base_case_five(verts, triples)
    if base is None:
        raise _Abort("five-vertex remainder matches no tree")
    touches[0] += len(triples)
    edges = {(min(a, b), max(a, b)) for a, b in base}
    return log.replay(edges), log, rounds


def _runs(contract: set[int], nbrs: dict[int, tuple[int, int]]):
    """Maximal paths inside ``contract`` with their outside end neighbours."""
    inside = {v: [u for u in nbrs[v] if u in contract] for v in contract}
    for v in contract:
        for u in inside[v]:
            if v not in nbrs[u]:
                raise _Abort(f"asymmetric neighbours between {v} and {u}")
    seen: set[int] = set()
    out = []
    for v in sorted(contract):
        if v in seen:
            continue
        prev, cur = None, v
        for _ in range(len(contract) + 1):
            nxt = [u for u in inside[cur] if u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            if cur == v:
                raise _Abort("degree-two vertices close a cycle")
        run = [cur]
        prev = None
        while True:
            nxt = [u for u in inside[run[-1]] if u != prev]
            if not nxt:
                break
            prev = run[-1]
            run.append(nxt[0])
        outs_start = [u for u in nbrs[run[0]] if u not in contract]
        outs_end = [u for u in nbrs[run[-1]] if u not in contract]
        if len(run) == 1:
            x1, x2 = outs_start
        else:
            if len(outs_start) != 1 or len(outs_end) != 1:
                raise _Abort("malformed path component")
            x1, x2 = outs_start[0], outs_end[0]
        seen.update(run)
        out.append((run, x1, x2))
    return out


def _contract(triples, runs, touches):
    """Triples after every run between x1 and x2 is replaced by the edge x1x2.

    A triple u x v1 at a run end v1 (outside neighbour x) becomes u x y,
    where y is the outside neighbour at the other end of that run; when u
    is itself the end of a second run hanging off x, it is replaced by that
    run's far neighbour too. Every other triple meeting a run is dropped.
    """
    far: dict[tuple[int, int], int] = {}
    member: dict[int, int] = {}
    for r, (run, x1, x2) in enumerate(runs):
        for v in run:
            member[v] = r
        far[(run[0], x1)] = x2
        far[(run[-1], x2)] = x1
    out = set()
    touches[0] += len(triples)
    for s in triples:
        hit = [v for v in s if v in member]
        if not hit:
            out.add(s)
            continue
        rest = [v for v in s if v not in member]
        if len(hit) == 1 and len(rest) == 2:
            h = hit[0]
            for x, u in (rest, rest[::-1]):
                y = far.get((h, x))
                if y is not None and y != u:
                    out.add(tuple(sorted((u, x, y))))
        elif len(hit) == 2 and len(rest) == 1 and member[hit[0]] != member[hit[1]]:
            x = rest[0]
            y1, y2 = far.get((hit[0], x)), far.get((hit[1], x))
            if y1 is not None and y2 is not None:
                out.add(tuple(sorted((y1, x, y2))))
    return sorted(out)
