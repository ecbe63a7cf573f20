"""Reconstruction from connected k-sets for k >= 3: trees, random-like graphs, high girth."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations

from .core import (
    BudgetExceeded,
    ConnectivityOracle,
    connected_mask,
    Graph,
    KSetCollection,
    ReconError,
    ReconstructionResult,
    extract_ksets,
    inconsistent,
    lift_ksets,
    to_mask,
    unique,
    verify_result,
)


class InfeasibleK(ReconError):
    """k is above the threshold at which trees stop being determined."""

    def __init__(self, msg: str, witnesses=()) -> None:
        super().__init__(msg)
        self.witnesses = list(witnesses)


class _Fail(Exception):
    pass


def _oracle(kc: KSetCollection, method: str | None = None) -> ConnectivityOracle:
    # lifting memoizes subsets and is fastest on small universes; the cover test scales better
    return ConnectivityOracle(kc, method=method or ("lift" if kc.n <= 12 else "cover"))


# ---------------------------------------------------------------- trees at the threshold


def tree_threshold(n: int) -> int:
    return -(-n // 2)


class _TreeK:
    """Leaf peeling with weighted bags, driven by connectivity queries of size >= k.

    Each live vertex r owns a bag: r plus the already resolved subtrees
    hanging from it. Leaves of the live tree are found by deleting their
    bag; their attachment is recovered per candidate parent with the two
    subset families. Once a bag outgrows n - k the remaining live tree is
    grown breadth-first from it.
    """

    def __init__(self, kc: KSetCollection, exhaustive: bool, budget: int, method: str | None) -> None:
        self.kc = kc
        self.n = kc.n
        self.k = kc.k
        self.q = _oracle(kc, method)
        self.exhaustive = exhaustive
        self.budget = budget
        self.queries = 0
        self.full = (1 << self.n) - 1

    def conn(self, mask: int) -> bool:
        if mask.bit_count() < self.k:
            raise AssertionError("query below k")
        self.queries += 1
        if self.queries > self.budget:
            raise BudgetExceeded(f"tree reconstruction exceeded {self.budget} queries")
        return self.q.connected_mask(mask)

    def run(self) -> set[tuple[int, int]]:
        n, k = self.n, self.k
        bag = {v: 1 << v for v in range(n)}
        edges: set[tuple[int, int]] = set()
        live = set(range(n))
        self.rounds = 0
        while len(live) > 2:
            big = [r for r in live if bag[r].bit_count() > n - k]
            if big:
                edges |= self._grow(big[0], live, bag)
                return edges
            self.rounds += 1
            leaves = sorted(r for r in live if self.conn(self.full & ~bag[r]))
            core = sorted(live - set(leaves))
            if not core:
                raise _Fail("every live vertex looks like a leaf")
            if len(core) == 1:
                claims = {core[0]: leaves}
            else:
                claims = {r: self._leaf_neighbours(r, leaves, bag) for r in core}
            owner: dict[int, int] = {}
            for r, ls in claims.items():
                for leaf in ls or ():
                    if leaf in owner:
                        raise _Fail(f"leaf {leaf} claimed by {owner[leaf]} and {r}")
                    owner[leaf] = r
            if not owner:
                raise _Fail("no leaf could be attached this round")
            for leaf, r in owner.items():
                edges.add((min(leaf, r), max(leaf, r)))
                bag[r] |= bag.pop(leaf)
                live.discard(leaf)
        if len(live) == 2:
            a, b = sorted(live)
            edges.add((a, b))
        return edges

    def _weight(self, ls, bag) -> int:
        m = 0
        for leaf in ls:
            m |= bag[leaf]
        return m

    def _subsets(self, leaves, largest_first: bool):
        sizes = range(len(leaves), -1, -1) if largest_first else range(len(leaves) + 1)
        for size in sizes:
            yield from combinations(leaves, size)

    def _leaf_neighbours(self, r: int, leaves: list[int], bag) -> list[int] | None:
        n, k = self.n, self.k
        # family one: G[bag(r) + bags(L')] is connected only for L' inside N(r)
        hits = []
        for sub in self._subsets(leaves, largest_first=True):
            m = bag[r] | self._weight(sub, bag)
            if m.bit_count() < k:
                continue
            if self.conn(m):
                hits.append(frozenset(sub))
                if not self.exhaustive:
                    break
        if hits:
            best = max(hits, key=len)
            if any(not h <= best for h in hits):
                raise _Fail(f"leaf sets for {r} are not nested")
            return sorted(best)
        # family two: deleting bag(r) + bags(L') leaves a connected rest only for L' covering N(r)
        hits = []
        for sub in self._subsets(leaves, largest_first=False):
            m = self.full & ~(bag[r] | self._weight(sub, bag))
            if m.bit_count() < k:
                continue
            if self.conn(m):
                hits.append(frozenset(sub))
                if not self.exhaustive:
                    break
        if hits:
            best = min(hits, key=len)
            if any(not best <= h for h in hits):
                raise _Fail(f"leaf sets for {r} are not nested")
            return sorted(best)
        return None

    def _grow(self, p: int, live: set, bag) -> set[tuple[int, int]]:
        """Breadth-first growth from a bag too heavy to delete; every query contains it.

        A live vertex y is at depth d when adding its bag to the first d - 1
        levels connects; its parent is the one vertex x at depth d - 1 with
        levels below x plus x plus y connected.
        """
        edges = set()
        levels = [[p]]
        below = bag[p]  # bags of levels 0 .. d-2
        reached = bag[p]  # bags of levels 0 .. d-1
        todo = sorted(live - {p})
        while todo:
            layer = [y for y in todo if self.conn(reached | bag[y])]
            if not layer:
                raise _Fail("live vertices unreachable from the heavy bag")
            prev = levels[-1]
            for y in layer:
                if len(levels) == 1:
                    parents = [p]
                else:
                    parents = [x for x in prev if self.conn(below | bag[x] | bag[y])]
                if len(parents) != 1:
                    raise _Fail(f"vertex {y} has {len(parents)} candidate parents")
                x = parents[0]
                edges.add((min(x, y), max(x, y)))
            if len(levels) > 1:
                below |= self._weight(prev, bag)
            reached |= self._weight(layer, bag)
            levels.append(layer)
            todo = [y for y in todo if y not in layer]
        return edges


def reconstruct_tree_ksets(
    kc: KSetCollection,
    mode: str = "greedy",
    budget: int = 2_000_000,
    witness_max_n: int = 8,
    method: str | None = None,
) -> ReconstructionResult:
    """Reconstruct a tree from its connected k-sets, for 2 <= k <= ceil(n/2).

    ``mode="exhaustive"`` evaluates every leaf subset of both families;
    ``mode="greedy"`` scans them in size order and stops at the first hit,
    which is the same set because the hits are nested.
    """
    if mode not in ("greedy", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    n, k = kc.n, kc.k
    if k > tree_threshold(n):
        wit = []
        if n <= witness_max_n:
            from .oracle import enumerate_consistent

            wit = enumerate_consistent(kc, filters=("tree",), cap=10).witnesses
        raise InfeasibleK(f"k={k} exceeds ceil(n/2)={tree_threshold(n)}; trees are not determined", wit)
    if n == 1:
        return unique(Graph.from_edges(kc.labels, []))
    if k == 2:
        g = Graph.from_edges(kc.labels, kc.sets)
        return unique(g) if g.is_connected() and len(kc) == n - 1 else inconsistent("edges do not form a tree")
    solver = _TreeK(kc, mode == "exhaustive", budget, method)
    try:
        edges = solver.run()
    except _Fail as exc:
        return inconsistent(str(exc), queries=solver.queries)
    g = Graph.from_edges(kc.labels, sorted(edges))
    if len(edges) != n - 1 or not g.is_connected():
        return inconsistent("recovered edges do not form a tree", queries=solver.queries)
    return unique(g, queries=solver.queries, rounds=solver.rounds)


# ---------------------------------------------------------------- random-like graphs


@dataclass
class RandomLikeReport:
    property1: bool
    property2: bool
    property3: str  # "verified" | "violated" | "sampled(N)" | "skipped"
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool | None:
        if not (self.property1 and self.property2) or self.property3 == "violated":
            return False
        return True if self.property3 == "verified" else None


def _slack(n: int) -> float:
    return 3 * math.sqrt(n * math.log2(n)) if n > 1 else 0.0


def is_random_like(g: Graph, budget: int = 200_000, trials: int = 2000, seed: int = 0) -> RandomLikeReport:
    """Check the three random-like properties; the third exactly only within ``budget``."""
    n = g.n
    if n < 2:
        return RandomLikeReport(False, False, "skipped")
    s = _slack(n)
    p1 = all(n / 2 - s <= g.degree(v) <= n / 2 + s for v in range(n))
    p2 = True
    for v in range(n):
        for w in range(n):
            if v != w:
                c = (g.adj[v] & ~g.adj[w]).bit_count()
                if not n / 4 - s <= c <= n / 4 + s:
                    p2 = False
                    break
        if not p2:
            break
    m = math.ceil(2 * math.log2(n))
    details = {"set_size": m}
    if 2 * m > n:
        return RandomLikeReport(p1, p2, "verified", details)  # no two disjoint sets that large

    def bad(a_mask: int) -> bool:
        reach = a_mask
        for v in range(n):
            if a_mask >> v & 1:
                reach |= g.adj[v]
        return (((1 << n) - 1) & ~reach).bit_count() >= m

    total = math.comb(n, m)
    details["subsets"] = total
    if total <= budget:
        for a in combinations(range(n), m):
            if bad(to_mask(a)):
                return RandomLikeReport(p1, p2, "violated", details)
        return RandomLikeReport(p1, p2, "verified", details)
    if trials <= 0:
        return RandomLikeReport(p1, p2, "skipped", details)
    rng = random.Random(seed)
    for _ in range(trials):
        if bad(to_mask(rng.sample(range(n), m))):
            return RandomLikeReport(p1, p2, "violated", details)
    return RandomLikeReport(p1, p2, f"sampled({trials})", details)


def random_like_window(n: int) -> float:
    """Largest k covered by the random-like guarantee (often below 2 for practical n)."""
    return n / 2 - 4 * math.sqrt(n * math.log2(n))


def no_information_size(n: int) -> int:
    """Set size above which a random-like graph has every set connected."""
    return math.ceil(n / 2 + 4 * math.sqrt(n * math.log2(n)))


def sample_large_sets_connected(g: Graph, size: int | None = None, trials: int = 500, seed: int = 0) -> bool:
    """Whether random vertex sets of the given size all induce connected subgraphs.

    ``size`` defaults to the no-information size, capped at n.
    """
    n = g.n
    size = min(n, no_information_size(n) if size is None else size)
    rng = random.Random(seed)
    for _ in range(trials if size < n else 1):
        if not connected_mask(g.adj, to_mask(rng.sample(range(n), size))):
            return False
    return True


def _grow_apart(v: int, seed: set[int], kc: KSetCollection) -> set[int]:
    """Grow a connected set that v cannot join, one vertex at a time."""
    k, n = kc.k, kc.n
    has = kc.contains_sorted
    grown = True
    while grown:
        grown = False
        for w in range(n):
            if w == v or w in seed:
                continue
            reach = any(has(tuple(sorted(u + (w,)))) for u in combinations(sorted(seed), k - 1))
            if not reach:
                continue
            if k == 2:
                apart = not has((min(w, v), max(w, v)))
            else:
                apart = not any(has(tuple(sorted(u + (w, v)))) for u in combinations(sorted(seed), k - 2))
            if apart:
                seed.add(w)
                grown = True
    return seed


def _separated(v: int, s, kc: KSetCollection) -> bool:
    # for connected S, S + v is disconnected iff no swap of one element for v is connected
    return not any(kc.contains_sorted(tuple(sorted(set(s) - {x} | {v}))) for x in s)


def _non_neighbours(v: int, kc: KSetCollection, every: bool) -> list[set[int]]:
    """Connected sets certified non-adjacent to v: the first one found, or one per component."""
    parts: list[set[int]] = []
    covered: set[int] = set()
    for s in kc.sets:
        if v in s or covered.intersection(s) or not _separated(v, s, kc):
            continue
        part = _grow_apart(v, set(s), kc)
        parts.append(part)
        covered |= part
        if not every:
            break
    return parts


def reconstruct_random_like(kc: KSetCollection, verify: bool = True, combine: bool = True) -> ReconstructionResult:
    """Per vertex, grow the largest connected set that v cannot join; its complement is N(v).

    With ``combine`` off this is the literal per-vertex procedure and any
    disagreement between the two ends of a pair is Inconsistent. With it
    on, every separable component is grown and a pair is a non-edge as
    soon as either end certifies it, which recovers graphs whose
    non-neighbourhoods fall apart at small n. The output is re-extracted
    unless ``verify`` is off, so a promise violation surfaces as
    Inconsistent instead of a wrong graph.
    """
    n = kc.n
    far: dict[int, set[int]] = {}
    split = 0
    for v in range(n):
        parts = _non_neighbours(v, kc, every=combine)
        if not parts:
            return inconsistent(f"no connected {kc.k}-set is separated from vertex {kc.labels[v]}")
        split += len(parts) > 1
        far[v] = set().union(*parts)
    edges = set()
    for v in range(n):
        for w in range(v + 1, n):
            a = w not in far[v]
            b = v not in far[w]
            if a != b and not combine:
                return inconsistent(f"vertices {kc.labels[v]} and {kc.labels[w]} disagree on their edge")
            if a and b:
                edges.add((v, w))
    g = Graph.from_edges(kc.labels, sorted(edges))
    res = unique(g, in_window=kc.k <= random_like_window(n), split_vertices=split)
    return verify_result(res, kc) if verify else res


# ---------------------------------------------------------------- high girth


@dataclass
class CycleCatalog:
    """Induced cycles keyed by length, each as a canonical cyclic vertex order.

    ``unordered`` holds (k+1)-cycles with nothing outside them to fix the
    order. The k-sets of such a cycle are every k-subset, whatever the order.
    """

    cycles: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)
    unordered: list[frozenset] = field(default_factory=list)

    def all(self) -> list[tuple[int, ...]]:
        return [c for ell in sorted(self.cycles) for c in self.cycles[ell]]

    def vertex_sets(self) -> list[frozenset]:
        return [frozenset(c) for c in self.all()] + list(self.unordered)

    @property
    def is_tree(self) -> bool:
        return not self.cycles and not self.unordered


def canonical_cycle(order) -> tuple[int, ...]:
    order = list(order)
    i = order.index(min(order))
    order = order[i:] + order[:i]
    if len(order) > 2 and order[-1] < order[1]:
        order = [order[0]] + order[1:][::-1]
    return tuple(order)


def _path_order(vertices, adjacent) -> list[int]:
    vs = sorted(vertices)
    nb = {v: [u for u in vs if u != v and adjacent(u, v)] for v in vs}
    ends = [v for v in vs if len(nb[v]) == 1]
    if len(vs) == 1:
        return vs
    if len(ends) != 2 or any(len(x) > 2 for x in nb.values()):
        raise _Fail("cycle vertices do not line up into a path")
    order = [ends[0]]
    while len(order) < len(vs):
        nxt = [u for u in nb[order[-1]] if u not in order]
        if len(nxt) != 1:
            raise _Fail("cycle vertices do not line up into a path")
        order.append(nxt[0])
    return order


def recognize_cycles(kc: KSetCollection, budget: int = 2_000_000) -> CycleCatalog:
    """Every induced cycle with its order, for graphs promised to have no cycle of length <= k."""
    k, n = kc.k, kc.n
    q = _oracle(kc)
    cat = CycleCatalog()
    found: list[int] = []
    level = kc
    seen = len(kc)
    for ell in range(k + 1, n + 1):
        level = lift_ksets(level)
        seen += len(level)
        if seen > budget:
            raise BudgetExceeded(f"cycle search exceeded {budget} connected sets")
        if not len(level):
            break
        for s in level.sets:
            m = to_mask(s)
            if any(c & ~m == 0 for c in found):
                continue
            if all(q.connected_mask(m & ~(1 << a)) for a in s):
                if ell == k + 1 and m == (1 << n) - 1:
                    cat.unordered.append(frozenset(s))
                    continue
                try:
                    order = _order_cycle(s, kc, q)
                except _Fail as exc:
                    raise ValueError(str(exc)) from None
                cat.cycles.setdefault(ell, []).append(canonical_cycle(order))
        found += [to_mask(c) for c in cat.cycles.get(ell, [])]
        found += [to_mask(c) for c in cat.unordered if len(c) == ell]
    for ell in cat.cycles:
        cat.cycles[ell].sort()
    return cat


def _order_cycle(cyc, kc: KSetCollection, q: ConnectivityOracle) -> list[int]:
    k = kc.k
    cm = to_mask(cyc)
    if len(cyc) >= k + 2:
        def adjacent(x, y):
            return q.connected_mask(cm & ~(1 << x) & ~(1 << y))

        anchor = cyc[0]
        rest = [v for v in cyc if v != anchor]
        # removing the anchor leaves a path whose ends are its neighbours
        return [anchor] + _path_order(rest, adjacent)
    # length k + 1: borrow an outside vertex with a single neighbour on the cycle
    outside = [w for w in range(kc.n) if not cm >> w & 1]
    for s in outside:
        subs = [m for m in combinations(cyc, k - 1) if kc.contains_sorted(tuple(sorted(m + (s,))))]
        if not subs:
            continue
        common = set(subs[0])
        for m in subs[1:]:
            common &= set(m)
        if len(common) != 1:
            raise _Fail("outside vertex does not single out one cycle vertex")
        (v,) = common
        base = cm | 1 << s

        def adjacent(x, y):
            return q.connected_mask(base & ~(1 << x) & ~(1 << y))

        rest = [u for u in cyc if u != v]
        return [v] + _path_order(rest, adjacent)
    raise _Fail("a shortest cycle has no outside neighbour to label it")


def reconstruct_high_girth(kc: KSetCollection, verify: bool = False) -> ReconstructionResult:
    """Reconstruct a connected graph promised to have no cycle of length <= k (k >= 4, n >= 2k - 1)."""
    k, n = kc.k, kc.n
    if k < 4:
        raise ValueError("high-girth reconstruction needs k >= 4")
    if n < 2 * k - 1:
        raise ValueError(f"high-girth reconstruction needs n >= 2k - 1 = {2 * k - 1}")
    try:
        cat = recognize_cycles(kc)
    except ValueError as exc:
        return inconsistent(str(exc))
    if cat.is_tree:
        res = reconstruct_tree_ksets(kc)
        return verify_result(res, kc) if verify else res
    q = _oracle(kc)
    edges: set[tuple[int, int]] = set()
    cycles = cat.all()
    for c in cycles:
        for i, v in enumerate(c):
            w = c[(i + 1) % len(c)]
            edges.add((min(v, w), max(v, w)))
    on_cycle = set().union(*map(set, cycles))
    try:
        for c in cycles:
            edges |= _hang_trees(c, on_cycle, edges, kc, q)
    except _Fail as exc:
        return inconsistent(str(exc))
    g = Graph.from_edges(kc.labels, sorted(edges))
    res = unique(g, cycles=len(cycles))
    return verify_result(res, kc) if verify else res


def _hang_trees(c, on_cycle: set, known: set, kc: KSetCollection, q: ConnectivityOracle) -> set[tuple[int, int]]:
    """Edges of the trees hanging off cycle c, grown layer by layer from the cycle.

    Cycle vertices of other cycles are probed at the first layer too, which
    catches bridges joining two cycles; they are not grown further.
    """
    k, n = kc.k, kc.n
    ell = len(c)
    arcs = [tuple(c[(i + j) % ell] for j in range(k - 1)) for i in range(ell)]
    cset = set(c)
    out = set()
    parent: dict[int, int] = {}
    dist: dict[int, int] = {v: 0 for v in c}
    layer = []
    for u in range(n):
        if u in cset:
            continue
        if u in on_cycle and any((min(u, v), max(u, v)) in known for v in c):
            continue
        hits = [a for a in arcs if kc.contains_sorted(tuple(sorted(a + (u,))))]
        if not hits:
            continue
        common = set(hits[0])
        for a in hits[1:]:
            common &= set(a)
        if len(common) != 1:
            raise _Fail(f"vertex {kc.labels[u]} attaches to the cycle ambiguously")
        (v,) = common
        out.add((min(u, v), max(u, v)))
        if u not in on_cycle:
            parent[u] = v
            dist[u] = 1
            layer.append(u)
    d = 1
    while layer:
        nxt = []
        for u in layer:
            anchor = _anchor(u, parent, c, k)
            m = to_mask(anchor)
            for x in range(n):
                if x in dist or x in on_cycle:
                    continue
                if q.connected_mask(m | 1 << x):
                    if x in parent:
                        raise _Fail(f"vertex {kc.labels[x]} hangs from two parents")
                    parent[x] = u
                    out.add((min(u, x), max(u, x)))
                    nxt.append(x)
        for x in nxt:
            dist[x] = d + 1
        layer = nxt
        d += 1
    return out


def _anchor(u: int, parent: dict[int, int], c, k: int) -> list[int]:
    """k - 1 connected known vertices in which u is the only one at its distance."""
    path = [u]
    while path[-1] in parent and len(path) < k - 1:
        path.append(parent[path[-1]])
    if len(path) < k - 1:
        root = path[-1]
        i = c.index(root)
        j = 1
        while len(path) < k - 1:
            path.append(c[(i + j) % len(c)])
            j += 1
    return path


# ---------------------------------------------------------------- threshold family


def gen_infmany(k: int, n: int) -> Graph:
    """A path on 2k vertices joined completely to a path on n vertices.

    Determined by its connected k-sets but not by its connected (k+1)-sets.
    """
    if k < 3 or n < 2 * k:
        raise ValueError("need k >= 3 and n >= 2k")
    p = 2 * k
    edges = [(i, i + 1) for i in range(p - 1)]
    edges += [(p + i, p + i + 1) for i in range(n - 1)]
    edges += [(a, p + b) for a in range(p) for b in range(n)]
    return Graph.from_edges(p + n, edges)


def infmany_twin(k: int, n: int) -> Graph:
    """gen_infmany(k, n) with the two middle vertices of the short path swapped."""
    g = gen_infmany(k, n)
    perm = list(range(g.n))
    perm[k - 1], perm[k] = perm[k], perm[k - 1]
    return Graph.from_edges(g.n, [(perm[a], perm[b]) for a, b in g.edges()])
