"""Brute-force ground truth: exhaustive enumeration, class predicates, generators."""

from __future__ import annotations

import heapq
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .core import (
    Graph,
    KSetCollection,
    ReconError,
    bits,
    components_mask,
    connected_mask,
    extract_ksets,
    to_mask,
)


class OracleSizeError(ReconError):
    pass


# ---------------------------------------------------------------- predicates


def is_connected(g: Graph) -> bool:
    return g.is_connected()


def is_tree(g: Graph) -> bool:
    return g.is_connected() and g.edge_count() == g.n - 1


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges():
        if g.adj[u] & g.adj[v]:
            return False
    return True


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests (BFS from every vertex)."""
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for u in queue:
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def biconnected_blocks(g: Graph) -> list[frozenset]:
    """Vertex sets of the blocks (maximal 2-connected pieces and bridges)."""
    disc = [-1] * g.n
    low = [0] * g.n
    blocks: list[frozenset] = []
    stack: list[tuple[int, int]] = []
    timer = [0]

    def dfs(u: int, parent: int) -> None:
        disc[u] = low[u] = timer[0]
        timer[0] += 1
        for w in g.neighbors(u):
            if disc[w] == -1:
                stack.append((u, w))
                dfs(w, u)
                low[u] = min(low[u], low[w])
                if low[w] >= disc[u]:
                    verts = set()
                    while True:
                        e = stack.pop()
                        verts.update(e)
                        if e == (u, w):
                            break
                    blocks.append(frozenset(verts))
            elif w != parent and disc[w] < disc[u]:
                stack.append((u, w))
                low[u] = min(low[u], disc[w])

    for v in range(g.n):
        if disc[v] == -1:
            if g.degree(v) == 0:
                blocks.append(frozenset([v]))
            else:
                dfs(v, -1)
    return blocks


def is_two_connected(g: Graph) -> bool:
    if g.n < 3 or not g.is_connected():
        return False
    full = (1 << g.n) - 1
    return all(connected_mask(g.adj, full & ~(1 << v)) for v in range(g.n))


def _hamiltonian_cycles(g: Graph, verts: Sequence[int]) -> Iterable[list[int]]:
    vs = set(verts)
    start = min(vs)
    path = [start]
    used = {start}

    def rec() -> Iterable[list[int]]:
        u = path[-1]
        if len(path) == len(vs):
            if g.has_edge(u, start) and path[1] < path[-1]:
                yield list(path)
            return
        for w in g.neighbors(u):
            if w in vs and w not in used:
                path.append(w)
                used.add(w)
                yield from rec()
                path.pop()
                used.discard(w)

    yield from rec()


def _chords_cross(order: dict[int, int], e: tuple[int, int], f: tuple[int, int]) -> bool:
    a, b = sorted((order[e[0]], order[e[1]]))
    c, d = sorted((order[f[0]], order[f[1]]))
    return a < c < b < d or c < a < d < b


def is_outerplanar(g: Graph, max_n: int = 16) -> bool:
    """Each block of size at least 3 has a Hamiltonian cycle whose chords do not cross."""
    if g.n > max_n:
        raise OracleSizeError(f"outerplanarity search capped at n={max_n}")
    if g.n >= 2 and g.edge_count() > 2 * g.n - 3:
        return False
    for block in biconnected_blocks(g):
        if len(block) < 3:
            continue
        inner = [(u, v) for u, v in g.edges() if u in block and v in block]
        if len(inner) > 2 * len(block) - 3:
            return False
        ok = False
        for cyc in _hamiltonian_cycles(g, sorted(block)):
            order = {v: i for i, v in enumerate(cyc)}
            ring = {frozenset((cyc[i], cyc[(i + 1) % len(cyc)])) for i in range(len(cyc))}
            chords = [e for e in inner if frozenset(e) not in ring]
            if all(not _chords_cross(order, e, f) for e, f in combinations(chords, 2)):
                ok = True
                break
        if not ok:
            return False
    return True


def is_outerplanar_2connected(g: Graph) -> bool:
    return is_two_connected(g) and is_outerplanar(g)


def has_k4_minor(g: Graph) -> bool:
    """Series-parallel reduction: delete degree <= 1, suppress degree 2, merge parallels."""
    nbrs = {v: set(g.neighbors(v)) for v in range(g.n)}
    changed = True
    while changed and nbrs:
        changed = False
        for v in list(nbrs):
            d = len(nbrs[v])
            if d <= 1:
                for w in nbrs[v]:
                    nbrs[w].discard(v)
                del nbrs[v]
                changed = True
            elif d == 2:
                a, b = nbrs[v]
                nbrs[a].discard(v)
                nbrs[b].discard(v)
                nbrs[a].add(b)
                nbrs[b].add(a)
                del nbrs[v]
                changed = True
    return bool(nbrs)


def _planar_block(adj: dict[int, set[int]]) -> bool:
    """Path-addition embedding test for a 2-connected graph given as adjacency sets."""
    verts = list(adj)
    m = sum(len(s) for s in adj.values()) // 2
    if len(verts) <= 4:
        return True
    if m > 3 * len(verts) - 6:
        return False
    # initial cycle by DFS from the smallest vertex
    start = min(verts)
    parent = {start: None}
    order = [start]
    cycle = None
    stack = [(start, iter(sorted(adj[start])))]
    depth = {start: 0}
    while stack and cycle is None:
        u, it = stack[-1]
        for w in it:
            if w not in parent:
                parent[w] = u
                depth[w] = depth[u] + 1
                stack.append((w, iter(sorted(adj[w]))))
                order.append(w)
                break
            if w != parent[u] and depth[w] < depth[u]:
                cycle = [u]
                x = u
                while x != w:
                    x = parent[x]
                    cycle.append(x)
                break
        else:
            stack.pop()
    assert cycle is not None
    emb_v = set(cycle)
    emb_e = {frozenset((cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}
    faces = [list(cycle), list(reversed(cycle))]
    while len(emb_e) < m:
        fragments = []
        for u in emb_v:
            for w in adj[u]:
                if w in emb_v and u < w and frozenset((u, w)) not in emb_e:
                    fragments.append(({u, w}, [u, w]))
        rest = set(verts) - emb_v
        seen: set[int] = set()
        for r in sorted(rest):
            if r in seen:
                continue
            comp = {r}
            queue = [r]
            for x in queue:
                for y in adj[x]:
                    if y in rest and y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            att = {y for x in comp for y in adj[x] if y in emb_v}
            fragments.append((att, comp))
        best = None
        for att, body in fragments:
            admissible = [i for i, f in enumerate(faces) if att <= set(f)]
            if not admissible:
                return False
            if best is None or len(admissible) < len(best[2]):
                best = (att, body, admissible)
        att, body, admissible = best
        if isinstance(body, list):
            path = body
        else:
            a = min(att)
            c = min(y for y in adj[a] if y in body)
            prev = {c: None}
            queue = [c]
            end = None
            for x in queue:
                targets = [y for y in adj[x] if y in emb_v and y != a]
                if targets:
                    end = (x, min(targets))
                    break
                for y in sorted(adj[x]):
                    if y in body and y not in prev:
                        prev[y] = x
                        queue.append(y)
            assert end is not None
            inner = []
            x = end[0]
            while x is not None:
                inner.append(x)
                x = prev[x]
            path = [a] + list(reversed(inner)) + [end[1]]
        face = faces.pop(admissible[0])
        a, b = path[0], path[-1]
        i, j = face.index(a), face.index(b)
        L = len(face)
        ab = [face[(i + t) % L] for t in range((j - i) % L + 1)]
        ba = [face[(j + t) % L] for t in range((i - j) % L + 1)]
        mid = path[1:-1]
        faces.append(ab + list(reversed(mid)))
        faces.append(ba + mid)
        emb_v.update(path)
        for s in range(len(path) - 1):
            emb_e.add(frozenset((path[s], path[s + 1])))
    return True


def is_planar(g: Graph) -> bool:
    if g.n >= 3 and g.edge_count() > 3 * g.n - 6:
        return False
    for block in biconnected_blocks(g):
        if len(block) < 5:
            continue
        adj = {v: {w for w in g.neighbors(v) if w in block} for v in block}
        if not _planar_block(adj):
            return False
    return True


def is_maximal_planar(g: Graph) -> bool:
    return g.n >= 3 and g.is_connected() and g.edge_count() == 3 * g.n - 6 and is_planar(g)


def induced_cycles(g: Graph, max_n: int = 12) -> list[frozenset]:
    """Vertex sets of all induced cycles (brute force over subsets)."""
    if g.n > max_n:
        raise OracleSizeError(f"induced-cycle search capped at n={max_n}")
    out = []
    for size in range(3, g.n + 1):
        for s in combinations(range(g.n), size):
            m = to_mask(s)
            if all((g.adj[v] & m).bit_count() == 2 for v in s) and connected_mask(g.adj, m):
                out.append(frozenset(s))
    return out


PREDICATES: dict[str, Callable[[Graph], bool]] = {
    "connected": is_connected,
    "tree": is_tree,
    "triangle-free": is_triangle_free,
    "outerplanar": is_outerplanar,
    "outerplanar-2connected": is_outerplanar_2connected,
    "maximal-planar": is_maximal_planar,
}


def predicate(name: str) -> Callable[[Graph], bool]:
    """Look up a class predicate; ``girth>g`` and ``random-like`` are parametrised forms."""
    if name in PREDICATES:
        return PREDICATES[name]
    if name.startswith("girth>"):
        bound = int(name[len("girth>"):])
        return lambda g: girth(g) > bound
    if name == "random-like":
        from .ksets import is_random_like

        def check(g: Graph) -> bool:
            rep = is_random_like(g)
            return rep.property1 and rep.property2 and rep.property3 != "violated"

        return check
    raise ValueError(f"unknown class predicate {name!r}")


# ---------------------------------------------------------------- enumeration


@dataclass
class OracleReport:
    count: int
    witnesses: list[Graph]
    complete: bool
    class_counts: dict[str, int] = field(default_factory=dict)
    nodes: int = 0

    def format(self) -> str:
        lines = [f"count {self.count}" + ("" if self.complete else " partial")]
        for name, c in sorted(self.class_counts.items()):
            lines.append(f"# {name} {c}")
        for g in self.witnesses:
            lines.append(" ".join(f"{a}-{b}" for a, b in g.label_edges()))
        return "\n".join(lines) + "\n"


DEFAULT_MAX_N = {2: 9, 3: 9, 4: 12}


class _Search:
    def __init__(self, kc: KSetCollection) -> None:
        n, k = kc.n, kc.k
        self.n, self.k = n, k
        self.pairs = [(i, j) for j in range(n) for i in range(j)]
        forced_off = set()
        if k == 3 and n >= 3:
            seen = set()
            for a, b, c in kc.sets:
                seen.update(((a, b), (a, c), (b, c)))
            covered = {v for s in kc.sets for v in s}
            # a pair with no common triple is a non-edge unless both ends are in no triple
            forced_off = {
                e for e, p in enumerate(self.pairs)
                if p not in seen and (p[0] in covered or p[1] in covered)
            }
        self.free = [e for e in range(len(self.pairs)) if e not in forced_off]
        self.free.reverse()  # highest bit first gives ascending bitmask order
        self.checks: dict[int, list[tuple[int, bool]]] = {}
        for e in self.free:
            i, j = self.pairs[e]
            others = [v for v in range(n) if v != i and v != j]
            lst = []
            for rest in combinations(others, k - 2):
                s = tuple(sorted((i, j) + rest))
                lst.append((to_mask(s), kc.contains_sorted(s)))
            self.checks[e] = lst

    def run(self, prefix: Sequence[bool], on_leaf, budget: int | None) -> tuple[int, bool]:
        n = self.n
        lo = [0] * n  # definite edges
        hi = [0] * n  # definite plus undecided
        for e in self.free:
            i, j = self.pairs[e]
            hi[i] |= 1 << j
            hi[j] |= 1 << i
        nodes = 0
        free = self.free

        def consistent(e: int) -> bool:
            for m, want in self.checks[e]:
                if want:
                    if not connected_mask(hi, m):
                        return False
                elif connected_mask(lo, m):
                    return False
            return True

        class _Stop(Exception):
            pass

        def rec(depth: int) -> None:
            nonlocal nodes
            nodes += 1
            if budget is not None and nodes > budget:
                raise _Stop
            if depth == len(free):
                on_leaf(lo)
                return
            e = free[depth]
            i, j = self.pairs[e]
            choices = (prefix[depth],) if depth < len(prefix) else (False, True)
            for val in choices:
                if val:
                    lo[i] |= 1 << j
                    lo[j] |= 1 << i
                else:
                    hi[i] &= ~(1 << j)
                    hi[j] &= ~(1 << i)
                try:
                    if consistent(e):
                        rec(depth + 1)
                finally:
                    if val:
                        lo[i] &= ~(1 << j)
                        lo[j] &= ~(1 << i)
                    else:
                        hi[i] |= 1 << j
                        hi[j] |= 1 << i

        try:
            rec(0)
        except _Stop:
            return nodes, False
        return nodes, True


def _run_part(args):
    kc, prefix, filters, cap, budget = args
    search = _Search(kc)
    found = []

    def leaf(lo):
        found.append(tuple(lo))

    nodes, complete = search.run(prefix, leaf, budget)
    return found, nodes, complete


def enumerate_consistent(
    kc: KSetCollection,
    filters: Sequence[str] = (),
    cap: int = 50,
    budget: int | None = 5_000_000,
    max_n: int | None = None,
    jobs: int = 1,
) -> OracleReport:
    """All simple graphs on the universe whose connected k-sets equal ``kc``.

    The count is taken after applying every filter; per-filter counts are
    reported alongside. Witnesses are listed in ascending edge-bitmask order.
    """
    limit = max_n if max_n is not None else DEFAULT_MAX_N.get(kc.k, 10)
    if kc.n > limit:
        raise OracleSizeError(f"oracle bound n <= {limit} exceeded (n={kc.n})")
    preds = [(name, predicate(name)) for name in filters]
    search = _Search(kc)
    depth = 0
    if jobs > 1:
        depth = min(len(search.free), max(1, (jobs - 1).bit_length() + 1))
    prefixes = [[bool(x >> (depth - 1 - t) & 1) for t in range(depth)] for x in range(1 << depth)]
    args = [(kc, p, filters, cap, budget) for p in prefixes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_part, args))
    else:
        parts = [_run_part(a) for a in args]
    count = 0
    witnesses: list[Graph] = []
    class_counts = {name: 0 for name, _ in preds}
    complete = True
    nodes = 0
    adj_seen = []
    for found, nd, comp in parts:
        nodes += nd
        complete &= comp
        adj_seen.extend(found)
    pos_free = [e for e in reversed(search.free)]

    def key(adj):
        m = 0
        for e in pos_free:
            i, j = search.pairs[e]
            if adj[i] >> j & 1:
                m |= 1 << e
        return m

    adj_seen.sort(key=key)
    for adj in adj_seen:
        g = Graph(kc.labels, adj)
        passed = True
        for name, p in preds:
            if p(g):
                class_counts[name] += 1
            else:
                passed = False
        if passed:
            count += 1
            if len(witnesses) < cap:
                assert extract_ksets(g, kc.k).same_sets(kc), "oracle witness failed re-extraction"
                witnesses.append(g)
    return OracleReport(count, witnesses, complete, class_counts, nodes)


def enumerate_trees(n: int, labels: Sequence[str] | None = None) -> Iterable[Graph]:
    """All labelled trees on n vertices via Pruefer sequences."""
    from itertools import product

    if n == 1:
        yield Graph.from_edges(labels or ["0"], [])
        return
    if n == 2:
        yield Graph.from_edges(labels or ["0", "1"], [(0, 1)])
        return
    for seq in product(range(n), repeat=n - 2):
        yield tree_from_pruefer(list(seq), labels)


def tree_from_pruefer(seq: Sequence[int], labels: Sequence[str] | None = None) -> Graph:
    n = len(seq) + 2
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return Graph.from_edges(list(labels) if labels else n, edges)


def all_graphs(n: int, labels: Sequence[str] | None = None) -> Iterable[Graph]:
    pairs = [(i, j) for j in range(n) for i in range(j)]
    lab = list(labels) if labels else [str(i) for i in range(n)]
    for m in range(1 << len(pairs)):
        yield Graph.from_edges(lab, [pairs[e] for e in bits(m)])


def connected_graphs(n: int) -> Iterable[Graph]:
    return (g for g in all_graphs(n) if g.is_connected())


def trees_sharing_ksets(g: Graph, k: int) -> list[Graph]:
    """Every labelled tree on the same labels with the same connected k-sets."""
    target = extract_ksets(g, k)
    return [t for t in enumerate_trees(g.n, g.labels) if extract_ksets(t, k).same_sets(target)]


# ---------------------------------------------------------------- generators


def _labels(n: int) -> list[str]:
    return [str(i) for i in range(n)]


def gen_path(n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be positive")
    return Graph.from_edges(_labels(n), [(i, i + 1) for i in range(n - 1)])


def gen_star(leaves: int) -> Graph:
    """Star with centre 0."""
    if leaves < 1:
        raise ValueError("need at least one leaf")
    return Graph.from_edges(_labels(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(_labels(n), [(i, (i + 1) % n) for i in range(n)])


def gen_complete(n: int) -> Graph:
    return Graph.from_edges(_labels(n), list(combinations(range(n), 2)))


def gen_tree(n: int, seed: int) -> Graph:
    """Uniform random labelled tree via a random Pruefer code."""
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 2:
        return gen_path(n)
    rng = random.Random(seed)
    return tree_from_pruefer([rng.randrange(n) for _ in range(n - 2)])


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    return Graph.from_edges(_labels(n), [e for e in combinations(range(n), 2) if rng.random() < p])


def gen_bipartite(n: int, p: float, seed: int) -> Graph:
    """Random connected bipartite graph: a random spanning tree across sides plus extra cross edges."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    side = [rng.random() < 0.5 for _ in range(n)]
    side[0], side[1] = True, False
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    placed = [order[0]]
    for v in order[1:]:
        opp = [u for u in placed if side[u] != side[v]]
        if not opp:
            side[v] = not side[v]
            opp = [u for u in placed if side[u] != side[v]]
        u = rng.choice(opp)
        edges.add((min(u, v), max(u, v)))
        placed.append(v)
    for u, v in combinations(range(n), 2):
        if side[u] != side[v] and rng.random() < p:
            edges.add((u, v))
    return Graph.from_edges(_labels(n), sorted(edges))


def gen_cycle_chords(n: int, chords: int, seed: int) -> Graph:
    """C_n on 0..n-1 plus ``chords`` random pairwise non-crossing chords."""
    if n < 3 or not 0 <= chords <= n - 3:
        raise ValueError("need n >= 3 and 0 <= chords <= n-3")
    rng = random.Random(seed)
    candidates = [(a, b) for a, b in combinations(range(n), 2) if b - a not in (1, n - 1)]
    rng.shuffle(candidates)
    order = {v: v for v in range(n)}
    chosen: list[tuple[int, int]] = []
    for c in candidates:
        if len(chosen) == chords:
            break
        if all(not _chords_cross(order, c, d) for d in chosen):
            chosen.append(c)
    if len(chosen) < chords:
        raise ValueError("could not place the requested chords")
    return Graph.from_edges(_labels(n), [(i, (i + 1) % n) for i in range(n)] + chosen)


def all_cycle_chord_graphs(n: int) -> list[Graph]:
    """C_n plus every set of pairwise non-crossing chords."""
    order = {v: v for v in range(n)}
    cands = [(a, b) for a, b in combinations(range(n), 2) if b - a not in (1, n - 1)]
    ring = [(i, (i + 1) % n) for i in range(n)]
    out = []

    def rec(start: int, chosen: list) -> None:
        out.append(Graph.from_edges(_labels(n), ring + chosen))
        for t in range(start, len(cands)):
            c = cands[t]
            if all(not _chords_cross(order, c, d) for d in chosen):
                rec(t + 1, chosen + [c])

    rec(0, [])
    return out


def gen_apollonian(n: int, seed: int) -> Graph:
    """Random Apollonian network: K4, then repeatedly stack a vertex into a random face."""
    if n < 4:
        raise ValueError("Apollonian networks need n >= 4")
    rng = random.Random(seed)
    edges = set(combinations(range(4), 2))
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for v in range(4, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        edges |= {(a, v), (b, v), (c, v)}
        faces += [(a, b, v), (a, c, v), (b, c, v)]
    return Graph.from_edges(_labels(n), sorted(edges))


def gen_apollonian_depth(depth: int) -> Graph:
    """Complete Apollonian network: every face subdivided ``depth`` times."""
    edges = set(combinations(range(3), 2))
    faces = [(0, 1, 2), (0, 1, 2)]  # two faces of the initial triangle
    n = 3
    for _ in range(depth):
        new_faces = []
        for a, b, c in faces:
            v = n
            n += 1
            edges |= {(a, v), (b, v), (c, v)}
            new_faces += [(a, b, v), (a, c, v), (b, c, v)]
        faces = new_faces
    return Graph.from_edges(_labels(n), sorted(edges))


def gen_subdivided(g: Graph, times: int) -> Graph:
    """Replace every edge by a path with ``times`` new internal vertices."""
    if times < 0:
        raise ValueError("times must be non-negative")
    labels = list(g.labels)
    edges = []
    for u, v in g.edges():
        prev = u
        for t in range(times):
            labels.append(f"{g.labels[u]}_{g.labels[v]}_{t}")
            cur = len(labels) - 1
            edges.append((prev, cur))
            prev = cur
        edges.append((prev, v))
    return Graph.from_edges(labels, edges)


def gen_unicyclic(cycle: int, extra: int, seed: int) -> Graph:
    """C_cycle with ``extra`` vertices attached as random pendant trees."""
    rng = random.Random(seed)
    edges = [(i, (i + 1) % cycle) for i in range(cycle)]
    for v in range(cycle, cycle + extra):
        edges.append((rng.randrange(v), v))
    return Graph.from_edges(_labels(cycle + extra), edges)


def gen_wheel(rim: int) -> Graph:
    """Hub 0 joined to the cycle 1..rim."""
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph.from_edges(_labels(rim + 1), edges)


def gen_fan(n: int) -> Graph:
    """Path 1..n-1 plus vertex 0 adjacent to all of it."""
    edges = [(0, i) for i in range(1, n)] + [(i, i + 1) for i in range(1, n - 1)]
    return Graph.from_edges(_labels(n), edges)


def gen_bipyramid(rim: int) -> Graph:
    """Cycle 0..rim-1 plus two apexes adjacent to the whole cycle."""
    edges = [(i, (i + 1) % rim) for i in range(rim)]
    edges += [(rim, i) for i in range(rim)] + [(rim + 1, i) for i in range(rim)]
    return Graph.from_edges(_labels(rim + 2), edges)


def gen_octahedron() -> Graph:
    return gen_bipyramid(4)


def gen_icosahedron() -> Graph:
    top, bottom = 0, 11
    upper = [1, 2, 3, 4, 5]
    lower = [6, 7, 8, 9, 10]
    edges = []
    for i in range(5):
        edges += [(top, upper[i]), (bottom, lower[i])]
        edges += [(upper[i], upper[(i + 1) % 5]), (lower[i], lower[(i + 1) % 5])]
        edges += [(upper[i], lower[i]), (upper[i], lower[(i + 1) % 5])]
    return Graph.from_edges(_labels(12), edges)


def gen_stacked(g: Graph, face: tuple[int, int, int], times: int) -> Graph:
    """Stack ``times`` new vertices into ``face`` and then into successive new faces.

    Each new vertex joins the three corners of the current face, so a
    maximal planar input stays maximal planar and gains a separating
    triangle per step.
    """
    a, b, c = face
    if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)):
        raise ValueError("face must be a triangle of g")
    edges = list(g.edges())
    n = g.n
    for _ in range(times):
        edges += [(a, n), (b, n), (c, n)]
        a, b, c = a, b, n
        n += 1
    return Graph.from_edges(_labels(n), edges)


def gen_petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return Graph.from_edges(_labels(10), edges)


def gen_ambiguous_family(which: str, **params) -> tuple[Graph, Graph]:
    """A pair of distinct graphs with identical connected triples.

    ``complete-minus-matching`` (m, r): K_m minus r disjoint edges, paired
    with K_m. ``star-plus-matching`` (leaves, pairs): star plus a partial
    leaf matching, paired with the bare star. ``p4-dominated`` (s): a P4
    whose vertices are all adjacent to an independent set of size s,
    paired with the P4 having its middle vertices swapped.
    """
    if which == "complete-minus-matching":
        m, r = params.get("m", 5), params.get("r", 1)
        if m < 3 or not 1 <= r <= m // 2:
            raise ValueError("need m >= 3 and 1 <= r <= m/2")
        full = set(combinations(range(m), 2))
        drop = {(2 * i, 2 * i + 1) for i in range(r)}
        return (
            Graph.from_edges(_labels(m), sorted(full - drop)),
            Graph.from_edges(_labels(m), sorted(full)),
        )
    if which == "star-plus-matching":
        leaves, pairs = params.get("leaves", 6), params.get("pairs", 2)
        if leaves < 2 or not 1 <= pairs <= leaves // 2:
            raise ValueError("need leaves >= 2 and 1 <= pairs <= leaves/2")
        star = [(0, i) for i in range(1, leaves + 1)]
        match = [(2 * i + 1, 2 * i + 2) for i in range(pairs)]
        return (
            Graph.from_edges(_labels(leaves + 1), star + match),
            Graph.from_edges(_labels(leaves + 1), star),
        )
    if which == "p4-dominated":
        s = params.get("s", 1)
        if s < 1:
            raise ValueError("need s >= 1")
        dom = [(4 + j, i) for j in range(s) for i in range(4)]
        return (
            Graph.from_edges(_labels(4 + s), [(0, 1), (1, 2), (2, 3)] + dom),
            Graph.from_edges(_labels(4 + s), [(0, 2), (2, 1), (1, 3)] + dom),
        )
    if which == "twin-triangle":
        # three vertices with identical outside neighbourhoods: triangle vs path
        outside = params.get("outside", 2)
        if outside < 1:
            raise ValueError("need at least one outside vertex")
        ext = [(3 + j, i) for j in range(outside) for i in range(3)]
        ext += [(3 + j, 4 + j) for j in range(outside - 1)]
        return (
            Graph.from_edges(_labels(3 + outside), [(0, 1), (1, 2), (0, 2)] + ext),
            Graph.from_edges(_labels(3 + outside), [(0, 1), (1, 2)] + ext),
        )
    raise ValueError(f"unknown family {which!r}")


# ---------------------------------------------------------------- isomorphism classes


def _refine(g: Graph) -> list[int]:
    colour = [g.degree(v) for v in range(g.n)]
    while True:
        sig = [(colour[v], tuple(sorted(colour[u] for u in g.neighbors(v)))) for v in range(g.n)]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[s] for s in sig]
        if len(set(new)) == len(set(colour)):
            return new
        colour = new


def canonical_form(g: Graph) -> tuple:
    """Lexicographically least sorted edge list over colour-respecting orderings.

    Colour refinement fixes the cells, then every ordering within cells is
    tried, so regular graphs cost up to n! work. Intended for n <= 9.
    """
    from itertools import permutations, product

    colour = _refine(g)
    cells: dict[int, list[int]] = {}
    for v in range(g.n):
        cells.setdefault(colour[v], []).append(v)
    keys = sorted(cells)
    best = None
    for choice in product(*(permutations(cells[c]) for c in keys)):
        order = [v for part in choice for v in part]
        pos = {v: i for i, v in enumerate(order)}
        form = tuple(sorted(tuple(sorted((pos[a], pos[b]))) for a, b in g.edges()))
        if best is None or form < best:
            best = form
    return (g.n, tuple(sorted(colour)), best)


def iso_classes(graphs: Iterable[Graph]) -> list[Graph]:
    """One representative per isomorphism class, first seen wins."""
    seen: dict[tuple, Graph] = {}
    for g in graphs:
        seen.setdefault(canonical_form(g), g)
    return list(seen.values())


def connected_classes(n: int, keep: Callable[[Graph], bool]) -> list[Graph]:
    """Connected graphs on n vertices satisfying a hereditary ``keep``, up to isomorphism.

    Every connected graph has a vertex whose removal leaves it connected,
    so all classes arise by attaching a new vertex to a class on n - 1.
    """
    level = [Graph.from_edges(_labels(1), [])]
    for m in range(2, n + 1):
        cands = []
        for h in level:
            base = h.edges()
            for mask in range(1, 1 << (m - 1)):
                g = Graph.from_edges(_labels(m), base + [(v, m - 1) for v in bits(mask)])
                if keep(g):
                    cands.append(g)
        level = iso_classes(cands)
    return level


def relabelled(g: Graph, seed: int) -> Graph:
    """The same graph with vertices permuted by a seeded shuffle."""
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    return Graph.from_edges(g.labels, [(perm[a], perm[b]) for a, b in g.edges()])


def maximal_planar_classes(n: int) -> list[Graph]:
    """Maximal planar graphs on n >= 4 vertices up to isomorphism.

    Any two triangulations on the same vertex count are joined by a
    sequence of edge flips, so a search over flips from one stacked
    triangulation reaches every class.
    """
    start = gen_apollonian(n, 0)
    seen = {canonical_form(start): start}
    todo = [start]
    while todo:
        g = todo.pop()
        es = set(g.edges())
        for a, b in g.edges():
            common = bits(g.adj[a] & g.adj[b])
            for c, d in combinations(common, 2):
                if g.has_edge(c, d):
                    continue
                h = Graph.from_edges(g.labels, (es - {(a, b)}) | {(c, d)})
                if not is_planar(h):
                    continue
                key = canonical_form(h)
                if key not in seen:
                    seen[key] = h
                    todo.append(h)
    return list(seen.values())
