"""Maximal planar (triangulated) graphs from connected triples."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from ..core import (
    Graph,
    KSetCollection,
    ReconstructionResult,
    extract_ksets,
    inconsistent,
    unique,
)
from ..sat import pair_witnesses


class _Fail(Exception):
    pass


@dataclass(frozen=True)
class SeparatorCertificate:
    """A 3-set whose removal splits the co-occurrence graph.

    ``parts`` are the co-occurrence components of V - S. ``components``
    regroups them into the two components of G - S: a component on two
    vertices shows up as two singleton parts, and those are paired up by
    the rule in ``_pair_singletons``. It is None when no pairing is forced.
    """

    separator: tuple[int, int, int]
    parts: tuple[frozenset, ...]
    components: tuple[frozenset, frozenset] | None


class _Ctx:
    def __init__(self, t: KSetCollection) -> None:
        self.t = t
        self.m = pair_witnesses(t)
        self.wheels: dict[tuple[frozenset, int], list[int] | None] = {}
        self.branches = {"four_connected": 0, "split": 0, "small_side": 0}

    def has(self, a: int, b: int, c: int) -> bool:
        return self.t.contains_sorted(tuple(sorted((a, b, c))))

    def thirds(self, a: int, b: int, within) -> list[int]:
        return [x for x in self.m.get((min(a, b), max(a, b)), ()) if x in within]

    def triples_in(self, within) -> list[tuple[int, int, int]]:
        return [s for s in self.t.sets if s[0] in within and s[1] in within and s[2] in within]


def _cooccurrence_parts(triples, outside: list[int], sep) -> list[frozenset]:
    parent = {v: v for v in outside}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in triples:
        if sep[0] in s or sep[1] in s or sep[2] in s:
            continue
        a, b, c = (find(x) for x in s)
        parent[b] = a
        parent[find(c)] = a
    groups: dict[int, set] = {}
    for v in outside:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def _pair_singletons(ctx: _Ctx, sep, parts: list[frozenset]):
    """Regroup co-occurrence parts into the two components of G - S.

    Two vertices forming a component of their own never share a triple
    avoiding S, but they share all three triples with the vertices of S.
    """
    if len(parts) == 2:
        return tuple(parts)
    singles = [min(p) for p in parts if len(p) == 1]
    big = [p for p in parts if len(p) > 1]
    if len(parts) == 3 and len(singles) == 2:
        return (frozenset(singles), big[0])
    if len(parts) == 4 and len(singles) == 4:

        def full(a, b):
            return all(ctx.has(a, b, s) for s in sep)

        a = singles[0]
        fits = []
        for b in singles[1:]:
            c, d = [x for x in singles[1:] if x != b]
            if full(a, b) and full(c, d):
                fits.append((frozenset((a, b)), frozenset((c, d))))
        if len(fits) == 1:
            return fits[0]
    return None


def _separator_at(ctx: _Ctx, within, triples, sep) -> SeparatorCertificate | None:
    outside = sorted(v for v in within if v not in sep)
    parts = _cooccurrence_parts(triples, outside, sep)
    if len(parts) < 2:
        return None
    return SeparatorCertificate(tuple(sep), tuple(parts), _pair_singletons(ctx, sep, parts))


def find_size3_separators(t: KSetCollection, only_triples: bool = False) -> list[SeparatorCertificate]:
    """Every 3-set S whose removal disconnects the co-occurrence graph on V - S.

    With ``only_triples`` the candidates are restricted to members of ``t``,
    which loses nothing when separators are known to be triangles.
    """
    if t.k != 3:
        raise ValueError("separator search needs k = 3")
    if t.n < 6:
        # with two outside vertices no triple avoids S, so every S would qualify
        raise ValueError("separator search needs n >= 6 (at least three vertices outside S)")
    ctx = _Ctx(t)
    within = set(range(t.n))
    cands = t.sets if only_triples else combinations(range(t.n), 3)
    out = []
    for sep in cands:
        cert = _separator_at(ctx, within, t.sets, sep)
        if cert is not None:
            out.append(cert)
    return out


# ---------------------------------------------------------------- wheels


def _cycle_order(x: list[int], triples: set) -> list[int] | None:
    """Cyclic order of x if its triples are exactly those of a cycle of length >= 5."""
    ell = len(x)
    if ell < 5 or len(triples) != ell:
        return None
    shared: dict[tuple[int, int], int] = {}
    for s in triples:
        for p in combinations(s, 2):
            shared[p] = shared.get(p, 0) + 1
    nbr: dict[int, list[int]] = {v: [] for v in x}
    for (a, b), c in shared.items():
        if c == 2:
            nbr[a].append(b)
            nbr[b].append(a)
    if any(len(v) != 2 for v in nbr.values()):
        return None
    order = [min(x)]
    prev, cur = None, min(x)
    while True:
        a, b = sorted(nbr[cur])
        nxt = a if a != prev else b
        if nxt == order[0]:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        if len(order) > ell:
            return None
    if len(order) != ell:
        return None
    want = {tuple(sorted((order[i], order[(i + 1) % ell], order[(i + 2) % ell]))) for i in range(ell)}
    return order if want == triples else None


def _maximal_cliques(adj: dict[int, set]) -> list[frozenset]:
    out = []

    def bk(r, p, x):
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(adj), set())
    return out


def _wheel(ctx: _Ctx, within: frozenset, v: int) -> list[int] | None:
    """Rim of v in cyclic order when v has degree at least five, else None.

    The pairs {a, b} with vab a triple form a clique on N(v) plus an
    independent set of farther vertices; the rim is the clique whose
    triples form a cycle and whose union with v carries exactly the
    triples of a wheel.
    """
    key = (within, v)
    if key in ctx.wheels:
        return ctx.wheels[key]
    link: dict[int, set] = {}
    for s in ctx.t.sets:
        if v in s and all(x in within for x in s):
            a, b = (x for x in s if x != v)
            link.setdefault(a, set()).add(b)
            link.setdefault(b, set()).add(a)
    # non-neighbours of v are pairwise unlinked, so a clique holds at most one of them
    cands = set()
    for clique in _maximal_cliques(link):
        cands.add(clique)
        cands |= {clique - {y} for y in clique}
    found = None
    for x in sorted((sorted(c) for c in cands if len(c) >= 5), key=lambda c: (-len(c), c)):
        inner = {s for s in combinations(x, 3) if ctx.has(*s)}
        order = _cycle_order(x, inner)
        if order is None:
            continue
        # v appears with every pair of the rim, so the ball carries exactly the wheel's triples
        if all(ctx.has(v, a, b) for a, b in combinations(x, 2)):
            found = order
            break
    ctx.wheels[key] = found
    return found


def _four_connected(ctx: _Ctx, within: frozenset) -> set[tuple[int, int]]:
    verts = sorted(within)
    centre = rim = None
    for v in verts:
        rim = _wheel(ctx, within, v)
        if rim is not None:
            centre = v
            break
    if centre is None:
        raise _Fail("no vertex of degree five or more is recognisable")
    adj: dict[int, set] = {u: set() for u in verts}

    def join(a, b):
        adj[a].add(b)
        adj[b].add(a)

    ell = len(rim)
    for i, r in enumerate(rim):
        join(centre, r)
        join(r, rim[(i + 1) % ell])
    dist = {centre: 0}
    for r in rim:
        dist[r] = 1
    prev = list(rim)
    d = 2
    while prev:
        layer: set[int] = set()
        for x in prev:
            y = min(u for u in adj[x] if dist.get(u) == d - 2)
            for q in ctx.thirds(x, y, within):
                if q not in dist or dist[q] == d:
                    dist[q] = d
                    layer.add(q)
                    join(x, q)
        inner = {u: {w for w in adj[u] if dist[w] == d - 1} for u in layer}
        for u, z in combinations(sorted(layer), 2):
            common = inner[u] & inner[z]
            if common:
                x = min(common)
                w = _wheel(ctx, within, x)
                if w is not None:
                    i, j = w.index(u) if u in w else -1, w.index(z) if z in w else -1
                    if i >= 0 and j >= 0 and (i - j) % len(w) in (1, len(w) - 1):
                        join(u, z)
            else:
                x = min(inner[u])
                if ctx.has(x, u, z):
                    join(u, z)
        prev = sorted(layer)
        d += 1
    if len(dist) != len(within):
        raise _Fail("breadth-first growth did not reach every vertex")
    return {(a, b) for a in adj for b in adj[a] if a < b}


def reconstruct_max_planar_4connected(t: KSetCollection) -> Graph:
    """Reconstruct a 4-connected maximal planar graph on at least seven vertices."""
    if t.k != 3:
        raise ValueError("needs k = 3")
    if t.n < 7:
        raise ValueError("maximal planar reconstruction needs at least seven vertices")
    try:
        edges = _four_connected(_Ctx(t), frozenset(range(t.n)))
    except _Fail as exc:
        raise ValueError(str(exc)) from None
    return Graph.from_edges(t.labels, sorted(edges))


# ---------------------------------------------------------------- small sides


def _small_side(ctx: _Ctx, sep, side: frozenset, outside) -> set[tuple[int, int]]:
    edges = {tuple(sorted(p)) for p in combinations(sep, 2)}
    side_l = sorted(side)
    nbr: dict[int, set] = {}
    for s in sep:
        witness = None
        for u in sorted(outside):
            if any(ctx.has(s, u, x) for x in side_l):
                witness = u
                break
        if witness is None:
            raise _Fail(f"separator vertex {s} has no recognisable outside neighbour")
        nbr[s] = {x for x in side_l if ctx.has(s, witness, x)}
        edges |= {tuple(sorted((s, x))) for x in nbr[s]}
    if len(side_l) == 2:
        edges.add(tuple(side_l))
    elif len(side_l) == 3:
        edges |= _side_of_three(ctx, sep, side_l, nbr, edges)
    elif len(side_l) != 1:
        raise _Fail("small side has more than three vertices")
    return edges


def _side_of_three(ctx: _Ctx, sep, side_l, nbr, known) -> set[tuple[int, int]]:
    toward = [2 + len(nbr[s]) for s in sep]
    if toward == [4, 4, 4]:
        return set(combinations(side_l, 2))  # octahedron: the far side is a triangle
    decided: dict[tuple[int, int], bool] = {}
    open_pairs = []
    for x, y in combinations(side_l, 2):
        s = next((s for s in sep if (y in nbr[s]) != (x in nbr[s])), None)
        if s is None:
            open_pairs.append((x, y))
        else:
            decided[(x, y)] = ctx.has(s, x, y)
    # the rest follows from the degree profile of a triangulated 5-wheel
    verts = sorted(set(sep) | set(side_l))
    fits = []
    for bits_ in product((False, True), repeat=len(open_pairs)):
        inner = {p for p, on in decided.items() if on}
        inner |= {p for p, on in zip(open_pairs, bits_) if on}
        all_edges = set(known) | inner
        if len(all_edges) != 12:
            continue
        deg = {v: 0 for v in verts}
        for a, b in all_edges:
            deg[a] += 1
            deg[b] += 1
        if sorted(deg.values()) != [3, 3, 4, 4, 5, 5]:
            continue
        idx = {v: i for i, v in enumerate(verts)}
        g = Graph.from_edges(len(verts), [(idx[a], idx[b]) for a, b in all_edges])
        local = {tuple(verts[i] for i in s) for s in extract_ksets(g, 3).sets}
        if all(ctx.has(*s) == (s in local) for s in combinations(verts, 3)):
            fits.append(inner)
    if len(fits) != 1:
        raise _Fail("six-vertex side matches no single triangulation")
    return fits[0]


def small_planar_side(t: KSetCollection, separator, side) -> Graph:
    """The triangulation induced on S and a component of G - S with at most three vertices."""
    ctx = _Ctx(t)
    sep = tuple(sorted(separator))
    side = frozenset(side)
    outside = [v for v in range(t.n) if v not in side and v not in sep]
    try:
        edges = _small_side(ctx, sep, side, outside)
    except _Fail as exc:
        raise ValueError(str(exc)) from None
    return Graph.from_edges(t.labels, sorted(edges))


# ---------------------------------------------------------------- recursion


def _solve(ctx: _Ctx, within: frozenset, depth: list[int]) -> set[tuple[int, int]]:
    depth[0] += 1
    triples = ctx.triples_in(within)
    cert = None
    for sep in triples:
        c = _separator_at(ctx, within, triples, sep)
        if c is not None:
            cert = c
            break
    if cert is None:
        ctx.branches["four_connected"] += 1
        return _four_connected(ctx, within)
    ctx.branches["split"] += 1
    if cert.components is None:
        raise _Fail(f"cannot split around {cert.separator}")
    sep = cert.separator
    v1, v2 = cert.components
    edges: set[tuple[int, int]] = set()
    for side, other in ((v1, v2), (v2, v1)):
        if len(side) + 3 >= 7:
            edges |= _solve(ctx, frozenset(side | set(sep)), depth)
        else:
            ctx.branches["small_side"] += 1
            edges |= _small_side(ctx, sep, side, other)
    return edges


def reconstruct_max_planar(t: KSetCollection) -> ReconstructionResult:
    """Reconstruct a maximal planar graph on at least seven vertices; the result is re-extracted."""
    if t.k != 3:
        raise ValueError("maximal planar reconstruction needs k = 3")
    if t.n < 7:
        raise ValueError("maximal planar reconstruction needs at least seven vertices")
    ctx = _Ctx(t)
    depth = [0]
    try:
        edges = _solve(ctx, frozenset(range(t.n)), depth)
    except _Fail as exc:
        return inconsistent(str(exc))
    g = Graph.from_edges(t.labels, sorted(edges))
    if not extract_ksets(g, 3).same_sets(t):
        return inconsistent("reconstructed graph does not reproduce the triples", pieces=depth[0])
    return unique(g, pieces=depth[0], **ctx.branches)
