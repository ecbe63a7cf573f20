"""Triangle-free graphs from connected triples."""

from __future__ import annotations

import bisect
from itertools import combinations

from ..core import (
    Graph,
    KSetCollection,
    ReconstructionResult,
    ambiguous,
    inconsistent,
    sort_ksets,
    unique,
    verify_result,
)


class OrderedTripleList:
    """The three copies abc, acb, bca of every sorted triple abc, radix sorted.

    Each copy is headed by one of the triple's pairs, so all triples
    containing a pair are contiguous and found by binary search.
    """

    def __init__(self, t: KSetCollection) -> None:
        rows = []
        for a, b, c in t.sets:
            rows += [(a, b, c), (a, c, b), (b, c, a)]
        self.rows = sort_ksets(rows, t.n)

    def __len__(self) -> int:
        return len(self.rows)

    def heads(self) -> list[tuple[int, int]]:
        out = []
        for r in self.rows:
            if not out or out[-1] != r[:2]:
                out.append(r[:2])
        return out

    def thirds(self, a: int, b: int) -> list[int]:
        """Third vertices of the triples containing the pair {a, b}."""
        if a > b:
            a, b = b, a
        i = bisect.bisect_left(self.rows, (a, b, -1))
        out = []
        while i < len(self.rows) and self.rows[i][0] == a and self.rows[i][1] == b:
            out.append(self.rows[i][2])
            i += 1
        return out


class _PromiseBroken(Exception):
    pass


class _TriangleFree:
    def __init__(self, t: KSetCollection) -> None:
        self.t = t
        self.otl = OrderedTripleList(t)
        self.memo: dict[tuple[int, int], bool] = {}
        self.c4: dict[frozenset, frozenset] = {}
        self._tv: dict[int, list] | None = None

    def has(self, a: int, b: int, c: int) -> bool:
        return self.t.contains_sorted(tuple(sorted((a, b, c))))

    def edge(self, a: int, b: int) -> bool:
        key = (min(a, b), max(a, b))
        if key not in self.memo:
            self.memo[key] = self._decide(*key)
        return self.memo[key]

    def _decide(self, a: int, b: int) -> bool:
        th = self.otl.thirds(a, b)
        if not th:
            return False
        if len(th) >= 2:
            return self._two_witnesses(a, b, th[0], th[1])
        return self._one_witness(a, b, th[0])

    def _two_witnesses(self, a: int, b: int, c: int, d: int) -> bool:
        if not self.has(a, c, d) or not self.has(b, c, d):
            return True
        diag = self._c4_diagonals(frozenset((a, b, c, d)))
        return frozenset((a, b)) not in diag

    def _c4_diagonals(self, quad: frozenset) -> frozenset:
        """The two non-adjacent pairs of an induced C4, read off an attached vertex."""
        if quad in self.c4:
            return self.c4[quad]
        e = None
        for p, q in combinations(sorted(quad), 2):
            for x in self.otl.thirds(p, q):
                if x not in quad:
                    e = x
                    break
            if e is not None:
                break
        if e is None:
            raise _PromiseBroken("no vertex outside the four-cycle")
        hits = [frozenset(pq) for pq in combinations(sorted(quad), 2) if self.has(pq[0], pq[1], e)]
        if len(hits) == 2:
            # e is a private neighbour of the vertex shared by both pairs
            shared = hits[0] & hits[1]
            if len(shared) != 1:
                raise _PromiseBroken("attachment pattern fits no four-cycle")
            (x,) = shared
            nbrs = (hits[0] | hits[1]) - shared
            (opp,) = quad - nbrs - shared
            diag = frozenset((frozenset((x, opp)), frozenset(nbrs)))
        elif len(hits) == 5:
            # e is adjacent to two opposite vertices; the missing pair is the other diagonal
            all_pairs = {frozenset(pq) for pq in combinations(sorted(quad), 2)}
            (miss,) = all_pairs - set(hits)
            diag = frozenset((miss, frozenset(quad - miss)))
        else:
            raise _PromiseBroken("attachment pattern fits no four-cycle")
        self.c4[quad] = diag
        return diag

    def _one_witness(self, a: int, b: int, c: int) -> bool:
        # exactly two of ab, ac, bc are edges; decide the others where they have two witnesses
        known = {}
        for p, q in ((a, c), (b, c)):
            th = self.otl.thirds(p, q)
            if len(th) >= 2:
                known[(p, q)] = self.edge(p, q)
        if not known:
            raise _PromiseBroken(f"pivot from {a},{b} through {c} found no pair with two triples")
        if any(not v for v in known.values()):
            return True  # the non-edge is ac or bc, so ab is present
        if len(known) == 2:
            return False  # ac and bc both present
        # wc is a known edge and z is a leaf hanging on w or on c;
        # its neighbour is the one of w, c dominated by the other
        ((w, _),) = known
        z = b if w == a else a
        return self._leaf_neighbour(z, w, c) == w

    def _triples_of(self, v: int) -> list[tuple[int, int, int]]:
        if self._tv is None:
            self._tv = {}
            for s in self.t.sets:
                for u in s:
                    self._tv.setdefault(u, []).append(s)
        return self._tv.get(v, [])

    def _dominated_by(self, u: int, w: int) -> bool:
        return all(w in s for s in self._triples_of(u))

    def _leaf_neighbour(self, z: int, x: int, y: int) -> int:
        x_under = self._dominated_by(x, y)
        y_under = self._dominated_by(y, x)
        if x_under and not y_under:
            return x
        if y_under and not x_under:
            return y
        raise _PromiseBroken(f"cannot tell where {z} attaches")


def reconstruct_triangle_free(t: KSetCollection, verify: bool = False) -> ReconstructionResult:
    """Reconstruct a connected triangle-free graph on at least five vertices."""
    if t.k != 3:
        raise ValueError("triangle-free reconstruction needs k = 3")
    if t.n < 5:
        res = _small_triangle_free(t)
        return verify_result(res, t) if verify else res
    solver = _TriangleFree(t)
    try:
        edges = [(a, b) for a, b in solver.otl.heads() if solver.edge(a, b)]
    except _PromiseBroken as exc:
        return inconsistent(str(exc))
    res = unique(Graph.from_edges(t.labels, edges), lookups=len(solver.otl))
    return verify_result(res, t) if verify else res


def _small_triangle_free(t: KSetCollection) -> ReconstructionResult:
    """Below five vertices the answer comes from exhaustive enumeration."""
    from ..oracle import enumerate_consistent

    rep = enumerate_consistent(t, filters=("connected", "triangle-free"), cap=100)
    if rep.count == 0:
        return inconsistent("no connected triangle-free graph has these triples")
    if rep.count == 1:
        return unique(rep.witnesses[0])
    return ambiguous(rep.witnesses, "several connected triangle-free graphs share these triples")
