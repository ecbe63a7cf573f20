"""Graph model, connected k-set extraction, lifting and the shared file formats."""

from __future__ import annotations

import bisect
import random
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class ReconError(Exception):
    """Base class for library errors."""


class FormatError(ReconError):
    pass


class BudgetExceeded(ReconError):
    """Raised when a configurable work budget runs out."""


KSet = tuple  # strictly increasing tuple of vertex indices


def _check_label(label: str) -> None:
    if not label or any(ch.isspace() for ch in label):
        raise FormatError(f"invalid vertex label {label!r}")


@dataclass(frozen=True)
class Graph:
    """Simple undirected labelled graph stored as adjacency bitmasks."""

    labels: tuple[str, ...]
    adj: tuple[int, ...]
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.adj):
            raise ValueError("labels and adjacency disagree in length")
        idx = {}
        for i, lab in enumerate(self.labels):
            _check_label(lab)
            if lab in idx:
                raise ValueError(f"duplicate label {lab!r}")
            idx[lab] = i
        for i, m in enumerate(self.adj):
            if m >> i & 1:
                raise ValueError("self-loop")
            if m >> len(self.adj):
                raise ValueError("neighbour index out of range")
            rest = m
            while rest:
                low = rest & -rest
                j = low.bit_length() - 1
                if not self.adj[j] >> i & 1:
                    raise ValueError("adjacency not symmetric")
                rest ^= low
        object.__setattr__(self, "index", idx)

    @classmethod
    def from_edges(cls, labels: Sequence[str] | int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if isinstance(labels, int):
            labels = [str(i) for i in range(labels)]
        adj = [0] * len(labels)
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(tuple(labels), tuple(adj))

    @classmethod
    def from_label_edges(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]) -> "Graph":
        idx = {lab: i for i, lab in enumerate(labels)}
        return cls.from_edges(labels, [(idx[a], idx[b]) for a, b in edges])

    @property
    def n(self) -> int:
        return len(self.labels)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def label_edges(self) -> list[tuple[str, str]]:
        return [(self.labels[u], self.labels[v]) for u, v in self.edges()]

    def is_connected(self) -> bool:
        return self.n == 0 or connected_mask(self.adj, (1 << self.n) - 1)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph on ``vertices`` re-indexed in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        return Graph.from_edges([self.labels[v] for v in vertices], edges)

    def relabel(self, labels: Sequence[str]) -> "Graph":
        return Graph(tuple(labels), self.adj)

    def permuted(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``i`` moved to index ``perm[i]`` (labels move too)."""
        labels = [""] * self.n
        for i, p in enumerate(perm):
            labels[p] = self.labels[i]
        return Graph.from_edges(labels, [(perm[u], perm[v]) for u, v in self.edges()])


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def connected_mask(adj: Sequence[int], mask: int) -> bool:
    """True iff the vertices in ``mask`` induce a connected subgraph."""
    if mask == 0:
        return False
    seen = mask & -mask
    frontier = seen
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        new = adj[low.bit_length() - 1] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def components_mask(adj: Sequence[int], mask: int) -> list[int]:
    comps = []
    while mask:
        seen = mask & -mask
        frontier = seen
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & mask & ~seen
            seen |= new
            frontier |= new
        comps.append(seen)
        mask &= ~seen
    return comps


def is_connected_subset(g: Graph, s: Iterable[int]) -> bool:
    s = list(s)
    if not s:
        raise ValueError("empty vertex set")
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} outside the universe")
    return connected_mask(g.adj, to_mask(s))


# ---------------------------------------------------------------- indexing


def pack(kset: Sequence[int], n: int) -> int:
    key = 0
    for v in kset:
        key = key * n + v
    return key


_PRIME = (1 << 127) - 1


class HashIndex:
    """Static two-level perfect hash table over packed k-sets.

    Construction draws hash parameters from a seeded generator, so the
    layout is reproducible; lookups cost two hash evaluations.
    """

    def __init__(self, keys: Sequence[int], seed: int = 0) -> None:
        rng = random.Random(seed)
        m = max(1, len(keys))
        self._m = m
        while True:
            a, b = rng.randrange(1, _PRIME), rng.randrange(_PRIME)
            buckets: list[list[int]] = [[] for _ in range(m)]
            for key in keys:
                buckets[((a * key + b) % _PRIME) % m].append(key)
            if sum(len(bk) ** 2 for bk in buckets) <= 4 * m:
                break
        self._top = (a, b)
        self._tables: list[tuple[int, int, list]] = []
        for bk in buckets:
            size = len(bk) ** 2
            if size == 0:
                self._tables.append((0, 0, []))
                continue
            while True:
                a2, b2 = rng.randrange(1, _PRIME), rng.randrange(_PRIME)
                slots: list = [None] * size
                ok = True
                for key in bk:
                    h = ((a2 * key + b2) % _PRIME) % size
                    if slots[h] is not None:
                        ok = False
                        break
                    slots[h] = key
                if ok:
                    break
            self._tables.append((a2, b2, slots))

    def __contains__(self, key: int) -> bool:
        a, b = self._top
        a2, b2, slots = self._tables[((a * key + b) % _PRIME) % self._m]
        if not slots:
            return False
        return slots[((a2 * key + b2) % _PRIME) % len(slots)] == key


class SortedIndex:
    """Binary search over the sorted packed keys."""

    def __init__(self, keys: Sequence[int]) -> None:
        self._keys = sorted(keys)

    def __contains__(self, key: int) -> bool:
        i = bisect.bisect_left(self._keys, key)
        return i < len(self._keys) and self._keys[i] == key


@dataclass(frozen=True)
class KSetCollection:
    """The connected k-sets of a graph on a declared universe of labels."""

    k: int
    labels: tuple[str, ...]
    sets: tuple[tuple[int, ...], ...]
    index_kind: str = "hash"
    seed: int = 0
    index: object = field(init=False, repr=False, compare=False, hash=False)
    _lookup: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be at least 2")
        n = len(self.labels)
        for s in self.sets:
            if len(s) != self.k or any(not 0 <= v < n for v in s):
                raise ValueError(f"malformed set {s}")
            if any(s[i] >= s[i + 1] for i in range(len(s) - 1)):
                raise ValueError(f"set not strictly increasing: {s}")
        for i in range(len(self.sets) - 1):
            if self.sets[i] >= self.sets[i + 1]:
                raise ValueError("sets must be sorted without duplicates")
        keys = [pack(s, n) for s in self.sets]
        if self.index_kind == "hash":
            index: object = HashIndex(keys, self.seed)
        elif self.index_kind == "sorted":
            index = SortedIndex(keys)
        else:
            raise ValueError(f"unknown index kind {self.index_kind!r}")
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_lookup", {lab: i for i, lab in enumerate(self.labels)})

    @classmethod
    def build(
        cls,
        k: int,
        labels: Sequence[str],
        sets: Iterable[Iterable[int]],
        strict: bool = True,
        index_kind: str = "hash",
        seed: int = 0,
    ) -> "KSetCollection":
        """Canonicalise ``sets`` (sort each, radix sort the list) and index them."""
        canon = []
        for s in sets:
            t = tuple(sorted(s))
            if len(set(t)) != len(t):
                raise ValueError(f"repeated vertex in {t}")
            canon.append(t)
        ordered = sort_ksets(canon, len(labels))
        deduped = sort_ksets(canon, len(labels), dedup=True)
        if len(deduped) != len(ordered):
            if strict:
                raise ValueError("duplicate sets in input")
            warnings.warn("duplicate sets removed", stacklevel=2)
        return cls(k, tuple(labels), tuple(deduped), index_kind, seed)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.sets)

    def __contains__(self, s: Iterable[int]) -> bool:
        t = tuple(sorted(s))
        if len(t) != self.k:
            return False
        return pack(t, self.n) in self.index  # type: ignore[operator]

    def contains_sorted(self, t: Sequence[int]) -> bool:
        return pack(t, self.n) in self.index  # type: ignore[operator]

    def index_of(self, label: str) -> int:
        return self._lookup[label]

    def same_sets(self, other: "KSetCollection") -> bool:
        return self.k == other.k and self.labels == other.labels and self.sets == other.sets

    def restrict(self, vertices: Sequence[int]) -> "KSetCollection":
        """Sets inside ``vertices``, re-indexed in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        sub = [[pos[v] for v in s] for s in self.sets if all(v in pos for v in s)]
        return KSetCollection.build(
            self.k, [self.labels[v] for v in vertices], sub, index_kind=self.index_kind, seed=self.seed
        )

    def label_sets(self) -> list[tuple[str, ...]]:
        return [tuple(self.labels[v] for v in s) for s in self.sets]


def sort_ksets(
    sets: Sequence[Sequence[int]], n: int, dedup: bool = False, counter: list | None = None
) -> list[tuple[int, ...]]:
    """LSD radix sort of equal-length index tuples over the alphabet ``range(n)``.

    Each pass is a stable counting sort on one coordinate. When ``counter``
    is given, the number of element moves is appended to it per pass.
    """
    items = [tuple(s) for s in sets]
    if not items:
        return []
    width = len(items[0])
    for pos in range(width - 1, -1, -1):
        buckets: list[list] = [[] for _ in range(n)]
        for it in items:
            buckets[it[pos]].append(it)
        items = [it for bk in buckets for it in bk]
        if counter is not None:
            counter.append(len(items))
    if dedup:
        out = []
        for it in items:
            if not out or out[-1] != it:
                out.append(it)
        items = out
    return items


# ---------------------------------------------------------------- extraction


def _connected_sets_containing(adj: Sequence[int], k: int, n: int) -> Iterator[int]:
    """Yield bitmasks of all connected k-subsets, each exactly once.

    Every set is generated from its minimum vertex by extending only with
    larger vertices that neighbour the current set but not its previous
    extension boundary.
    """
    for v in range(n):
        above = ~((1 << (v + 1)) - 1)

        def extend(sub: int, ext: int, closed: int, size: int) -> Iterator[int]:
            if size == k:
                yield sub
                return
            while ext:
                low = ext & -ext
                ext ^= low
                w = low.bit_length() - 1
                nb = adj[w] & above & ~closed
                yield from extend(sub | low, ext | nb, closed | nb, size + 1)

        start = adj[v] & above
        yield from extend(1 << v, start, start | (1 << v), 1)


def extract_ksets(g: Graph, k: int, index_kind: str = "hash", seed: int = 0) -> KSetCollection:
    """All k-subsets of ``g`` that induce connected subgraphs."""
    if not 2 <= k <= g.n:
        raise ValueError(f"k={k} outside [2, {g.n}]")
    sets = [tuple(bits(m)) for m in _connected_sets_containing(g.adj, k, g.n)]
    return KSetCollection(k, g.labels, tuple(sort_ksets(sets, g.n)), index_kind, seed)


def extract_ksets_bruteforce(g: Graph, k: int) -> list[tuple[int, ...]]:
    """Reference implementation: test every k-subset."""
    return [s for s in combinations(range(g.n), k) if connected_mask(g.adj, to_mask(s))]


# ---------------------------------------------------------------- lifting


def lift_ksets(kc: KSetCollection) -> KSetCollection:
    """Connected (k+1)-sets implied by the connected k-sets.

    A set X of size k+1 is connected iff X minus y and X minus z are both
    connected for two distinct y, z in X.
    """
    n, k = kc.n, kc.k
    if k + 1 > n:
        raise ValueError("cannot lift beyond the universe size")
    found = set()
    for s in kc.sets:
        sm = to_mask(s)
        for y in range(n):
            if sm >> y & 1:
                continue
            x = sm | 1 << y
            if x in found:
                continue
            # X minus y is s; look for a second deletion
            for z in s:
                if kc.contains_sorted(tuple(bits(x & ~(1 << z)))):
                    found.add(x)
                    break
    sets = sort_ksets([tuple(bits(m)) for m in found], n)
    return KSetCollection(k + 1, kc.labels, tuple(sets), kc.index_kind, kc.seed)


class ConnectivityOracle:
    """Answers induced connectivity for vertex sets of size at least k.

    ``method="lift"`` applies the two-deletion rule recursively with a
    memo; ``method="cover"`` uses the equivalent criterion that the
    connected k-subsets inside S cover S and overlap into one component.
    """

    def __init__(self, kc: KSetCollection, budget: int = 2_000_000, method: str = "lift") -> None:
        if method not in ("lift", "cover"):
            raise ValueError(f"unknown method {method!r}")
        self.kc = kc
        self.budget = budget
        self.method = method
        self.memo: dict[int, bool] = {}
        self.masks = [to_mask(s) for s in kc.sets]
        self.queries = 0

    def connected(self, s: Iterable[int]) -> bool:
        m = to_mask(s)
        return self.connected_mask(m)

    def connected_mask(self, m: int) -> bool:
        self.queries += 1
        size = m.bit_count()
        k = self.kc.k
        if size == 0:
            return False
        if size < k:
            raise ValueError(f"sets of size {size} < k={k} are not determined")
        if size == k:
            return self.kc.contains_sorted(tuple(bits(m)))
        if self.method == "cover":
            return self._cover(m)
        return self._lift(m)

    def _lift(self, m: int) -> bool:
        k = self.kc.k
        stack = [m]
        # iterative post-order evaluation with memo
        while stack:
            cur = stack[-1]
            if cur in self.memo:
                stack.pop()
                continue
            good = 0
            pending = None
            for y in bits(cur):
                sub = cur & ~(1 << y)
                if sub.bit_count() == k:
                    val = self.kc.contains_sorted(tuple(bits(sub)))
                else:
                    val = self.memo.get(sub)
                    if val is None:
                        pending = sub
                        break
                if val:
                    good += 1
                    if good == 2:
                        break
            if good == 2:
                self._store(cur, True)
                stack.pop()
            elif pending is not None:
                stack.append(pending)
            else:
                self._store(cur, False)
                stack.pop()
        return self.memo[m]

    def _store(self, m: int, val: bool) -> None:
        if len(self.memo) >= self.budget:
            raise BudgetExceeded(f"connectivity memo exceeded {self.budget} entries")
        self.memo[m] = val

    def _cover(self, m: int) -> bool:
        inside = [s for s in self.masks if s & ~m == 0]
        covered = 0
        for s in inside:
            covered |= s
        if covered != m:
            return False
        reach = inside[0] if inside else 0
        changed = True
        while changed:
            changed = False
            for s in inside:
                if s & reach and s & ~reach:
                    reach |= s
                    changed = True
        return reach == m


# ---------------------------------------------------------------- results


@dataclass(frozen=True)
class ReconstructionResult:
    """Outcome of a reconstruction.

    ``found`` means a consistent graph was produced without a uniqueness
    claim; ``unique`` carries the claim that no other graph (under the
    stated promise) fits the input.
    """

    status: str  # "unique" | "found" | "ambiguous" | "inconsistent"
    graph: Graph | None = None
    witnesses: tuple[Graph, ...] = ()
    reason: str = ""
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def is_unique(self) -> bool:
        return self.status == "unique"


def unique(g: Graph, **stats) -> ReconstructionResult:
    return ReconstructionResult("unique", g, (g,), "", stats)


def found(g: Graph, **stats) -> ReconstructionResult:
    return ReconstructionResult("found", g, (g,), "", stats)


def ambiguous(witnesses: Sequence[Graph], reason: str = "", **stats) -> ReconstructionResult:
    return ReconstructionResult("ambiguous", None, tuple(witnesses), reason, stats)


def inconsistent(reason: str, **stats) -> ReconstructionResult:
    return ReconstructionResult("inconsistent", None, (), reason, stats)


def verify_result(res: ReconstructionResult, kc: KSetCollection) -> ReconstructionResult:
    """Downgrade a result whose graphs do not re-extract to ``kc``."""
    if res.status == "inconsistent":
        return res
    for g in res.witnesses:
        if g.labels != kc.labels or not extract_ksets(g, kc.k).same_sets(kc):
            return inconsistent("verification failed: output does not re-extract to the input")
    return res


# ---------------------------------------------------------------- file formats


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield no, line.split()


def parse_graph(text: str) -> Graph:
    labels: list[str] = []
    pos: dict[str, int] = {}
    header_seen = False
    edges = set()

    def lab(x: str, no: int) -> int:
        if x not in pos:
            if header_seen:
                raise FormatError(f"line {no}: label {x!r} not declared in header")
            _check_label(x)
            pos[x] = len(labels)
            labels.append(x)
        return pos[x]

    first = True
    for no, toks in _content_lines(text):
        if toks[0] == "vertices:":
            if not first:
                raise FormatError(f"line {no}: header must come first")
            header_seen = True
            for t in toks[1:]:
                if t in pos:
                    raise FormatError(f"line {no}: duplicate label {t!r}")
                _check_label(t)
                pos[t] = len(labels)
                labels.append(t)
            first = False
            continue
        first = False
        if len(toks) != 2:
            raise FormatError(f"line {no}: expected 'u v'")
        u, v = lab(toks[0], no), lab(toks[1], no)
        if u == v:
            raise FormatError(f"line {no}: self-loop")
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(labels, sorted(edges))


def format_graph(g: Graph) -> str:
    lines = ["vertices: " + " ".join(g.labels)]
    lines += [f"{a} {b}" for a, b in g.label_edges()]
    return "\n".join(lines) + "\n"


def parse_ksets(text: str, strict: bool = True, index_kind: str = "hash", seed: int = 0) -> KSetCollection:
    k = None
    labels: list[str] | None = None
    pos: dict[str, int] = {}
    sets = []
    for no, toks in _content_lines(text):
        if k is None:
            if len(toks) != 2 or toks[0] != "k":
                raise FormatError(f"line {no}: expected 'k <int>'")
            try:
                k = int(toks[1])
            except ValueError as exc:
                raise FormatError(f"line {no}: bad k") from exc
            if k < 2:
                raise FormatError(f"line {no}: k must be at least 2")
            continue
        if labels is None:
            if toks[0] != "vertices:":
                raise FormatError(f"line {no}: expected 'vertices:' header")
            labels = toks[1:]
            for t in labels:
                _check_label(t)
                if t in pos:
                    raise FormatError(f"line {no}: duplicate label {t!r}")
                pos[t] = len(pos)
            continue
        if len(toks) != k:
            raise FormatError(f"line {no}: expected {k} labels")
        try:
            s = [pos[t] for t in toks]
        except KeyError as exc:
            raise FormatError(f"line {no}: undeclared label {exc.args[0]!r}") from exc
        if len(set(s)) != k:
            raise FormatError(f"line {no}: repeated label")
        sets.append(s)
    if k is None or labels is None:
        raise FormatError("missing 'k' line or 'vertices:' header")
    try:
        return KSetCollection.build(k, labels, sets, strict=strict, index_kind=index_kind, seed=seed)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def format_ksets(kc: KSetCollection) -> str:
    lines = [f"k {kc.k}", "vertices: " + " ".join(kc.labels)]
    lines += [" ".join(s) for s in kc.label_sets()]
    return "\n".join(lines) + "\n"


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f'  "{lab}";' for lab in g.labels]
    lines += [f'  "{a}" -- "{b}";' for a, b in g.label_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"
