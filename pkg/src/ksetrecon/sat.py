"""Consistent graphs from connected triples via 2-SAT, plus uniqueness testing."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .core import (
    BudgetExceeded,
    Graph,
    KSetCollection,
    ReconstructionResult,
    ambiguous,
    extract_ksets,
    found,
    inconsistent,
    unique,
)

POSITIVE = "positive-triple"
NEGATIVE = "negative-triple"
UNIT = "unit"


@dataclass
class Formula2Sat:
    """Clauses are pairs of non-zero literals: ``v + 1`` for pair ``v``, ``-(v + 1)`` for its negation."""

    n: int
    variables: list[tuple[int, int]]
    clauses: list[tuple[int, int]] = field(default_factory=list)
    tags: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.var_of = {p: i for i, p in enumerate(self.variables)}

    def add(self, a: int, b: int, tag: str) -> None:
        self.clauses.append((a, b))
        self.tags.append(tag)

    def literal(self, pair: tuple[int, int], positive: bool) -> int:
        v = self.var_of[pair] + 1
        return v if positive else -v

    def with_units(self, literals: list[int]) -> "Formula2Sat":
        f = Formula2Sat(self.n, self.variables, list(self.clauses), list(self.tags))
        for lit in literals:
            f.add(lit, lit, UNIT)
        return f

    def to_dimacs(self, labels: tuple[str, ...] | None = None) -> str:
        lines = []
        for i, (a, b) in enumerate(self.variables):
            la = labels[a] if labels else str(a)
            lb = labels[b] if labels else str(b)
            lines.append(f"c var {i + 1} = {la}-{lb}")
        lines.append(f"p cnf {len(self.variables)} {len(self.clauses)}")
        lines += [f"{a} {b} 0" for a, b in self.clauses]
        return "\n".join(lines) + "\n"


def _positive(f: Formula2Sat, a: int, b: int, c: int) -> None:
    ab, ac, bc = (a, b), (a, c), (b, c)
    f.add(f.literal(ab, True), f.literal(ac, True), POSITIVE)
    f.add(f.literal(ab, True), f.literal(bc, True), POSITIVE)
    f.add(f.literal(ac, True), f.literal(bc, True), POSITIVE)


def build_full_formula(t: KSetCollection) -> Formula2Sat:
    """One variable per vertex pair and three clauses per vertex triple."""
    if t.k != 3:
        raise ValueError("2-SAT encoding needs k = 3")
    n = t.n
    if n < 3:
        raise ValueError("need at least three vertices")
    f = Formula2Sat(n, list(combinations(range(n), 2)))
    for a, b, c in combinations(range(n), 3):
        if t.contains_sorted((a, b, c)):
            _positive(f, a, b, c)
        else:
            ab, ac, bc = (a, b), (a, c), (b, c)
            f.add(f.literal(ab, False), f.literal(ac, False), NEGATIVE)
            f.add(f.literal(ab, False), f.literal(bc, False), NEGATIVE)
            f.add(f.literal(ac, False), f.literal(bc, False), NEGATIVE)
    return f


def pair_witnesses(t: KSetCollection) -> dict[tuple[int, int], list[int]]:
    """M(i, j): sorted third vertices of the triples containing i and j, for i < j."""
    m: dict[tuple[int, int], list[int]] = {}
    for a, b, c in t.sets:  # sets are sorted, so each list comes out ascending
        m.setdefault((a, b), []).append(c)
        m.setdefault((a, c), []).append(b)
        m.setdefault((b, c), []).append(a)
    for lst in m.values():
        lst.sort()
    return m


def build_pruned_formula(t: KSetCollection) -> Formula2Sat:
    """Formula restricted to pairs that co-occur in some triple.

    A pair never appearing together in a connected triple cannot be an edge,
    so its variable is dropped (fixed false) and clauses mentioning it
    positively disappear. Negative clauses for an absent triple abx are only
    needed when at least two of its pairs are materialised.

    The argument needs one end of the pair to lie in some triple. Two
    vertices in no triple may still share an isolated edge, so pairs of
    uncovered vertices keep their variables and their triples keep the
    at-most-one-edge clauses.
    """
    if t.k != 3:
        raise ValueError("2-SAT encoding needs k = 3")
    n = t.n
    m = pair_witnesses(t)
    covered = {v for s in t.sets for v in s}
    loose = [v for v in range(n) if v not in covered]
    f = Formula2Sat(n, sorted(set(m) | set(combinations(loose, 2))))
    for a, b, c in t.sets:
        _positive(f, a, b, c)
    for a, b, c in combinations(loose, 3):
        ab, ac, bc = (a, b), (a, c), (b, c)
        f.add(f.literal(ab, False), f.literal(ac, False), NEGATIVE)
        f.add(f.literal(ab, False), f.literal(bc, False), NEGATIVE)
        f.add(f.literal(ac, False), f.literal(bc, False), NEGATIVE)
    seen = set()
    for (a, b), lst in sorted(m.items()):
        inside = set(lst)
        for x in range(n):
            if x == a or x == b or x in inside:
                continue
            ax, bx = (min(a, x), max(a, x)), (min(b, x), max(b, x))
            present = [p for p in ((a, b), ax, bx) if p in m]
            if len(present) < 2:
                continue
            for p, q in combinations(present, 2):
                lits = tuple(sorted((f.literal(p, False), f.literal(q, False))))
                if lits not in seen:
                    seen.add(lits)
                    f.add(lits[0], lits[1], NEGATIVE)
    return f


def solve_2sat(f: Formula2Sat, units: list[int] | None = None) -> list[bool] | None:
    """Satisfying assignment or None, via strongly connected components.

    Vertices of the implication graph are visited negative literal first and
    in increasing variable order, which fixes the output deterministically;
    unconstrained variables come out false.
    """
    nv = len(f.variables)

    def node(lit: int) -> int:
        return 2 * (abs(lit) - 1) + (1 if lit < 0 else 0)

    graph: list[list[int]] = [[] for _ in range(2 * nv)]
    clauses = list(f.clauses) + [(u, u) for u in (units or [])]
    for a, b in clauses:
        graph[node(-a)].append(node(b))
        if a != b:
            graph[node(-b)].append(node(a))
    comp = [-1] * (2 * nv)
    index = [0] * (2 * nv)
    low = [0] * (2 * nv)
    on_stack = [False] * (2 * nv)
    visited = [False] * (2 * nv)
    stack: list[int] = []
    counter = 0
    ncomp = 0
    order = []
    for v in range(nv):
        order += [2 * v + 1, 2 * v]
    for root in order:
        if visited[root]:
            continue
        work = [(root, 0)]
        while work:
            u, i = work.pop()
            if i == 0:
                visited[u] = True
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                on_stack[u] = True
            recurse = False
            while i < len(graph[u]):
                w = graph[u][i]
                i += 1
                if not visited[w]:
                    work.append((u, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[u] = min(low[u], index[w])
            if recurse:
                continue
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == u:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
    out = []
    for v in range(nv):
        if comp[2 * v] == comp[2 * v + 1]:
            return None
        # components are numbered in reverse topological order
        out.append(comp[2 * v] < comp[2 * v + 1])
    return out


def assignment_graph(f: Formula2Sat, labels: tuple[str, ...], assignment: list[bool]) -> Graph:
    return Graph.from_edges(labels, [p for p, val in zip(f.variables, assignment) if val])


def iter_solutions(f: Formula2Sat, budget: int | None = None):
    """All satisfying assignments, lowest variable first with false before true."""
    nv = len(f.variables)
    calls = 0

    def rec(units: list[int]):
        nonlocal calls
        calls += 1
        if budget is not None and calls > budget:
            raise BudgetExceeded(f"solution enumeration exceeded {budget} solver calls")
        sol = solve_2sat(f, units)
        if sol is None:
            return
        if len(units) == nv:
            yield sol
            return
        v = len(units)
        yield from rec(units + [-(v + 1)])
        yield from rec(units + [v + 1])

    yield from rec([])


def reconstruct_any(
    t: KSetCollection, require_connected: bool = False, budget: int = 100_000, pruned: bool = True
) -> ReconstructionResult:
    """Some graph whose connected triples are exactly ``t``."""
    f = build_pruned_formula(t) if pruned else build_full_formula(t)
    sol = solve_2sat(f)
    if sol is None:
        return inconsistent("no graph has these connected triples")
    g = assignment_graph(f, t.labels, sol)
    if require_connected and not g.is_connected():
        g = None
        for s in iter_solutions(f, budget):
            h = assignment_graph(f, t.labels, s)
            if h.is_connected():
                g = h
                break
        if g is None:
            return inconsistent("no connected graph has these connected triples")
    if not extract_ksets(g, 3).same_sets(t):
        raise AssertionError("2-SAT solution failed re-extraction")
    return found(g)


@dataclass
class UniquenessReport:
    status: str  # "unique" | "ambiguous" | "inconsistent"
    unique: bool
    solution_count_lower_bound: int
    witnesses: list[Graph]
    connected_unique: bool | None = None
    connected_count: int | None = None

    def as_result(self) -> ReconstructionResult:
        if self.status == "inconsistent":
            return inconsistent("no graph has these connected triples")
        if self.unique:
            return unique(self.witnesses[0])
        return ambiguous(self.witnesses, "several graphs share these connected triples")


def check_unique(
    t: KSetCollection, connected_only: bool = False, budget: int = 100_000
) -> UniquenessReport:
    """Decide whether exactly one graph on the universe has connected triples ``t``.

    One solution is found first; then every materialised variable is forced
    to the opposite value and the formula re-solved. Any success is a second
    witness.
    """
    f = build_pruned_formula(t)
    sol = solve_2sat(f)
    if sol is None:
        return UniquenessReport("inconsistent", False, 0, [])
    first = assignment_graph(f, t.labels, sol)
    witnesses = [first]
    seen = {tuple(sol)}
    for v, val in enumerate(sol):
        lit = -(v + 1) if val else v + 1
        other = solve_2sat(f, [lit])
        if other is not None and tuple(other) not in seen:
            seen.add(tuple(other))
            witnesses.append(assignment_graph(f, t.labels, other))
    for g in witnesses:
        assert extract_ksets(g, 3).same_sets(t), "witness failed re-extraction"
    is_unique = len(witnesses) == 1
    rep = UniquenessReport("unique" if is_unique else "ambiguous", is_unique, len(witnesses), witnesses)
    if connected_only:
        conn = []
        for s in iter_solutions(f, budget):
            h = assignment_graph(f, t.labels, s)
            if h.is_connected():
                conn.append(h)
                if len(conn) > 1:
                    break
        rep.connected_count = len(conn)
        rep.connected_unique = len(conn) == 1
    return rep
