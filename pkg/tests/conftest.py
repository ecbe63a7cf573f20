from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from ksetrecon.core import Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8, connected: bool = False) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    if connected and n > 1:
        # a random spanning tree first, then any extra pairs
        order = draw(st.permutations(range(n)))
        tree = [
            tuple(sorted((order[i], order[draw(st.integers(0, i - 1))]))) for i in range(1, n)
        ]
        extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs)))
        return Graph.from_edges(n, sorted(set(tree) | set(extra)))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, chosen) if keep])


@st.composite
def trees(draw, min_n: int = 1, max_n: int = 40) -> Graph:
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    perm = draw(st.permutations(range(n)))
    return Graph.from_edges(n, [tuple(sorted((perm[a], perm[b]))) for a, b in edges])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def labelled():
    """Build a graph from a string of letters and edge strings like 'ab'."""

    def make(letters: str, *edges: str) -> Graph:
        return Graph.from_label_edges(list(letters), [(e[0], e[1]) for e in edges])

    return make
