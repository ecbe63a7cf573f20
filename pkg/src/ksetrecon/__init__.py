"""Reconstructing graphs from their connected k-sets."""

from .core import (
    BudgetExceeded,
    ConnectivityOracle,
    FormatError,
    Graph,
    KSetCollection,
    ReconError,
    ReconstructionResult,
    extract_ksets,
    format_graph,
    format_ksets,
    lift_ksets,
    parse_graph,
    parse_ksets,
)
from .sat import check_unique, reconstruct_any
from .tree import reconstruct_tree

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConnectivityOracle",
    "FormatError",
    "Graph",
    "KSetCollection",
    "ReconError",
    "ReconstructionResult",
    "check_unique",
    "extract_ksets",
    "format_graph",
    "format_ksets",
    "lift_ksets",
    "parse_graph",
    "parse_ksets",
    "reconstruct_any",
    "reconstruct_tree",
]
