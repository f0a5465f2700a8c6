"""Exact graph coloring with a Zykov-tree SAT encoding and an external propagator."""

from __future__ import annotations

from .driver import DecideResult, SolveConfig, SolveReport, decide_k, solve_chromatic
from .graph_io import Graph, parse_dimacs, read_dimacs_file, write_dimacs

__all__ = [
    "DecideResult",
    "Graph",
    "SolveConfig",
    "SolveReport",
    "decide_k",
    "parse_dimacs",
    "read_dimacs_file",
    "solve_chromatic",
    "write_dimacs",
]

__version__ = "0.1.0"
