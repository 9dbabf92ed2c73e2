"""Fault-tolerant graph spanners: greedy construction, exact protection
testing, verification, extremal lower-bound instances, and walk analysis."""

from .graphs import (
    UNREACHABLE,
    FaultSet,
    Graph,
    GraphError,
    InvalidQueryError,
    dist,
    girth,
    load_graph,
    read_graph,
    shortest_cycle,
    write_graph,
)

__all__ = [
    "UNREACHABLE",
    "FaultSet",
    "Graph",
    "GraphError",
    "InvalidQueryError",
    "dist",
    "girth",
    "load_graph",
    "read_graph",
    "shortest_cycle",
    "write_graph",
]

__version__ = "0.1.0"
