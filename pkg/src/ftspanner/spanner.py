"""Greedy fault-tolerant spanner construction with a replayable trace.

Edges are processed in ascending weight (ties by endpoint ids); an edge is
added exactly when its endpoints are not protected at the stretch threshold
in the spanner built so far. Every decision is recorded with its witness
fault set or disjoint-paths certificate so third parties can replay and
audit a build.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Optional

from .graphs import FaultSet, Graph, Mode
from .protection import ProtectionQuery, ProtectionResult, is_protected


@dataclass(frozen=True)
class SpannerParams:
    """Fault budget f, stretch parameter k (stretch = 2k - 1), fault mode."""

    f: int
    k: int
    mode: Mode

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.f < 0:
            raise ValueError(f"f must be >= 0, got {self.f}")
        if self.mode not in ("vertex", "edge"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def stretch(self) -> int:
        return 2 * self.k - 1


@dataclass(frozen=True)
class TraceRecord:
    """One greedy decision, in processing order."""

    u: int
    v: int
    weight: float
    added: bool
    witness: Optional[FaultSet] = None
    certificate: Optional[tuple[tuple[int, ...], ...]] = None

    def to_json(self) -> dict:
        return {
            "edge": [self.u, self.v],
            "weight": self.weight,
            "decision": "added" if self.added else "skipped",
            "witness": self.witness.to_json() if self.witness is not None else None,
            "certificate": [list(p) for p in self.certificate]
            if self.certificate is not None else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TraceRecord":
        witness = obj.get("witness")
        cert = obj.get("certificate")
        return cls(
            u=int(obj["edge"][0]),
            v=int(obj["edge"][1]),
            weight=float(obj["weight"]),
            added=obj["decision"] == "added",
            witness=FaultSet.from_json(witness) if witness is not None else None,
            certificate=tuple(tuple(p) for p in cert) if cert is not None else None,
        )


@dataclass
class SpannerResult:
    h: Graph
    trace: list[TraceRecord] = field(default_factory=list)

    def added_edges(self) -> list[tuple[int, int]]:
        return [(r.u, r.v) for r in self.trace if r.added]


def edge_order(g: Graph) -> list[tuple[float, int, int]]:
    """Processing order: ascending (weight, min endpoint, max endpoint)."""
    return sorted((w, u, v) for u, v, w in g.edges())


def greedy_ft_spanner(g: Graph, p: SpannerParams) -> SpannerResult:
    """Build the greedy f-fault-tolerant (2k-1)-spanner of g with its trace."""
    stretch = p.stretch
    trace: list[TraceRecord] = []
    kept: list[tuple[int, int]] = []  # sorted edge keys of the current spanner
    h = Graph(g.n)
    for w, u, v in edge_order(g):
        result = is_protected(h, ProtectionQuery(u, v, stretch * w, p.f, p.mode))
        if result.protected:
            trace.append(TraceRecord(u, v, w, False, certificate=result.certificate))
        else:
            trace.append(TraceRecord(u, v, w, True, witness=result.witness))
            bisect.insort(kept, (u, v))
            h = g.subgraph_with_edges(kept)
    return SpannerResult(h=h, trace=trace)


class TraceError(ValueError):
    """Structurally invalid trace; carries the offending record index."""

    def __init__(self, message: str, index: int):
        super().__init__(f"trace record {index}: {message}")
        self.index = index


def replay_trace(g: Graph, r: SpannerResult, p: SpannerParams) -> bool:
    """True iff re-deriving every decision reproduces the trace exactly.

    Records must appear in the canonical processing order and each decision,
    witness, and certificate must match what the deterministic construction
    produces on the same prefix. Records naming edges not in g raise
    :class:`TraceError` with their index.
    """
    order = edge_order(g)
    if len(r.trace) != len(order):
        return False
    keys = g.edge_keys()
    for i, rec in enumerate(r.trace):
        key = (rec.u, rec.v) if rec.u < rec.v else (rec.v, rec.u)
        if key not in keys:
            raise TraceError(f"edge ({rec.u},{rec.v}) not in the input graph", i)
    kept: list[tuple[int, int]] = []
    h = Graph(g.n)
    for i, ((w, u, v), rec) in enumerate(zip(order, r.trace)):
        if (rec.u, rec.v) != (u, v) or rec.weight != w:
            return False
        result = is_protected(h, ProtectionQuery(u, v, p.stretch * w, p.f, p.mode))
        if result.protected == rec.added:
            return False
        if result.protected:
            if rec.witness is not None or rec.certificate != result.certificate:
                return False
        else:
            if rec.certificate is not None or rec.witness != result.witness:
                return False
            bisect.insort(kept, (u, v))
            h = g.subgraph_with_edges(kept)
    return r.h == h
