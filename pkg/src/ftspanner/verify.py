"""Verifiers for the fault-tolerant spanner property.

``verify_exhaustive`` checks the defining inequality over every fault set
up to the budget (the oracle, feasible at desk scale only). The recommended
verifier at scale is ``verify_per_edge``: every input edge must be in the
spanner or protected there, which soundly implies the exhaustive check
because any shortest path decomposes into such edges.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .engine import make_engine
from .graphs import UNREACHABLE, FaultSet, Graph, InvalidQueryError, Mode, exceeds
from .protection import ProtectionQuery, is_protected


class WorkCapExceeded(RuntimeError):
    """Exhaustive verification refused: estimated work above the cap."""

    def __init__(self, estimate: int, cap: int):
        super().__init__(
            f"estimated {estimate} fault-set/pair combinations exceeds cap {cap}")
        self.estimate = estimate
        self.cap = cap


@dataclass(frozen=True)
class Counterexample:
    """A replayable violation: dist in h exceeds t times dist in g under F."""

    faults: FaultSet
    u: int
    v: int
    lhs: float  # dist_{h minus F}(u, v)
    rhs: float  # t * dist_{g minus F}(u, v)

    def to_json(self) -> dict:
        return {"faults": self.faults.to_json(), "u": self.u, "v": self.v,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class VerifyStats:
    fault_sets_examined: int = 0
    pairs_examined: int = 0
    max_stretch: float = 0.0
    work_estimate: int = 0

    def to_json(self) -> dict:
        return {"fault_sets_examined": self.fault_sets_examined,
                "pairs_examined": self.pairs_examined,
                "max_stretch": self.max_stretch,
                "work_estimate": self.work_estimate}


@dataclass
class VerificationReport:
    ok: bool
    method: str
    counterexample: Optional[Counterexample] = None
    stats: VerifyStats = field(default_factory=VerifyStats)

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "method": self.method,
                "counterexample": self.counterexample.to_json()
                if self.counterexample else None,
                "stats": self.stats.to_json()}


def _require_subgraph(g: Graph, h: Graph) -> None:
    if not h.is_subgraph_of(g):
        raise InvalidQueryError("h is not a subgraph of g with matching weights")


def _fault_set_count(candidates: int, f: int) -> int:
    return sum(math.comb(candidates, i) for i in range(min(f, candidates) + 1))


def _iter_fault_sets(candidates: list, f: int):
    for size in range(min(f, len(candidates)) + 1):
        yield from itertools.combinations(candidates, size)


def verify_exhaustive(g: Graph, h: Graph, f: int, t: float, mode: Mode,
                      work_cap: int = 10 ** 8, workers: int = 1) -> VerificationReport:
    """Check every fault set of size <= f and every surviving pair.

    Fault sets are enumerated in lexicographic order (by size, then members);
    each worker scans a contiguous block and stops at its own first failure,
    so the report is deterministic for a fixed worker count. Pairs whose
    endpoints are disconnected in g minus F impose no constraint.
    """
    _require_subgraph(g, h)
    if mode == "vertex":
        candidates: list = list(range(g.n))
    elif mode == "edge":
        candidates = sorted(g.edge_keys())
    else:
        raise InvalidQueryError(f"unknown mode {mode!r}")
    n_sets = _fault_set_count(len(candidates), f)
    n_pairs = g.n * (g.n - 1) // 2
    estimate = n_sets * n_pairs
    if estimate > work_cap:
        raise WorkCapExceeded(estimate, work_cap)

    workers = max(1, min(workers, n_sets))
    bounds = [(i * n_sets) // workers for i in range(workers + 1)]
    blocks = [(bounds[i], bounds[i + 1]) for i in range(workers)]

    def scan(block):
        start, stop = block
        eng_g = make_engine(g)
        eng_h = make_engine(h)
        stats = VerifyStats(work_estimate=estimate)
        found = None  # (global index, Counterexample)
        combos = itertools.islice(_iter_fault_sets(candidates, f), start, stop)
        for offset, combo in enumerate(combos):
            stats.fault_sets_examined += 1
            if mode == "vertex":
                faults = FaultSet.of_vertices(combo)
                blocked = set(combo)
            else:
                faults = FaultSet.of_edges(combo)
                blocked = set()
            vm_g, em_g = g.fault_masks(faults)
            vm_h, em_h = h.fault_masks(faults)
            eng_g.set_faults(vm_g, em_g)
            eng_h.set_faults(vm_h, em_h)
            for u in range(g.n):
                if u in blocked:
                    continue
                row_g = eng_g.distances_from(u)
                row_h = eng_h.distances_from(u)
                for v in range(u + 1, g.n):
                    if v in blocked:
                        continue
                    dg = row_g[v]
                    if dg == UNREACHABLE:
                        continue  # no constraint when g itself is disconnected
                    stats.pairs_examined += 1
                    lhs = float(row_h[v])
                    if lhs != UNREACHABLE:
                        stats.max_stretch = max(stats.max_stretch, lhs / float(dg))
                    else:
                        stats.max_stretch = UNREACHABLE
                    if exceeds(lhs, t * dg):
                        found = (start + offset,
                                 Counterexample(faults, u, v, lhs, float(t * dg)))
                        return found, stats
        return found, stats

    if workers == 1:
        results = [scan(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, blocks))

    stats = VerifyStats(work_estimate=estimate)
    best: Optional[tuple[int, Counterexample]] = None
    for found, part in results:
        stats.fault_sets_examined += part.fault_sets_examined
        stats.pairs_examined += part.pairs_examined
        stats.max_stretch = max(stats.max_stretch, part.max_stretch)
        if found is not None and (best is None or found[0] < best[0]):
            best = found
    if best is not None:
        return VerificationReport(False, "exhaustive", best[1], stats)
    return VerificationReport(True, "exhaustive", None, stats)


def verify_per_edge(g: Graph, h: Graph, f: int, t: float, mode: Mode) -> VerificationReport:
    """Sound criterion: every g-edge is in h or protected in h.

    A per-edge pass implies the exhaustive property: along any shortest path
    of g minus F, each edge either survives into h minus F or detours within
    t times its weight, and the detours concatenate. On failure the report
    carries the offending edge with its witness fault set. Stats here count
    edges as pairs; max_stretch is the no-fault detour ratio over skipped
    edges.
    """
    _require_subgraph(g, h)
    stats = VerifyStats()
    eng_h = make_engine(h)
    for u, v, w in g.edges():
        if h.has_edge(u, v):
            continue
        stats.pairs_examined += 1
        eng_h.set_faults((), ())
        base = float(eng_h.distance(u, v))
        stats.max_stretch = max(stats.max_stretch,
                                base / w if base != UNREACHABLE else UNREACHABLE)
        result = is_protected(h, ProtectionQuery(u, v, t * w, f, mode))
        if not result.protected:
            witness = result.witness
            vm, em = h.fault_masks(witness)
            eng_h.set_faults(vm, em)
            lhs = float(eng_h.distance(u, v))
            return VerificationReport(
                False, "per-edge",
                Counterexample(witness, u, v, lhs, t * w), stats)
    return VerificationReport(True, "per-edge", None, stats)


@dataclass
class StretchReport:
    """Max distance blow-up of h relative to g under one fault set."""

    ratio: float
    unreachable_pairs: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ratio": self.ratio,
                "unreachable_pairs": [list(p) for p in self.unreachable_pairs]}


def max_stretch(g: Graph, h: Graph, faults: Optional[FaultSet] = None) -> StretchReport:
    """Max over pairs connected in g minus F of dist_h / dist_g.

    Pairs reachable in g minus F but not in h minus F are flagged and force
    the ratio to UNREACHABLE. With no constraining pairs the ratio is 1.0.
    """
    _require_subgraph(g, h)
    blocked = set()
    if faults is not None and faults.mode == "vertex":
        blocked = set(faults.members)
    eng_g = make_engine(g)
    eng_h = make_engine(h)
    vm_g, em_g = g.fault_masks(faults)
    vm_h, em_h = h.fault_masks(faults)
    eng_g.set_faults(vm_g, em_g)
    eng_h.set_faults(vm_h, em_h)
    report = StretchReport(ratio=1.0)
    for u in range(g.n):
        if u in blocked:
            continue
        row_g = eng_g.distances_from(u)
        row_h = eng_h.distances_from(u)
        for v in range(u + 1, g.n):
            if v in blocked or row_g[v] == UNREACHABLE:
                continue
            if row_h[v] == UNREACHABLE:
                report.unreachable_pairs.append((u, v))
                report.ratio = UNREACHABLE
            elif report.ratio != UNREACHABLE:
                report.ratio = max(report.ratio, float(row_h[v]) / float(row_g[v]))
    return report
