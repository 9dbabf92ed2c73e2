"""Walk counting, blockade construction, degree regularization, density.

All walk counts are exact (Python integers, so no overflow concerns) and
treat the graph as unweighted. A walk of length i is a sequence of i+1
nodes with consecutive pairs adjacent; walks are directed and counted with
a designated start, so a closed walk and its reversal are distinct.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graphs import Graph, InvalidQueryError

Walk = tuple[int, ...]


# -- closed walks --------------------------------------------------------------


def count_closed_walks(g: Graph, length: int) -> int:
    """Number of closed walks of exactly ``length`` edges (trace of the
    length-th adjacency power), counted with start node and direction."""
    if length < 1:
        raise InvalidQueryError(f"walk length must be >= 1, got {length}")
    total = 0
    for s in range(g.n):
        vec = [0] * g.n
        vec[s] = 1
        for _ in range(length):
            nxt = [0] * g.n
            for u, cnt in enumerate(vec):
                if cnt:
                    for v, _, _ in g.neighbors(u):
                        nxt[v] += cnt
            vec = nxt
        total += vec[s]
    return total


def count_all_walks(g: Graph, length: int) -> int:
    """Number of walks of exactly ``length`` edges between any endpoints."""
    vec = [1] * g.n
    for _ in range(length):
        nxt = [0] * g.n
        for u, cnt in enumerate(vec):
            if cnt:
                for v, _, _ in g.neighbors(u):
                    nxt[v] += cnt
        vec = nxt
    return sum(vec)


# -- blockades -----------------------------------------------------------------


@dataclass
class BlockadeSet:
    """Per-level sets of blocking walks plus the target fraction.

    A walk is blocked when any stored walk, or its reversal, appears as a
    contiguous subwalk. ``levels`` maps walk length (edge count) to the
    stored walks in insertion order; ``log`` records each selection.
    """

    phi: float
    levels: dict[int, list[Walk]] = field(default_factory=dict)
    log: list[dict] = field(default_factory=list)

    @classmethod
    def empty(cls, phi: float = 0.0) -> "BlockadeSet":
        return cls(phi=phi)

    def walks(self) -> Iterable[Walk]:
        for level in sorted(self.levels):
            yield from self.levels[level]

    def level_sizes(self) -> dict[int, int]:
        return {level: len(ws) for level, ws in sorted(self.levels.items())}

    def add(self, walk: Walk) -> None:
        self.levels.setdefault(len(walk) - 1, []).append(tuple(walk))

    def to_json(self) -> dict:
        return {"phi": self.phi,
                "levels": {str(lv): [list(w) for w in ws]
                           for lv, ws in sorted(self.levels.items())}}


class _BlockadeMatcher:
    """Contiguous-subwalk test against walks of up to ``max_i`` edges."""

    def __init__(self, g: Graph, blockades: Optional[BlockadeSet], max_i: int):
        self.by_nodes: dict[int, set[Walk]] = {}
        inert = 0
        if blockades is not None:
            for walk in blockades.walks():
                for a, b in zip(walk, walk[1:]):
                    if not g.has_edge(a, b):
                        raise InvalidQueryError(
                            f"blockade {walk} is not a walk of the graph")
                if len(walk) - 1 > max_i:
                    inert += 1
                    continue
                bucket = self.by_nodes.setdefault(len(walk), set())
                bucket.add(walk)
                bucket.add(walk[::-1])
        if inert:
            warnings.warn(f"{inert} blockade(s) longer than the walk length "
                          f"are inert", stacklevel=3)
        self.max_nodes = max(self.by_nodes, default=0)
        self.state_len = max(1, self.max_nodes - 1)

    def blocks_end(self, window: Walk) -> bool:
        """Does any blockade end exactly at the last node of ``window``?"""
        for nodes, bucket in self.by_nodes.items():
            if len(window) >= nodes and window[-nodes:] in bucket:
                return True
        return False


@dataclass
class WalkStats:
    """Unblocked walk counts of one length: per-pair counts, their squared
    sum (meets), the all-walk total, and closed-walk counts for 2i."""

    i: int
    counts: list[list[int]]
    total_walks: int
    meets: int
    closed_walks: dict[int, int]

    def count(self, u: int, v: int) -> int:
        return self.counts[u][v]

    def unblocked_total(self) -> int:
        return sum(map(sum, self.counts))

    def max_pair(self) -> tuple[int, tuple[int, int]]:
        """(max count, lexicographically smallest pair attaining it)."""
        best, pair = -1, (0, 0)
        for u, row in enumerate(self.counts):
            for v, cnt in enumerate(row):
                if cnt > best:
                    best, pair = cnt, (u, v)
        return best, pair


def walk_stats(g: Graph, i: int, blockades: Optional[BlockadeSet] = None) -> WalkStats:
    """Exact per-pair counts of unblocked i-walks and their meet count.

    The dynamic program tracks, per partial walk, just enough trailing nodes
    to detect any blockade ending at the next step.
    """
    if i < 1:
        raise InvalidQueryError(f"walk length must be >= 1, got {i}")
    matcher = _BlockadeMatcher(g, blockades, i)
    counts = [[0] * g.n for _ in range(g.n)]
    for start in range(g.n):
        states: dict[Walk, int] = {(start,): 1}
        for _ in range(i):
            nxt: dict[Walk, int] = {}
            for suffix, cnt in states.items():
                for y, _, _ in g.neighbors(suffix[-1]):
                    window = suffix + (y,)
                    if matcher.blocks_end(window):
                        continue
                    state = window[-matcher.state_len:]
                    nxt[state] = nxt.get(state, 0) + cnt
            states = nxt
        row = counts[start]
        for suffix, cnt in states.items():
            row[suffix[-1]] += cnt
    meets = sum(cnt * cnt for row in counts for cnt in row)
    return WalkStats(
        i=i,
        counts=counts,
        total_walks=count_all_walks(g, i),
        meets=meets,
        closed_walks={2 * i: count_closed_walks(g, 2 * i)},
    )


def _lex_smallest_walk(g: Graph, matcher: _BlockadeMatcher,
                       start: int, end: int, i: int) -> Optional[Walk]:
    def extend(window: Walk, remaining: int) -> Optional[Walk]:
        if remaining == 0:
            return window if window[-1] == end else None
        for y, _, _ in g.neighbors(window[-1]):
            nxt = window + (y,)
            if matcher.blocks_end(nxt):
                continue
            found = extend(nxt, remaining - 1)
            if found is not None:
                return found
        return None

    return extend((start,), i)


def build_blockades(g: Graph, k: int, f: int, phi: float) -> BlockadeSet:
    """Assemble per-level blockades up to the phi fraction budget.

    For each level 2..k-1 in order: repeatedly take one walk (the smallest)
    from the currently busiest pair, until one more walk would exceed the
    phi fraction of all walks of that length. ``f`` is recorded in the log
    so reports can compare the residual per-pair maxima against powers of
    the fault budget.
    """
    if k < 2:
        raise InvalidQueryError(f"k must be >= 2, got {k}")
    if not (0.0 < phi < 1.0):
        raise InvalidQueryError(f"phi must lie in (0, 1), got {phi}")
    blockades = BlockadeSet(phi=phi)
    for level in range(2, k):
        total = count_all_walks(g, level)
        budget = math.floor(phi * total)
        while len(blockades.levels.get(level, ())) < budget:
            stats = walk_stats(g, level, blockades)
            best, (u, v) = stats.max_pair()
            if best <= 0:
                break
            matcher = _BlockadeMatcher(g, blockades, level)
            walk = _lex_smallest_walk(g, matcher, u, v, level)
            assert walk is not None  # count was positive
            blockades.add(walk)
            blockades.log.append({
                "level": level, "pair": [u, v], "walk": list(walk),
                "max_before": best, "fault_budget": f,
                "budget": budget, "total_walks": total,
            })
    return blockades


def default_phi(g: Graph, k: int) -> float:
    """Default blockade fraction: (4 * band ratio)^-k from measured degrees."""
    stats = degree_stats(g)
    band = max(stats.ratio, 1.0)
    return (4.0 * band) ** (-k)


def default_cutoff(k: int) -> float:
    """Default regularization degree-cutoff multiplier, 12 * 9^k."""
    return 12.0 * 9.0 ** k


# -- degree statistics and regularization ---------------------------------------


@dataclass
class DegreeStats:
    """Degree summary over active (degree >= 1) nodes, optionally with the
    band [band_low, band_low * band_multiplier] of a regularized graph."""

    n_active: int
    min_degree: int
    max_degree: int
    mean_degree: float
    ratio: float
    band_low: Optional[int] = None
    band_multiplier: Optional[float] = None

    def to_json(self) -> dict:
        return {"n_active": self.n_active, "min_degree": self.min_degree,
                "max_degree": self.max_degree, "mean_degree": self.mean_degree,
                "ratio": self.ratio, "band_low": self.band_low,
                "band_multiplier": self.band_multiplier}


def degree_stats(g: Graph, banded: bool = False) -> DegreeStats:
    degrees = [g.degree(u) for u in range(g.n) if g.degree(u) > 0]
    if not degrees:
        return DegreeStats(0, 0, 0, 0.0, 0.0)
    lo, hi = min(degrees), max(degrees)
    mean = sum(degrees) / len(degrees)
    ratio = hi / lo
    return DegreeStats(len(degrees), lo, hi, mean, ratio,
                       band_low=lo if banded else None,
                       band_multiplier=ratio if banded else None)


class RegularizeError(ValueError):
    """Regularization emptied the graph; the case log explains the path."""

    def __init__(self, message: str, cases: list[str]):
        super().__init__(f"{message} (case log: {cases})")
        self.cases = cases


@dataclass
class RegularizeResult:
    graph: Graph
    stats: DegreeStats
    cases: list[str]
    edges_in: int
    edges_out: int

    @property
    def retention(self) -> float:
        return self.edges_out / self.edges_in if self.edges_in else 0.0


def regularize(g: Graph, c: float) -> RegularizeResult:
    """Extract a subgraph whose degrees sit in a narrow band.

    Split nodes by the degree cutoff c * (average degree) into a low set and
    a high set, keep the largest of the three induced edge classes, then
    either prune low-degree nodes and stop (low-low survived) or drop the
    stranded side and repeat. Raises :class:`RegularizeError` if the
    procedure empties the graph, which indicates c is too small.
    """
    if c <= 1:
        raise InvalidQueryError(f"cutoff multiplier must exceed 1, got {c}")
    if g.n == 0:
        raise InvalidQueryError("empty graph")
    edges = set(g.edge_keys())
    nodes = set(range(g.n))
    cases: list[str] = []
    while True:
        if not edges or not nodes:
            raise RegularizeError("regularization emptied the graph", cases)
        deg: dict[int, int] = {x: 0 for x in nodes}
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        avg = 2 * len(edges) / len(nodes)
        low = {x for x in nodes if deg[x] <= c * avg}
        high = nodes - low
        e_low = {e for e in edges if e[0] in low and e[1] in low}
        e_high = {e for e in edges if e[0] in high and e[1] in high}
        e_cross = edges - e_low - e_high
        # largest class survives; ties prefer low-low, then cross
        chosen, kept = max(
            (("a", e_low), ("c", e_cross), ("b", e_high)),
            key=lambda item: (len(item[1]),
                              {"a": 2, "c": 1, "b": 0}[item[0]]))
        cases.append(chosen)
        if chosen == "a":
            kept_edges = set(kept)
            avg_kept = 2 * len(kept_edges) / len(nodes)
            while True:  # cascade deletion of weakly connected nodes
                deg = {x: 0 for x in nodes}
                for u, v in kept_edges:
                    deg[u] += 1
                    deg[v] += 1
                drop = {x for x in nodes if deg[x] <= avg_kept / 4}
                if not drop:
                    break
                nodes -= drop
                kept_edges = {e for e in kept_edges
                              if e[0] in nodes and e[1] in nodes}
                if not nodes:
                    raise RegularizeError("pruning emptied the graph", cases)
            if not kept_edges:
                raise RegularizeError("pruning removed every edge", cases)
            out = g.subgraph_with_edges(kept_edges)
            stats = degree_stats(out, banded=True)
            return RegularizeResult(out, stats, cases, g.m, out.m)
        if chosen == "b":
            new_edges = set(kept)
        else:  # cross edges: keep the |high| busiest low nodes
            cross_deg = {x: 0 for x in low}
            for u, v in kept:
                side = u if u in low else v
                cross_deg[side] += 1
            ranked = sorted(low, key=lambda x: (-cross_deg[x], x))
            kept_low = set(ranked[:len(high)])
            surviving = high | kept_low
            new_edges = {e for e in kept
                         if e[0] in surviving and e[1] in surviving}
        new_nodes = {x for e in new_edges for x in e}
        if new_edges == edges and new_nodes == nodes:
            raise RegularizeError("no progress; cutoff multiplier too small", cases)
        edges, nodes = new_edges, new_nodes


# -- density -------------------------------------------------------------------


@dataclass
class DensityReport:
    """Spanner size against the f^(1-1/k) * n^(1+1/k) reference curve."""

    n: int
    input_edges: int
    spanner_edges: int
    f: int
    k: int
    bound: float
    ratio: float
    degrees: DegreeStats

    def to_json(self) -> dict:
        return {"n": self.n, "input_edges": self.input_edges,
                "spanner_edges": self.spanner_edges, "f": self.f, "k": self.k,
                "bound": self.bound, "ratio": self.ratio,
                "degrees": self.degrees.to_json()}


def density_report(g: Graph, h: Graph, f: int, k: int) -> DensityReport:
    """|E(h)| compared against f^(1-1/k) * n^(1+1/k); f=0 uses the f=1 curve."""
    if not h.is_subgraph_of(g):
        raise InvalidQueryError("h is not a subgraph of g")
    f_eff = max(f, 1)
    bound = f_eff ** (1.0 - 1.0 / k) * g.n ** (1.0 + 1.0 / k)
    return DensityReport(
        n=g.n, input_edges=g.m, spanner_edges=h.m, f=f, k=k,
        bound=bound, ratio=h.m / bound if bound else 0.0,
        degrees=degree_stats(h),
    )
