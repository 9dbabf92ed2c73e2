"""Core weighted graph type, fault-masked distance queries, and girth.

Graphs are immutable after construction: nodes are dense integer ids
0..n-1, edges are unordered pairs with strictly positive finite weights.
Distance queries take an optional :class:`FaultSet` that masks failed
vertices or edges at query time; the graph itself is never copied, so
verifier loops over many fault sets stay allocation-light.
"""

from __future__ import annotations

import math
import random
from collections import deque
from typing import IO, Iterable, Iterator, Literal, Optional, Sequence

Mode = Literal["vertex", "edge"]

#: Sentinel for "no path": compares greater than every finite distance and
#: saturates under addition.
UNREACHABLE = math.inf

#: Relative tolerance applied to strict ">" comparisons against a positive
#: threshold, so floating-point weight sums never flip a tight comparison.
REL_TOL = 1e-9


def exceeds(value: float, bound: float) -> bool:
    """True iff ``value > bound`` beyond the relative float tolerance."""
    return value > bound * (1.0 + REL_TOL)


class GraphError(ValueError):
    """Malformed graph input or construction (parse errors carry a line number)."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidQueryError(ValueError):
    """A query referenced an invalid node or a fault set excluded an endpoint."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class FaultSet:
    """A mode-tagged set of failed vertices or failed edges.

    ``members`` is a frozenset of node ids in vertex mode, or of normalized
    ``(u, v)`` pairs (u < v) in edge mode. Edge members that are absent from
    the graph being queried act as no-ops, so a fault set drawn from a graph
    ``g`` can be replayed against any subgraph of ``g``.
    """

    __slots__ = ("mode", "members")

    def __init__(self, mode: Mode, members: Iterable = ()):
        if mode not in ("vertex", "edge"):
            raise ValueError(f"unknown fault mode {mode!r}")
        self.mode = mode
        if mode == "vertex":
            self.members = frozenset(int(x) for x in members)
        else:
            self.members = frozenset(_norm_edge(int(u), int(v)) for u, v in members)

    @classmethod
    def of_vertices(cls, vertices: Iterable[int]) -> "FaultSet":
        return cls("vertex", vertices)

    @classmethod
    def of_edges(cls, edges: Iterable[tuple[int, int]]) -> "FaultSet":
        return cls("edge", edges)

    @classmethod
    def empty(cls, mode: Mode) -> "FaultSet":
        return cls(mode)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __eq__(self, other) -> bool:
        return (isinstance(other, FaultSet)
                and self.mode == other.mode
                and self.members == other.members)

    def __hash__(self) -> int:
        return hash((self.mode, self.members))

    def __repr__(self) -> str:
        return f"FaultSet({self.mode}, {sorted(self.members)})"

    def to_json(self) -> dict:
        return {"mode": self.mode, "members": [list(m) if isinstance(m, tuple) else m
                                               for m in sorted(self.members)]}

    @classmethod
    def from_json(cls, obj: dict) -> "FaultSet":
        mode = obj["mode"]
        if mode == "vertex":
            return cls.of_vertices(obj["members"])
        return cls.of_edges(tuple(m) for m in obj["members"])


class Graph:
    """Undirected simple graph with positive edge weights and dense int ids."""

    __slots__ = ("n", "_w", "_adj", "_eid", "_csr", "__weakref__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]] = ()):
        if n < 0:
            raise GraphError(f"negative node count {n}")
        self.n = n
        w: dict[tuple[int, int], float] = {}
        for u, v, wt in edges:
            u, v = int(u), int(v)
            wt = float(wt)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) references node outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (wt > 0.0) or math.isinf(wt):
                raise GraphError(f"nonpositive or non-finite weight {wt} on edge ({u},{v})")
            key = _norm_edge(u, v)
            if key in w:
                raise GraphError(f"duplicate edge ({key[0]},{key[1]})")
            w[key] = wt
        self._w = w
        # Deterministic dense edge ids in sorted-key order; adjacency sorted
        # by neighbor id so every traversal order is input-order independent.
        keys = sorted(w)
        self._eid = {key: i for i, key in enumerate(keys)}
        adj: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(keys):
            wt = w[(u, v)]
            adj[u].append((v, wt, i))
            adj[v].append((u, wt, i))
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._csr = None

    # -- basic views ------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._w)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Edges as (u, v, weight) with u < v, in sorted order."""
        for key in sorted(self._w):
            yield key[0], key[1], self._w[key]

    def edge_keys(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._w)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self._w

    def weight(self, u: int, v: int) -> float:
        try:
            return self._w[_norm_edge(u, v)]
        except KeyError:
            raise InvalidQueryError(f"no edge ({u},{v})") from None

    def neighbors(self, u: int) -> tuple[tuple[int, float, int], ...]:
        """Sorted (neighbor, weight, edge_id) triples for node u."""
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def edge_id(self, u: int, v: int) -> int:
        return self._eid[_norm_edge(u, v)]

    def check_node(self, u: int) -> int:
        if not (0 <= u < self.n):
            raise InvalidQueryError(f"node {u} outside 0..{self.n - 1}")
        return u

    def subgraph_with_edges(self, keys: Iterable[tuple[int, int]]) -> "Graph":
        """Subgraph on the same vertex set keeping only the given edges."""
        return Graph(self.n, ((u, v, self._w[_norm_edge(u, v)])
                              for u, v in keys))

    def is_subgraph_of(self, other: "Graph") -> bool:
        if self.n != other.n:
            return False
        return all(other._w.get(k) == wt for k, wt in self._w.items())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and self._w == other._w)

    def __hash__(self):
        return hash((self.n, frozenset(self._w.items())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- kernel plumbing ---------------------------------------------------

    def csr(self):
        """CSR adjacency arrays for the compiled kernel (cached)."""
        if self._csr is None:
            import numpy as np

            deg = [len(a) for a in self._adj]
            indptr = np.zeros(self.n + 1, dtype=np.int32)
            indptr[1:] = np.cumsum(deg, dtype=np.int64).astype(np.int32)
            total = int(indptr[-1])
            nbr = np.empty(total, dtype=np.int32)
            wt = np.empty(total, dtype=np.float64)
            eid = np.empty(total, dtype=np.int32)
            pos = 0
            for a in self._adj:
                for v, w, e in a:
                    nbr[pos] = v
                    wt[pos] = w
                    eid[pos] = e
                    pos += 1
            self._csr = (indptr, nbr, wt, eid)
        return self._csr

    def fault_masks(self, faults: Optional[FaultSet]) -> tuple[frozenset, frozenset]:
        """Validate a fault set against this graph -> (vertex ids, edge ids)."""
        if faults is None or not faults.members:
            return frozenset(), frozenset()
        if faults.mode == "vertex":
            for x in faults.members:
                if not (0 <= x < self.n):
                    raise InvalidQueryError(f"faulted node {x} outside 0..{self.n - 1}")
            return faults.members, frozenset()
        eids = set()
        for u, v in faults.members:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidQueryError(f"faulted edge ({u},{v}) references invalid node")
            eid = self._eid.get((u, v))
            if eid is not None:  # absent edges are no-ops
                eids.add(eid)
        return frozenset(), frozenset(eids)


# -- distance queries -------------------------------------------------------


def dist(g: Graph, u: int, v: int, faults: Optional[FaultSet] = None) -> float:
    """Shortest-path weight from u to v in g with all faults deleted.

    Returns UNREACHABLE if v cannot be reached; dist(g, u, u) is 0.
    Raises InvalidQueryError if u or v is a member of a vertex-mode fault set.
    """
    return _query(g, u, v, faults)[0]


def shortest_path(g: Graph, u: int, v: int,
                  faults: Optional[FaultSet] = None) -> tuple[float, Optional[list[int]]]:
    """Like :func:`dist` but also returns one shortest path as a node list."""
    return _query(g, u, v, faults, want_path=True)


def _query(g, u, v, faults, want_path=False):
    g.check_node(u)
    g.check_node(v)
    if faults is not None and faults.mode == "vertex" and (
            u in faults.members or v in faults.members):
        raise InvalidQueryError(f"query endpoint in vertex fault set: ({u},{v})")
    vmask, emask = g.fault_masks(faults)
    from .engine import engine_for

    eng = engine_for(g)
    eng.set_faults(vmask, emask)
    if want_path:
        return eng.distance_and_path(u, v)
    return eng.distance(u, v), None


def distances_from(g: Graph, u: int, faults: Optional[FaultSet] = None) -> Sequence[float]:
    """All shortest-path weights from u (UNREACHABLE where disconnected)."""
    g.check_node(u)
    if faults is not None and faults.mode == "vertex" and u in faults.members:
        raise InvalidQueryError(f"source {u} in vertex fault set")
    vmask, emask = g.fault_masks(faults)
    from .engine import engine_for

    eng = engine_for(g)
    eng.set_faults(vmask, emask)
    return eng.distances_from(u)


# -- girth -------------------------------------------------------------------


def shortest_cycle(g: Graph) -> tuple[float, Optional[list[int]]]:
    """(length, node list) of a shortest cycle by edge count; weights ignored.

    Returns (UNREACHABLE, None) for forests. Runs one pruned BFS per node.
    """
    best = UNREACHABLE
    best_cycle: Optional[list[int]] = None
    for s in range(g.n):
        depth = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            dx = depth[x]
            if 2 * dx + 1 >= best:
                break
            for y, _, _ in g.neighbors(x):
                if y == parent[x]:
                    continue
                if y in depth:
                    cycle = _extract_cycle(x, y, parent)
                    if cycle is not None and len(cycle) < best:
                        best = len(cycle)
                        best_cycle = cycle
                else:
                    depth[y] = dx + 1
                    parent[y] = x
                    queue.append(y)
    return best, best_cycle


def _extract_cycle(x, y, parent):
    # Join the parent chains of x and y, trimming their shared tail.
    px = [x]
    while parent[px[-1]] != -1:
        px.append(parent[px[-1]])
    py = [y]
    while parent[py[-1]] != -1:
        py.append(parent[py[-1]])
    sx, sy = set(px), set(py)
    # Lowest common ancestor: first node of px's chain that lies on py's.
    meet = next(node for node in px if node in sy)
    if meet in px and meet in py:
        ix, iy = px.index(meet), py.index(meet)
        cycle = px[:ix + 1] + py[:iy][::-1]
        if len(cycle) < 3 or len(set(cycle)) != len(cycle):
            return None
        return cycle
    return None


def girth(g: Graph) -> float:
    """Edge count of the shortest cycle; UNREACHABLE for forests."""
    return shortest_cycle(g)[0]


# -- edge-list text format ---------------------------------------------------
#
# First non-comment line: "n m". Then m lines "u v w" (0-based ids, positive
# decimal weight), whitespace-separated. Lines starting with '#' are comments.


def load_graph(stream: IO[str]) -> Graph:
    """Parse the edge-list text format; errors carry the offending line number."""
    n = m = None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    lineno = 0
    for raw in stream:
        lineno += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2:
                raise GraphError(f"expected header 'n m', got {line!r}", lineno)
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphError(f"non-integer header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise GraphError(f"negative count in header {line!r}", lineno)
            continue
        if len(parts) != 3:
            raise GraphError(f"expected 'u v w', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise GraphError(f"malformed edge line {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"node id outside 0..{n - 1}", lineno)
        if u == v:
            raise GraphError(f"self-loop at node {u}", lineno)
        if not (w > 0.0) or math.isinf(w) or math.isnan(w):
            raise GraphError(f"nonpositive weight {parts[2]}", lineno)
        key = _norm_edge(u, v)
        if key in seen:
            raise GraphError(f"duplicate edge ({u},{v})", lineno)
        seen.add(key)
        edges.append((u, v, w))
    if n is None:
        raise GraphError("empty input: missing 'n m' header", lineno or 1)
    if len(edges) != m:
        raise GraphError(f"header promised {m} edges, found {len(edges)}", lineno)
    return Graph(n, edges)


def dump_graph(g: Graph, stream: IO[str], metadata: Optional[dict] = None) -> None:
    """Write the edge-list format; metadata goes into '#!' key=value lines."""
    if metadata:
        for key in sorted(metadata):
            stream.write(f"#! {key}={metadata[key]}\n")
    stream.write(f"{g.n} {g.m}\n")
    for u, v, w in g.edges():
        stream.write(f"{u} {v} {w!r}\n")


def read_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_graph(fh)


def write_graph(g: Graph, path: str, metadata: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        dump_graph(g, fh, metadata)


def read_metadata(path: str) -> dict[str, str]:
    """Collect '#!' key=value lines from an edge-list file."""
    meta: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("#!"):
                body = line[2:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
    return meta


# -- generators ---------------------------------------------------------------


def random_gnp(n: int, p: float, rng: random.Random,
               weight_low: float = 1.0, weight_high: float = 1.0) -> Graph:
    """G(n, p) with weights uniform in [weight_low, weight_high]."""
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                if weight_low == weight_high:
                    w = weight_low
                else:
                    w = rng.uniform(weight_low, weight_high)
                edges.append((u, v, w))
    return Graph(n, edges)
