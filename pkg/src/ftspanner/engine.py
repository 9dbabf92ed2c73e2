"""Distance engines: compiled kernel when available, pure Python otherwise.

Both backends implement identical Dijkstra semantics, including tie-breaking
(pop order by (distance, node id), neighbors relaxed in ascending id order,
parents updated only on strict improvement), so the two produce identical
distances *and* identical shortest paths. Selection happens at import:

  * ``FTSPANNER_PURE_PYTHON=1`` forces the pure backend;
  * otherwise the Cython kernel is used if its module imported cleanly.

Engines carry per-instance scratch state and are not safe for concurrent
use; share graphs across threads, not engines. :func:`engine_for` hands out
one engine per (graph, thread).
"""

from __future__ import annotations

import heapq
import os
import threading
import weakref
from contextlib import contextmanager
from typing import Iterable, Optional, Sequence

from .graphs import UNREACHABLE, Graph

try:
    from . import _dijkstra as _compiled
except ImportError:
    _compiled = None

_FORCE_PURE = os.environ.get("FTSPANNER_PURE_PYTHON", "") not in ("", "0")

#: Name of the active backend: "compiled" or "python".
BACKEND = "compiled" if (_compiled is not None and not _FORCE_PURE) else "python"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _compiled is not None else ("python",)


class PyEngine:
    """Fault-masked Dijkstra over the graph's adjacency lists."""

    backend = "python"

    def __init__(self, g: Graph):
        self._adj = g._adj
        self._n = g.n
        self._vfault: frozenset = frozenset()
        self._efault: frozenset = frozenset()

    def set_faults(self, vertex_ids: Iterable[int], edge_ids: Iterable[int]) -> None:
        self._vfault = frozenset(vertex_ids)
        self._efault = frozenset(edge_ids)

    def _run(self, source: int, target: int) -> tuple[dict, dict]:
        vf, ef = self._vfault, self._efault
        dist = {source: 0.0}
        parent = {source: -1}
        done = set()
        heap = [(0.0, source)]
        while heap:
            d, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            if x == target:
                break
            for y, w, eid in self._adj[x]:
                if y in vf or eid in ef or y in done:
                    continue
                nd = d + w
                if nd < dist.get(y, UNREACHABLE):
                    dist[y] = nd
                    parent[y] = x
                    heapq.heappush(heap, (nd, y))
        return dist, parent

    def distance(self, source: int, target: int) -> float:
        if source == target:
            return 0.0
        dist, _ = self._run(source, target)
        return dist.get(target, UNREACHABLE)

    def distance_and_path(self, source: int, target: int):
        if source == target:
            return 0.0, [source]
        dist, parent = self._run(source, target)
        d = dist.get(target, UNREACHABLE)
        if d == UNREACHABLE:
            return UNREACHABLE, None
        path = [target]
        while path[-1] != source:
            path.append(parent[path[-1]])
        path.reverse()
        return d, path

    def distances_from(self, source: int) -> Sequence[float]:
        dist, _ = self._run(source, -1)
        return [dist.get(x, UNREACHABLE) for x in range(self._n)]


class CEngine:
    """Thin wrapper over the compiled CSR Dijkstra kernel."""

    backend = "compiled"

    def __init__(self, g: Graph):
        indptr, nbr, wt, eid = g.csr()
        self._core = _compiled.DijkstraCore(indptr, nbr, wt, eid, g.n, g.m)

    def set_faults(self, vertex_ids: Iterable[int], edge_ids: Iterable[int]) -> None:
        self._core.set_faults(list(vertex_ids), list(edge_ids))

    def distance(self, source: int, target: int) -> float:
        return self._core.distance(source, target)

    def distance_and_path(self, source: int, target: int):
        d = self._core.distance(source, target)
        if d == UNREACHABLE:
            return UNREACHABLE, None
        return d, self._core.path_to(source, target)

    def distances_from(self, source: int) -> Sequence[float]:
        return self._core.distances_from(source)


def make_engine(g: Graph, backend: Optional[str] = None):
    """Fresh engine for g; backend None picks the active default."""
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        return CEngine(g)
    if backend == "python":
        return PyEngine(g)
    raise ValueError(f"unknown backend {backend!r}")


_tls = threading.local()
_OVERRIDE: Optional[str] = None


@contextmanager
def use_backend(backend: Optional[str]):
    """Temporarily force every engine in this process onto one backend."""
    global _OVERRIDE
    previous = _OVERRIDE
    _OVERRIDE = backend
    try:
        yield
    finally:
        _OVERRIDE = previous


def engine_for(g: Graph):
    """Per-(graph, thread) cached engine using the active backend."""
    backend = _OVERRIDE or BACKEND
    cache = getattr(_tls, "engines", None)
    if cache is None:
        cache = weakref.WeakKeyDictionary()
        _tls.engines = cache
    entry = cache.get(g)
    if entry is None or entry[0] != backend:
        entry = (backend, make_engine(g, backend))
        cache[g] = entry
    return entry[1]
