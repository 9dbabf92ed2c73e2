"""Exact protection testing for node pairs under bounded fault sets.

A pair (u, v) is protected at budget f if no fault set of at most f
vertices (excluding u, v) or edges can push the u-v distance above the
query threshold. The decision procedure is exact bounded-depth branching:
any witness fault set must hit every short path, so branching on the
elements of one short path at a time covers all candidates. A greedy
disjoint-paths certificate short-circuits the common protected case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import engine_for
from .graphs import FaultSet, Graph, InvalidQueryError, Mode, exceeds


@dataclass(frozen=True)
class ProtectionQuery:
    """Pair query: can f faults push dist(u, v) above threshold?"""

    u: int
    v: int
    threshold: float
    f: int
    mode: Mode

    def __post_init__(self):
        if self.threshold <= 0:
            raise InvalidQueryError(f"threshold must be positive, got {self.threshold}")
        if self.f < 0:
            raise InvalidQueryError(f"fault budget must be nonnegative, got {self.f}")
        if self.mode not in ("vertex", "edge"):
            raise InvalidQueryError(f"unknown mode {self.mode!r}")
        if self.mode == "vertex" and self.u == self.v:
            raise InvalidQueryError("vertex-mode query requires distinct endpoints")


@dataclass(frozen=True)
class ProtectionResult:
    """Decision plus evidence.

    ``witness`` is present iff unprotected: a fault set of size <= f whose
    removal pushes the distance above the threshold. ``certificate``, when
    present, is a tuple of pairwise disjoint short paths that no in-budget
    fault set can all hit (f+1 of them, or a single direct edge in vertex
    mode, which no vertex fault may remove).
    """

    protected: bool
    witness: Optional[FaultSet] = None
    certificate: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def decision(self) -> str:
        return "Protected" if self.protected else "Unprotected"


def find_disjoint_short_paths(h: Graph, u: int, v: int, threshold: float,
                              count: int, mode: Mode) -> Optional[list[list[int]]]:
    """Up to ``count`` pairwise disjoint u-v paths of weight <= threshold.

    Disjointness is on interior vertices (vertex mode) or edges (edge mode).
    Greedy: repeatedly take a shortest surviving path and delete its interior
    vertices (its edge, if it is the direct edge) or its edges. Returns None
    when the greedy cannot reach ``count``; that carries no negative
    guarantee.
    """
    if count < 1:
        raise InvalidQueryError(f"count must be >= 1, got {count}")
    if u == v:
        raise InvalidQueryError("endpoints must differ")
    h.check_node(u)
    h.check_node(v)
    return _greedy_disjoint(engine_for(h), h, u, v, threshold, count, mode,
                            frozenset(), frozenset())


def _greedy_disjoint(eng, h: Graph, u: int, v: int, threshold: float,
                     count: int, mode: Mode, base_v, base_e) -> Optional[list[list[int]]]:
    deleted_v: set[int] = set(base_v)
    deleted_e: set[int] = set(base_e)
    paths: list[list[int]] = []
    while len(paths) < count:
        eng.set_faults(deleted_v, deleted_e)
        d, path = eng.distance_and_path(u, v)
        if path is None or exceeds(d, threshold):
            return None
        paths.append(path)
        if mode == "vertex":
            interior = path[1:-1]
            if interior:
                deleted_v.update(interior)
            else:
                deleted_e.add(h.edge_id(path[0], path[1]))
        else:
            deleted_e.update(h.edge_id(a, b) for a, b in zip(path, path[1:]))
    return paths


def is_protected(h: Graph, q: ProtectionQuery) -> ProtectionResult:
    """Exact protection decision with a witness or certificate.

    Deterministic: branch elements are taken in path order from u and the
    first witness found is returned.
    """
    h.check_node(q.u)
    h.check_node(q.v)

    if q.mode == "vertex" and h.has_edge(q.u, q.v) and \
            not exceeds(h.weight(q.u, q.v), q.threshold):
        # The direct edge survives every vertex fault set.
        return ProtectionResult(True, certificate=((q.u, q.v),))

    paths = find_disjoint_short_paths(h, q.u, q.v, q.threshold, q.f + 1, q.mode)
    if paths is not None:
        return ProtectionResult(True, certificate=tuple(tuple(p) for p in paths))

    witness = _search_witness(h, q)
    if witness is None:
        return ProtectionResult(True)
    return ProtectionResult(False, witness=witness)


def _search_witness(h: Graph, q: ProtectionQuery) -> Optional[FaultSet]:
    """DFS over partial fault sets; exact because any witness must intersect
    every path of weight <= threshold, in particular each one we find."""
    eng = engine_for(h)
    fault_v: set[int] = set()
    fault_e: set[int] = set()
    fault_pairs: list[tuple[int, int]] = []  # edge mode, insertion order
    seen: set[frozenset] = set()

    def explore() -> Optional[FaultSet]:
        key = frozenset(fault_v) if q.mode == "vertex" else frozenset(fault_e)
        if key in seen:
            return None
        seen.add(key)
        eng.set_faults(fault_v, fault_e)
        d, path = eng.distance_and_path(q.u, q.v)
        if path is None or exceeds(d, q.threshold):
            if q.mode == "vertex":
                return FaultSet.of_vertices(fault_v)
            return FaultSet.of_edges(fault_pairs)
        if len(key) >= q.f:
            return None
        # Subtree prune, result-preserving: if one more path than the
        # remaining budget survives disjointly under the current faults,
        # no extension below this node can be a witness.
        remaining = q.f - len(key)
        if key and _greedy_disjoint(eng, h, q.u, q.v, q.threshold,
                                    remaining + 1, q.mode,
                                    fault_v, fault_e) is not None:
            return None
        if q.mode == "vertex":
            for x in path[1:-1]:
                fault_v.add(x)
                found = explore()
                if found is not None:
                    return found
                fault_v.remove(x)
        else:
            for a, b in zip(path, path[1:]):
                eid = h.edge_id(a, b)
                fault_e.add(eid)
                fault_pairs.append((a, b))
                found = explore()
                if found is not None:
                    return found
                fault_e.remove(eid)
                fault_pairs.pop()
        return None

    return explore()
