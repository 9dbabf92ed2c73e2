"""Shared brute-force oracles and small generators for the test suite.

These deliberately re-derive results by enumeration or BFS so they stay
independent of the library's search-based code paths.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from ftspanner.graphs import UNREACHABLE, FaultSet, Graph, dist


def all_simple_paths_dist(g: Graph, u: int, v: int, faults=None) -> float:
    """Shortest u-v distance by enumerating every simple path."""
    banned_v: set[int] = set()
    banned_e: set[tuple[int, int]] = set()
    if faults is not None:
        if faults.mode == "vertex":
            banned_v = set(faults.members)
        else:
            banned_e = set(faults.members)
    if u == v:
        return 0.0
    best = UNREACHABLE

    def walk(x, seen, total):
        nonlocal best
        if total >= best:
            return
        for y, w, _ in g.neighbors(x):
            key = (x, y) if x < y else (y, x)
            if y in seen or y in banned_v or key in banned_e:
                continue
            if y == v:
                best = min(best, total + w)
            else:
                walk(y, seen | {y}, total + w)

    walk(u, {u}, 0.0)
    return best


def bfs_hops(adj, n, s, banned_v=frozenset(), banned_e=frozenset()):
    hops = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        for y in adj[x]:
            key = (x, y) if x < y else (y, x)
            if y in hops or y in banned_v or key in banned_e:
                continue
            hops[y] = hops[x] + 1
            q.append(y)
    return hops


def brute_girth(g: Graph) -> float:
    """Shortest cycle length: remove an edge, BFS the endpoints, add one."""
    adj = [[v for v, _, _ in g.neighbors(u)] for u in range(g.n)]
    best = UNREACHABLE
    for u, v, _ in g.edges():
        hops = bfs_hops(adj, g.n, u, banned_e={(min(u, v), max(u, v))})
        if v in hops:
            best = min(best, hops[v] + 1)
    return best


def brute_protected(h: Graph, u: int, v: int, threshold: float,
                    f: int, mode: str) -> bool:
    """Definitional oracle: enumerate every in-budget fault set."""
    if mode == "vertex":
        candidates = sorted(x for x in range(h.n) if x not in (u, v))
        build = FaultSet.of_vertices
    else:
        candidates = sorted(h.edge_keys())
        build = FaultSet.of_edges
    for size in range(f + 1):
        for combo in itertools.combinations(candidates, size):
            if dist(h, u, v, build(combo)) > threshold * (1 + 1e-9):
                return False
    return True


def random_graph(rng: random.Random, n_max: int = 10, p: float = 0.4,
                 weighted: bool = False, n_min: int = 3) -> Graph:
    from ftspanner.graphs import random_gnp

    n = rng.randint(n_min, n_max)
    if weighted:
        return random_gnp(n, p, rng, 1.0, 2.0)
    return random_gnp(n, p, rng)


def circulant(n: int, jumps: tuple[int, ...]) -> Graph:
    """Regular graph: node i joined to i +- j for each jump j."""
    edges = set()
    for i in range(n):
        for j in jumps:
            a, b = i, (i + j) % n
            if a != b:
                edges.add((min(a, b), max(a, b)))
    return Graph(n, ((a, b, 1.0) for a, b in edges))
