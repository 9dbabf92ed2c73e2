"""Extremal lower-bound instances: high-girth bases, blow-ups, witnesses.

A blow-up replaces every base vertex with ``copies`` clones and every base
edge with a complete bipartite connection between the clone sets. When the
base has girth at least 2k+2, each blown edge comes with a small witness
fault set under which that edge is the only short connection between its
endpoints, so any fault-tolerant spanner within stretch 2k-1 must keep
every edge. ``check_criticality`` verifies that property edge by edge.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import IO, Optional

from .engine import make_engine
from .graphs import (
    UNREACHABLE,
    FaultSet,
    Graph,
    GraphError,
    InvalidQueryError,
    Mode,
    girth,
    random_gnp,
    shortest_cycle,
)

# -- named base graphs --------------------------------------------------------


def lcf_graph(n: int, jumps: list[int], repeats: int) -> Graph:
    """Hamiltonian cubic graph from LCF notation: an n-cycle plus chords."""
    if len(jumps) * repeats != n:
        raise ValueError(f"LCF length {len(jumps)}x{repeats} != {n}")
    edges = {(u, (u + 1) % n) for u in range(n)}
    for i, j in enumerate(jumps * repeats):
        a, b = i, (i + j) % n
        edges.add((min(a, b), max(a, b)))
    return Graph(n, ((min(a, b), max(a, b), 1.0) for a, b in edges))


def petersen_graph() -> Graph:
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5, 1.0))            # outer cycle
        edges.append((5 + i, 5 + (i + 2) % 5, 1.0))    # inner pentagram
        edges.append((i, i + 5, 1.0))                  # spokes
    return Graph(10, edges)


def projective_plane_graph(q: int) -> Graph:
    """Point-line incidence graph of the projective plane of prime order q.

    2(q^2+q+1) nodes (points then lines), (q+1)(q^2+q+1) edges, girth 6.
    """
    if q < 2 or any(q % d == 0 for d in range(2, int(math.isqrt(q)) + 1)):
        raise ValueError(f"projective plane order must be prime, got {q}")
    reps = []
    seen = set()
    for x in range(q):
        for y in range(q):
            for z in range(q):
                if x == y == z == 0:
                    continue
                lead = next(c for c in (x, y, z) if c)
                inv = pow(lead, q - 2, q)
                norm = ((x * inv) % q, (y * inv) % q, (z * inv) % q)
                if norm not in seen:
                    seen.add(norm)
                    reps.append(norm)
    count = len(reps)  # q^2 + q + 1
    edges = []
    for i, point in enumerate(reps):
        for j, line in enumerate(reps):
            if sum(a * b for a, b in zip(point, line)) % q == 0:
                edges.append((i, count + j, 1.0))
    return Graph(2 * count, edges)


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    n: int
    m: int
    girth: int
    build: object  # zero-argument constructor

    def make(self) -> Graph:
        g = self.build()
        if g.n != self.n or g.m != self.m or girth(g) != self.girth:
            raise GraphError(f"registry entry {self.name} failed re-verification")
        return g


REGISTRY: dict[str, RegistryEntry] = {
    e.name: e for e in [
        RegistryEntry("petersen", 10, 15, 5, petersen_graph),
        RegistryEntry("heawood", 14, 21, 6, lambda: lcf_graph(14, [5, -5], 7)),
        RegistryEntry("pappus", 18, 27, 6, lambda: lcf_graph(18, [5, 7, -7, 7, -7, -5], 3)),
        RegistryEntry("mcgee", 24, 36, 7, lambda: lcf_graph(24, [12, 7, -7], 8)),
        RegistryEntry("tutte-coxeter", 30, 45, 8,
                      lambda: lcf_graph(30, [-13, -9, 7, -7, 9, 13], 5)),
    ]
}

_PLANE_ORDERS = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def named_base(name: str) -> Graph:
    """Base graph by registry name, 'plane:q', or 'random:seed:n[:p]'."""
    if name in REGISTRY:
        return REGISTRY[name].make()
    if name.startswith("plane:"):
        return projective_plane_graph(int(name.split(":", 1)[1]))
    if name.startswith("random:"):
        parts = name.split(":")
        seed, n = int(parts[1]), int(parts[2])
        k = int(parts[3]) if len(parts) > 3 else 2
        return random_high_girth_graph(n, k, random.Random(seed))
    raise ValueError(f"unknown base graph {name!r}")


def random_high_girth_graph(n: int, k: int, rng: random.Random) -> Graph:
    """Random graph with all cycles of length <= 2k+1 destroyed by deletion.

    Dense enough for desk-scale experiments; no extremal guarantee.
    """
    p = min(0.5, 1.5 * n ** (1.0 / k) / max(n, 1))
    g = random_gnp(n, p, rng)
    while True:
        length, cycle = shortest_cycle(g)
        if length == UNREACHABLE or length >= 2 * k + 2:
            return g
        i = rng.randrange(len(cycle))
        u, v = cycle[i], cycle[(i + 1) % len(cycle)]
        g = g.subgraph_with_edges(g.edge_keys() - {(min(u, v), max(u, v))})


def base_girth_graph(k: int, target_n: int, seed: Optional[int] = None) -> Graph:
    """A girth >= 2k+2 base with node count near target_n.

    Preference order: named registry graph, then (k = 2) a projective-plane
    incidence graph, then a seeded random fallback. Deterministic sources
    must land within a factor of two of target_n (target_n <= n <= 2
    target_n); otherwise, without a seed, the largest available size is
    named in the error.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if target_n < 1:
        raise ValueError(f"target_n must be >= 1, got {target_n}")
    need = 2 * k + 2
    candidates: list[tuple[int, int, str]] = []  # (n, priority, name)
    for entry in REGISTRY.values():
        if entry.girth >= need:
            candidates.append((entry.n, 0, entry.name))
    if k == 2:
        for q in _PLANE_ORDERS:
            candidates.append((2 * (q * q + q + 1), 1, f"plane:{q}"))
    feasible = [c for c in candidates if target_n <= c[0] <= 2 * target_n]
    if feasible:
        n, _, name = min(feasible)
        g = named_base(name)
        assert girth(g) >= need
        return g
    if seed is not None:
        return random_high_girth_graph(target_n, k, random.Random(seed))
    largest = max((c[0] for c in candidates), default=0)
    raise ValueError(
        f"no deterministic girth-{need} base reaches target_n={target_n} "
        f"within 2x (largest available: {largest} nodes); pass a seed to "
        f"allow the randomized fallback")


# -- blow-ups ------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupInstance:
    """Blow-up of a high-girth base; node (u, i) has id u * copies + i."""

    base: Graph
    base_name: str
    copies: int
    blown: Graph
    k: int
    f: int
    mode: Mode
    eft_variant: Optional[str] = None  # "k2" | "general" when mode == "edge"

    def node_id(self, u: int, i: int) -> int:
        return u * self.copies + i

    def node_label(self, x: int) -> tuple[int, int]:
        return divmod(x, self.copies)


def _blowup(base: Graph, copies: int) -> Graph:
    edges = []
    for u, v, _ in base.edges():
        for i in range(copies):
            for j in range(copies):
                edges.append((u * copies + i, v * copies + j, 1.0))
    return Graph(copies * base.n, edges)


def _check_base(base: Graph, k: int) -> None:
    length, cycle = shortest_cycle(base)
    if length < 2 * k + 2:
        raise InvalidQueryError(
            f"base girth {length} below {2 * k + 2}; offending cycle {cycle}")


def _copies_or_error(copies: int, f: int) -> int:
    if copies < 1:
        raise InvalidQueryError(f"fault budget f={f} yields zero copies")
    return copies


def vft_blowup(base: Graph, f: int, k: int, base_name: str = "custom") -> BlowupInstance:
    """Vertex-fault instance: ceil(f/2) copies per base vertex."""
    _check_base(base, k)
    copies = _copies_or_error(-(-f // 2), f)
    return BlowupInstance(base, base_name, copies, _blowup(base, copies),
                          k, f, "vertex")


def eft_blowup(base: Graph, f: int, k: int, base_name: str = "custom",
               variant: Optional[str] = None) -> BlowupInstance:
    """Edge-fault instance; the variant defaults to "k2" for k=2 (ceil(f/2)
    copies) and "general" for k>=3 (floor(sqrt(f)) copies)."""
    _check_base(base, k)
    if variant is None:
        variant = "k2" if k == 2 else "general"
    if variant == "k2":
        copies = -(-f // 2)
    elif variant == "general":
        copies = math.isqrt(f)
    else:
        raise InvalidQueryError(f"unknown EFT variant {variant!r}")
    copies = _copies_or_error(copies, f)
    return BlowupInstance(base, base_name, copies, _blowup(base, copies),
                          k, f, "edge", eft_variant=variant)


def witness_fault_set(inst: BlowupInstance, e: tuple[int, int]) -> FaultSet:
    """The fault set under which blown edge e is the only short connection.

    Vertex mode: all other copies of both endpoints. Edge mode, "k2"
    variant: the other copy-edges incident to either endpoint of e.
    Edge mode, "general" variant: every copy-edge between the two clone
    sets except e itself.
    """
    a, b = e
    if not inst.blown.has_edge(a, b):
        raise InvalidQueryError(f"edge ({a},{b}) not in the blown graph")
    (u, i), (v, j) = inst.node_label(a), inst.node_label(b)
    t = inst.copies
    if inst.mode == "vertex":
        members = [inst.node_id(u, x) for x in range(t) if x != i]
        members += [inst.node_id(v, x) for x in range(t) if x != j]
        return FaultSet.of_vertices(members)
    if inst.eft_variant == "k2":
        pairs = [(a, inst.node_id(v, x)) for x in range(t) if x != j]
        pairs += [(inst.node_id(u, x), b) for x in range(t) if x != i]
        return FaultSet.of_edges(pairs)
    pairs = [(inst.node_id(u, x), inst.node_id(v, y))
             for x in range(t) for y in range(t) if (x, y) != (i, j)]
    return FaultSet.of_edges(pairs)


@dataclass
class CriticalityViolation:
    edge: tuple[int, int]
    distance: float
    detour: Optional[list[int]]

    def to_json(self) -> dict:
        return {"edge": list(self.edge), "distance": self.distance,
                "detour": self.detour}


@dataclass
class CriticalityReport:
    ok: bool
    edges_checked: int
    required_distance: int
    min_distance: float
    violations: list[CriticalityViolation]

    def to_json(self) -> dict:
        return {"verdict": "pass" if self.ok else "fail",
                "edges_checked": self.edges_checked,
                "required_distance": self.required_distance,
                "min_distance": self.min_distance,
                "violations": [v.to_json() for v in self.violations]}


def check_criticality(inst: BlowupInstance) -> CriticalityReport:
    """Every blown edge, under its witness faults and with itself removed,
    must leave its endpoints at distance >= 2k+1. A pass certifies that any
    in-budget fault-tolerant spanner within stretch 2k-1 keeps every edge."""
    need = 2 * inst.k + 1
    blown = inst.blown
    violations: list[CriticalityViolation] = []
    min_distance = UNREACHABLE
    eng = make_engine(blown)
    for u, v, _ in blown.edges():
        faults = witness_fault_set(inst, (u, v))
        vm, em = blown.fault_masks(faults)
        # removing the edge itself is one more edge mask on the full graph
        eng.set_faults(vm, em | {blown.edge_id(u, v)})
        d, path = eng.distance_and_path(u, v)
        d = float(d)
        min_distance = min(min_distance, d)
        if d < need:
            violations.append(CriticalityViolation((u, v), d, path))
    return CriticalityReport(
        ok=not violations,
        edges_checked=blown.m,
        required_distance=need,
        min_distance=min_distance,
        violations=violations,
    )


# -- instance serialization ----------------------------------------------------


def instance_metadata(inst: BlowupInstance, seed: Optional[int] = None) -> dict:
    meta = {
        "kind": "blowup",
        "base": inst.base_name,
        "base_n": inst.base.n,
        "base_m": inst.base.m,
        "copies": inst.copies,
        "k": inst.k,
        "f": inst.f,
        "mode": inst.mode,
    }
    if inst.eft_variant is not None:
        meta["variant"] = inst.eft_variant
    if seed is not None:
        meta["seed"] = seed
    return meta


def save_instance(inst: BlowupInstance, stream: IO[str],
                  seed: Optional[int] = None) -> None:
    from .graphs import dump_graph

    dump_graph(inst.blown, stream, metadata=instance_metadata(inst, seed))


def load_instance(path: str) -> BlowupInstance:
    """Rebuild a blow-up instance from a file written by save_instance."""
    from .graphs import read_graph, read_metadata

    meta = read_metadata(path)
    if meta.get("kind") != "blowup":
        raise GraphError(f"{path} does not carry blow-up metadata")
    base = named_base(meta["base"])
    if base.n != int(meta["base_n"]) or base.m != int(meta["base_m"]):
        raise GraphError(f"base {meta['base']} size mismatch with metadata")
    f, k, mode = int(meta["f"]), int(meta["k"]), meta["mode"]
    if mode == "vertex":
        inst = vft_blowup(base, f, k, base_name=meta["base"])
    else:
        inst = eft_blowup(base, f, k, base_name=meta["base"],
                          variant=meta.get("variant"))
    blown = read_graph(path)
    if blown != inst.blown:
        raise GraphError(f"{path} edge list does not match the regenerated instance")
    return inst
