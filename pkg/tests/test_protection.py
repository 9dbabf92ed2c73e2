import random

import pytest

from ftspanner.graphs import FaultSet, Graph, InvalidQueryError, dist, exceeds
from ftspanner.protection import (
    ProtectionQuery,
    find_disjoint_short_paths,
    is_protected,
)
from helpers import brute_protected, random_graph


def two_route() -> Graph:
    # u=0, v=3 joined by the disjoint 2-paths 0-1-3 and 0-2-3
    return Graph(4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)])


class TestIsProtected:
    def test_two_disjoint_paths_survive_one_fault(self):
        r = is_protected(two_route(), ProtectionQuery(0, 3, 3.0, 1, "vertex"))
        assert r.protected
        assert r.certificate is not None and len(r.certificate) == 2

    def test_two_faults_break_both_paths(self):
        r = is_protected(two_route(), ProtectionQuery(0, 3, 3.0, 2, "vertex"))
        assert not r.protected
        assert r.witness.members == {1, 2}

    def test_single_path_edge_fault(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1)])
        r = is_protected(g, ProtectionQuery(0, 2, 3.0, 1, "edge"))
        assert not r.protected
        assert r.witness.members == {(0, 1)}

    def test_direct_edge_immune_to_vertex_faults(self):
        g = Graph(3, [(0, 1, 1), (0, 2, 1), (2, 1, 1)])
        r = is_protected(g, ProtectionQuery(0, 1, 1.0, 2, "vertex"))
        assert r.protected and r.certificate == ((0, 1),)

    def test_direct_edge_faultable_in_edge_mode(self):
        g = Graph(2, [(0, 1, 1)])
        r = is_protected(g, ProtectionQuery(0, 1, 1.0, 1, "edge"))
        assert not r.protected and r.witness.members == {(0, 1)}

    def test_vertex_mode_rejects_equal_endpoints(self):
        with pytest.raises(InvalidQueryError):
            ProtectionQuery(1, 1, 1.0, 0, "vertex")

    def test_matches_bruteforce_enumeration(self):
        rng = random.Random(31)
        for trial in range(40):
            g = random_graph(rng, n_max=10, p=0.4, weighted=trial % 2 == 0)
            pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
            for u, v in rng.sample(pairs, k=min(4, len(pairs))):
                base = dist(g, u, v)
                threshold = base if base != float("inf") else 1.0
                for f in (0, 1, 2):
                    for mode in ("vertex", "edge"):
                        got = is_protected(g, ProtectionQuery(u, v, threshold, f, mode))
                        assert got.protected == brute_protected(
                            g, u, v, threshold, f, mode), (trial, u, v, f, mode)


class TestResultEvidence:
    def test_witness_replays(self):
        rng = random.Random(32)
        seen_unprotected = 0
        for _ in range(60):
            g = random_graph(rng, n_max=9, p=0.4, weighted=True)
            if g.m == 0:
                continue
            u, v, w = rng.choice(list(g.edges()))
            pre = g.subgraph_with_edges(g.edge_keys() - {(u, v)})
            q = ProtectionQuery(u, v, 3 * w, rng.randint(0, 2), rng.choice(["vertex", "edge"]))
            r = is_protected(pre, q)
            if not r.protected:
                seen_unprotected += 1
                assert len(r.witness) <= q.f
                assert r.witness.mode == q.mode
                if q.mode == "vertex":
                    assert q.u not in r.witness.members
                    assert q.v not in r.witness.members
                assert exceeds(dist(pre, q.u, q.v, r.witness), q.threshold)
        assert seen_unprotected > 5

    def test_certificate_paths_are_short_and_disjoint(self):
        rng = random.Random(33)
        seen = 0
        for _ in range(80):
            g = random_graph(rng, n_max=9, p=0.6)
            u, v = rng.sample(range(g.n), k=2)
            q = ProtectionQuery(u, v, 3.0, 1, rng.choice(["vertex", "edge"]))
            r = is_protected(g, q)
            if r.certificate is None:
                continue
            seen += 1
            for path in r.certificate:
                weight = sum(g.weight(a, b) for a, b in zip(path, path[1:]))
                assert not exceeds(weight, q.threshold)
            if q.mode == "vertex":
                interiors = [set(p[1:-1]) for p in r.certificate]
                for i, a in enumerate(interiors):
                    for b in interiors[i + 1:]:
                        assert not (a & b)
            else:
                used = [{tuple(sorted(e)) for e in zip(p, p[1:])} for p in r.certificate]
                for i, a in enumerate(used):
                    for b in used[i + 1:]:
                        assert not (a & b)
        assert seen > 10

    def test_full_certificate_implies_protected(self):
        rng = random.Random(34)
        for _ in range(50):
            g = random_graph(rng, n_max=9, p=0.6)
            u, v = rng.sample(range(g.n), k=2)
            f = rng.randint(0, 2)
            mode = rng.choice(["vertex", "edge"])
            paths = find_disjoint_short_paths(g, u, v, 3.0, f + 1, mode)
            if paths is not None:
                assert is_protected(g, ProtectionQuery(u, v, 3.0, f, mode)).protected


class TestMonotonicity:
    def test_protection_edge_monotone(self):
        rng = random.Random(35)
        for _ in range(50):
            g = random_graph(rng, n_max=9, p=0.5)
            keys = sorted(g.edge_keys())
            sub = g.subgraph_with_edges(keys[: rng.randrange(len(keys) + 1)])
            u, v = rng.sample(range(g.n), k=2)
            q = ProtectionQuery(u, v, 3.0, rng.randint(0, 2), rng.choice(["vertex", "edge"]))
            if is_protected(sub, q).protected:
                assert is_protected(g, q).protected

    def test_protection_antimonotone_in_budget(self):
        rng = random.Random(36)
        for _ in range(50):
            g = random_graph(rng, n_max=9, p=0.5)
            u, v = rng.sample(range(g.n), k=2)
            mode = rng.choice(["vertex", "edge"])
            if is_protected(g, ProtectionQuery(u, v, 3.0, 2, mode)).protected:
                for f in (0, 1):
                    assert is_protected(g, ProtectionQuery(u, v, 3.0, f, mode)).protected


class TestDisjointPaths:
    def test_two_route_graph(self):
        got = find_disjoint_short_paths(two_route(), 0, 3, 2.0, 2, "vertex")
        assert sorted(got) == [[0, 1, 3], [0, 2, 3]]

    def test_single_edge(self):
        g = Graph(2, [(0, 1, 2.0)])
        assert find_disjoint_short_paths(g, 0, 1, 2.0, 1, "edge") == [[0, 1]]

    def test_k4_yields_two_short_disjoint_paths(self):
        k4 = Graph(4, [(u, v, 1.0) for u in range(4) for v in range(u + 1, 4)])
        got = find_disjoint_short_paths(k4, 0, 1, 2.0, 2, "vertex")
        assert got is not None and len(got) == 2
        interiors = [set(p[1:-1]) for p in got]
        assert not (interiors[0] & interiors[1])
        for p in got:
            assert sum(k4.weight(a, b) for a, b in zip(p, p[1:])) <= 2.0

    def test_not_found_when_too_many_requested(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1)])
        assert find_disjoint_short_paths(g, 0, 2, 3.0, 2, "vertex") is None

    def test_deterministic(self):
        rng = random.Random(37)
        g = random_graph(rng, n_max=9, p=0.6)
        a = find_disjoint_short_paths(g, 0, 1, 3.0, 2, "vertex")
        b = find_disjoint_short_paths(g, 0, 1, 3.0, 2, "vertex")
        assert a == b
