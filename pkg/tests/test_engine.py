import random

import pytest

from ftspanner import engine
from ftspanner.graphs import random_gnp

pytestmark = pytest.mark.skipif(
    "compiled" not in engine.available_backends(),
    reason="compiled kernel not built; nothing to compare against")


def test_backends_agree_on_distances_and_paths():
    rng = random.Random(202)
    for trial in range(150):
        n = rng.randint(2, 14)
        weighted = trial % 2 == 0
        g = random_gnp(n, 0.5, rng, 1.0, 3.0) if weighted else random_gnp(n, 0.5, rng)
        py = engine.make_engine(g, "python")
        cc = engine.make_engine(g, "compiled")
        for _ in range(4):
            u, v = rng.randrange(n), rng.randrange(n)
            vf = set(rng.sample(range(n), k=rng.randint(0, 2))) - {u, v}
            ef = set(rng.sample(range(g.m), k=min(g.m, rng.randint(0, 2)))) if g.m else set()
            py.set_faults(vf, ef)
            cc.set_faults(vf, ef)
            dp, pp = py.distance_and_path(u, v)
            dc, pc = cc.distance_and_path(u, v)
            assert dp == dc
            assert pp == pc  # identical tie-breaking, not just equal lengths
            assert list(py.distances_from(u)) == list(cc.distances_from(u))


def test_fault_masks_reset_between_queries():
    g = random_gnp(8, 0.6, random.Random(5))
    for backend in engine.available_backends():
        eng = engine.make_engine(g, backend)
        eng.set_faults({0}, set())
        blocked = eng.distances_from(1)
        eng.set_faults(set(), set())
        clear = eng.distances_from(1)
        assert clear[0] != blocked[0]


def test_use_backend_scopes_override():
    g = random_gnp(5, 0.8, random.Random(6))
    with engine.use_backend("python"):
        assert engine.engine_for(g).backend == "python"
    assert engine.engine_for(g).backend == engine.BACKEND
