"""Randomised property suites over generated fixtures (at least 100 cases each)."""

import random
from itertools import islice

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import random_bipartite_cubic, random_cubic
from snarkforge.flows import find_tflow, is_tflow
from snarkforge.geometry import T0, collineation_from_bases, random_tetrahedron
from snarkforge.multipole import remove_path
from snarkforge.transitions import A, check_admissible, transition_relation

SETTINGS = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _path(g, rng, length):
    u = rng.randrange(g.n)
    path = [u]
    while len(path) < length:
        nxt = [w for w in g.neighbours(path[-1]) if w not in path]
        if not nxt:
            return None
        path.append(rng.choice(sorted(nxt)))
    return path


def _flows(m, rng, limit=40):
    flows = list(islice(find_tflow(m, T0, "enumerate"), 400))
    rng.shuffle(flows)
    return flows[:limit]


@SETTINGS
@given(seed=st.integers(0, 10**6), n=st.sampled_from([4, 6, 8, 10, 12]), length=st.integers(1, 3))
def test_semiedge_parity(seed, n, length):
    rng = random.Random(seed)
    g = random_cubic(seed, n)
    path = _path(g, rng, length)
    if path is None or len(path) >= n:
        return
    m = remove_path(g, path)
    semis = [m.semiedge_edge[s] for s in m.semiedges]
    k = len(semis)
    for f in _flows(m, rng):
        heavy = sum(1 for e in semis if T0.weight(f.values[e]) == 2)
        assert heavy % 2 == k % 2


@SETTINGS
@given(seed=st.integers(0, 10**6), half=st.sampled_from([3, 4, 5, 6, 7]))
def test_bipartite_balance(seed, half):
    rng = random.Random(seed)
    g = random_bipartite_cubic(seed, half)
    path = _path(g, rng, 3)
    if path is None:
        return
    m = remove_path(g, path)
    idx = m.semiedge_edge
    outer = [idx[s] for s in m.inputs + m.outputs]
    for f in _flows(m, rng):
        assert sum(1 for e in outer if T0.weight(f.values[e]) == 2) <= 2


def _random_dipole(seed, n):
    rng = random.Random(seed)
    g = random_cubic(seed, n)
    u = rng.randrange(n)
    v = rng.choice(sorted(g.neighbours(u)))
    return remove_path(g, [u, v])


@SETTINGS
@given(seed=st.integers(0, 10**6), n=st.sampled_from([6, 8, 10, 12]))
def test_trace_preservation(seed, n):
    rel = transition_relation(_random_dipole(seed, n), level="pairs", use_cache=False)
    for p in rel.pairs:
        assert p.src[0] ^ p.src[1] == p.dst[0] ^ p.dst[1]


@SETTINGS
@given(seed=st.integers(0, 10**6), n=st.sampled_from([6, 8, 10, 12]))
def test_admissibility(seed, n):
    rel = transition_relation(_random_dipole(seed, n), level="pairs", use_cache=False)
    assert rel <= A
    ok, violations = check_admissible(rel)
    assert ok, violations


@SETTINGS
@given(seed=st.integers(0, 10**6), n=st.sampled_from([4, 6, 8, 10, 12, 14]))
def test_collineation_equivariance(seed, n):
    rng = random.Random(seed)
    g = random_cubic(seed, n)
    src = random_tetrahedron(rng)
    dst = random_tetrahedron(rng)
    theta = collineation_from_bases(src.corners, dst.corners)
    for f in islice(find_tflow(g, src, "enumerate"), 5):
        assert is_tflow(g, f)
        image = f.mapped(theta)
        assert image.tetra == dst
        assert is_tflow(g, image)
