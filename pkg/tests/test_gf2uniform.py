import itertools
from functools import reduce

import numpy as np
import pytest

from entmin.errors import CapacityError, ValidationError
from entmin.gf2uniform import (
    BitDistribution,
    Gf2Matrix,
    PauliString,
    bipartition_blocks,
    fourier,
    gf2_rank,
    graph_reduced_density,
    inverse_fourier,
    is_k_uniform,
    is_k_uniform_via_marginals,
    is_maximally_uniform_graph,
    marginal_distribution,
    min_stabilizer_weight,
    parity_constrained_uniform,
    search_maximally_uniform,
    stabilizer_generators,
    walsh_transform,
)
from entmin.hilbert import partial_trace
from entmin.states import GraphSpec, graph_state, hexacode_graph

from conftest import fourier_oracle, gf2_rank_oracle, pauli_dense


def random_dist(n, rng):
    p = rng.random(2**n)
    return BitDistribution(n, p / p.sum())


def random_graph(v, rng):
    adj = np.zeros((v, v), dtype=np.uint8)
    for i in range(v):
        for j in range(i + 1, v):
            adj[i, j] = adj[j, i] = rng.integers(0, 2)
    return GraphSpec(v, adj)


def test_bitdistribution_validation():
    with pytest.raises(ValidationError):
        BitDistribution(2, np.array([0.5, 0.5, 0.5, 0.5]))
    with pytest.raises(ValidationError):
        BitDistribution(2, np.array([1.2, -0.2, 0.0, 0.0]))
    with pytest.raises(ValidationError):
        BitDistribution(2, np.array([1.0, 0.0]))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
def test_fourier_matches_direct_character_sum(n, rng):
    dist = random_dist(n, rng)
    assert np.allclose(fourier(dist), fourier_oracle(dist.p), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 13))
def test_fourier_roundtrip(n, rng):
    dist = random_dist(n, rng)
    back = inverse_fourier(fourier(dist), n)
    assert np.max(np.abs(back.p - dist.p)) < 1e-12


def test_walsh_transform_is_an_involution_up_to_scale(rng):
    v = rng.standard_normal(16)
    assert np.allclose(walsh_transform(walsh_transform(v)) / 16.0, v)


def test_k_uniform_two_paths_agree(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        # mix toward uniform so some cases pass at low k
        lam = rng.random()
        p = lam * random_dist(n, rng).p + (1 - lam) / 2**n
        dist = BitDistribution(n, p)
        for k in range(1, n):
            assert is_k_uniform(dist, k) == is_k_uniform_via_marginals(dist, k)


def test_parity_constrained_uniform():
    dist = parity_constrained_uniform(6, ((1, 2, 3, 4), (3, 4, 5, 6)))
    nz = np.flatnonzero(dist.p > 0)
    assert nz.size == 16
    assert np.allclose(dist.p[nz], 1 / 16)
    for x in nz:
        b = [(int(x) >> (5 - i)) & 1 for i in range(6)]
        assert (b[0] + b[1] + b[2] + b[3]) % 2 == 0
        assert (b[2] + b[3] + b[4] + b[5]) % 2 == 0
    assert is_k_uniform(dist, 3)
    assert not is_k_uniform(dist, 4)


def test_marginal_distribution(rng):
    dist = random_dist(4, rng)
    m = marginal_distribution(dist, (2, 4))
    p = dist.p.reshape((2,) * 4)
    assert np.allclose(m.p.reshape(2, 2), p.sum(axis=(0, 2)), atol=1e-14)


def test_gf2_rank_against_oracle(rng):
    for _ in range(40):
        r = int(rng.integers(1, 7))
        c = int(rng.integers(1, 7))
        arr = rng.integers(0, 2, size=(r, c))
        assert gf2_rank(arr) == gf2_rank_oracle(arr.tolist())
        assert gf2_rank(Gf2Matrix.from_array(arr)) == gf2_rank_oracle(arr.tolist())


def test_bipartition_blocks_prism():
    g = hexacode_graph()
    a_ww, a_bw = bipartition_blocks(g, (1, 2, 3))
    assert isinstance(a_ww, Gf2Matrix) and isinstance(a_bw, Gf2Matrix)
    # white side {1,2,3} is a triangle; cross block pairs 1-4, 2-5, 3-6
    assert np.array_equal(np.asarray(a_ww.bits),
                          np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]]))
    assert np.array_equal(np.asarray(a_bw.bits), np.eye(3, dtype=np.uint8))
    assert gf2_rank(a_bw) == 3


def test_is_maximally_uniform_graph():
    assert is_maximally_uniform_graph(hexacode_graph())
    path6 = GraphSpec.from_edges(6, ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6)))
    assert not is_maximally_uniform_graph(path6)
    with pytest.raises(ValidationError):
        is_maximally_uniform_graph(GraphSpec.from_edges(3, ((1, 2),)))


def all_graphs(v):
    pairs = list(itertools.combinations(range(v), 2))
    for mask in range(2 ** len(pairs)):
        adj = np.zeros((v, v), dtype=np.uint8)
        for b, (i, j) in enumerate(pairs):
            if (mask >> b) & 1:
                adj[i, j] = adj[j, i] = 1
        yield GraphSpec(v, adj)


def quantum_maximally_uniform(g):
    """Oracle: every balanced bipartition's reduced state is I/2^m."""
    m = g.v // 2
    psi = graph_state(g)
    eye = np.eye(2**m) / 2**m
    for rest in itertools.combinations(range(2, g.v + 1), m - 1):
        w = (1,) + rest
        if np.max(np.abs(partial_trace(psi, w).mat - eye)) > 1e-12:
            return False
    return True


def test_gf2_criterion_matches_quantum_oracle_v4():
    for g in all_graphs(4):
        assert is_maximally_uniform_graph(g) == quantum_maximally_uniform(g)


def test_gf2_criterion_matches_quantum_oracle_v6_sample(rng):
    graphs = [hexacode_graph()] + [random_graph(6, rng) for _ in range(30)]
    for g in graphs:
        assert is_maximally_uniform_graph(g) == quantum_maximally_uniform(g)


def test_search_m1_and_m2():
    hits = search_maximally_uniform(1)
    assert len(hits) == 1
    assert hits[0].edges() == ((1, 2),)
    assert search_maximally_uniform(2) == []


def test_search_random_mode_is_seeded():
    a = search_maximally_uniform(3, mode="random", budget=3000, seed=5)
    b = search_maximally_uniform(3, mode="random", budget=3000, seed=5)
    assert len(a) == len(b)
    assert all(np.array_equal(x.adj, y.adj) for x, y in zip(a, b))


def test_search_capacity_cap():
    with pytest.raises(CapacityError):
        search_maximally_uniform(5)
    with pytest.raises(ValidationError):
        search_maximally_uniform(3, mode="sideways")


def test_pauli_apply_matches_dense_oracle(rng):
    from entmin.hilbert import random_state
    psi = random_state(3, 2, rng)
    for factors in ("XYZ", "IZX", "YYI"):
        for sign in (1, -1):
            ps = PauliString(sign, factors)
            assert np.allclose(ps.apply(psi).amp * 1.0,
                               pauli_dense(ps) @ psi.amp, atol=1e-12)


def test_pauli_weight_and_validation():
    assert PauliString(1, "IXYZ").weight() == 3
    with pytest.raises(ValidationError):
        PauliString(2, "XX")
    with pytest.raises(ValidationError):
        PauliString(1, "AB")


def test_pauli_compose_commuting_pairs():
    xx = PauliString(1, "XX")
    zz = PauliString(1, "ZZ")
    prod = xx.compose(zz)
    assert np.allclose(pauli_dense(prod), pauli_dense(xx) @ pauli_dense(zz))
    assert prod.sign == -1 and prod.factors == ("Y", "Y")
    # anticommuting single-qubit product has an imaginary phase: rejected
    with pytest.raises(ValidationError):
        PauliString(1, "X").compose(PauliString(1, "Z"))


def test_stabilizer_generators_fix_the_state(rng):
    for g in (hexacode_graph(), random_graph(5, rng)):
        psi = graph_state(g)
        for s in stabilizer_generators(g):
            assert np.allclose(s.apply(psi).amp, psi.amp, atol=1e-12)


def min_weight_oracle(g):
    """Compose generator subsets explicitly instead of the packed-int walk."""
    gens = stabilizer_generators(g)
    best = g.v
    for r in range(1, len(gens) + 1):
        for combo in itertools.combinations(gens, r):
            p = combo[0]
            for extra in combo[1:]:
                p = p.compose(extra)
            best = min(best, p.weight())
    return best


def test_min_stabilizer_weight_against_compose_oracle(rng):
    assert min_stabilizer_weight(hexacode_graph()) == 4
    single = GraphSpec.from_edges(2, ((1, 2),))
    assert min_stabilizer_weight(single) == 2
    for _ in range(10):
        g = random_graph(int(rng.integers(2, 6)), rng)
        assert min_stabilizer_weight(g) == min_weight_oracle(g)


def test_graph_reduced_density_matches_partial_trace(rng):
    for _ in range(25):
        v = int(rng.integers(2, 8))
        g = random_graph(v, rng)
        psi = graph_state(g)
        size = int(rng.integers(1, v))
        w = tuple(sorted(rng.choice(np.arange(1, v + 1), size=size,
                                    replace=False).tolist()))
        a = graph_reduced_density(g, w).mat
        b = partial_trace(psi, w).mat
        assert np.max(np.abs(a - b)) < 1e-12


def test_graph_reduced_density_requires_proper_subset():
    g = hexacode_graph()
    with pytest.raises(ValidationError):
        graph_reduced_density(g, (1, 2, 3, 4, 5, 6))
