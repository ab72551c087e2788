import json
import math

import numpy as np
import pytest

from entmin.entopt import (
    OptConfig,
    OptResult,
    best_subset_lower_bound,
    bipartite_exact,
    entropy_for_bases,
    max_product_overlap,
    minimize_entropy,
    result_to_dict,
    result_to_json,
    subset_lower_bound,
)
from entmin.errors import EntminError, ValidationError
from entmin.hilbert import (
    ProductBasis,
    PureState,
    identity_basis,
    random_state,
    schmidt_decompose,
    shannon_entropy,
    tensor_product,
)
from entmin.states import determinant_state, ghz

from conftest import outcome_oracle


def haar(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def product_state(vecs):
    amp = np.array([1.0 + 0j])
    for v in vecs:
        amp = np.kron(amp, v / np.linalg.norm(v))
    return PureState(len(vecs), len(vecs[0]), amp)


def test_entropy_for_bases_against_oracle(rng):
    psi = random_state(3, 2, rng)
    basis = ProductBasis(3, 2, tuple(haar(2, rng) for _ in range(3)))
    h = entropy_for_bases(psi, basis)
    assert abs(h - shannon_entropy(outcome_oracle(psi, basis))) < 1e-10


def test_optconfig_validation():
    with pytest.raises(ValidationError):
        OptConfig(restarts=0)
    with pytest.raises(ValidationError):
        OptConfig(tol=0.0)
    with pytest.raises(ValidationError):
        OptConfig(max_sweeps=0)


def test_optresult_rejects_crossed_bounds():
    basis = identity_basis(2, 2)
    with pytest.raises(EntminError):
        OptResult(s_upper=0.5, basis=basis, s_lower=1.0,
                  lower_bound_witness="subset (1,)", converged=True,
                  restarts_agreeing=1, seed=0)
    with pytest.raises(EntminError):
        OptResult(s_upper=5.0, basis=basis, s_lower=0.0,
                  lower_bound_witness="none", converged=True,
                  restarts_agreeing=1, seed=0)


def test_bipartite_exact_known_values(rng):
    val, basis = bipartite_exact(ghz(2, 3))
    assert abs(val - math.log2(3)) < 1e-12
    prod = product_state([rng.standard_normal(3) + 1j * rng.standard_normal(3)
                          for _ in range(2)])
    val, _ = bipartite_exact(prod)
    assert val < 1e-10
    with pytest.raises(ValidationError):
        bipartite_exact(ghz(3, 2))


def test_minimizer_drives_product_state_to_zero(rng):
    psi = product_state([rng.standard_normal(2) + 1j * rng.standard_normal(2)
                         for _ in range(3)])
    res = minimize_entropy(psi, OptConfig(restarts=4, max_sweeps=60,
                                          tol=1e-12, seed=9))
    assert res.s_upper < 1e-7
    assert res.s_lower < 1e-9  # factorizable: every reduced state is pure


def test_minimizer_reported_basis_reproduces_value(rng):
    psi = random_state(3, 2, rng)
    res = minimize_entropy(psi, OptConfig(restarts=4, max_sweeps=40,
                                          tol=1e-10, seed=11))
    assert abs(entropy_for_bases(psi, res.basis) - res.s_upper) < 1e-12
    assert res.s_lower <= res.s_upper + 1e-9
    assert 1 <= res.restarts_agreeing <= 4


def test_minimizer_is_deterministic(rng):
    psi = random_state(3, 2, np.random.default_rng(77))
    cfg = OptConfig(restarts=5, max_sweeps=30, tol=1e-10, seed=13)
    a = result_to_dict(minimize_entropy(psi, cfg))
    b = result_to_dict(minimize_entropy(psi, cfg))
    assert a == b


def test_minimizer_thread_pool_merge_is_identical(monkeypatch):
    psi = random_state(3, 2, np.random.default_rng(78))
    cfg = OptConfig(restarts=6, max_sweeps=30, tol=1e-10, seed=14)
    a = result_to_dict(minimize_entropy(psi, cfg))
    monkeypatch.setenv("ENTMIN_THREADS", "3")
    b = result_to_dict(minimize_entropy(psi, cfg))
    assert a == b


def test_subset_bounds():
    psi = ghz(3, 2)
    assert abs(subset_lower_bound(psi, (1,)) - 1.0) < 1e-12
    with pytest.raises(ValidationError):
        subset_lower_bound(psi, (1, 2, 3))
    val, witness = best_subset_lower_bound(determinant_state(4))
    assert abs(val - math.log2(6)) < 1e-9
    assert witness == (1, 2)


def test_max_product_overlap_bipartite_oracle(rng):
    # for two parties the best product overlap is the top Schmidt weight
    for d in (2, 3):
        psi = random_state(2, d, rng)
        target = float(schmidt_decompose(psi).coeffs[0])
        got = max_product_overlap(psi, OptConfig(restarts=6, max_sweeps=100,
                                                 tol=1e-14, seed=21))
        assert abs(got - target) < 1e-9


def test_max_product_overlap_ghz():
    got = max_product_overlap(ghz(3, 2), OptConfig(restarts=4, seed=2))
    assert abs(got - 0.5) < 1e-9


def test_overlap_bound_takes_over_when_stronger():
    psi = determinant_state(3)
    res = minimize_entropy(psi, OptConfig(restarts=8, max_sweeps=80,
                                          tol=1e-12, seed=43),
                           include_overlap_bound=True)
    # -log2(1/6) beats the log2(3) subset bound and meets s_upper
    assert res.lower_bound_witness.startswith("product-overlap")
    assert abs(res.s_lower - math.log2(6)) < 1e-6
    assert res.s_lower <= res.s_upper + 1e-9


def test_additivity_of_tensor_products():
    singlet = determinant_state(2)
    two = tensor_product(singlet, singlet)
    res = minimize_entropy(two, OptConfig(restarts=6, max_sweeps=60,
                                          tol=1e-12, seed=31))
    assert abs(res.s_upper - 2.0) <= 1e-3
    mixed = tensor_product(ghz(3, 2), singlet)
    res = minimize_entropy(mixed, OptConfig(restarts=6, max_sweeps=60,
                                            tol=1e-12, seed=32))
    assert abs(res.s_upper - 2.0) <= 1e-3


def test_result_dict_roundtrip(rng):
    psi = random_state(2, 3, rng)
    res = minimize_entropy(psi, OptConfig(restarts=3, max_sweeps=40,
                                          tol=1e-10, seed=5))
    d = json.loads(result_to_json(res))
    assert set(d) == {"s_upper", "s_lower", "lower_bound_witness", "basis",
                      "converged", "restarts_agreeing", "seed"}
    rebuilt = ProductBasis(2, 3, tuple(
        np.array([[complex(re, im) for re, im in row] for row in u])
        for u in d["basis"]))
    assert abs(entropy_for_bases(psi, rebuilt) - d["s_upper"]) < 1e-12
