import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import dims, gen, seeds
from traceineq import maps, samplers
from traceineq.hermitian import check_density, check_hermitian, check_pd


def test_sampler_config_validation():
    samplers.SamplerConfig(dim_range=(1, 16))
    for bad in [dict(dim_range=(0, 3)), dict(dim_range=(4, 3)), dict(dim_range=(2, 17)), dict(condition_cap=0.5)]:
        with pytest.raises(ValueError):
            samplers.SamplerConfig(**bad)


def test_random_hermitian_examples():
    assert not samplers.random_hermitian(4, 0.0, gen(1)).any()
    A = samplers.random_hermitian(5, 2.0, gen(1))
    check_hermitian(A)
    assert np.max(np.abs(np.linalg.eigvalsh(A))) <= 2.0 + 1e-12
    assert np.array_equal(A, samplers.random_hermitian(5, 2.0, gen(1)))


def test_trial_rng_is_keyed_on_trial_not_order():
    a = [samplers.random_pd(3, 100, samplers.trial_rng(7, t)) for t in range(4)]
    b = [samplers.random_pd(3, 100, samplers.trial_rng(7, t)) for t in reversed(range(4))][::-1]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], a[1])
    assert not np.array_equal(a[0], samplers.random_pd(3, 100, samplers.trial_rng(7, 0, stream=1)))


@given(seeds, dims)
def test_pd_and_density(seed, n):
    rng = gen(seed)
    Y = samplers.random_pd(n, 1e4, rng)
    check_pd(Y)
    X = samplers.random_density(n, rng)
    check_density(X)
    assert abs(np.trace(X).real - 1) <= 1e-12


def test_condition_cap_one_gives_identity():
    Y = samplers.random_pd(4, 1.0, gen(3))
    assert np.allclose(Y, np.eye(4), atol=1e-12)


def test_condition_cap_respected_over_many_draws():
    rng = gen(11)
    worst = 0.0
    for _ in range(10_000):
        lam = np.linalg.eigvalsh(samplers.random_pd(int(rng.integers(2, 6)), 50.0, rng))
        worst = max(worst, lam[-1] / lam[0])
    assert worst <= 50.0 * (1 + 1e-9)


@given(seeds, st.integers(1, 16))
def test_random_unitary(seed, n):
    U = samplers.random_unitary(n, gen(seed))
    assert np.linalg.norm(U @ U.conj().T - np.eye(n)) <= 1e-10
    assert np.linalg.norm(U.conj().T @ U - np.eye(n)) <= 1e-10
    assert np.array_equal(U, samplers.random_unitary(n, gen(seed)))


def test_unital_cp_examples():
    phi = samplers.random_unital_cp(3, 1, gen(2))
    assert maps.is_unital(phi) and maps.is_trace_preserving(phi) and len(phi.kraus) == 1
    assert maps.is_cp(phi)
    with pytest.raises(ValueError):
        samplers.random_unital_cp(3, 0, gen(2))


@given(seeds, dims, dims, st.integers(1, 4))
def test_unital_cp_forms(seed, n, m, k):
    rng = gen(seed)
    k = max(k, -(-m // n))
    phi = samplers.random_unital_cp(n, k, rng, "stinespring", m)
    assert np.linalg.norm(maps.apply(phi, np.eye(n)) - np.eye(m)) <= 1e-10
    assert maps.is_cp(phi)
    mu = samplers.random_unital_cp(n, k, rng)
    assert maps.is_unital(mu) and maps.is_trace_preserving(mu) and maps.is_cp(mu)


@given(seeds, dims, dims)
def test_noncp_sampler_certified(seed, n, m):
    phi = samplers.random_unital_positive_noncp(n, gen(seed), m)
    assert maps.is_unital(phi)
    assert maps.choi_min_eig(phi) < -1e-6
    # transpose component carries at least half the weight
    assert phi.weights[0] >= 0.5


def test_noncp_sampler_rejects_n1():
    with pytest.raises(ValueError):
        samplers.random_unital_positive_noncp(1, gen(0))


@given(seeds, dims, dims, st.sampled_from(samplers_families := ["cp_unital", "positive_noncp", "transpose", "block_embed"]))
def test_family_maps_are_unital_and_tp_duals(seed, n, m, family):
    rng = gen(seed)
    phi = samplers.random_unital_map(family, n, m, rng)
    assert (phi.in_dim, phi.out_dim) == (n, m)
    assert maps.is_unital(phi)
    psi = samplers.random_tp_positive_map(family, n, m, rng)
    assert (psi.in_dim, psi.out_dim) == (n, m)
    assert maps.is_trace_preserving(psi)
