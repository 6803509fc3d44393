import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given

from conftest import dims, gen, seeds
from traceineq import samplers
from traceineq.hermitian import (
    DimensionMismatch,
    PDFloorViolation,
    check_density,
    eigh,
    entropy,
    hermitize,
    mat_exp,
    mat_fn,
    mat_log,
    relative_entropy,
    trace_exp_log,
)


def test_hermitize_examples():
    assert np.array_equal(hermitize(np.zeros((3, 3))), np.zeros((3, 3)))
    A = samplers.random_hermitian(4, 1.0, np.random.default_rng(1))
    assert np.array_equal(hermitize(A), A)
    assert np.array_equal(hermitize([[0, 2], [0, 0]]), np.array([[0, 1], [1, 0]]))
    with pytest.raises(DimensionMismatch):
        hermitize(np.zeros((2, 3)))


def test_eigh_examples():
    lam, U = eigh(np.eye(3))
    assert np.allclose(lam, 1)
    lam, _ = eigh(np.diag([3.0, 1.0]))
    assert lam.tolist() == [1.0, 3.0]


@given(seeds, dims)
def test_reconstruction_and_unitarity(seed, n):
    A = samplers.random_hermitian(n, 5.0, gen(seed))
    d = eigh(A)
    assert np.linalg.norm(d.unitary @ d.unitary.conj().T - np.eye(n)) <= 1e-10 * n
    assert np.linalg.norm(A - d.reconstruct()) <= 1e-10 * max(1, np.linalg.norm(A))
    assert np.all(np.diff(d.eigenvalues) >= 0)


def test_mat_fn_examples(rng):
    A = samplers.random_hermitian(5, 3.0, rng)
    assert np.linalg.norm(mat_fn(A, lambda x: x) - A) <= 1e-10 * np.linalg.norm(A)
    assert np.allclose(mat_fn(A, lambda x: np.ones_like(x)), np.eye(5), atol=1e-12)
    assert np.allclose(mat_fn(np.diag([2.0, 3.0]), np.square), np.diag([4.0, 9.0]))
    with pytest.raises(ValueError):
        mat_fn(np.diag([-1.0, 1.0]), np.log)


def test_exp_log_examples():
    assert np.allclose(mat_exp(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(mat_exp(np.diag([math.log(2), math.log(3)])), np.diag([2.0, 3.0]), atol=1e-14)
    assert np.allclose(mat_log(np.eye(4)), 0)
    assert np.allclose(mat_log(np.diag([math.e, math.e**2])), np.diag([1.0, 2.0]), atol=1e-14)
    with pytest.raises(PDFloorViolation):
        mat_log(np.diag([1e-14, 1.0]))


@given(seeds, dims)
def test_inverse_pair(seed, n):
    rng = gen(seed)
    A = samplers.random_hermitian(n, 2.0, rng)
    Y = samplers.random_pd(n, 1e4, rng)
    assert np.linalg.norm(mat_log(mat_exp(A)) - A) <= 1e-9 * max(1, np.linalg.norm(A))
    assert np.linalg.norm(mat_exp(mat_log(Y)) - Y) <= 1e-9 * np.linalg.norm(Y)


def test_trace_exp_log_examples():
    assert trace_exp_log(np.zeros((3, 3)), np.eye(3)) == pytest.approx(3.0, abs=1e-14)
    assert trace_exp_log(np.diag([math.log(2), 0.0]), np.eye(2)) == pytest.approx(3.0, rel=1e-14)
    with pytest.raises(DimensionMismatch):
        trace_exp_log(np.zeros((2, 2)), np.eye(3))
    with pytest.raises(PDFloorViolation):
        trace_exp_log(np.zeros((2, 2)), np.diag([1.0, 0.0]))


@given(seeds, dims)
def test_trace_exp_log_diagonal_reduces_to_scalars(seed, n):
    rng = gen(seed)
    h = rng.uniform(-2, 2, n)
    y = np.exp(rng.uniform(-4, 4, n))
    expected = float(np.sum(np.exp(h) * y))
    assert trace_exp_log(np.diag(h), np.diag(y)) == pytest.approx(expected, rel=1e-10)


@given(seeds, dims)
def test_trace_exp_log_matches_pade_route(seed, n):
    rng = gen(seed)
    H = samplers.random_hermitian(n, 2.0, rng)
    Y = samplers.random_pd(n, 1e3, rng)
    oracle = np.trace(scipy.linalg.expm(H + scipy.linalg.logm(Y))).real
    assert trace_exp_log(H, Y) == pytest.approx(oracle, rel=1e-9)


@given(seeds, dims)
def test_unitary_covariance(seed, n):
    rng = gen(seed)
    H = samplers.random_hermitian(n, 2.0, rng)
    Y = samplers.random_pd(n, 1e4, rng)
    U = samplers.random_unitary(n, rng)
    Uh = U.conj().T
    assert trace_exp_log(U @ H @ Uh, U @ Y @ Uh) == pytest.approx(trace_exp_log(H, Y), rel=1e-9)


def test_entropy_examples():
    eps = 1e-12
    assert abs(entropy(np.diag([1 - eps, eps]))) <= 1e-10
    for n in (1, 2, 5):
        assert entropy(np.eye(n) / n) == pytest.approx(math.log(n), abs=1e-12)
    expected = 0.25 * math.log(4) + 0.75 * math.log(4 / 3)
    assert entropy(np.diag([0.25, 0.75])) == pytest.approx(expected, abs=1e-14)
    assert expected == pytest.approx(0.5623, abs=1e-4)


def _kl(x, y):
    return float(sum(a * math.log(a / b) for a, b in zip(x, y)))


def test_relative_entropy_examples(rng):
    X = samplers.random_density(4, rng)
    assert abs(relative_entropy(X, X)) <= 1e-10
    d = relative_entropy(np.diag([0.5, 0.5]), np.diag([0.25, 0.75]))
    assert d == pytest.approx(0.5 * math.log(4 / 3), abs=1e-14)
    assert d == pytest.approx(0.14384, abs=1e-5)
    assert d == pytest.approx(_kl([0.5, 0.5], [0.25, 0.75]), abs=1e-14)
    with pytest.raises(DimensionMismatch):
        relative_entropy(np.eye(2) / 2, np.eye(3) / 3)


@given(seeds, dims)
def test_klein_and_entropy_bounds(seed, n):
    rng = gen(seed)
    X = samplers.random_density(n, rng)
    Y = samplers.random_density(n, rng)
    check_density(X)
    assert relative_entropy(X, Y) >= -1e-10
    assert -1e-10 <= entropy(X) <= math.log(n) + 1e-10


@given(seeds, dims)
def test_relative_entropy_commuting_matches_kl(seed, n):
    rng = gen(seed)
    x = rng.dirichlet(np.ones(n))
    y = rng.dirichlet(np.ones(n))
    U = samplers.random_unitary(n, rng)
    X = U @ np.diag(x) @ U.conj().T
    Y = U @ np.diag(y) @ U.conj().T
    assert relative_entropy(X, Y) == pytest.approx(_kl(x, y), abs=1e-9)
