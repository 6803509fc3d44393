"""Positive linear maps M_n -> M_m built from structurally positive pieces.

Every form here is positive by construction: Kraus (completely positive)
maps, the transpose, block embeddings/block sums, and convex mixtures and
compositions of those. ``apply`` accepts a single matrix or a stack of shape
(..., n, n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import lapack

from traceineq.hermitian import DimensionMismatch, _heevd, hermitize

WEIGHT_TOL = 1e-12


class NotUnital(ValueError):
    pass


class NotTracePreserving(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class KrausCP:
    """X -> sum_i A_i X A_i^dagger with A_i of shape (out_dim, in_dim)."""

    kraus: tuple
    _stack: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.kraus) == 0:
            raise ValueError("KrausCP needs at least one operator")
        stack = np.array([np.asarray(A, dtype=complex) for A in self.kraus])
        if stack.ndim != 3:
            raise DimensionMismatch("Kraus operators must share one 2-d shape")
        self._set_stack(stack)

    def _set_stack(self, stack):
        object.__setattr__(self, "kraus", tuple(stack))
        object.__setattr__(self, "_stack", stack)
        # [A_1 ... A_k] as one m x kn block row, for the 2-d fast path
        k, m, n = stack.shape
        object.__setattr__(self, "_row", stack.transpose(1, 0, 2).reshape(m, k * n))

    @property
    def in_dim(self) -> int:
        return self._stack.shape[2]

    @property
    def out_dim(self) -> int:
        return self._stack.shape[1]

    def _apply(self, X):
        A = self._stack
        if len(A) == 1:
            return A[0] @ X @ A[0].conj().T
        if X.ndim == 2:
            k, m, n = A.shape
            AX = (A.reshape(k * m, n) @ X).reshape(k, m, n).transpose(1, 0, 2).reshape(m, k * n)
            return AX @ self._row.conj().T
        return (A @ X[..., None, :, :] @ np.conj(np.swapaxes(A, -1, -2))).sum(axis=-3)

    def adjoint(self):
        # operators are already validated, so skip __post_init__
        adj = object.__new__(KrausCP)
        adj._set_stack(np.ascontiguousarray(np.swapaxes(self._stack, -1, -2).conj()))
        return adj


@dataclass(frozen=True)
class Transpose:
    dim: int

    in_dim = property(lambda self: self.dim)
    out_dim = property(lambda self: self.dim)

    def _apply(self, X):
        return np.swapaxes(X, -1, -2)

    def adjoint(self):
        return self


@dataclass(frozen=True, eq=False)
class ConvexMixture:
    weights: tuple
    parts: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.parts) or len(w) == 0:
            raise ValueError("mixture needs one weight per part")
        if np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"mixture weights must be >= 0 and sum to 1, got {w.tolist()}")
        dims = {(p.in_dim, p.out_dim) for p in self.parts}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixture parts disagree on dims: {sorted(dims)}")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "parts", tuple(self.parts))

    in_dim = property(lambda self: self.parts[0].in_dim)
    out_dim = property(lambda self: self.parts[0].out_dim)

    def _apply(self, X):
        return sum(w * p._apply(X) for w, p in zip(self.weights, self.parts))

    def adjoint(self):
        return ConvexMixture(self.weights, tuple(p.adjoint() for p in self.parts))


@dataclass(frozen=True, eq=False)
class Composition:
    """outer o inner."""

    outer: object
    inner: object

    def __post_init__(self):
        if self.inner.out_dim != self.outer.in_dim:
            raise DimensionMismatch(
                f"cannot compose: inner maps to M_{self.inner.out_dim}, outer expects M_{self.outer.in_dim}"
            )

    in_dim = property(lambda self: self.inner.in_dim)
    out_dim = property(lambda self: self.outer.out_dim)

    def _apply(self, X):
        return self.outer._apply(self.inner._apply(X))

    def adjoint(self):
        return Composition(self.inner.adjoint(), self.outer.adjoint())


@dataclass(frozen=True)
class BlockEmbed:
    """X -> diag(X, ..., X) with ``copies`` diagonal blocks."""

    dim: int
    copies: int

    def __post_init__(self):
        if self.copies < 2:
            raise ValueError(f"block embedding needs copies >= 2, got {self.copies}")

    in_dim = property(lambda self: self.dim)
    out_dim = property(lambda self: self.dim * self.copies)

    def _apply(self, X):
        n, k = self.dim, self.copies
        out = np.zeros(X.shape[:-2] + (k * n, k * n), dtype=complex)
        for a in range(k):
            out[..., a * n:(a + 1) * n, a * n:(a + 1) * n] = X
        return out

    def adjoint(self):
        return BlockSum(self.dim, self.copies)


@dataclass(frozen=True)
class BlockSum:
    """Sum of the ``copies`` diagonal n x n blocks; off-diagonal blocks are dropped."""

    dim: int
    copies: int

    def __post_init__(self):
        if self.copies < 2:
            raise ValueError(f"block sum needs copies >= 2, got {self.copies}")

    in_dim = property(lambda self: self.dim * self.copies)
    out_dim = property(lambda self: self.dim)

    def _apply(self, Y):
        n, k = self.dim, self.copies
        out = Y[..., 0:n, 0:n].astype(complex)
        for a in range(1, k):
            out = out + Y[..., a * n:(a + 1) * n, a * n:(a + 1) * n]
        return out

    def adjoint(self):
        return BlockEmbed(self.dim, self.copies)


MAP_TYPES = (KrausCP, Transpose, ConvexMixture, Composition, BlockEmbed, BlockSum)


def apply(phi, X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim < 2 or X.shape[-2:] != (phi.in_dim, phi.in_dim):
        raise DimensionMismatch(f"map expects {phi.in_dim}x{phi.in_dim} input, got {X.shape}")
    return phi._apply(X)


def adjoint(phi):
    """Hilbert-Schmidt adjoint, built per representation form and cached on phi."""
    adj = phi.__dict__.get("_adjoint")
    if adj is None:
        adj = phi.adjoint()
        object.__setattr__(phi, "_adjoint", adj)
    return adj


def block_embed(H, k: int) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    return apply(BlockEmbed(H.shape[0], k), H)


def identity(n: int) -> KrausCP:
    return KrausCP((np.eye(n, dtype=complex),))


def unitary_conjugation(U) -> KrausCP:
    return KrausCP((np.asarray(U, dtype=complex),))


def mixed_unitary(weights, unitaries) -> KrausCP:
    """X -> sum_i w_i U_i X U_i^dagger, as a single Kraus map."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise ValueError("weights must be a probability vector")
    return KrausCP(tuple(np.sqrt(wi) * np.asarray(U, dtype=complex) for wi, U in zip(w, unitaries)))


def depolarizing(n: int) -> KrausCP:
    """Completely depolarising channel X -> Tr(X) I/n."""
    ops = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = 1 / np.sqrt(n)
            ops.append(E)
    return KrausCP(tuple(ops))


def matrix_units(n: int) -> np.ndarray:
    """Stack of E_ij, index i*n + j."""
    return np.eye(n * n, dtype=complex).reshape(n * n, n, n)


def is_unital(phi, tol: float = 1e-10) -> bool:
    D = apply(phi, np.eye(phi.in_dim)) - np.eye(phi.out_dim)
    return bool(np.vdot(D, D).real <= tol * tol)


def is_trace_preserving(phi, tol: float = 1e-10) -> bool:
    n = phi.in_dim
    basis = matrix_units(n)
    traces = np.trace(apply(phi, basis), axis1=-2, axis2=-1)
    return bool(np.max(np.abs(traces - np.trace(basis, axis1=-2, axis2=-1))) <= tol)


def choi(phi) -> np.ndarray:
    """Choi matrix sum_ij E_ij (x) phi(E_ij), of size (n m) x (n m)."""
    n, m = phi.in_dim, phi.out_dim
    if isinstance(phi, KrausCP):
        # entry [(i,a),(j,b)] = sum_k A_k[a,i] conj(A_k[b,j])
        V = np.transpose(phi._stack, (0, 2, 1)).reshape(len(phi.kraus), n * m)
        return hermitize(V.T @ V.conj())
    if isinstance(phi, ConvexMixture):
        return sum(w * choi(part) for w, part in zip(phi.weights, phi.parts))
    if isinstance(phi, Composition) and isinstance(phi.inner, Transpose):
        # phi(E_ij) = outer(E_ji): partial transpose of outer's Choi on the input factor
        C = choi(phi.outer).reshape(n, m, n, m)
        return C.transpose(2, 1, 0, 3).reshape(n * m, n * m)
    images = apply(phi, matrix_units(n)).reshape(n, n, m, m)
    return hermitize(images.transpose(0, 2, 1, 3).reshape(n * m, n * m))


def choi_min_eig(phi) -> float:
    return float(_heevd(choi(phi), vectors=False)[0][0])


def choi_min_eig_below(phi, level: float) -> bool:
    """True only if the smallest Choi eigenvalue is certainly below ``level``.

    Cholesky of C - level*I (plus a backward-error margin) breaks down exactly
    when that shifted matrix is not positive definite; much cheaper than a
    full eigendecomposition for large n*m.
    """
    C = choi(phi)
    d = C.shape[0]
    margin = 8 * d * np.finfo(float).eps * max(1.0, math.sqrt(np.vdot(C, C).real))
    _, info = lapack.zpotrf(C + (margin - level) * np.eye(d))
    return info > 0


def is_cp(phi, tol: float = 1e-10) -> bool:
    lam = _heevd(choi(phi), vectors=False)[0]
    return bool(lam[0] >= -tol * max(1.0, abs(lam[-1])))


@dataclass
class SchwarzProbe:
    witnessed: bool  # no violation seen; a sample, not a proof
    worst: float  # smallest eigenvalue of phi(A*A) - phi(A)*phi(A), ||A||_F = 1
    witness: Optional[np.ndarray] = None
    trials: int = 0


def schwarz_probe(phi, trials: int = 1000, seed: int = 0, tol: float = 1e-10) -> SchwarzProbe:
    """Search for A with phi(A*A) - phi(A)*phi(A) not positive semidefinite."""
    if not is_unital(phi):
        raise NotUnital("Schwarz probe requires a unital map")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5C4A]))
    n = phi.in_dim
    A = rng.standard_normal((trials, n, n)) + 1j * rng.standard_normal((trials, n, n))
    A /= np.linalg.norm(A, axis=(-2, -1), keepdims=True)
    Ah = np.conj(np.swapaxes(A, -1, -2))
    PA = apply(phi, A)
    gap = apply(phi, Ah @ A) - np.conj(np.swapaxes(PA, -1, -2)) @ PA
    gap = (gap + np.conj(np.swapaxes(gap, -1, -2))) / 2
    mins = np.linalg.eigvalsh(gap)[:, 0]
    worst = int(np.argmin(mins))
    ok = bool(mins[worst] >= -tol)
    return SchwarzProbe(ok, float(mins[worst]), None if ok else A[worst], trials)


@dataclass
class MapCertificate:
    is_unital: bool
    is_trace_preserving: bool
    is_cp: bool
    schwarz_witnessed: Optional[bool]
    choi_min_eig: float
    tol: float


def certify(phi, tol: float = 1e-10, schwarz_trials: int = 200, seed: int = 0) -> MapCertificate:
    unital = is_unital(phi, tol)
    schwarz = schwarz_probe(phi, schwarz_trials, seed, tol).witnessed if unital else None
    return MapCertificate(
        is_unital=unital,
        is_trace_preserving=is_trace_preserving(phi, tol),
        is_cp=is_cp(phi, tol),
        schwarz_witnessed=schwarz,
        choi_min_eig=choi_min_eig(phi),
        tol=tol,
    )
