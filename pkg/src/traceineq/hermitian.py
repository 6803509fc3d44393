"""Dense Hermitian linear algebra: spectral matrix functions, the trace
functional F(H, Y) = Tr exp(H + log Y), and entropies (natural log, nats).

Matrices are plain complex ``numpy`` arrays. The Hermitian / positive
definite / density "types" are enforced by the ``check_*`` validators rather
than by wrapper classes.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

HERM_TOL = 1e-12
PD_FLOOR_REL = 1e-10
TRACE_TOL = 1e-12


class DimensionMismatch(ValueError):
    pass


class NotHermitian(ValueError):
    pass


class PDFloorViolation(ValueError):
    """Smallest eigenvalue at or below the positive-definite floor.

    The instance is numerically too close to the boundary of the open cone of
    positive definite matrices.
    """

    def __init__(self, min_eig: float, floor: float, what: str = "matrix"):
        self.min_eig = min_eig
        self.floor = floor
        super().__init__(f"{what} min eigenvalue {min_eig:.3e} <= pd floor {floor:.3e}")


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    unitary: np.ndarray  # columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        U = self.unitary
        return (U * self.eigenvalues) @ U.conj().T


def _as_square(A) -> np.ndarray:
    if type(A) is not np.ndarray or A.dtype != complex:
        A = np.asarray(A).astype(complex, copy=False)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def _fro2(A) -> float:
    return np.vdot(A, A).real


def hermitize(A) -> np.ndarray:
    """Return (A + A^dagger)/2."""
    A = _as_square(A)
    return (A + A.conj().T) / 2


def check_hermitian(A, tol: float = HERM_TOL) -> np.ndarray:
    A = _as_square(A)
    scale2 = max(1.0, _fro2(A))
    if _fro2(A - A.conj().T) > tol * tol * scale2:
        raise NotHermitian(f"||A - A^dagger||_F exceeds {tol:g} * {math.sqrt(scale2):.3g}")
    return A


def pd_floor(eigenvalues) -> float:
    """Smallest admissible eigenvalue: 1e-10 * max(1, largest |eigenvalue|)."""
    lam = np.asarray(eigenvalues)
    return PD_FLOOR_REL * max(1.0, float(max(-lam.min(), lam.max())))


def check_pd(Y, what: str = "matrix") -> float:
    """Validate Y as Hermitian positive definite; return its smallest eigenvalue."""
    lam = eigvalsh(Y)
    floor = pd_floor(lam)
    if lam[0] <= floor:
        raise PDFloorViolation(float(lam[0]), floor, what)
    return float(lam[0])


def check_density(X, what: str = "density matrix") -> np.ndarray:
    X = check_hermitian(X)
    tr = np.trace(X).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{what} has trace {tr!r}, expected 1")
    check_pd(X, what)
    return X


def _heevd(A: np.ndarray, vectors: bool = True):
    """LAPACK zheevd on a complex Hermitian array, skipping numpy's wrapper overhead."""
    lam, U, info = lapack.zheevd(A, compute_v=int(vectors))
    if info != 0 or not np.isfinite(lam).all():
        n = A.shape[0]
        raise np.linalg.LinAlgError(
            f"eigh failed for {n}x{n} matrix (info={info}, ||A||_F={np.linalg.norm(A):.3e}, "
            f"finite={np.isfinite(A).all()})"
        )
    return lam, U


def eigh(A) -> EigenDecomposition:
    A = check_hermitian(A)
    return EigenDecomposition(*_heevd(hermitize(A)))


def eigvalsh(A) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return _heevd(hermitize(check_hermitian(A)), vectors=False)[0]


def _spectral(lam: np.ndarray, U: np.ndarray) -> np.ndarray:
    return hermitize((U * lam) @ U.conj().T)


def mat_fn(A, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function through the spectral decomposition of A.

    ``f`` is called on the eigenvalue vector. Raises ValueError when f is
    undefined (non-finite) at an eigenvalue.
    """
    lam, U = eigh(A)
    with np.errstate(all="ignore"):
        flam = np.asarray(f(lam), dtype=float)
    if flam.shape != lam.shape:
        flam = np.broadcast_to(flam, lam.shape)
    if not np.all(np.isfinite(flam)):
        bad = lam[~np.isfinite(flam)]
        raise ValueError(f"function undefined at eigenvalue(s) {bad}")
    return _spectral(flam, U)


def mat_exp(A) -> np.ndarray:
    lam, U = eigh(A)
    return _spectral(np.exp(lam), U)


def _log_parts(Y, what: str, checked: bool = False):
    lam, U = _heevd(Y) if checked else eigh(Y)
    floor = PD_FLOOR_REL * max(1.0, -lam[0], lam[-1])
    if lam[0] <= floor:
        raise PDFloorViolation(float(lam[0]), floor, what)
    return np.log(lam), U


def mat_log(Y, what: str = "matrix") -> np.ndarray:
    return _spectral(*_log_parts(Y, what))


def _log_pade(Y, what: str = "matrix") -> np.ndarray:
    check_pd(Y, what)
    return hermitize(scipy.linalg.logm(hermitize(Y)))


def _trace_exp_log_exact(H: np.ndarray, Y: np.ndarray, what: str) -> float:
    """Eigen kernel for complex arrays already validated; Y must be exactly Hermitian."""
    loglam, U = _log_parts(Y, what, checked=True)
    S = H + (U * loglam) @ U.conj().T
    return float(np.exp(_heevd((S + S.conj().T) / 2, vectors=False)[0]).sum())


def trace_exp_log(H, Y, kernel: str = "eigh") -> float:
    """F(H, Y) = Tr exp(H + log Y) for Hermitian H and positive definite Y.

    ``kernel="pade"`` evaluates log and exp with scipy's Schur-Pade routines
    instead of the eigendecomposition; used to re-check suspicious slacks.
    """
    H = check_hermitian(H)
    Y = _as_square(Y)
    if H.shape != Y.shape:
        raise DimensionMismatch(f"H is {H.shape}, Y is {Y.shape}")
    if kernel == "eigh":
        return _trace_exp_log_exact(H, hermitize(check_hermitian(Y)), "Y")
    if kernel == "pade":
        S = hermitize(H + _log_pade(Y, "Y"))
        return float(np.trace(scipy.linalg.expm(S)).real)
    raise ValueError(f"unknown kernel {kernel!r}")


def log_trace_exp(K) -> float:
    """log Tr e^K, evaluated with a max shift."""
    lam = eigvalsh(K)
    top = lam[-1]
    return float(top + np.log(np.exp(lam - top).sum()))


def _xlogx_trace(X) -> float:
    lam = _heevd(hermitize(X), vectors=False)[0]
    lam = lam[lam > 0]
    return float(np.sum(lam * np.log(lam)))


def entropy(X) -> float:
    """von Neumann entropy -Tr[X log X] in nats.

    Eigenvalues that round to zero or below contribute 0 (the 0 log 0
    convention), so near-pure states are accepted.
    """
    X = check_hermitian(X)
    return -_xlogx_trace(X)


def relative_entropy(X, Y, kernel: str = "eigh") -> float:
    """D(X||Y) = Tr[X (log X - log Y)].

    Y only has to be positive definite; it is not renormalised, so this is
    also the extension used for non-normalised second arguments.
    """
    X = check_hermitian(X)
    Y = _as_square(Y)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"X is {X.shape}, Y is {Y.shape}")
    logY = mat_log(Y, "Y") if kernel == "eigh" else _log_pade(Y, "Y")
    cross = np.vdot(logY, X).real  # Tr[log(Y) X], log Y Hermitian
    return _xlogx_trace(X) - float(cross)


def hs_inner(A, B) -> complex:
    """Hilbert-Schmidt inner product <A, B> = Tr[A^dagger B]."""
    return complex(np.vdot(A, B))
