"""Seeded generation of test instances.

All randomness flows through an explicit ``numpy.random.Generator``; campaign
code obtains one per trial from :func:`trial_rng`, so an instance depends only
on (seed, stream, trial index) and never on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from traceineq import maps
from traceineq.hermitian import _heevd, hermitize

NONCP_CERT = -1e-6


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    dim_range: tuple = (2, 8)
    spectrum_scale: float = 2.0
    condition_cap: float = 1e4

    def __post_init__(self):
        lo, hi = self.dim_range
        if not (1 <= lo <= hi <= 16):
            raise ValueError(f"dim_range must satisfy 1 <= n_min <= n_max <= 16, got {self.dim_range}")
        if self.condition_cap < 1:
            raise ValueError(f"condition_cap must be >= 1, got {self.condition_cap}")
        if self.spectrum_scale < 0:
            raise ValueError(f"spectrum_scale must be >= 0, got {self.spectrum_scale}")
        object.__setattr__(self, "dim_range", (int(lo), int(hi)))


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Independent generator keyed on (seed, stream, trial)."""
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), stream, trial]))


def _ginibre(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols, 2)).view(complex)[..., 0]


def random_hermitian(n: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    """Hermitised complex Gaussian with operator norm drawn uniformly from [0, scale]."""
    H = hermitize(_ginibre(rng, n))
    lam = _heevd(H, vectors=False)[0]
    norm = max(-lam[0], lam[-1])
    target = scale * rng.uniform()
    if scale == 0 or norm == 0:
        return np.zeros((n, n), dtype=complex)
    return H * (target / norm)


def _haar_q(G: np.ndarray) -> np.ndarray:
    """Q factor of G = QR with the phases of diag(R) divided out (direct LAPACK calls)."""
    qr, tau, _, info = lapack.zgeqrf(G)
    if info != 0:
        raise np.linalg.LinAlgError(f"zgeqrf failed with info={info}")
    d = np.diagonal(qr).copy()
    Q, _, info = lapack.zungqr(qr, tau)
    if info != 0:
        raise np.linalg.LinAlgError(f"zungqr failed with info={info}")
    return Q * (d / np.abs(d))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary: QR of a Ginibre matrix with the phases of R divided out."""
    return _haar_q(_ginibre(rng, n))


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """rows x cols matrix V with V^dagger V = I_cols."""
    if rows < cols:
        raise ValueError(f"isometry needs rows >= cols, got {rows}x{cols}")
    return _haar_q(_ginibre(rng, rows, cols))


def random_pd(n: int, condition_cap: float, rng: np.random.Generator) -> np.ndarray:
    """U diag(lam) U^dagger with log(lam) uniform on [-log(cap)/2, log(cap)/2]."""
    half = math.log(condition_cap) / 2
    lam = np.exp(rng.uniform(-half, half, size=n))
    U = random_unitary(n, rng)
    return hermitize((U * lam) @ U.conj().T)


def random_density(n: int, rng: np.random.Generator, condition_cap: float = 1e4) -> np.ndarray:
    Y = random_pd(n, condition_cap, rng)
    Y = Y / np.trace(Y).real
    # second pass pulls |Tr - 1| to round-off level
    return Y / np.trace(Y).real


def random_unital_cp(
    n: int,
    kraus_count: int,
    rng: np.random.Generator,
    form: str = "mixed_unitary",
    out_dim: int | None = None,
):
    """Random unital completely positive map M_n -> M_m.

    ``form="mixed_unitary"``: sum_i w_i U_i X U_i^dagger (unital and trace
    preserving, needs m = n). ``form="stinespring"``: X -> V^dagger (X (x) I_k) V
    for a random isometry V: C^m -> C^n (x) C^k with k = kraus_count; this is
    the adjoint of a channel, unital but generally not trace preserving.
    """
    if kraus_count < 1:
        raise ValueError("kraus_count must be >= 1")
    m = n if out_dim is None else out_dim
    if form == "mixed_unitary":
        if m != n:
            raise ValueError("mixed-unitary maps need out_dim == in_dim")
        w = rng.dirichlet(np.ones(kraus_count))
        return maps.mixed_unitary(w, [random_unitary(n, rng) for _ in range(kraus_count)])
    if form == "stinespring":
        k = kraus_count
        if n * k < m:
            raise ValueError(f"need in_dim * kraus_count >= out_dim, got {n}*{k} < {m}")
        V = random_isometry(n * k, m, rng).reshape(n, k, m)
        # Kraus operators B_j^dagger with B_j = (I_n (x) <j|) V
        return maps.KrausCP(tuple(V[:, j, :].conj().T for j in range(k)))
    raise ValueError(f"unknown form {form!r}")


def stinespring_kraus_count(n: int, m: int) -> int:
    """Environment size for which X -> V^dagger(X (x) I)V and its adjoint are generically faithful."""
    return max(math.ceil(n / m), math.ceil(m / n)) + 1


def random_unital_positive_noncp(n: int, rng: np.random.Generator, out_dim: int | None = None, max_tries: int = 64):
    """Unital positive map that the Choi test certifies as not completely positive.

    For m = n: w T + (1 - w) Psi with transpose T, w in [0.5, 1], Psi a random
    unital CP map (w = 1 gives the pure transpose). For m != n the transpose is
    routed through a random unital CP map Psi_1: w Psi_1 o T + (1 - w) Psi_2.
    Draws are resampled until the smallest Choi eigenvalue is certified below -1e-6.
    """
    m = n if out_dim is None else out_dim
    if n < 2:
        raise ValueError("transpose-based non-CP maps need n >= 2")
    T = maps.Transpose(n)
    for _ in range(max_tries):
        w = rng.uniform(0.5, 1.0)
        if m == n:
            cp_part = random_unital_cp(n, int(rng.integers(1, 4)), rng)
            phi = maps.ConvexMixture((w, 1 - w), (T, cp_part))
        else:
            k = stinespring_kraus_count(n, m)
            routed = maps.Composition(random_unital_cp(n, k, rng, "stinespring", m), T)
            cp_part = random_unital_cp(n, k, rng, "stinespring", m)
            phi = maps.ConvexMixture((w, 1 - w), (routed, cp_part))
        if maps.choi_min_eig_below(phi, NONCP_CERT):
            return phi
    raise RuntimeError(f"no certified non-CP map found for n={n}, m={m} in {max_tries} draws")


def random_unital_map(family: str, n: int, m: int, rng: np.random.Generator):
    """Unital positive map M_n -> M_m from one of the campaign families."""
    if family == "cp_unital":
        if n == m and rng.uniform() < 0.5:
            return random_unital_cp(n, int(rng.integers(1, 5)), rng)
        return random_unital_cp(n, stinespring_kraus_count(n, m), rng, "stinespring", m)
    if family == "positive_noncp":
        return random_unital_positive_noncp(n, rng, m)
    if family == "transpose":
        T = maps.Transpose(n)
        if n == m:
            return T
        return maps.Composition(random_unital_cp(n, stinespring_kraus_count(n, m), rng, "stinespring", m), T)
    if family == "block_embed":
        if m % n == 0 and m // n >= 2:
            return maps.BlockEmbed(n, m // n)
        E = maps.BlockEmbed(n, 2)
        return maps.Composition(random_unital_cp(2 * n, stinespring_kraus_count(2 * n, m), rng, "stinespring", m), E)
    raise ValueError(f"unknown map family {family!r}")


def random_tp_positive_map(family: str, n: int, m: int, rng: np.random.Generator):
    """Trace-preserving positive map M_n -> M_m: adjoint of a unital positive map M_m -> M_n."""
    if family == "depolarizing":
        if n != m:
            raise ValueError("depolarizing family needs n == m")
        return maps.depolarizing(n)
    return maps.adjoint(random_unital_map(family, m, n, rng))
