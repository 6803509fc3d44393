"""Gibbs variational principle as a computable optimisation problem.

    log Tr e^{K + log W} = sup { Tr[XK] - D(X||W) : X > 0, Tr X = 1 }

with W = I recovering log Tr e^K = sup { Tr[XK] + S(X) }. Besides the value
and objective this module provides the closed-form candidate maximiser, an
entropic mirror-ascent solver that reaches the supremum without using it, and
finite-difference curvature probes of Y -> Tr exp(H + log Y) along lines.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from traceineq.hermitian import (
    DimensionMismatch,
    PDFloorViolation,
    check_hermitian,
    entropy,
    hermitize,
    log_trace_exp,
    mat_log,
    pd_floor,
    relative_entropy,
    trace_exp_log,
)


@dataclass(frozen=True, eq=False)
class GibbsProblem:
    K: np.ndarray
    W: Optional[np.ndarray] = None

    def __post_init__(self):
        K = check_hermitian(self.K)
        object.__setattr__(self, "K", K)
        if self.W is not None:
            W = np.asarray(self.W, dtype=complex)
            if W.shape != K.shape:
                raise DimensionMismatch(f"K is {K.shape}, W is {W.shape}")
            object.__setattr__(self, "W", W)

    @property
    def dim(self) -> int:
        return self.K.shape[0]

    def effective_hamiltonian(self) -> np.ndarray:
        """K + log W (just K when W is absent)."""
        if self.W is None:
            return self.K
        return hermitize(self.K + mat_log(self.W, "W"))


def gibbs_value(p: GibbsProblem) -> float:
    return log_trace_exp(p.effective_hamiltonian())


def gibbs_objective(X, p: GibbsProblem) -> float:
    """Tr[XK] - Tr[X log X], or Tr[XK] - D(X||W) when W is given."""
    X = check_hermitian(X)
    if X.shape != p.K.shape:
        raise DimensionMismatch(f"X is {X.shape}, K is {p.K.shape}")
    energy = float(np.vdot(p.K, X).real)
    if p.W is None:
        return energy + entropy(X)
    return energy - relative_entropy(X, p.W)


def _gibbs_state(L: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """exp(L)/Tr exp(L) and its (normalised) logarithm."""
    lam, U = np.linalg.eigh(hermitize(L))
    lam = lam - (lam[-1] + math.log(np.exp(lam - lam[-1]).sum()))
    X = hermitize((U * np.exp(lam)) @ U.conj().T)
    logX = hermitize((U * lam) @ U.conj().T)
    return X, logX


def gibbs_maximizer(p: GibbsProblem) -> np.ndarray:
    """exp(K + log W) / Tr exp(K + log W)."""
    return _gibbs_state(p.effective_hamiltonian())[0]


@dataclass
class AscentResult:
    X: np.ndarray
    objectives: list = field(default_factory=list)
    value: float = float("nan")
    converged: bool = False
    backoffs: int = 0

    @property
    def gap(self) -> float:
        return self.value - self.objectives[-1]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "objective", "gap"])
            for k, obj in enumerate(self.objectives):
                w.writerow([k, repr(obj), repr(self.value - obj)])


def mirror_ascent(
    p: GibbsProblem,
    X0,
    steps: int = 500,
    rate: float = 0.5,
    gap_tol: float = 1e-4,
    monotone_tol: float = 1e-10,
    max_backoff: int = 40,
) -> AscentResult:
    """Entropic mirror ascent over density matrices.

    X_{k+1} is proportional to exp(log X_k + rate * G_k) where G_k is the
    Euclidean gradient K - log X_k + log W - I. A step that lowers the
    objective by more than ``monotone_tol`` is retried at half the rate.
    ``converged`` reports whether the final gap to ``gibbs_value`` is within
    ``gap_tol``; failure is returned, not raised.
    """
    if rate <= 0:
        raise ValueError("rate must be positive")
    X0 = check_hermitian(X0)
    n = p.dim
    if X0.shape != (n, n):
        raise DimensionMismatch(f"X0 is {X0.shape}, problem is {n}x{n}")
    logW = None if p.W is None else mat_log(p.W, "W")
    # the log iterate is carried directly, so log X_k is exact
    logX = mat_log(X0 / np.trace(X0).real, "X0")
    X = _gibbs_state(logX)[0]

    def objective(X, logX):
        val = float(np.vdot(p.K, X).real) - float(np.vdot(logX, X).real)
        if logW is not None:
            val += float(np.vdot(logW, X).real)
        return val

    obj = objective(X, logX)
    result = AscentResult(X, [obj], gibbs_value(p))
    I = np.eye(n)
    for _ in range(steps):
        G = p.K - logX - I
        if logW is not None:
            G = G + logW
        eta = rate
        for _ in range(max_backoff):
            X_new, logX_new = _gibbs_state(logX + eta * G)
            obj_new = objective(X_new, logX_new)
            if obj_new >= obj - monotone_tol:
                break
            eta /= 2
            result.backoffs += 1
        else:
            break  # no acceptable step: stalled
        X, logX, obj = X_new, logX_new, obj_new
        result.objectives.append(obj)
    result.X = X
    result.converged = bool(result.gap <= gap_tol)
    return result


@dataclass(frozen=True, eq=False)
class ScalarPath:
    """t -> Y0 + t * direction on ``t_range``, with H fixed."""

    H: np.ndarray
    Y0: np.ndarray
    direction: np.ndarray
    t_range: tuple = (-1.0, 1.0)

    def point(self, t: float) -> np.ndarray:
        return hermitize(self.Y0 + t * self.direction)

    def f(self, t: float) -> float:
        return trace_exp_log(self.H, self.point(t))

    def validate(self) -> None:
        # smallest eigenvalue is concave in t, so checking the ends covers the interval
        for t in self.t_range:
            lam = np.linalg.eigvalsh(self.point(t))
            if lam[0] <= pd_floor(lam):
                raise PDFloorViolation(float(lam[0]), pd_floor(lam), f"path point t={t}")

    @property
    def scale(self) -> float:
        lo, hi = self.t_range
        return (hi - lo) / 2


def concavity_probe(H, Y1=None, Y2=None, path: ScalarPath | None = None, grid=None) -> float:
    """Smallest midpoint gap F(H, mid) - (F(H, a) + F(H, b))/2 over grid pairs.

    Points are (1-t) Y1 + t Y2 for the pair form or ``path.point(t)``. A concave
    function gives a gap >= 0 for every pair.
    """
    if path is None:
        if Y1 is None or Y2 is None:
            raise ValueError("give either Y1 and Y2 or a path")
        Y1 = np.asarray(Y1, dtype=complex)
        Y2 = np.asarray(Y2, dtype=complex)
        point = lambda t: hermitize((1 - t) * Y1 + t * Y2)  # noqa: E731
        grid = np.linspace(0.0, 1.0, 5) if grid is None else grid
    else:
        H = path.H
        point = path.point
        grid = np.linspace(*path.t_range, 5) if grid is None else grid
    grid = [float(t) for t in grid]
    F = {t: trace_exp_log(H, point(t)) for t in grid}
    worst = math.inf
    for i, a in enumerate(grid):
        for b in grid[i:]:
            gap = trace_exp_log(H, point((a + b) / 2)) - (F[a] + F[b]) / 2
            worst = min(worst, gap)
    return worst


@dataclass
class CurvatureResult:
    t: float
    h: float
    f: float
    df: float
    d2f: float
    d2g: float  # second derivative of log f
    identity_residual: float  # |d2g - (-(df/f)^2 + d2f/f)|
    identity_scale: float

    @property
    def identity_relative(self) -> float:
        return self.identity_residual / self.identity_scale if self.identity_scale > 0 else 0.0


def second_derivative_probe(path: ScalarPath, t: float = 0.0, h: float | None = None) -> CurvatureResult:
    """Central differences of f(t) = F(H, Y0 + t D) and g = log f at t.

    Also evaluates the log-derivative identity g'' = -(f'/f)^2 + f''/f with
    the finite-difference f' and f''. The step starts at 1e-4 * path scale and
    grows tenfold while the second difference of f is lost in round-off. An
    explicit ``h`` is used as given.
    """
    lo, hi = path.t_range
    adaptive = h is None
    h = 1e-4 * path.scale if h is None else h
    if not (lo <= t - h and t + h <= hi):
        raise ValueError(f"[t-h, t+h] = [{t - h}, {t + h}] leaves t_range {path.t_range}")
    f0 = path.f(t)
    while True:
        fp, fm = path.f(t + h), path.f(t - h)
        second = fp - 2 * f0 + fm
        ulp_scale = np.spacing(max(abs(fp), abs(f0), abs(fm)))
        if not adaptive or abs(second) >= 1e3 * ulp_scale or path.direction is None or not np.any(path.direction):
            break
        if not (lo <= t - 10 * h and t + 10 * h <= hi):
            break
        h *= 10
    d1 = (fp - fm) / (2 * h)
    d2 = second / h**2
    # g(t+-h) - g(t) via log1p keeps round-off relative to the increments
    d2g = (math.log1p((fp - f0) / f0) + math.log1p((fm - f0) / f0)) / h**2
    predicted = -((d1 / f0) ** 2) + d2 / f0
    scale = max(abs(d2g), (d1 / f0) ** 2, abs(d2 / f0))
    return CurvatureResult(t, h, f0, d1, d2, d2g, abs(d2g - predicted), scale)
