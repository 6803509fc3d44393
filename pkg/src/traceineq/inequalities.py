"""Slack computations for the trace inequalities.

Each checker returns lhs - rhs of an inequality predicted to hold, together
with the scale max(|lhs|, |rhs|, 1) used to normalise it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from traceineq import maps
from traceineq.hermitian import (
    DimensionMismatch,
    PDFloorViolation,
    _trace_exp_log_exact,
    check_hermitian,
    eigvalsh,
    hermitize,
    mat_exp,
    relative_entropy,
    trace_exp_log,
)

UNITAL_TOL = 1e-10


class AdjointNotPD(PDFloorViolation):
    pass


@dataclass
class SlackResult:
    slack: float
    scale: float
    instance_id: str = ""
    lhs: float = float("nan")
    rhs: float = float("nan")
    details: dict = field(default_factory=dict)

    @property
    def normalized(self) -> float:
        return self.slack / self.scale


def _slack(lhs: float, rhs: float, instance_id: str = "", **details) -> SlackResult:
    return SlackResult(lhs - rhs, max(abs(lhs), abs(rhs), 1.0), instance_id, lhs, rhs, details)


def _require_unital(phi):
    if not maps.is_unital(phi, UNITAL_TOL):
        raise maps.NotUnital(f"map M_{phi.in_dim} -> M_{phi.out_dim} is not unital at tol {UNITAL_TOL:g}")


def _adjoint_image(phi, Y):
    Z = hermitize(maps.apply(maps.adjoint(phi), Y))
    lam = eigvalsh(Z)
    floor = 1e-10 * max(1.0, float(np.max(np.abs(lam))))
    if lam[0] <= floor:
        raise AdjointNotPD(float(lam[0]), floor, "adjoint image of Y")
    return Z


def check_monotonicity(H, Y, phi, instance_id: str = "", kernel: str = "eigh") -> SlackResult:
    """Tr exp(H + log phi^dagger(Y)) - Tr exp(phi(H) + log Y) for unital positive phi."""
    H = check_hermitian(H)
    Y = check_hermitian(Y)
    if H.shape[0] != phi.in_dim or Y.shape[0] != phi.out_dim:
        raise DimensionMismatch(
            f"map is M_{phi.in_dim} -> M_{phi.out_dim}, got H {H.shape} and Y {Y.shape}"
        )
    _require_unital(phi)
    if kernel == "eigh":
        F = _trace_exp_log_exact
    else:
        F = lambda A, B, what: trace_exp_log(A, B, kernel)  # noqa: E731
    # rhs first, so a bad Y is reported as such and not as a bad adjoint image
    rhs = F(hermitize(maps.apply(phi, H)), hermitize(Y), "Y")
    try:
        lhs = F(H, hermitize(maps.apply(maps.adjoint(phi), Y)), "adjoint image of Y")
    except PDFloorViolation as exc:
        raise AdjointNotPD(exc.min_eig, exc.floor, "adjoint image of Y") from exc
    return _slack(lhs, rhs, instance_id)


def check_dpi(X, Y, psi, instance_id: str = "", kernel: str = "eigh") -> SlackResult:
    """D(X||Y) - D(psi(X)||psi(Y)) for trace-preserving positive psi."""
    if not maps.is_trace_preserving(psi, UNITAL_TOL):
        raise maps.NotTracePreserving(f"map M_{psi.in_dim} -> M_{psi.out_dim} is not trace preserving")
    X = check_hermitian(X)
    pX = hermitize(maps.apply(psi, X))
    pY = hermitize(maps.apply(psi, Y))
    lhs = relative_entropy(X, Y, kernel)
    rhs = relative_entropy(pX, pY, kernel)
    return _slack(lhs, rhs, instance_id)


@dataclass
class ChainStep:
    """Audit of one sampled state W through the monotonicity proof."""

    pairing_gap: float  # |Tr[phi^dagger(W) H] - Tr[W phi(H)]|
    pairing_scale: float  # ||W||_F ||H||_F
    dpi: SlackResult  # D(W||Y/TrY) - D(phi^dagger W || phi^dagger(Y/TrY))
    chain: SlackResult  # dominance of the second line over the third

    @property
    def pairing_normalized(self) -> float:
        return self.pairing_gap / self.pairing_scale if self.pairing_scale > 0 else 0.0


def check_proof_chain(H, Y, phi, W_samples, instance_id: str = "") -> list[ChainStep]:
    H = check_hermitian(H)
    _require_unital(phi)
    phi_dag = maps.adjoint(phi)
    PH = hermitize(maps.apply(phi, H))
    Y = hermitize(np.asarray(Y, dtype=complex))
    Y_norm = Y / np.trace(Y).real
    aY = _adjoint_image(phi, Y)
    aY_norm = _adjoint_image(phi, Y_norm)
    steps = []
    for W in W_samples:
        W = check_hermitian(W)
        aW = hermitize(maps.apply(phi_dag, W))
        left = float(np.vdot(H, aW).real)  # Tr[phi^dagger(W) H]
        right = float(np.vdot(PH, W).real)  # Tr[W phi(H)]
        dpi = _slack(relative_entropy(W, Y_norm), relative_entropy(aW, aY_norm), instance_id)
        chain = _slack(left - relative_entropy(aW, aY), right - relative_entropy(W, Y), instance_id)
        steps.append(ChainStep(abs(left - right), float(np.linalg.norm(W) * np.linalg.norm(H)), dpi, chain))
    return steps


def check_superadditivity(H, Y1, Y2, instance_id: str = "", kernel: str = "eigh") -> SlackResult:
    """F(H, Y1 + Y2) - F(H, Y1) - F(H, Y2)."""
    Y1 = np.asarray(Y1, dtype=complex)
    Y2 = np.asarray(Y2, dtype=complex)
    if Y1.shape != Y2.shape:
        raise DimensionMismatch(f"Y1 is {Y1.shape}, Y2 is {Y2.shape}")
    lhs = trace_exp_log(H, hermitize(Y1 + Y2), kernel)
    rhs = trace_exp_log(H, Y1, kernel) + trace_exp_log(H, Y2, kernel)
    return _slack(lhs, rhs, instance_id)


def check_homogeneity(H, Y, t: float, kernel: str = "eigh") -> float:
    """|F(H, tY) - t F(H, Y)| / (t F(H, Y))."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    base = trace_exp_log(H, Y, kernel)
    scaled = trace_exp_log(H, t * np.asarray(Y, dtype=complex), kernel)
    return abs(scaled - t * base) / (t * base)


def check_concavity(H, Y1, Y2, lam: float = 0.5, instance_id: str = "", kernel: str = "eigh") -> SlackResult:
    """F(H, lam Y1 + (1-lam) Y2) - lam F(H, Y1) - (1-lam) F(H, Y2).

    ``details["superadditivity_slack"]`` holds the same quantity reached via
    superadditivity on (lam Y1, (1-lam) Y2) plus degree-one homogeneity, and
    ``details["route_gap"]`` the absolute difference of the two.
    """
    if not 0 < lam < 1:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    Y1 = np.asarray(Y1, dtype=complex)
    Y2 = np.asarray(Y2, dtype=complex)
    if Y1.shape != Y2.shape:
        raise DimensionMismatch(f"Y1 is {Y1.shape}, Y2 is {Y2.shape}")
    mid = trace_exp_log(H, hermitize(lam * Y1 + (1 - lam) * Y2), kernel)
    F1 = trace_exp_log(H, Y1, kernel)
    F2 = trace_exp_log(H, Y2, kernel)
    res = _slack(mid, lam * F1 + (1 - lam) * F2, instance_id)
    sup = check_superadditivity(H, lam * Y1, (1 - lam) * Y2, instance_id, kernel).slack
    res.details = {"superadditivity_slack": sup, "route_gap": abs(sup - res.slack)}
    return res


def check_golden_thompson(A, B, instance_id: str = "") -> SlackResult:
    """Tr[e^A e^B] - Tr e^{A+B}."""
    A = check_hermitian(A)
    B = check_hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
    lhs = float(np.vdot(mat_exp(A), mat_exp(B)).real)
    rhs = float(np.exp(eigvalsh(A + B)).sum())
    return _slack(lhs, rhs, instance_id)
