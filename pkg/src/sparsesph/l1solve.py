"""Complex l1 minimization by the primal-dual hybrid gradient method.

Solves

    minimize ||z||_1  subject to  ||Psi z - b||_2 <= epsilon

over complex ``z``, where ``||z||_1`` is the sum of moduli.  The splitting is
``f = ||.||_1`` (prox: complex soft thresholding) and ``g`` = indicator of the
ball of radius ``epsilon`` around ``b`` (dual prox via Moreau's identity).
For ``epsilon = 0`` the constraint is ``Psi z = b``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._errors import DegenerateMatrixError, ParameterError

__all__ = [
    "SolverConfig",
    "SolverResult",
    "operator_norm",
    "complex_soft_threshold",
    "solve_bpdn",
    "recover",
]


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 20000
    feasibility_tolerance: float = 1e-9
    stall_tolerance: float = 1e-10
    step_ratio: float = 0.99
    # tau = step_ratio * r / L, sigma = step_ratio / (r L); a small primal step
    # converges much faster on these problems
    primal_dual_ratio: float = 0.1
    # epsilon = 0 only: replace Psi z = b by the equivalent system with
    # orthonormal rows (same feasible set, unit operator norm)
    orthogonalize_rows: bool = True
    # singular values below rank_rtol * sigma_max are dropped when orthogonalizing
    rank_rtol: float = 1e-8

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ParameterError("max_iterations must be positive")
        if self.feasibility_tolerance <= 0 or self.stall_tolerance <= 0:
            raise ParameterError("tolerances must be positive")
        if not 0 < self.step_ratio < 1:
            raise ParameterError("step_ratio must lie in (0, 1)")
        if self.primal_dual_ratio <= 0:
            raise ParameterError("primal_dual_ratio must be positive")


@dataclass(frozen=True)
class SolverResult:
    solution: np.ndarray
    iterations_used: int
    final_feasibility_gap: float
    objective: float
    converged: bool


def operator_norm(Psi, rtol: float = 1e-6, max_iter: int = 10000) -> float:
    """Largest singular value by power iteration on ``Psi^* Psi``.

    The estimate is inflated by ``1.0001`` so it can serve as a safe step-size
    bound.
    """
    A = np.asarray(Psi)
    if A.ndim != 2 or A.size == 0 or not np.any(A):
        raise DegenerateMatrixError("operator_norm needs a nonzero matrix")
    # deterministic start with a component along every right singular vector
    # in general position
    n = A.shape[1]
    v = (1.0 + np.arange(n) / n) * np.exp(1j * np.arange(n))
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = A.conj().T @ (A @ v)
        new = float(np.linalg.norm(w))
        if new == 0.0:
            raise DegenerateMatrixError("power iteration collapsed to zero")
        v = w / new
        if abs(new - lam) <= rtol * new * 1e-3:
            lam = new
            break
        lam = new
    return math.sqrt(lam) * 1.0001


def complex_soft_threshold(z, tau: float) -> np.ndarray:
    """Proximal map of ``tau ||.||_1``: shrink each modulus by ``tau``, keep phase."""
    if tau < 0:
        raise ParameterError("tau must be nonnegative")
    z = np.asarray(z, dtype=complex)
    mod = np.abs(z)
    scale = np.maximum(1.0 - tau / np.where(mod > 0, mod, 1.0), 0.0)
    return np.where(mod > 0, z * scale, 0.0)


def _row_orthogonalize(Psi: np.ndarray, b: np.ndarray, rtol: float) -> tuple[np.ndarray, np.ndarray]:
    U, s, Vh = np.linalg.svd(Psi, full_matrices=False)
    keep = s > s[0] * max(rtol, max(Psi.shape) * np.finfo(float).eps)
    return Vh[keep], (U[:, keep].conj().T @ b) / s[keep]


def _polish_on_support(Psi: np.ndarray, b: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Least-squares correction of ``z`` on its own support toward ``Psi z = b``."""
    support = np.flatnonzero(z)
    if support.size == 0 or support.size > Psi.shape[0]:
        return z
    sub = Psi[:, support]
    delta = np.linalg.lstsq(sub, b - Psi @ z, rcond=None)[0]
    out = z.copy()
    out[support] += delta
    return out


def solve_bpdn(Psi, b, epsilon: float = 0.0, cfg: SolverConfig | None = None) -> SolverResult:
    """Basis pursuit (``epsilon = 0``) or basis pursuit denoising.

    Steps are ``tau = step_ratio r / L`` and ``sigma = step_ratio / (r L)``
    with ``r = primal_dual_ratio`` and ``L`` from :func:`operator_norm`, so
    ``tau sigma L^2 = step_ratio^2``.  Iteration stops once the iterate moves
    less than ``stall_tolerance`` while violating the original constraint by
    at most ``feasibility_tolerance``.

    For ``epsilon = 0`` the equality is first rewritten with orthonormal rows
    (numerically null directions dropped, see ``rank_rtol``) and the result is
    finished by a least-squares correction on its support.  ``converged``
    always refers to the original constraint ``||Psi z - b|| <= epsilon``.
    """
    cfg = cfg or SolverConfig()
    Psi = np.asarray(Psi, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if Psi.ndim != 2 or b.shape != (Psi.shape[0],):
        raise ParameterError(f"shape mismatch: Psi {Psi.shape}, b {b.shape}")
    if not epsilon >= 0:
        raise ParameterError("epsilon must be nonnegative")
    n = Psi.shape[1]
    if not np.any(b) or (epsilon > 0 and np.linalg.norm(b) <= epsilon):
        z = np.zeros(n, dtype=complex)
        return SolverResult(z, 0, 0.0, 0.0, True)

    K, rhs = Psi, b
    if epsilon == 0 and cfg.orthogonalize_rows:
        K, rhs = _row_orthogonalize(Psi, b, cfg.rank_rtol)
    KH = K.conj().T
    L = operator_norm(K)
    tau = cfg.step_ratio * cfg.primal_dual_ratio / L
    sigma = cfg.step_ratio / (cfg.primal_dual_ratio * L)

    z = np.zeros(n, dtype=complex)
    z_bar = z.copy()
    y = np.zeros(K.shape[0], dtype=complex)
    it = 0
    settled = False
    for it in range(1, cfg.max_iterations + 1):
        v = y + sigma * (K @ z_bar)
        # Moreau: prox of sigma g^* from the projection onto the shifted ball
        w = v / sigma - rhs
        nw = np.linalg.norm(w)
        if nw > epsilon:
            w = w * (epsilon / nw)
        y = v - sigma * (w + rhs)
        z_new = complex_soft_threshold(z - tau * (KH @ y), tau)
        step = np.linalg.norm(z_new - z)
        z_bar = 2.0 * z_new - z
        z = z_new
        if step <= cfg.stall_tolerance:
            candidate = z
            gap = max(float(np.linalg.norm(Psi @ z - b)) - epsilon, 0.0)
            if gap > cfg.feasibility_tolerance and epsilon == 0:
                candidate = _polish_on_support(Psi, b, z)
                gap = float(np.linalg.norm(Psi @ candidate - b))
            if gap <= cfg.feasibility_tolerance:
                z = candidate
                settled = True
                break
    if not settled:
        gap = max(float(np.linalg.norm(Psi @ z - b)) - epsilon, 0.0)
    converged = settled
    return SolverResult(z, it, gap, float(np.sum(np.abs(z))), converged)


def recover(ensemble, y, epsilon_inf: float = 0.0, cfg: SolverConfig | None = None) -> SolverResult:
    """Recover coefficients from raw samples ``y`` with ``|noise_j| <= epsilon_inf``.

    The constraint ``||A Phi z - A y||_2 <= sqrt(m) epsilon_inf`` (``A`` the
    preconditioner) is rescaled onto the normalized system, where it reads
    ``||Psi z - b||_2 <= sqrt(2 pi^2) epsilon_inf``.
    """
    b = ensemble.measurements(y)
    eps = ensemble.scale * math.sqrt(ensemble.m) * epsilon_inf
    return solve_bpdn(ensemble.normalized, b, eps, cfg)
