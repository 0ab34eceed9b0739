"""Restricted isometry constants of small matrices.

``delta_s`` is the largest deviation from 1 of any eigenvalue of any s x s
principal submatrix of the Gram matrix ``Psi^* Psi``.  Exact mode enumerates
every support; when that is too many, a Monte Carlo lower bound over random
supports is available instead.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from ._errors import BudgetExceededError, ParameterError
from .sensing import make_rng

__all__ = [
    "RECOVERY_THRESHOLD",
    "RipEstimate",
    "jacobi_eigvalsh",
    "restricted_isometry_constant",
    "randomized_rip_lower_bound",
    "recovery_threshold_met",
    "rip_report",
]

#: delta_{2s} below 3 / (4 + sqrt 6) guarantees stable l1 recovery.
RECOVERY_THRESHOLD = 3.0 / (4.0 + math.sqrt(6.0))

EXACT_BUDGET = 10**6
_CHUNK = 1 << 14


@dataclass(frozen=True)
class RipEstimate:
    s: int
    delta: float
    extremal_support: tuple[int, ...]
    supports_checked: int
    mode: str = "exact"


def jacobi_eigvalsh(G: np.ndarray, tol: float = 1e-15, max_sweeps: int = 50) -> np.ndarray:
    """Eigenvalues of a stack of Hermitian matrices by cyclic Jacobi rotations.

    ``G`` has shape ``(..., n, n)``; the result has shape ``(..., n)``, sorted
    ascending.  Each rotation first removes the phase of the pivot entry, then
    applies a real Givens rotation that annihilates it.
    """
    A = np.array(G, dtype=complex)
    n = A.shape[-1]
    batch = A.shape[:-2]
    A = A.reshape(-1, n, n)
    if n == 1:
        return A[:, 0, 0].real.reshape(batch + (1,))
    scale = np.maximum(np.linalg.norm(A, axis=(1, 2)), np.finfo(float).tiny)
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A[:, iu[0], iu[1]]) ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[:, p, q]
                r = np.abs(g)
                active = r > tol * scale * 1e-3
                if not np.any(active):
                    continue
                ph = np.where(active, g / np.where(active, r, 1.0), 1.0)
                a = A[:, p, p].real
                d = A[:, q, q].real
                safe_r = np.where(active, r, 1.0)
                tau = (d - a) / (2.0 * safe_r)
                t = np.where(
                    active,
                    np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau)),
                    0.0,
                )
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = I except J[p,p]=c, J[p,q]=s*ph, J[q,p]=-s*conj(ph), J[q,q]=c
                colp = A[:, :, p].copy()
                colq = A[:, :, q].copy()
                A[:, :, p] = c[:, None] * colp - (s * np.conj(ph))[:, None] * colq
                A[:, :, q] = (s * ph)[:, None] * colp + c[:, None] * colq
                rowp = A[:, p, :].copy()
                rowq = A[:, q, :].copy()
                A[:, p, :] = c[:, None] * rowp - (s * ph)[:, None] * rowq
                A[:, q, :] = (s * np.conj(ph))[:, None] * rowp + c[:, None] * rowq
                A[:, p, q] = 0.0
                A[:, q, p] = 0.0
    ev = np.sort(np.real(np.diagonal(A, axis1=1, axis2=2)), axis=1)
    return ev.reshape(batch + (n,))


def _support_deviation(gram: np.ndarray, supports: np.ndarray) -> np.ndarray:
    sub = gram[supports[:, :, None], supports[:, None, :]]
    ev = jacobi_eigvalsh(sub)
    return np.maximum(ev[:, -1] - 1.0, 1.0 - ev[:, 0])


def restricted_isometry_constant(Psi, s: int, budget: int = EXACT_BUDGET) -> RipEstimate:
    """Exact ``delta_s`` by enumerating all ``C(N, s)`` supports."""
    Psi = np.asarray(Psi, dtype=complex)
    N = Psi.shape[1]
    if not 1 <= s <= N:
        raise ParameterError(f"s={s} outside [1, {N}]")
    total = math.comb(N, s)
    if total > budget:
        raise BudgetExceededError(
            f"C({N}, {s}) = {total} supports exceeds the exact-mode budget {budget}"
        )
    gram = Psi.conj().T @ Psi
    best, best_support = -math.inf, ()
    combos = itertools.combinations(range(N), s)
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.intp)
        if chunk.size == 0:
            break
        dev = _support_deviation(gram, chunk.reshape(-1, s))
        i = int(np.argmax(dev))
        if dev[i] > best:
            best, best_support = float(dev[i]), tuple(int(j) for j in chunk[i])
    return RipEstimate(s, max(best, 0.0), best_support, total, "exact")


def randomized_rip_lower_bound(Psi, s: int, n_trials: int, seed: int) -> float:
    """Max deviation over ``n_trials`` random supports; a lower bound on ``delta_s``.

    Supports are drawn in sequence from one stream, so a run with more trials
    extends a run with fewer and the bound is nondecreasing in ``n_trials``.
    """
    if n_trials < 1:
        raise ParameterError("n_trials must be >= 1")
    Psi = np.asarray(Psi, dtype=complex)
    N = Psi.shape[1]
    if not 1 <= s <= N:
        raise ParameterError(f"s={s} outside [1, {N}]")
    gram = Psi.conj().T @ Psi
    rng = make_rng(seed)
    best = 0.0
    done = 0
    while done < n_trials:
        k = min(_CHUNK, n_trials - done)
        supports = np.argsort(rng.random((k, N)), axis=1)[:, :s]
        best = max(best, float(np.max(_support_deviation(gram, supports))))
        done += k
    return best


def recovery_threshold_met(delta_2s: float) -> bool:
    if delta_2s < 0:
        raise ParameterError("delta_2s must be nonnegative")
    return delta_2s < RECOVERY_THRESHOLD


def rip_report(estimate: RipEstimate) -> str:
    """One-line record ``{s, delta, threshold_met, supports_checked, mode}``."""
    return json.dumps(
        {
            "s": estimate.s,
            "delta": estimate.delta,
            "threshold_met": recovery_threshold_met(estimate.delta),
            "supports_checked": estimate.supports_checked,
            "mode": estimate.mode,
        }
    )
