"""Orthonormal polynomials for the symmetric weight ``(1 - x**2)**alpha`` on [-1, 1].

The system ``p_n^alpha`` is evaluated by the three-term recurrence

    x p_n(x) = a_{n+1} p_{n+1}(x) + a_n p_{n-1}(x),

with closed-form coefficients for the ultraspherical case.  Besides evaluation
the module provides Gauss-Legendre quadrature (single and graded composite
rules), an orthonormality check and grid estimates of the weighted sup-norms
``(1 - x**2)**(1/4 + alpha/2) |p_n^alpha(x)|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._errors import DomainError, ParameterError

__all__ = [
    "RecurrenceTable",
    "QuadratureRule",
    "weight_mass",
    "build_recurrence",
    "eval_all",
    "gauss_legendre_rule",
    "composite_rule",
    "check_orthonormality",
    "chebyshev_grid",
    "weighted_sup",
    "weighted_sups",
    "ultraspherical_envelope",
    "LEGENDRE_BOUND",
]

#: Constant in the classical Legendre bound (1 - x^2)^{1/4} |p_n| <= 2/sqrt(pi).
LEGENDRE_BOUND = 2.0 / math.sqrt(math.pi)

# alpha = -1 makes the weight non-integrable, so p_0 cannot be normalized.
_ALPHA_FLOOR = -1.0 + 1e-9


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha < _ALPHA_FLOOR:
        raise ParameterError(f"alpha must be finite and > -1, got {alpha!r}")
    return alpha


def weight_mass(alpha: float) -> float:
    """Return ``int_{-1}^{1} (1 - x^2)^alpha dx = B(1/2, alpha + 1)``."""
    alpha = _check_alpha(alpha)
    return math.exp(
        math.lgamma(0.5) + math.lgamma(alpha + 1.0) - math.lgamma(alpha + 1.5)
    )


@dataclass(frozen=True)
class RecurrenceTable:
    """Coefficients of the orthonormal recurrence up to degree ``max_degree``.

    ``a[n]`` (``n >= 1``) couples ``p_n`` and ``p_{n-1}``; ``a[0]`` is unused
    and set to zero.  In the form ``p_{n+1} = (A_n x + B_n) p_n - C_n p_{n-1}``
    this gives ``A_n = 1/a[n+1]``, ``B_n = 0`` and ``C_n = a[n]/a[n+1]``.
    """

    alpha: float
    max_degree: int
    a: tuple[float, ...]
    norm0: float
    probability_normalized: bool = False

    @property
    def leading(self) -> np.ndarray:
        """``A_n`` for ``n = 0..max_degree-1``."""
        return 1.0 / np.asarray(self.a[1:])

    @property
    def offset(self) -> np.ndarray:
        """``B_n``; identically zero for the symmetric weight."""
        return np.zeros(self.max_degree)

    @property
    def lag(self) -> np.ndarray:
        """``C_n`` for ``n = 0..max_degree-1``."""
        a = np.asarray(self.a)
        return a[:-1] / a[1:]


@lru_cache(maxsize=512)
def build_recurrence(
    alpha: float, n_max: int, probability_normalized: bool = False
) -> RecurrenceTable:
    """Build the recurrence for ``p_0^alpha, ..., p_{n_max}^alpha``.

    Parameters
    ----------
    alpha : float
        Weight exponent, ``alpha > -1``.
    n_max : int
        Highest degree, ``n_max >= 0``.
    probability_normalized : bool
        If true the system is orthonormal for the probability measure
        ``(1 - x^2)^alpha dx / mass``, i.e. every ``p_n`` is multiplied by
        ``sqrt(mass)``.  The default uses the unnormalized measure.
    """
    alpha = _check_alpha(alpha)
    if int(n_max) != n_max or n_max < 0:
        raise ParameterError(f"n_max must be a nonnegative integer, got {n_max!r}")
    n_max = int(n_max)
    a = [0.0]
    for n in range(1, n_max + 1):
        if n == 1:
            # closed form below is 0/0 at alpha = -1/2
            sq = 1.0 / (2.0 * alpha + 3.0)
        else:
            two = 2.0 * n + 2.0 * alpha
            sq = n * (n + 2.0 * alpha) / (two * two - 1.0)
        a.append(math.sqrt(sq))
    norm0 = 1.0 if probability_normalized else 1.0 / math.sqrt(weight_mass(alpha))
    return RecurrenceTable(alpha, n_max, tuple(a), norm0, probability_normalized)


def eval_all(table: RecurrenceTable, x) -> np.ndarray:
    """Evaluate ``p_0, ..., p_{n_max}`` at ``x``.

    Returns an array of shape ``(n_max + 1,) + np.shape(x)``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(np.abs(x) <= 1.0)):
        raise DomainError("evaluation points must lie in [-1, 1]")
    out = np.empty((table.max_degree + 1,) + x.shape)
    out[0] = table.norm0
    if table.max_degree == 0:
        return out
    a = table.a
    out[1] = x * out[0] / a[1]
    for n in range(1, table.max_degree):
        out[n + 1] = (x * out[n] - a[n] * out[n - 1]) / a[n + 1]
    return out


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and Lebesgue weights on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, values) -> np.ndarray:
        """Apply the rule along the last axis of ``values``."""
        return np.asarray(values) @ self.weights


def _legendre_pair(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(P_n(x), P_{n-1}(x))`` by the standard recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p, p_prev


@lru_cache(maxsize=64)
def gauss_legendre_rule(n_points: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``n_points`` nodes, exact through degree ``2n - 1``.

    Newton's method runs in the angle ``t`` with ``x = cos t``, started from
    the asymptotic root locations ``t = pi (i - 1/4) / (n + 1/2)``, which lie
    in the correct root brackets.  Working in ``t`` keeps ``1 - x^2 = sin^2 t``
    accurate near the endpoints.
    """
    if int(n_points) != n_points or n_points < 1:
        raise ParameterError(f"n_points must be a positive integer, got {n_points!r}")
    n = int(n_points)
    if n == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]), 1)
    t = np.pi * (np.arange(1, n + 1) - 0.25) / (n + 0.5)
    for _ in range(100):
        x, s = np.cos(t), np.sin(t)
        p, p_prev = _legendre_pair(n, x)
        # d/dt P_n(cos t) = n (x P_n - P_{n-1}) / sin t
        step = p * s / (n * (x * p - p_prev))
        t = t - step
        if np.max(np.abs(step)) < 1e-15:
            break
    x, s = np.cos(t), np.sin(t)
    _, p_prev = _legendre_pair(n, x)
    w = 2.0 * s * s / (n * p_prev) ** 2
    # symmetrize to kill the last-bit asymmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    return QuadratureRule(x[order], w[order], 2 * n - 1)


@lru_cache(maxsize=16)
def composite_rule(panels_per_side: int = 32, points: int = 32) -> QuadratureRule:
    """Composite Gauss-Legendre rule on a partition graded geometrically toward +-1.

    Break points on [0, 1] are ``1 - 2**-j`` for ``j = 0..panels_per_side-1``
    plus the endpoint, mirrored onto [-1, 0].  Meant for weights with an
    endpoint singularity or fractional-power zero.
    """
    if panels_per_side < 1 or points < 1:
        raise ParameterError("panels_per_side and points must be positive")
    base = gauss_legendre_rule(points)
    edges = np.concatenate([1.0 - 2.0 ** -np.arange(panels_per_side), [1.0]])
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xr = (mid[:, None] + half[:, None] * base.nodes[None, :]).ravel()
    wr = (half[:, None] * base.weights[None, :]).ravel()
    nodes = np.concatenate([-xr[::-1], xr])
    weights = np.concatenate([wr[::-1], wr])
    return QuadratureRule(nodes, weights, base.exact_degree)


def _is_nonneg_int(alpha: float) -> bool:
    return alpha >= 0 and float(alpha).is_integer()


def check_orthonormality(table: RecurrenceTable, rule: QuadratureRule | None = None) -> float:
    """Max absolute deviation of the weighted Gram matrix from the identity.

    If ``rule`` is omitted a global Gauss-Legendre rule exact for the integrand
    is used when ``alpha`` is a nonnegative integer, and the graded composite
    rule otherwise.
    """
    alpha = table.alpha
    if rule is None:
        if _is_nonneg_int(alpha):
            need = 2 * table.max_degree + 2 * int(alpha)
            rule = gauss_legendre_rule(need // 2 + 1)
        else:
            rule = composite_rule()
    w = rule.weights * (1.0 - rule.nodes**2) ** alpha
    if table.probability_normalized:
        w = w / weight_mass(alpha)
    vals = eval_all(table, rule.nodes)
    gram = (vals * w) @ vals.T
    return float(np.max(np.abs(gram - np.eye(table.max_degree + 1))))


def chebyshev_grid(grid_size: int) -> np.ndarray:
    """``cos(pi j / (G - 1))`` for ``j = 0..G-1``: uniform in arccos, endpoints included."""
    return np.cos(np.pi * np.arange(grid_size) / (grid_size - 1))


def weighted_sups(
    alpha: float, n_max: int, grid_size: int = 4096, probability_normalized: bool = False
) -> np.ndarray:
    """Grid maxima of ``(1 - x^2)^{1/4 + alpha/2} |p_n^alpha(x)|`` for ``n = 0..n_max``."""
    if grid_size < 1000:
        raise ParameterError("grid_size must be at least 1000")
    x = chebyshev_grid(grid_size)
    table = build_recurrence(alpha, n_max, probability_normalized)
    envelope = (1.0 - x * x) ** (0.25 + 0.5 * table.alpha)
    return np.max(np.abs(eval_all(table, x)) * envelope, axis=1)


def weighted_sup(
    alpha: float, n: int, grid_size: int = 4096, probability_normalized: bool = False
) -> float:
    """Grid maximum of ``(1 - x^2)^{1/4 + alpha/2} |p_n^alpha(x)|``."""
    return float(weighted_sups(alpha, n, grid_size, probability_normalized)[n])


def ultraspherical_envelope(alpha: float, n) -> np.ndarray:
    """``alpha^{1/6} (1 + alpha/n)^{1/12}``, the shape of the large-alpha bound."""
    n = np.asarray(n, dtype=float)
    return alpha ** (1.0 / 6.0) * (1.0 + alpha / n) ** (1.0 / 12.0)
