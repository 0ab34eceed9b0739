"""Spherical harmonics built from Jacobi polynomials.

With ``x = cos(phi)`` the harmonics are

    Y_l^k(phi, theta) = e^{i k theta} (sin phi)^{|k|} p_{l-|k|}^{|k|}(cos phi) / sqrt(2 pi),

where ``p_n^alpha`` is orthonormal for ``(1 - x^2)^alpha dx``.  The factor
``1/sqrt(2 pi)`` makes the system orthonormal for ``sin(phi) dphi dtheta``.
The preconditioned functions ``Q_l^k = sqrt(sin phi) Y_l^k`` are then
orthonormal for the product measure ``dphi dtheta``.

Coefficients are stored at linear index ``l**2 + l + k``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import orthopoly
from ._errors import ParameterError

__all__ = [
    "HarmonicIndex",
    "SpherePoint",
    "CoefficientVector",
    "linear_index",
    "from_linear",
    "polar_sin",
    "harmonic_matrix",
    "eval_Y",
    "eval_Q",
    "synthesize",
    "best_s_term_error",
    "gram_deviation_Q",
    "q_sup_norms",
    "growth_exponent_fit",
    "write_coefficients",
    "read_coefficients",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_LOG_POWER_MIN_K = 64


@dataclass(frozen=True)
class HarmonicIndex:
    ell: int
    k: int

    def __post_init__(self):
        if self.ell < 0 or abs(self.k) > self.ell:
            raise IndexError(f"invalid harmonic index (ell={self.ell}, k={self.k})")


@dataclass(frozen=True)
class SpherePoint:
    """Polar angle ``phi`` in [0, pi] and azimuth ``theta`` in [0, 2 pi)."""

    phi: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.phi <= math.pi):
            raise ParameterError(f"phi={self.phi} outside [0, pi]")
        if not (0.0 <= self.theta < 2.0 * math.pi):
            raise ParameterError(f"theta={self.theta} outside [0, 2pi)")


@dataclass
class CoefficientVector:
    """Complex coefficients ``c_{l,k}`` for ``l < degree_bound``."""

    degree_bound: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.degree_bound < 1 or self.entries.shape != (self.degree_bound**2,):
            raise ParameterError(
                f"expected {self.degree_bound**2} entries for D={self.degree_bound}, "
                f"got shape {self.entries.shape}"
            )

    @classmethod
    def zeros(cls, degree_bound: int) -> "CoefficientVector":
        return cls(degree_bound, np.zeros(degree_bound**2, dtype=complex))

    @property
    def size(self) -> int:
        return self.degree_bound**2

    @property
    def sparsity(self) -> int:
        return int(np.count_nonzero(np.abs(self.entries) > 0))

    def __getitem__(self, idx: HarmonicIndex) -> complex:
        return self.entries[linear_index(idx)]


def linear_index(idx: HarmonicIndex) -> int:
    if abs(idx.k) > idx.ell:
        raise IndexError(f"|k| > ell in {idx}")
    return idx.ell * idx.ell + idx.ell + idx.k


def from_linear(i: int, degree_bound: int | None = None) -> HarmonicIndex:
    """Inverse of :func:`linear_index`; ``degree_bound`` adds a range check."""
    if i < 0 or (degree_bound is not None and i >= degree_bound**2):
        raise IndexError(f"linear index {i} out of range")
    ell = math.isqrt(i)
    return HarmonicIndex(ell, i - ell * ell - ell)


def polar_sin(phi) -> np.ndarray:
    """``sin(phi)`` with exact zeros at the poles (``sin(pi)`` is not 0 in floating point)."""
    phi = np.asarray(phi, dtype=float)
    s = np.sin(phi)
    return np.where((phi == 0.0) | (phi == math.pi), 0.0, s)


def _sin_power(sin_phi: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return np.ones_like(sin_phi)
    if k >= _LOG_POWER_MIN_K:
        out = np.zeros_like(sin_phi)
        pos = sin_phi > 0
        out[pos] = np.exp(k * np.log(sin_phi[pos]))
        return out
    return sin_phi**k


def _radial(alpha: int, n_max: int, x: np.ndarray, sin_phi: np.ndarray) -> np.ndarray:
    """``(sin phi)^alpha p_n^alpha(cos phi) / sqrt(2 pi)`` for ``n = 0..n_max``; shape (n_max+1, m)."""
    table = orthopoly.build_recurrence(float(alpha), n_max)
    return orthopoly.eval_all(table, x) * (_sin_power(sin_phi, alpha) * _INV_SQRT_2PI)


def _angles(phi, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    return phi, theta, np.cos(phi), polar_sin(phi)


def harmonic_matrix(degree_bound: int, phi, theta) -> np.ndarray:
    """Matrix with rows indexed by points and columns by linear index, entries ``Y_l^k``."""
    if degree_bound < 1:
        raise ParameterError("degree_bound must be >= 1")
    phi, theta, x, s = _angles(phi, theta)
    D = degree_bound
    out = np.empty((phi.size, D * D), dtype=complex)
    for a in range(D):
        rad = _radial(a, D - 1 - a, x, s)
        ells = np.arange(a, D)
        base = ells * ells + ells
        if a == 0:
            out[:, base] = rad.T
            continue
        phase = np.exp(1j * a * theta)
        out[:, base + a] = (rad * phase).T
        out[:, base - a] = (rad * np.conj(phase)).T
    return out


def _y_values(idx: HarmonicIndex, phi, theta) -> np.ndarray:
    phi, theta, x, s = _angles(phi, theta)
    a = abs(idx.k)
    rad = _radial(a, idx.ell - a, x, s)[idx.ell - a]
    if idx.k == 0:
        return rad.astype(complex)
    phase = np.exp(1j * a * theta)
    return rad * (phase if idx.k > 0 else np.conj(phase))


def eval_Y(idx: HarmonicIndex, p: SpherePoint) -> complex:
    return complex(_y_values(idx, p.phi, p.theta)[0])


def eval_Q(idx: HarmonicIndex, p: SpherePoint) -> complex:
    """Preconditioned harmonic ``sqrt(sin phi) Y_l^k``."""
    return complex(math.sqrt(float(polar_sin(p.phi))) * eval_Y(idx, p))


def synthesize(c: CoefficientVector, p: SpherePoint) -> complex:
    row = harmonic_matrix(c.degree_bound, p.phi, p.theta)[0]
    return complex(row @ c.entries)


def best_s_term_error(z, s: int) -> float:
    """l1 distance from ``z`` to the nearest ``s``-sparse vector.

    Keeps the ``s`` largest moduli (ties go to the lower index) and sums the rest.
    """
    mod = np.abs(np.asarray(z))
    if s < 0 or s > mod.size:
        raise ParameterError(f"s={s} outside [0, {mod.size}]")
    order = np.argsort(-mod, kind="stable")
    return float(np.sum(mod[order[s:]]))


def gram_deviation_Q(degree_bound: int, n_phi: int | None = None, n_theta: int | None = None) -> float:
    """Max deviation from the identity of the Gram matrix of ``Q_l^k`` under ``dphi dtheta``.

    With ``x = cos(phi)`` the integral becomes ``int dx int dtheta Y conj(Y')``,
    evaluated by Gauss-Legendre in ``x`` and the trapezoid rule in ``theta``.
    """
    D = degree_bound
    n_phi = 2 * D + 64 if n_phi is None else n_phi
    n_theta = 2 * D if n_theta is None else n_theta
    if n_theta < 2 * D:
        raise ParameterError("n_theta must be >= 2*degree_bound")
    rule = orthopoly.gauss_legendre_rule(n_phi)
    phi = np.arccos(rule.nodes)
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    pp, tt = np.meshgrid(phi, theta, indexing="ij")
    Y = harmonic_matrix(D, pp.ravel(), tt.ravel())
    w = np.repeat(rule.weights, n_theta) * (2.0 * np.pi / n_theta)
    gram = (Y.conj().T * w) @ Y
    return float(np.max(np.abs(gram - np.eye(D * D))))


def q_sup_norms(ell_max: int, grid_size: int = 4096) -> np.ndarray:
    """``max_k sup |Q_l^k|`` for ``l = 0..ell_max`` on a uniform polar-angle grid.

    ``|Q_l^k|`` does not depend on ``theta`` and equals the weighted Jacobi
    envelope with ``alpha = |k|``, ``n = l - |k|``, divided by ``sqrt(2 pi)``.
    """
    best = np.zeros(ell_max + 1)
    for a in range(ell_max + 1):
        sups = orthopoly.weighted_sups(a, ell_max - a, grid_size) * _INV_SQRT_2PI
        best[a:] = np.maximum(best[a:], sups)
    return best


def growth_exponent_fit(ell_max: int, ell_min: int | None = None, grid_size: int = 4096) -> float:
    """Least-squares slope of ``log max_k ||Q_l^k||_inf`` against ``log(l + 1)``.

    The fit uses ``l`` in ``[ell_min, ell_max]`` (default ``ell_min = ell_max // 2``).
    """
    if ell_max < 10:
        raise ParameterError("ell_max must be >= 10")
    ell_min = ell_max // 2 if ell_min is None else ell_min
    sups = q_sup_norms(ell_max, grid_size)
    ells = np.arange(ell_min, ell_max + 1)
    slope, _ = np.polyfit(np.log(ells + 1.0), np.log(sups[ells]), 1)
    return float(slope)


def write_coefficients(c: CoefficientVector, path) -> None:
    """Write ``ell,k,re,im`` rows for every coefficient."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ell", "k", "re", "im"])
        for i, v in enumerate(c.entries):
            idx = from_linear(i)
            w.writerow([idx.ell, idx.k, repr(float(v.real)), repr(float(v.imag))])


def read_coefficients(path, degree_bound: int | None = None) -> CoefficientVector:
    """Read an ``ell,k,re,im`` file; absent entries are zero.

    Without ``degree_bound`` the bound is one more than the largest degree present.
    """
    rows = []
    with open(Path(path), newline="") as fh:
        for rec in csv.DictReader(fh):
            idx = HarmonicIndex(int(rec["ell"]), int(rec["k"]))
            rows.append((idx, complex(float(rec["re"]), float(rec["im"]))))
    if degree_bound is None:
        degree_bound = max((idx.ell for idx, _ in rows), default=0) + 1
    c = CoefficientVector.zeros(degree_bound)
    for idx, v in rows:
        if idx.ell >= degree_bound:
            raise ParameterError(f"degree {idx.ell} exceeds bound {degree_bound}")
        c.entries[linear_index(idx)] = v
    return c
