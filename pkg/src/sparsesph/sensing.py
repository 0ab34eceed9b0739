"""Random sampling on the sphere and the (preconditioned) sampling matrices.

Two sampling measures are supported:

``product``
    ``phi ~ U[0, pi]``, ``theta ~ U[0, 2 pi)``; the measure ``dphi dtheta``,
    which puts more points near the poles.
``surface``
    ``cos(phi) ~ U[-1, 1]``, ``theta ~ U[0, 2 pi)``; the area measure
    ``sin(phi) dphi dtheta``.

The normalized matrix is ``Psi = sqrt(2 pi^2 / m) diag(sqrt(sin phi_j)) Phi``.
The ``2 pi^2`` is the total mass of ``dphi dtheta``, so ``Psi^* Psi`` has
expectation equal to the identity under product sampling.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import spherical
from ._errors import ParameterError

__all__ = [
    "MEASURES",
    "MEASURE_MASS",
    "SampleSet",
    "MeasurementEnsemble",
    "make_rng",
    "derive_seed",
    "sample_points",
    "build_ensemble",
    "expected_gram_check",
    "write_samples",
    "read_samples",
]

Measure = Literal["product", "surface"]
MEASURES: tuple[str, ...] = ("product", "surface")
#: Total mass of the sampling measure on [0, pi] x [0, 2 pi).
MEASURE_MASS = {"product": 2.0 * math.pi**2, "surface": 4.0 * math.pi}

_MASK64 = (1 << 64) - 1


def make_rng(*key: int) -> np.random.Generator:
    """Counter-based Philox generator keyed by a tuple of nonnegative integers."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([k & _MASK64 for k in key])))


def derive_seed(*key: int) -> int:
    """Hash a key tuple into a fresh 64-bit seed, independent of call order."""
    lo, hi = np.random.SeedSequence([k & _MASK64 for k in key]).generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)


@dataclass(frozen=True)
class SampleSet:
    phi: np.ndarray
    theta: np.ndarray
    measure_tag: str
    seed: int

    @property
    def m(self) -> int:
        return int(self.phi.size)

    def points(self) -> list[spherical.SpherePoint]:
        return [spherical.SpherePoint(float(p), float(t)) for p, t in zip(self.phi, self.theta)]


def sample_points(m: int, measure_tag: str, seed: int) -> SampleSet:
    """Draw ``m`` i.i.d. points; identical ``(m, measure_tag, seed)`` give identical points."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    if measure_tag not in MEASURES:
        raise ParameterError(f"unknown measure {measure_tag!r}")
    rng = make_rng(seed)
    u = rng.random(m)
    theta = 2.0 * math.pi * rng.random(m)
    if measure_tag == "product":
        phi = math.pi * u
    else:
        phi = np.arccos(1.0 - 2.0 * u)
    phi.flags.writeable = False
    theta.flags.writeable = False
    return SampleSet(phi, theta, measure_tag, int(seed) & _MASK64)


@dataclass(frozen=True)
class MeasurementEnsemble:
    D: int
    samples: SampleSet
    phi_matrix: np.ndarray
    precond_diag: np.ndarray
    normalized: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.phi_matrix.shape[0]

    @property
    def N(self) -> int:
        return self.D * self.D

    @property
    def scale(self) -> float:
        """Factor mapping preconditioned rows to ``normalized``: ``sqrt(2 pi^2 / m)``."""
        return math.sqrt(MEASURE_MASS["product"] / self.m)

    def measurements(self, y) -> np.ndarray:
        """Map raw samples ``y`` to the right-hand side matching ``normalized``."""
        y = np.asarray(y)
        if y.shape != (self.m,):
            raise ParameterError(f"expected {self.m} samples, got shape {y.shape}")
        return self.scale * self.precond_diag * y


def build_ensemble(D: int, samples: SampleSet) -> MeasurementEnsemble:
    if D < 1:
        raise ParameterError("D must be >= 1")
    Phi = spherical.harmonic_matrix(D, samples.phi, samples.theta)
    pre = np.sqrt(spherical.polar_sin(samples.phi))
    Psi = math.sqrt(MEASURE_MASS["product"] / samples.m) * (pre[:, None] * Phi)
    for arr in (Phi, pre, Psi):
        arr.flags.writeable = False
    return MeasurementEnsemble(D, samples, Phi, pre, Psi)


def expected_gram_check(
    D: int, m: int, seed: int, measure: str = "product", precondition: bool = True
) -> float:
    """Max entry deviation of the empirical Gram matrix from the identity.

    The Gram matrix is ``(mass / m) M^* M`` with ``M`` the (optionally
    preconditioned) sampling matrix and ``mass`` the total mass of ``measure``.
    It converges to the identity for product sampling with preconditioning and
    for surface sampling without it.
    """
    samples = sample_points(m, measure, seed)
    M = spherical.harmonic_matrix(D, samples.phi, samples.theta)
    if precondition:
        M = np.sqrt(spherical.polar_sin(samples.phi))[:, None] * M
    gram = (MEASURE_MASS[measure] / m) * (M.conj().T @ M)
    return float(np.max(np.abs(gram - np.eye(D * D))))


def write_samples(samples: SampleSet, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["phi", "theta"])
        for p, t in zip(samples.phi, samples.theta):
            w.writerow([repr(float(p)), repr(float(t))])


def read_samples(path, measure_tag: str = "product", seed: int = 0) -> SampleSet:
    with open(path, newline="") as fh:
        rows = [(float(r["phi"]), float(r["theta"])) for r in csv.DictReader(fh)]
    arr = np.array(rows, dtype=float).reshape(-1, 2)
    return SampleSet(arr[:, 0].copy(), arr[:, 1].copy(), measure_tag, seed)
