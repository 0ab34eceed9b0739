"""Recovery experiments: single trials, phase diagrams, noise sweeps, bound checks."""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import orthopoly, sensing, spherical
from ._errors import ParameterError
from .l1solve import SolverConfig, recover

__all__ = [
    "TrialSpec",
    "TrialRecord",
    "PhaseDiagramResult",
    "FULL_GRID",
    "FAST_GRID",
    "random_sparse_coefficients",
    "compressible_coefficients",
    "disk_noise",
    "run_trial",
    "trial_seed",
    "phase_diagram",
    "noise_sweep",
    "BoundCheck",
    "bound_checks",
    "verify_bounds",
    "export",
    "read_phase_csv",
    "parse_grid",
]

FULL_GRID = {"s_grid": list(range(1, 41)), "m_grid": list(range(10, 251, 10)), "n_trials": 20}
FAST_GRID = {"s_grid": list(range(1, 13)), "m_grid": list(range(10, 121, 10)), "n_trials": 10}


@dataclass(frozen=True)
class TrialSpec:
    D: int
    s: int
    m: int
    measure_tag: str = "product"
    noise_level: float = 0.0
    seed: int = 0
    success_tolerance: float = 1e-4

    def __post_init__(self):
        if self.D < 1 or not 0 <= self.s <= self.D**2 or self.m < 1:
            raise ParameterError(f"invalid trial spec {self}")
        if self.measure_tag not in sensing.MEASURES:
            raise ParameterError(f"unknown measure {self.measure_tag!r}")
        if self.noise_level < 0:
            raise ParameterError("noise_level must be nonnegative")


@dataclass(frozen=True)
class TrialRecord:
    spec: TrialSpec
    relative_error: float
    success: bool
    solver_iterations: int
    wall_time: float
    absolute_error: float = 0.0
    converged: bool = True
    coefficients: np.ndarray | None = field(default=None, repr=False, compare=False)
    recovered: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class PhaseDiagramResult:
    s_values: tuple[int, ...]
    m_values: tuple[int, ...]
    frequencies: np.ndarray  # shape (len(s_values), len(m_values))
    n_trials: int
    measure_tag: str
    base_seed: int
    D: int = 16

    def frequency(self, s: int, m: int) -> float:
        return float(self.frequencies[self.s_values.index(s), self.m_values.index(m)])


def random_sparse_coefficients(D: int, s: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random support of size ``s`` with standard complex Gaussian values."""
    N = D * D
    c = np.zeros(N, dtype=complex)
    support = rng.choice(N, size=s, replace=False)
    c[support] = (rng.standard_normal(s) + 1j * rng.standard_normal(s)) / math.sqrt(2.0)
    return c


def compressible_coefficients(D: int, rng: np.random.Generator, decay: float = 2.0) -> np.ndarray:
    """Moduli ``(i+1)^-decay`` in random positions with uniform random phases."""
    N = D * D
    c = np.zeros(N, dtype=complex)
    mods = (1.0 + np.arange(N)) ** -decay
    c[rng.permutation(N)] = mods * np.exp(2j * np.pi * rng.random(N))
    return c


def disk_noise(m: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. samples uniform on the complex disk of the given radius."""
    if radius == 0:
        return np.zeros(m, dtype=complex)
    return radius * np.sqrt(rng.random(m)) * np.exp(2j * np.pi * rng.random(m))


def _run(spec: TrialSpec, c: np.ndarray | None, cfg: SolverConfig | None) -> TrialRecord:
    start = time.perf_counter()
    if c is None:
        c = random_sparse_coefficients(spec.D, spec.s, sensing.make_rng(spec.seed, 0))
    samples = sensing.sample_points(spec.m, spec.measure_tag, sensing.derive_seed(spec.seed, 1))
    ens = sensing.build_ensemble(spec.D, samples)
    y = ens.phi_matrix @ c + disk_noise(spec.m, spec.noise_level, sensing.make_rng(spec.seed, 2))
    res = recover(ens, y, spec.noise_level, cfg)
    abs_err = float(np.linalg.norm(res.solution - c))
    norm = float(np.linalg.norm(c))
    rel = abs_err / norm if norm > 0 else abs_err
    return TrialRecord(
        spec=spec,
        relative_error=rel,
        success=bool(res.converged and rel <= spec.success_tolerance),
        solver_iterations=res.iterations_used,
        wall_time=time.perf_counter() - start,
        absolute_error=abs_err,
        converged=res.converged,
        coefficients=c,
        recovered=res.solution,
    )


def run_trial(spec: TrialSpec, cfg: SolverConfig | None = None) -> TrialRecord:
    """One recovery trial.

    Draws a random ``s``-sparse coefficient vector, samples ``m`` points from
    the requested measure, adds disk noise of radius ``noise_level`` and
    recovers by l1 minimization.  A zero coefficient vector is scored by
    absolute error.  Solver non-convergence counts as failure.
    """
    return _run(spec, None, cfg)


def trial_seed(base_seed: int, D: int, s: int, m: int, trial: int) -> int:
    return sensing.derive_seed(base_seed, D, s, m, trial)


def _cell(args) -> float:
    D, s, m, measure, n_trials, base_seed = args
    wins = 0
    for t in range(n_trials):
        spec = TrialSpec(D, s, m, measure, 0.0, trial_seed(base_seed, D, s, m, t))
        wins += run_trial(spec).success
    return wins / n_trials


def phase_diagram(
    s_grid,
    m_grid,
    D: int = 16,
    measure_tag: str = "product",
    n_trials: int = 20,
    base_seed: int = 0,
    jobs: int = 1,
) -> PhaseDiagramResult:
    """Success frequency of noiseless recovery over an ``(s, m)`` grid.

    Every trial's seed is derived from ``(base_seed, D, s, m, trial)``, so a
    cell's value does not depend on the rest of the grid or on ``jobs``.  Seeds
    do not depend on the measure, so two diagrams with the same base seed use
    the same coefficient vectors.
    """
    s_grid, m_grid = tuple(int(v) for v in s_grid), tuple(int(v) for v in m_grid)
    if not s_grid or not m_grid or n_trials < 1:
        raise ParameterError("grids must be nonempty and n_trials >= 1")
    tasks = [(D, s, m, measure_tag, n_trials, base_seed) for s in s_grid for m in m_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            freqs = list(pool.map(_cell, tasks, chunksize=1))
    else:
        freqs = [_cell(t) for t in tasks]
    grid = np.array(freqs).reshape(len(s_grid), len(m_grid))
    return PhaseDiagramResult(s_grid, m_grid, grid, n_trials, measure_tag, base_seed, D)


def noise_sweep(
    D: int,
    s: int,
    m: int,
    epsilons,
    n_trials: int,
    seed: int,
    measure_tag: str = "product",
    compressible: bool = False,
) -> list[dict]:
    """Median coefficient error per noise level.

    Trial ``t`` reuses the same coefficients and sample points at every noise
    level.  Rows hold ``epsilon``, ``median_error``, ``c2`` (median error over
    epsilon) and ``sigma_term``, the median of ``sigma_s(c)_1 / sqrt(s)``
    (zero for exactly sparse vectors).
    """
    rows = []
    for eps in epsilons:
        errs, tails = [], []
        for t in range(n_trials):
            tseed = sensing.derive_seed(seed, D, s, m, t)
            c = compressible_coefficients(D, sensing.make_rng(tseed, 3)) if compressible else None
            spec = TrialSpec(D, s, m, measure_tag, float(eps), tseed)
            rec = _run(spec, c, None)
            errs.append(rec.absolute_error)
            tails.append(spherical.best_s_term_error(rec.coefficients, s) / math.sqrt(max(s, 1)))
        med = float(np.median(errs))
        rows.append(
            {
                "epsilon": float(eps),
                "median_error": med,
                "c2": med / eps if eps > 0 else math.nan,
                "sigma_term": float(np.median(tails)),
            }
        )
    return rows


@dataclass(frozen=True)
class BoundCheck:
    name: str
    passed: bool
    measured: float
    bound: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: measured={self.measured!r} {self.bound}"


def bound_checks(grid_size: int = 4096) -> list[BoundCheck]:
    """Numerical checks of the Jacobi and spherical growth bounds."""
    checks = []
    bound = orthopoly.LEGENDRE_BOUND

    raw = orthopoly.weighted_sups(0, 200, grid_size)
    checks.append(BoundCheck(
        "legendre sup_n<=200 (measure dx)", raw.max() <= bound + 1e-9,
        float(raw.max()), f"<= 2/sqrt(pi) = {bound!r}"))
    prob = orthopoly.weighted_sups(0, 200, grid_size, probability_normalized=True)
    checks.append(BoundCheck(
        "legendre sup_n<=200 (measure dx/2)", prob.max() <= bound + 1e-9,
        float(prob.max()), f"<= 2/sqrt(pi) = {bound!r}"))
    checks.append(BoundCheck(
        "legendre tightness n=200 (measure dx/2)", prob[200] >= 0.95 * bound,
        float(prob[200]), f">= 0.95 * 2/sqrt(pi) = {0.95 * bound!r}"))

    for alpha in (0.5, 1.0, 2.0, 3.0):
        sups = orthopoly.weighted_sups(alpha, 200, grid_size)
        head, tail = sups[:101].max(), sups[101:].max()
        checks.append(BoundCheck(
            f"classical bound alpha={alpha} (C_alpha estimate)", tail <= head * 1.01,
            float(sups.max()), f"max over n in [101,200] <= 1.01 * max over n <= 100 = {float(1.01 * head)!r}"))

    r50 = r100 = 0.0
    for alpha in range(3, 21):
        ratio = orthopoly.weighted_sups(alpha, 100, grid_size)[1:] / orthopoly.ultraspherical_envelope(
            alpha, np.arange(1, 101))
        r50, r100 = max(r50, ratio[:50].max()), max(r100, ratio.max())
    checks.append(BoundCheck(
        "ultraspherical ratio, max over alpha in [3,20], n <= 100", r100 <= r50 * 1.01,
        float(r100), f"<= 1.01 * max over n <= 50 = {float(1.01 * r50)!r}"))

    cheb = orthopoly.build_recurrence(-0.5, 10, probability_normalized=True)
    K = float(np.max(np.abs(orthopoly.eval_all(cheb, orthopoly.chebyshev_grid(grid_size))[1:])))
    checks.append(BoundCheck(
        "chebyshev K (probability measure)", abs(K - math.sqrt(2.0)) <= 1e-9,
        K, f"= sqrt(2) = {math.sqrt(2.0)!r} within 1e-9"))

    qs = spherical.q_sup_norms(50, grid_size)
    ells = np.arange(5, 51)
    ratio = qs[ells] / (ells + 1.0) ** 0.25
    checks.append(BoundCheck(
        "sphere sup_k |Q_l^k| / (l+1)^(1/4), l in [5,50]", ratio.max() / ratio.min() <= 3.0,
        float(ratio.max()), f"spread max/min = {float(ratio.max() / ratio.min())!r} <= 3"))
    slope = spherical.growth_exponent_fit(50, 25, grid_size)
    checks.append(BoundCheck(
        "sphere growth exponent, l in [25,50]", 0.10 <= slope <= 0.30,
        slope, "in [0.10, 0.30] (theory 1/4)"))

    dev = spherical.gram_deviation_Q(8, 128, 64)
    checks.append(BoundCheck("Q orthonormality D=8", dev <= 1e-8, dev, "<= 1e-8"))

    worst = max(
        orthopoly.check_orthonormality(orthopoly.build_recurrence(a, 20))
        for a in (0.0, 0.5, 1.0, 2.0, 3.0, 5.0)
    )
    checks.append(BoundCheck("jacobi orthonormality n<=20", worst <= 1e-8, worst, "<= 1e-8"))
    return checks


def verify_bounds(report_path=None, grid_size: int = 4096) -> int:
    """Run :func:`bound_checks`, write the report, return 0 if all pass else 1."""
    checks = bound_checks(grid_size)
    text = "\n".join(c.line() for c in checks) + "\n"
    if report_path is not None:
        Path(report_path).write_text(text)
    else:
        print(text, end="")
    return 0 if all(c.passed for c in checks) else 1


def export(result: PhaseDiagramResult, path, format: str = "csv") -> None:
    """Write a phase diagram as ``s,m,frequency`` CSV or as a plain PGM heatmap.

    In the PGM, rows run over ``m`` descending and columns over ``s``
    ascending; gray ``round(255 (1 - frequency))`` so full success is black.
    """
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "m", "frequency"])
        for i, s in enumerate(result.s_values):
            for j, m in enumerate(result.m_values):
                w.writerow([s, m, f"{result.frequencies[i, j]:.3f}"])
        Path(path).write_text(buf.getvalue())
    elif format == "pgm":
        ns, nm = len(result.s_values), len(result.m_values)
        lines = ["P2", f"{ns} {nm}", "255"]
        for j in range(nm - 1, -1, -1):
            row = [str(int(round(255 * (1.0 - result.frequencies[i, j])))) for i in range(ns)]
            lines.append(" ".join(row))
        Path(path).write_text("\n".join(lines) + "\n")
    else:
        raise ParameterError(f"unknown export format {format!r}")


def read_phase_csv(path) -> tuple[tuple[int, ...], tuple[int, ...], np.ndarray]:
    """Inverse of the CSV export: ``(s_values, m_values, frequencies)``."""
    with open(path, newline="") as fh:
        rows = [(int(r["s"]), int(r["m"]), float(r["frequency"])) for r in csv.DictReader(fh)]
    s_vals = tuple(dict.fromkeys(r[0] for r in rows))
    m_vals = tuple(dict.fromkeys(r[1] for r in rows))
    freq = np.zeros((len(s_vals), len(m_vals)))
    for s, m, f in rows:
        freq[s_vals.index(s), m_vals.index(m)] = f
    return s_vals, m_vals, freq


def parse_grid(text: str) -> list[int]:
    """Parse ``a:b:step`` (inclusive of ``b``) or a comma list of integers."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, b, step = parts
            if step <= 0 or b < a:
                raise ValueError
            return list(range(a, b + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ParameterError(f"bad grid specification {text!r}") from None
