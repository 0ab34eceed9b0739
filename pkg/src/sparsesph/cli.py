"""Command line interface.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import harness, ripcheck, sensing, spherical
from ._errors import BudgetExceededError, ParameterError


def _recover(args) -> int:
    spec = harness.TrialSpec(
        args.degree, args.sparsity, args.samples, args.measure, args.noise, args.seed,
        args.tolerance,
    )
    rec = harness.run_trial(spec)
    print(json.dumps({
        "degree": spec.D, "sparsity": spec.s, "samples": spec.m, "measure": spec.measure_tag,
        "noise": spec.noise_level, "seed": spec.seed,
        "relative_error": rec.relative_error, "success": rec.success,
        "converged": rec.converged, "iterations": rec.solver_iterations,
    }))
    if args.out:
        spherical.write_coefficients(spherical.CoefficientVector(spec.D, rec.recovered), args.out)
    return 0


def _phase_diagram(args) -> int:
    preset = harness.FAST_GRID if args.fast else harness.FULL_GRID
    s_grid = harness.parse_grid(args.s_grid) if args.s_grid else preset["s_grid"]
    m_grid = harness.parse_grid(args.m_grid) if args.m_grid else preset["m_grid"]
    trials = args.trials if args.trials is not None else preset["n_trials"]
    result = harness.phase_diagram(s_grid, m_grid, args.degree, args.measure, trials, args.seed, args.jobs)
    harness.export(result, f"{args.out}.csv", "csv")
    harness.export(result, f"{args.out}.pgm", "pgm")
    print(f"mean success frequency {result.frequencies.mean():.4f}; wrote {args.out}.csv, {args.out}.pgm")
    return 0


def _rip(args) -> int:
    ens = sensing.build_ensemble(args.degree, sensing.sample_points(args.samples, args.measure, args.seed))
    if args.randomized:
        delta = ripcheck.randomized_rip_lower_bound(ens.normalized, args.sparsity, args.randomized, args.seed)
        est = ripcheck.RipEstimate(args.sparsity, delta, (), args.randomized, "randomized-lower-bound")
    else:
        est = ripcheck.restricted_isometry_constant(ens.normalized, args.sparsity)
    print(ripcheck.rip_report(est))
    return 0


def _verify_bounds(args) -> int:
    return harness.verify_bounds(args.report)


def _noise_sweep(args) -> int:
    eps = [float(e) for e in args.eps_list.split(",") if e.strip()]
    rows = harness.noise_sweep(args.degree, args.sparsity, args.samples, eps, args.trials, args.seed,
                               args.measure, args.compressible)
    print("epsilon,median_error,c2,sigma_term")
    for r in rows:
        print(f"{r['epsilon']!r},{r['median_error']!r},{r['c2']!r},{r['sigma_term']!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsesph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sparsity=True, samples=True):
        sp.add_argument("--degree", "-D", type=int, default=16)
        if sparsity:
            sp.add_argument("--sparsity", "-s", type=int, required=True)
        if samples:
            sp.add_argument("--samples", "-m", type=int, required=True)
        sp.add_argument("--measure", choices=sensing.MEASURES, default="product")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("recover", help="run one recovery trial")
    common(sp)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--tolerance", type=float, default=1e-4)
    sp.add_argument("--out")
    sp.set_defaults(func=_recover)

    sp = sub.add_parser("phase-diagram", help="success frequencies over an (s, m) grid")
    common(sp, sparsity=False, samples=False)
    sp.add_argument("--s-grid")
    sp.add_argument("--m-grid")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--fast", action="store_true", help="s<=12, m<=120, 10 trials")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", required=True, help="output prefix")
    sp.set_defaults(func=_phase_diagram)

    sp = sub.add_parser("rip", help="restricted isometry constant of a sphere ensemble")
    common(sp)
    sp.add_argument("--randomized", type=int, metavar="TRIALS")
    sp.set_defaults(func=_rip)

    sp = sub.add_parser("verify-bounds", help="check the polynomial growth bounds")
    sp.add_argument("--report")
    sp.set_defaults(func=_verify_bounds)

    sp = sub.add_parser("noise-sweep", help="median error against noise level")
    common(sp)
    sp.add_argument("--eps-list", default="0,0.001,0.01")
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--compressible", action="store_true")
    sp.set_defaults(func=_noise_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, BudgetExceededError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
