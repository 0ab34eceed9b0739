"""Search for small ensembles whose exhaustive delta_2s clears the recovery threshold.

Used to choose the certified instances in the acceptance suite: partial DFT
matrices of size 12 and low-degree sphere ensembles over a range of seeds.
"""

import itertools

import numpy as np

from sparsesph import ripcheck, sensing


def dft(rows, n=12):
    F = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
    return F[list(rows)] / np.sqrt(len(rows))


def main():
    thr = ripcheck.RECOVERY_THRESHOLD
    print(f"threshold {thr:.6f}")
    for s, m in ((1, 5), (2, 11)):
        best = min(
            (ripcheck.restricted_isometry_constant(dft(r), 2 * s).delta, r)
            for r in itertools.combinations(range(12), m)
        )
        print(f"dft N=12 s={s} m={m}: delta_{2 * s} = {best[0]:.4f} rows {best[1]}")
    for m in (8, 10, 12, 16):
        best = min(
            (ripcheck.restricted_isometry_constant(
                sensing.build_ensemble(3, sensing.sample_points(m, "product", seed)).normalized, 2).delta, seed)
            for seed in range(2000)
        )
        print(f"sphere D=3 m={m}: best delta_2 = {best[0]:.4f} (seed {best[1]}), certified {best[0] < thr}")


if __name__ == "__main__":
    main()
