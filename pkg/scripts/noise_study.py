"""Median recovery error against noise level, sparse and compressible signals."""

import argparse

from sparsesph import harness


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-D", type=int, default=16)
    p.add_argument("-s", type=int, default=5)
    p.add_argument("-m", type=int, default=150)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    args = p.parse_args()

    eps = [0.0, 1e-4, 1e-3, 1e-2, 1e-1]
    for compressible in (False, True):
        print("compressible" if compressible else "exactly sparse")
        print(f"{'epsilon':>10s} {'median err':>12s} {'err/eps':>9s} {'sigma term':>11s}")
        for r in harness.noise_sweep(args.D, args.s, args.m, eps, args.trials, args.seed,
                                     compressible=compressible):
            print(f"{r['epsilon']:10.0e} {r['median_error']:12.3e} {r['c2']:9.3f} {r['sigma_term']:11.3e}")


if __name__ == "__main__":
    main()
