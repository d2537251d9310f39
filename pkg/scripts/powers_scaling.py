#!/usr/bin/env python3
"""Mean W_2 of Haar-unitary powers M^m to the roots of unity at fixed n."""

import argparse
import math

from rmtlab import experiments
from rmtlab.ensembles import EnsembleSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--powers", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    ap.add_argument("--reps", type=int, default=40)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    means = []
    for m in args.powers:
        d = experiments.mean_distances(EnsembleSpec("HaarPower", args.n, m=m), [args.n], args.reps,
                                       target="discretization", master_seed=args.seed)[0]
        means.append(d.mean)
        print(f"m={m:>3}  mean W2 {d.mean:.5f} +- {d.se:.5f}  mean/sqrt(m) {d.mean / math.sqrt(m):.5f}")
    ratios = [d / math.sqrt(m) for d, m in zip(means, args.powers)]
    print("nondecreasing:", all(b >= a for a, b in zip(means, means[1:])),
          f" ratio spread x{max(ratios) / min(ratios):.2f}")


if __name__ == "__main__":
    main()
