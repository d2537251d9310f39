#!/usr/bin/env python3
"""Bulk eigenvalue rigidity: mean squared deviation from predicted locations versus n."""

import argparse

from rmtlab import experiments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256, 512])
    ap.add_argument("--reps", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    for ensemble in ("GUE", "HaarU"):
        pairs = []
        for n in args.sizes:
            prof = experiments.rigidity_profile(ensemble, n, args.reps, args.seed)
            pairs.append((n, prof.bulk))
            print(f"{ensemble:<5} n={n:>4}  bulk msd {prof.bulk:.3e}")
        slope, _, se = experiments.fit_loglog_rate(pairs)
        print(f"{ensemble:<5} slope {slope:.3f} +- {se:.3f}")


if __name__ == "__main__":
    main()
