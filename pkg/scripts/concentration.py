#!/usr/bin/env python3
"""Tail shape of spectral functionals of GUE: trace law and W_2 concentration."""

import argparse

import numpy as np

from rmtlab import experiments
from rmtlab.ensembles import EnsembleSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--reps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    spec = EnsembleSpec("GUE", args.n)
    est, _ = experiments.concentration_tail_experiment(spec, "trace", args.reps, args.seed, center=0.0)
    dev = np.max(np.abs(est.exceedance - experiments.normal_two_sided_tail(est.t)))
    print(f"trace: max grid deviation from 2(1 - Phi(t)) {dev:.4f}, "
          f"DKW band {experiments.dkw_epsilon(args.reps):.4f}")
    est, values = experiments.concentration_tail_experiment(spec, "wp", args.reps, args.seed)
    b2, se = experiments.log_concavity_test(est.t, est.exceedance, est.reps)
    print(f"W2: mean {values.mean():.5f}, sd {values.std():.5f}, fitted c {est.c:.3f} (exp(-c n^2 t^2))")
    print(f"    curvature of log P in t^2: {b2:.3e} +- {se:.3e}")
    for t, e in zip(est.t[::3], est.exceedance[::3]):
        print(f"    t={t:.5f}  P={e:.4f}  exp(-n^2 t^2/2)={experiments.gue_w2_envelope(args.n, t):.4f}")


if __name__ == "__main__":
    main()
