#!/usr/bin/env python3
"""Run the shipped rate configs through the CLI and tabulate fitted slopes."""

import argparse
import json
import time
from pathlib import Path

from rmtlab import cli

ROOT = Path(__file__).resolve().parents[1]
RATE_CONFIGS = ("gue", "haar_u", "wishart", "ginibre", "sum", "compression")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(RATE_CONFIGS))
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    print(f"{'config':<12} {'slope':>8} {'stderr':>7} {'window':>16} verdict  seconds")
    for name in args.names:
        out = Path(args.out) / name
        t0 = time.perf_counter()
        code = cli.main(["rates", str(ROOT / "configs" / f"{name}.json"), "--out", str(out)])
        s = json.loads((out / "summary.json").read_text())
        w = s.get("window")
        window = f"[{w['low']}, {w['high']}]" if w else "-"
        verdict = ("pass" if w["pass"] else "FAIL") if w else "-"
        slope = "null" if s["slope"] is None else f"{s['slope']:.3f}"
        stderr = "" if s["stderr"] is None else f"{s['stderr']:.3f}"
        print(f"{name:<12} {slope:>8} {stderr:>7} {window:>16} {verdict:<8} {time.perf_counter() - t0:.0f}"
              + ("" if code == 0 else f"  (exit {code})"))


if __name__ == "__main__":
    main()
