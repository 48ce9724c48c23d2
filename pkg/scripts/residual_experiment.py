#!/usr/bin/env python3
"""Residual experiment: summatory sums minus residue main terms on a log grid.

Writes one CSV per function (x, S, M, residual) plus a fit summary, and
prints the decade comparison of |residual| / x^(1/4).

Usage: python scripts/residual_experiment.py [--x 10000000] [--outdir out]
"""

import argparse
import json
import os
import time

from expcarm.mainterm import (
    decade_ratio_report,
    fit_exponent,
    main_term,
    residual,
    residual_csv,
)


def log_grid(x_max: int, per_decade: int = 4, x_min: int = 10_000) -> list[int]:
    pts = set()
    k = 0
    while True:
        v = int(round(x_min * 10 ** (k / per_decade)))
        if v > x_max:
            break
        pts.add(v)
        k += 1
    pts.add(x_max)
    return sorted(pts)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=int, default=10 ** 6)
    ap.add_argument("--outdir", default="residual_out")
    ap.add_argument("--functions", default="1,2",
                    help="comma list from 1,2,3,4,phi")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    grid = log_grid(args.x)
    summary = {}
    for token in args.functions.split(","):
        r = token if token == "phi" else int(token)
        t0 = time.time()
        rows = residual(r, grid)
        fit = fit_exponent(rows)
        ratios = decade_ratio_report(rows)
        path = os.path.join(args.outdir, f"residual_r{token}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(residual_csv(rows))
        summary[token] = {
            "slope": round(fit.slope, 5),
            "r_squared": round(fit.r_squared, 4),
            "decade_bottom": round(ratios["bottom"], 5),
            "decade_top": round(ratios["top"], 5),
            "seconds": round(time.time() - t0, 1),
            "csv": path,
        }
        print(f"r={token}: slope {fit.slope:+.4f}, "
              f"|res|/x^(1/4) bottom {ratios['bottom']:.4f} -> top {ratios['top']:.4f}")
        mt = main_term(r)
        with open(os.path.join(args.outdir, f"main_term_r{token}.json"),
                  "w", encoding="utf-8") as fh:
            fh.write(mt.to_json())
    with open(os.path.join(args.outdir, "summary.json"), "w",
              encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
    print("summary written to", os.path.join(args.outdir, "summary.json"))


if __name__ == "__main__":
    main()
