#!/usr/bin/env python3
"""Certify the Dirichlet-series factorizations numerically: vanishing orders
of the local quotients, and the exact coefficient identity z_r * g_r =
lambda-e_r up to a bound.

Exit code 0 only if every certification holds.

Usage: python scripts/series_certification.py [--n 10000]
"""

import argparse
import sys

from expcarm.arith import coefficient_list, dirichlet_convolve, lambda_e_function
from expcarm.series import Z_SPECS, g_coefficients, verify_vanishing, z_coefficients


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10_000)
    args = ap.parse_args()
    ok = True
    for r in (1, 2, 3, 4):
        rep = verify_vanishing(r)
        status = "ok" if rep.ok else "FAIL"
        print(f"r={r}: first nonzero quotient index v = "
              f"{rep.first_nonzero_index} (required {rep.required}) {status}")
        ok = ok and rep.ok
        z = z_coefficients(Z_SPECS[r], args.n)
        g = g_coefficients(r, args.n)
        conv = dirichlet_convolve(z, g)
        lam = coefficient_list(lambda_e_function(r), args.n)
        same = conv == lam
        print(f"      coefficient identity to n = {args.n}: "
              f"{'exact' if same else 'MISMATCH'}")
        ok = ok and same
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
