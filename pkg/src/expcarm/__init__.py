"""Exponential-divisor Carmichael arithmetic with analytic certification.

Submodules:
  arith     exact evaluation and sieve summation of the arithmetic functions
  series    Dirichlet-series factorizations and the Euler-product cofactor
  zeta      certified real-argument zeta values, jets and Laurent expansions
  mainterm  residue main terms and residual measurement
  pairs     exact exponent-pair calculus and fractional optimization
  moments   zeta moment bounds and the Holder-equation constants
"""

from . import arith, cli, config, mainterm, moments, pairs, series, zeta

__all__ = ["arith", "cli", "config", "mainterm", "moments", "pairs",
           "series", "zeta"]
__version__ = "0.1.0"
