"""Main terms M_r(x) from residues, and empirical residual measurement.

Each pole s0 = 1/a_j of the zeta product contributes
res_{s=s0} Z_r(s) G_r(s) x^s / s = x^{s0} * P_j(log x), where P_j has
degree e_j - 1.  The polynomial coefficients are computed by Laurent
multiplication at s0 with every regular factor carried as an interval jet,
so each reported constant has a certified radius.
"""

from __future__ import annotations

import csv
import functools
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, log

import mpmath
from mpmath import iv, mp

from .arith import DomainError, SummatoryTable, lambda_e_function, phi_e_function, summatory
from .pairs import kratzel_exponent, seed_pair
from .series import Z_SPECS, evaluate_G, spec_for
from .zeta import (
    LaurentSeries,
    iv_fraction,
    iv_mid,
    iv_width,
    jet_mul,
    zeta_jet,
    zeta_laurent,
)


def error_exponent(r) -> Fraction:
    """The proven error-term exponent; poles at or below it are absorbed
    into the error term and excluded from the main term."""
    H = seed_pair("H2005")
    if r in (1, "phi"):
        return kratzel_exponent((1, 3, 5, 5), H)   # 1153/6073
    if r == 2:
        return kratzel_exponent((2, 3, 3, 4), H)   # 1153/5586
    if r == 3:
        return Fraction(1, 6)
    if r == 4:
        return Fraction(1591066, 12296785)  # the contour threshold; below 1/7
    raise DomainError(f"unknown r {r!r}")


@dataclass
class MainTerm:
    """Sum over retained poles of x^exponent * poly(log x)."""

    r: object
    terms: list  # (exponent: Fraction, coeffs: list of iv.mpf, ascending in log-power)

    def __post_init__(self) -> None:
        exps = [e for e, _ in self.terms]
        if exps != sorted(exps, reverse=True):
            raise DomainError("main-term exponents must be strictly decreasing")

    def degrees(self) -> list[int]:
        return [len(c) - 1 for _, c in self.terms]

    def exponents(self) -> list[Fraction]:
        return [e for e, _ in self.terms]

    def max_coefficient_radius(self) -> float:
        return max(iv_width(c) / 2 for _, cs in self.terms for c in cs)

    def evaluate(self, x) -> mpmath.mpf:
        """M(x) at the midpoint of every constant (mpf arithmetic)."""
        xm = mpmath.mpf(x)
        L = mpmath.log(xm)
        total = mpmath.mpf(0)
        for e, cs in self.terms:
            poly = mpmath.mpf(0)
            for k in reversed(range(len(cs))):
                poly = poly * L + iv_mid(cs[k])
            total += poly * xm ** (mpmath.mpf(e.numerator) / e.denominator)
        return total

    def to_json(self) -> str:
        out = []
        for e, cs in self.terms:
            out.append({
                "exponent": str(e),
                "log_poly": [mpmath.nstr(iv_mid(c), 30) for c in cs],
                "radii": [f"{iv_width(c) / 2:.3e}" for c in cs],
            })
        return json.dumps({"r": str(self.r), "terms": out}, indent=2)


def _inv_s_jet(s0: Fraction, order: int) -> list:
    """Jet of 1/s at s0: sum (-1)^k u^k / s0^(k+1)."""
    out = []
    for k in range(order + 1):
        out.append(iv_fraction(Fraction((-1) ** k, 1)) / iv_fraction(s0) ** (k + 1))
    return out


@functools.lru_cache(maxsize=16)
def main_term(r, prec: int = 144) -> MainTerm:
    """Residue main term for the gated family (r = 1..4) or 'phi'.

    Cached per (r, prec); callers must not mutate the returned object.
    """
    spec = spec_for(r)
    err = error_exponent(r)
    terms = []
    for a_j, e_j in spec.factors:
        s0 = Fraction(1, a_j)
        if s0 <= err:
            continue  # absorbed by the error term
        m = e_j
        # pole factor: zeta(a_j s)^{e_j} as a Laurent series at s0
        base = zeta_laurent(a_j, K=max(m - 1, 1), prec=prec + 64)
        pole = base
        for _ in range(e_j - 1):
            pole = pole * base
        # regular factors as jets of order m-1
        reg = _inv_s_jet(s0, m - 1)
        for a_i, e_i in spec.factors:
            if a_i == a_j:
                continue
            zj = zeta_jet(a_i * s0, m - 1, prec + 64)
            zj = [zj[k] * iv_fraction(Fraction(a_i) ** k) for k in range(m)]
            for _ in range(e_i):
                reg = jet_mul(reg, zj, m - 1)
        gev = evaluate_G(r, s0, d=m - 1, prec=prec)
        reg = jet_mul(reg, gev.jet[: m], m - 1)
        H = pole * LaurentSeries.from_jet(s0, reg)
        if not H.leading_is_nonzero():
            raise DomainError(f"pole at {s0}: leading Laurent coefficient "
                              "not certified nonzero; raise precision")
        coeffs = [H.coefficient(-1 - k) / factorial(k) for k in range(m)]
        terms.append((s0, coeffs))
    terms.sort(key=lambda t: t[0], reverse=True)
    return MainTerm(r=r, terms=terms)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

@dataclass
class ResidualRow:
    x: int
    S: int
    M: mpmath.mpf
    residual: mpmath.mpf


def residual(r, grid: list[int], table: SummatoryTable | None = None,
             mt: MainTerm | None = None, prec: int = 144,
             memory_cap: int = 2 ** 27) -> list[ResidualRow]:
    """S_r(x) - M_r(x) at each grid point, exact minus high-precision real."""
    grid = sorted(set(grid))
    if mt is None:
        mt = main_term(r, prec=prec)
    if table is None:
        func = phi_e_function() if r == "phi" else lambda_e_function(r)
        table = summatory(func, grid[-1], checkpoints=grid, memory_cap=memory_cap)
    s_at = dict(table.checkpoints)
    mp.prec = max(mp.prec, 128)
    rows = []
    for x in grid:
        Sx = s_at[x]
        Mx = mt.evaluate(x)
        rows.append(ResidualRow(x=x, S=Sx, M=Mx, residual=mpmath.mpf(Sx) - Mx))
    return rows


def residual_csv(rows: list[ResidualRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["x", "S", "M", "residual"])
    for row in rows:
        w.writerow([row.x, str(row.S), mpmath.nstr(row.M, 25),
                    mpmath.nstr(row.residual, 18)])
    return buf.getvalue()


@dataclass
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    points_used: int


def fit_exponent(rows: list[ResidualRow]) -> ExponentFit:
    """Least-squares fit of log|residual| against log x, zero residuals
    dropped; needs >= 8 points spanning >= 2 decades."""
    pts = [(log(row.x), log(abs(float(row.residual))))
           for row in rows if float(row.residual) != 0.0]
    if len(pts) < 8:
        raise DomainError("fit_exponent needs >= 8 nonzero residuals")
    xs = [p[0] for p in pts]
    if max(xs) - min(xs) < 2 * log(10) - 1e-9:
        raise DomainError("fit_exponent needs a grid spanning >= 2 decades")
    n = len(pts)
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sxx = sum(p[0] * p[0] for p in pts)
    sxy = sum(p[0] * p[1] for p in pts)
    denom = n * sxx - sx * sx
    if denom == 0:
        raise DomainError("degenerate fit: all x identical")
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    ss_res = sum((p[1] - slope * p[0] - intercept) ** 2 for p in pts)
    mean_y = sy / n
    ss_tot = sum((p[1] - mean_y) ** 2 for p in pts) or 1e-300
    return ExponentFit(slope=slope, intercept=intercept,
                       r_squared=1 - ss_res / ss_tot, points_used=n)


def decade_ratio_report(rows: list[ResidualRow], normalize: Fraction = Fraction(1, 4)):
    """max |residual| / x^normalize over the bottom and top decades of the grid."""
    xs = [row.x for row in rows]
    lo, hi = min(xs), max(xs)
    bottom = [row for row in rows if row.x <= lo * 10]
    top = [row for row in rows if row.x >= hi / 10]
    e = float(normalize)

    def peak(rs):
        return max(abs(float(row.residual)) / row.x ** e for row in rs)

    return {"bottom": peak(bottom), "top": peak(top)}
