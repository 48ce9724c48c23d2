from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import iv, mp

from expcarm.arith import DomainError
from expcarm.zeta import (
    LaurentSeries,
    STIELTJES_LITERALS,
    iv_mid,
    iv_width,
    jet_exp,
    jet_inv,
    jet_log,
    jet_mul,
    jet_pow_int,
    set_precision,
    stieltjes_interval,
    zeta_jet,
    zeta_laurent,
    zeta_real,
)


# ---------------------------------------------------------------------------
# classical values
# ---------------------------------------------------------------------------

def test_zeta_even_closed_forms():
    mp.prec = 320
    for sigma, closed in ((2, mpmath.pi ** 2 / 6), (4, mpmath.pi ** 4 / 90),
                          (6, mpmath.pi ** 6 / 945)):
        z = zeta_real(F(sigma), 256)
        assert z.a <= closed <= z.b
        assert abs(iv_mid(z) - closed) < mpmath.mpf(2) ** -250


def test_zeta_negative_one():
    z = zeta_real(F(-1), 256)
    mp.prec = 300
    assert abs(iv_mid(z) + mpmath.mpf(1) / 12) < mpmath.mpf(2) ** -250


def _zeta_half_alternating_oracle(terms=4000):
    """eta(1/2) by alternating series with Richardson-style averaging, then
    zeta(1/2) = eta(1/2) / (1 - 2^(1-1/2)).  Independent of Euler-Maclaurin."""
    mp.prec = 128
    partial = mpmath.mpf(0)
    partials = []
    for n in range(1, terms + 1):
        partial += (-1) ** (n - 1) / mpmath.sqrt(n)
        partials.append(partial)
    # repeated averaging of the tail accelerates the alternating series
    tail = partials[-60:]
    for _ in range(50):
        tail = [(a + b) / 2 for a, b in zip(tail, tail[1:])]
    eta_half = tail[-1]
    return eta_half / (1 - 2 ** (mpmath.mpf(1) / 2))


def test_zeta_half_against_alternating_oracle():
    oracle = _zeta_half_alternating_oracle()
    z = zeta_real(F(1, 2), 192)
    assert abs(iv_mid(z) - oracle) < 1e-20
    assert mpmath.nstr(iv_mid(z), 11) == "-1.4603545088"


def test_zeta_pole_guard():
    with pytest.raises(DomainError):
        zeta_real(F(1))
    with pytest.raises(DomainError):
        zeta_real(F(2 * 10 ** 6 + 1, 2 * 10 ** 6))  # half the allowed distance


def test_zeta_derivative_against_finite_difference():
    # the jet is produced by analytic differentiation; a central difference
    # of independent evaluations is the cross-check
    h = F(1, 2 ** 20)
    for sigma in (F(4, 7), F(5, 7), F(4, 3)):
        jet = zeta_jet(sigma, 1, 192)
        up = zeta_real(sigma + h, 192)
        dn = zeta_real(sigma - h, 192)
        mp.prec = 250
        fd = (iv_mid(up) - iv_mid(dn)) * h.denominator / 2
        assert abs(iv_mid(jet[1]) - fd) < 1e-9


def test_zeta_jet_contains_truth():
    mp.prec = 260
    for sigma in (F(1, 5), F(2, 3), F(6, 5), F(3)):
        jet = zeta_jet(sigma, 2, 192)
        truth = mpmath.zeta(mpmath.mpf(sigma.numerator) / sigma.denominator)
        assert jet[0].a <= truth <= jet[0].b
        d1 = mpmath.zeta(mpmath.mpf(sigma.numerator) / sigma.denominator,
                         derivative=1)
        assert jet[1].a <= d1 <= jet[1].b


# ---------------------------------------------------------------------------
# Stieltjes constants: limit-definition oracle
# ---------------------------------------------------------------------------

def _log_power_over_x_derivatives(n, order):
    """Coefficient table for d^j/dx^j (log^n x / x) in the basis
    x^(-1-j) log^i x; row j maps i -> coefficient."""
    rows = [{n: F(1)}]
    for j in range(order):
        prev = rows[-1]
        new = {}
        for i, c in prev.items():
            # d/dx [c x^(-1-j) log^i x] = -c(1+j) x^(-2-j) log^i + c i x^(-2-j) log^(i-1)
            new[i] = new.get(i, F(0)) - c * (1 + j)
            if i > 0:
                new[i - 1] = new.get(i - 1, F(0)) + c * i
        rows.append(new)
    return rows


def _stieltjes_oracle(n, m=4096, corrections=4):
    """gamma_n = lim (sum_{k<=m} log^n k/k - log^(n+1) m/(n+1)), accelerated
    with Euler-Maclaurin endpoint corrections."""
    mp.prec = 160
    logs = [mpmath.log(k) for k in range(1, m + 1)]
    s = mpmath.fsum(lg ** n / k for k, lg in enumerate(logs, start=1))
    lm = logs[-1]
    value = s - lm ** (n + 1) / (n + 1)
    value -= lm ** n / (2 * m)  # trapezoid endpoint
    rows = _log_power_over_x_derivatives(n, 2 * corrections)
    bern = {1: F(1, 6), 2: F(-1, 30), 3: F(1, 42), 4: F(-1, 30)}
    for k in range(1, corrections + 1):
        row = rows[2 * k - 1]
        deriv = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator
                            * m ** (-2 * k) * lm ** i for i, c in row.items())
        b = bern[k]
        value -= (mpmath.mpf(b.numerator) / b.denominator) * deriv / mpmath.factorial(2 * k)
    return value


def test_stieltjes_literals_against_limit_definition():
    for n in range(6):
        oracle = _stieltjes_oracle(n)
        literal = mpmath.mpf(STIELTJES_LITERALS[n])
        assert abs(oracle - literal) < 1e-13, (n, oracle, literal)


def test_stieltjes_interval_access():
    g0 = stieltjes_interval(0)
    mp.prec = 220
    assert abs(iv_mid(g0) - mpmath.mpf("0.5772156649015328606")) < 1e-18
    with pytest.raises(DomainError):
        stieltjes_interval(6)


# ---------------------------------------------------------------------------
# Laurent series
# ---------------------------------------------------------------------------

def test_zeta_laurent_residues():
    assert abs(iv_mid(zeta_laurent(1).residue()) - 1) < 1e-55
    assert abs(iv_mid(zeta_laurent(5).residue()) - mpmath.mpf(1) / 5) < 1e-55
    for a in (1, 2, 7):
        const = zeta_laurent(a).coefficient(0)
        assert abs(iv_mid(const) - mpmath.mpf(STIELTJES_LITERALS[0])) < 1e-50


def test_zeta_laurent_truncation_guard():
    with pytest.raises(DomainError):
        zeta_laurent(3, K=6)


def _random_laurent(data, s0, min_order, n):
    coeffs = [iv.mpf(data.draw(st.integers(-50, 50))) / 8 for _ in range(n)]
    return LaurentSeries(s0, min_order, coeffs)


@given(st.data())
@settings(max_examples=60)
def test_laurent_residue_linearity(data):
    # both series share a window containing u^-1, as the property requires
    set_precision(128)
    s0 = F(1, 3)
    min_order = data.draw(st.integers(min_value=-3, max_value=-1))
    n = data.draw(st.integers(min_value=-min_order, max_value=4 - min_order))
    A = _random_laurent(data, s0, min_order, n)
    B = _random_laurent(data, s0, min_order, n)
    lhs = (A + B).residue()
    rhs = A.residue() + B.residue()
    assert abs(iv_mid(lhs) - iv_mid(rhs)) < 1e-25


def test_laurent_multiplication_orders():
    a = zeta_laurent(3, 3)
    b = zeta_laurent(3, 3)
    prod = a * b
    assert prod.min_order == -2
    assert prod.leading_is_nonzero()
    mp.prec = 200
    assert abs(iv_mid(prod.coefficient(-2)) - mpmath.mpf(1) / 9) < 1e-40


def test_laurent_point_mismatch():
    with pytest.raises(DomainError):
        zeta_laurent(3) * zeta_laurent(5)


# ---------------------------------------------------------------------------
# jets
# ---------------------------------------------------------------------------

def test_jet_roundtrips():
    set_precision(192)
    A = [iv.mpf("1.75"), iv.mpf("0.4"), iv.mpf("-0.25"), iv.mpf("0.0625")]
    back = jet_exp(jet_log(A, 3), 3)
    for a, b in zip(A, back):
        assert abs(iv_mid(a) - iv_mid(b)) < 1e-45
    inv = jet_inv(A, 3)
    unit = jet_mul(A, inv, 3)
    assert abs(iv_mid(unit[0]) - 1) < 1e-45
    for c in unit[1:]:
        assert abs(iv_mid(c)) < 1e-45
    cubed = jet_pow_int(A, 3, 3)
    direct = jet_mul(jet_mul(A, A, 3), A, 3)
    for a, b in zip(cubed, direct):
        assert abs(iv_mid(a) - iv_mid(b)) < 1e-40
