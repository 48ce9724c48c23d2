import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from expcarm.arith import (
    DomainError,
    coefficient_list,
    dirichlet_convolve,
    lambda_e_function,
    phi_e_function,
)
from expcarm.series import (
    GATE_ORDER,
    PowerSeriesQ,
    Z_SPECS,
    ZetaProductSpec,
    evaluate_G,
    g_coefficients,
    local_factor_L,
    local_factor_Z,
    spec_for,
    verify_vanishing,
    z_coefficients,
)
from expcarm.zeta import PrecisionError, iv_mid, iv_width


# ---------------------------------------------------------------------------
# rational power series
# ---------------------------------------------------------------------------

def test_series_arithmetic_roundtrip():
    A = PowerSeriesQ([1, 2, 3, 4, 5])
    B = PowerSeriesQ([1, -1, F(1, 2), 0, F(7, 3)])
    assert (A * B) / B == A
    assert A * B == B * A


def test_series_inverse_guard():
    with pytest.raises(DomainError):
        PowerSeriesQ([0, 1, 2]).inverse()


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=8),
       st.lists(st.integers(-9, 9), min_size=1, max_size=8))
@settings(max_examples=80)
def test_series_division_exactness(a, b):
    A = PowerSeriesQ([F(x, 3) for x in a])
    B = PowerSeriesQ([F(1)] + [F(x, 2) for x in b])
    assert B * (A / B) == A.truncate(min(A.order, B.order))


# ---------------------------------------------------------------------------
# local factors
# ---------------------------------------------------------------------------

def test_local_factor_L_values():
    assert local_factor_L(1, 7).coeffs == [1, 1, 1, 2, 2, 4, 2, 6]
    assert local_factor_L(4, 4).coeffs == [1, 0, 0, 0, 2]
    assert local_factor_L(2, 1).coeffs == [1, 0]
    with pytest.raises(DomainError):
        local_factor_L(1, 65)


def test_local_factor_Z_values():
    assert local_factor_Z(ZetaProductSpec(((1, 1),)), 3).coeffs == [1, 1, 1, 1]
    assert local_factor_Z(Z_SPECS[1], 5).coeffs == [1, 1, 1, 2, 2, 4]
    assert local_factor_Z(Z_SPECS[4], 3).coeffs == [1, 0, 0, 0]


def test_local_factor_agreement_through_x5():
    L = local_factor_L(1, 5)
    Z = local_factor_Z(Z_SPECS[1], 5)
    assert L == Z


def test_spec_validation():
    with pytest.raises(DomainError):
        ZetaProductSpec(((3, 1), (3, 2)))
    with pytest.raises(DomainError):
        ZetaProductSpec(((1, 0),))


# ---------------------------------------------------------------------------
# vanishing orders
# ---------------------------------------------------------------------------

def test_vanishing_orders_as_computed():
    # ground truth from exact coefficient arithmetic: the quotient for r = 1
    # first deviates from 1 at x^6 (coefficient -3), not at x^8
    expected = {1: 6, 2: 6, 3: 6, 4: 8}
    for r, v in expected.items():
        rep = verify_vanishing(r)
        assert rep.first_nonzero_index == v
        assert rep.ok == (v >= rep.required)
    assert not verify_vanishing(1).ok  # required 8, actual 6
    assert verify_vanishing(2).ok
    assert verify_vanishing(3).ok
    assert verify_vanishing(4).ok


def test_vanishing_quotient_leading_coefficients():
    L = local_factor_L(1, 10)
    Z = local_factor_Z(Z_SPECS[1], 10)
    Q = L / Z
    assert [Q[i] for i in range(11)] == [1, 0, 0, 0, 0, 0, -3, 4, -6, 6, -9]


def test_division_exactness_invariant():
    for r in (1, 2, 3, 4):
        L = local_factor_L(r, 32)
        Z = local_factor_Z(spec_for(r), 32)
        assert Z * (L / Z) == L


def test_truncation_monotonicity():
    small = local_factor_Z(Z_SPECS[3], 16)
    large = local_factor_Z(Z_SPECS[3], 48)
    assert small == large.truncate(16)
    q_small = local_factor_L(2, 16) / local_factor_Z(Z_SPECS[2], 16)
    q_large = local_factor_L(2, 32) / local_factor_Z(Z_SPECS[2], 32)
    assert q_small == q_large.truncate(16)


def test_series_csv_dump():
    text = local_factor_L(1, 4).to_csv()
    assert text.splitlines()[0] == "index,numerator,denominator"
    assert text.splitlines()[3] == "3,2,1"


# ---------------------------------------------------------------------------
# g coefficients
# ---------------------------------------------------------------------------

def test_g_support_is_gated():
    g1 = g_coefficients(1, 4000)
    for n in range(2, 64):
        assert g1[n] == 0
    assert g1[64] == -3 and g1[128] == 4 and g1[729] == -3
    g3 = g_coefficients(3, 4000)
    for p in (2, 3, 5, 7):
        for a in range(1, 6):
            if p ** a <= 4000:
                assert g3[p ** a] == 0
    g4 = g_coefficients(4, 1000)
    for n in range(2, 256):
        assert g4[n] == 0
    assert g4[256] == -1


def test_g_multiplicative_cross_values():
    g1 = g_coefficients(1, 10 ** 5)
    # 2^6 * 3^6 = 46656: product of the two local coefficients
    assert g1[64 * 729] == g1[64] * g1[729]


def test_coefficient_identity_small():
    N = 2000
    for r in (1, 2, 3, 4):
        z = z_coefficients(Z_SPECS[r], N)
        g = g_coefficients(r, N)
        conv = dirichlet_convolve(z, g)
        lam = coefficient_list(lambda_e_function(r), N)
        assert conv == lam


def test_phi_coefficient_identity_small():
    N = 2000
    z = z_coefficients(Z_SPECS[1], N)
    h = g_coefficients("phi", N)
    conv = dirichlet_convolve(z, h)
    phi_vals = coefficient_list(phi_e_function(), N)
    assert conv == phi_vals


def test_g_partial_sum_growth():
    # cumulative |g_1| fitted against the gate-order prediction x^(1/6)
    g1 = g_coefficients(1, 10 ** 4)
    total, samples = 0, []
    for n, v in enumerate(g1):
        total += abs(v)
        if n in (10 ** 2, 10 ** 3, 10 ** 4):
            samples.append((n, total))
    assert samples[-1][1] <= 40 * 10 ** 4 ** (1 / 6 + 0.05)
    xs = [math.log(n) for n, _ in samples if _ > 0]
    ys = [math.log(t) for _, t in samples if t > 0]
    slope = (ys[-1] - ys[0]) / (xs[-1] - xs[0])
    assert slope <= 1 / 6 + 0.05


# ---------------------------------------------------------------------------
# Euler-product evaluation
# ---------------------------------------------------------------------------

def test_evaluate_G_cutoff_self_consistency():
    a = evaluate_G(1, F(1, 5), 0, cutoff=256, prec=144)
    b = evaluate_G(1, F(1, 5), 0, cutoff=512, prec=144)
    diff = abs(float(iv_mid(a.jet[0])) - float(iv_mid(b.jet[0])))
    budget = (iv_width(a.jet[0]) + iv_width(b.jet[0])
              + a.tail_bound + b.tail_bound + 1e-30)
    assert diff <= budget


def test_evaluate_G_matches_dirichlet_sum_at_one():
    ev = evaluate_G(1, F(1), 0, prec=144)
    g1 = g_coefficients(1, 10 ** 6)
    mp.prec = 120
    partial = mpmath.fsum(mpmath.mpf(v) / n for n, v in enumerate(g1) if n and v)
    # the Dirichlet tail over gate-order-full n beyond 1e6 is the slack here
    assert abs(iv_mid(ev.jet[0]) - partial) < 1e-3


def test_evaluate_G_derivative_finite_difference():
    h = F(1, 2 ** 14)
    ev = evaluate_G(1, F(1), 1, prec=144)
    up = evaluate_G(1, F(1) + h, 0, prec=144)
    dn = evaluate_G(1, F(1) - h, 0, prec=144)
    mp.prec = 160
    fd = (iv_mid(up.jet[0]) - iv_mid(dn.jet[0])) * h.denominator / 2
    analytic = iv_mid(ev.derivative(1))
    assert abs(analytic - fd) < 1e-6 * max(1.0, abs(analytic))


def test_evaluate_G_domain_guards():
    with pytest.raises(DomainError):
        evaluate_G(1, F(1, 6), 0)  # at the abscissa
    with pytest.raises(DomainError):
        evaluate_G(4, F(1, 8), 0)
    with pytest.raises(DomainError):
        evaluate_G(1, F(1, 2), d=6)


def test_evaluate_G_certified_widths():
    for r, s in ((2, F(1, 2)), (3, F(1, 4)), ("phi", F(1, 3))):
        ev = evaluate_G(r, s, 1, prec=144)
        assert iv_width(ev.jet[0]) < 1e-20
        assert iv_width(ev.jet[1]) < 1e-18
        assert ev.tail_bound < 1e-20
