import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expcarm.arith import (
    CapacityError,
    DomainError,
    FactoredInteger,
    carmichael,
    coefficient_list,
    dirichlet_convolve,
    exp_carmichael_r,
    exp_totient,
    factorize,
    function_by_id,
    lambda_e_function,
    lambda_sup_scan,
    max_order_scan,
    phi_e_function,
    spf_table,
    sum_by_spf,
    summatory,
    tau_function,
    tau_multi,
)


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

def test_factorize_basics():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    fi = factorize(200000)
    assert fi.factors == ((2, 6), (5, 5))
    assert fi.n == 200000


def test_factorize_domain_errors():
    with pytest.raises(DomainError):
        factorize(0)
    with pytest.raises(DomainError):
        factorize(-5)


def test_factored_integer_invariants():
    with pytest.raises(DomainError):
        FactoredInteger(((3, 1), (2, 1)))  # primes not increasing
    with pytest.raises(DomainError):
        FactoredInteger(((4, 1),))  # not prime
    with pytest.raises(DomainError):
        FactoredInteger(((2, 0),))  # exponent < 1


@given(st.integers(min_value=1, max_value=10 ** 6))
def test_factorize_roundtrip(n):
    assert factorize(n).n == n


# ---------------------------------------------------------------------------
# carmichael lambda
# ---------------------------------------------------------------------------

def _group_exponent(n):
    units = [a for a in range(1, n + 1) if math.gcd(a, n) == 1]
    e = 1
    while any(pow(a, e, n) != 1 for a in units):
        e += 1
    return e


def test_carmichael_examples():
    assert carmichael(factorize(8)) == 2   # halved totient at 2^3
    assert carmichael(factorize(5)) == 4
    assert carmichael(factorize(12)) == 2
    assert carmichael(factorize(1)) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 8, 12, 16, 24, 36, 48, 60, 97, 100])
def test_carmichael_is_the_group_exponent(n):
    assert carmichael(factorize(n)) == _group_exponent(n)


def test_lambda_at_most_m_minus_one():
    for m in range(2, 10_001):
        assert carmichael(factorize(m)) <= m - 1


# ---------------------------------------------------------------------------
# exponential-divisor family
# ---------------------------------------------------------------------------

def test_exp_carmichael_examples():
    assert exp_carmichael_r(factorize(12), 1) == 1
    assert exp_carmichael_r(factorize(12), 2) == 0
    assert exp_carmichael_r(factorize(2 ** 5 * 3 ** 5), 4) == 16
    assert exp_carmichael_r(factorize(1), 3) == 1  # empty product
    with pytest.raises(DomainError):
        exp_carmichael_r(factorize(12), 5)
    with pytest.raises(DomainError):
        exp_carmichael_r(factorize(12), 0)


def test_exp_totient_examples():
    assert exp_totient(factorize(1)) == 1
    for p in (2, 3, 5, 11):
        assert exp_totient(factorize(p * p)) == 1
    assert exp_totient(factorize(2 ** 5 * 3 ** 5)) == 16


def test_delta_gating():
    for n in range(2, 2001):
        fi = factorize(n)
        min_exp = min(a for _, a in fi.factors)
        for r in (1, 2, 3, 4):
            gated = exp_carmichael_r(fi, r)
            assert (gated == 0) == (min_exp < r)
    # lambda-e1 equals the ungated function pointwise
    f1 = lambda_e_function(1)
    for n in range(1, 500):
        assert f1.of_int(n) == exp_carmichael_r(factorize(n), 1)


def test_ordering_of_gated_values():
    vals = [coefficient_list(lambda_e_function(r), 10 ** 5) for r in (1, 2, 3, 4)]
    for n in range(1, 10 ** 5 + 1):
        assert vals[3][n] <= vals[2][n] <= vals[1][n] <= vals[0][n]


# ---------------------------------------------------------------------------
# tau
# ---------------------------------------------------------------------------

def _tau_enumerate(a, n):
    """Oracle: direct enumeration of ordered factorizations."""
    if len(a) == 1:
        root = round(n ** (1 / a[0]))
        for d in (root - 1, root, root + 1):
            if d >= 1 and d ** a[0] == n:
                return 1
        return 0
    total = 0
    d = 1
    while d ** a[0] <= n:
        if n % (d ** a[0]) == 0:
            total += _tau_enumerate(a[1:], n // d ** a[0])
        d += 1
    return total


def test_tau_examples():
    assert tau_multi((1, 3, 5, 5), 1) == 1
    assert tau_multi((1, 3, 5, 5), 32) == 4
    for p in (2, 3, 5, 7, 11):
        assert tau_multi((2, 3, 3, 4), p) == 0
    with pytest.raises(DomainError):
        tau_multi((), 5)


@given(st.integers(min_value=1, max_value=3000))
@settings(max_examples=150)
def test_tau_matches_enumeration(n):
    a = (1, 3, 5, 5)
    assert tau_multi(a, n) == _tau_enumerate(a, n)


@given(st.integers(min_value=1, max_value=2000))
@settings(max_examples=100)
def test_tau_2334_matches_enumeration(n):
    a = (2, 3, 3, 4)
    assert tau_multi(a, n) == _tau_enumerate(a, n)


# ---------------------------------------------------------------------------
# multiplicativity (property suite)
# ---------------------------------------------------------------------------

@given(st.integers(min_value=1, max_value=10 ** 4),
       st.integers(min_value=1, max_value=10 ** 4))
@settings(max_examples=300)
def test_multiplicativity_random_pairs(m, n):
    if math.gcd(m, n) != 1:
        return
    fm, fn, fmn = factorize(m), factorize(n), factorize(m * n)
    for r in (1, 2, 3, 4):
        assert exp_carmichael_r(fmn, r) == \
            exp_carmichael_r(fm, r) * exp_carmichael_r(fn, r)
    assert exp_totient(fmn) == exp_totient(fm) * exp_totient(fn)
    assert tau_multi((1, 3, 5, 5), fmn) == \
        tau_multi((1, 3, 5, 5), fm) * tau_multi((1, 3, 5, 5), fn)


# ---------------------------------------------------------------------------
# summatory sieve
# ---------------------------------------------------------------------------

def test_summatory_brute_force_resolution():
    # contributions below 10: n=1 -> 1, 4 -> lambda(2)=1, 8 -> lambda(3)=2,
    # 9 -> lambda(2)=1; total 5
    direct = sum(exp_carmichael_r(factorize(n), 2) for n in range(1, 11))
    assert direct == 5
    table = summatory("lambda-e2", 10)
    assert table.checkpoints[-1] == (10, 5)


def test_summatory_at_one():
    table = summatory("lambda-e", 1)
    assert table.checkpoints == [(1, 1)]
    for r in (2, 3, 4):
        assert summatory(f"lambda-e{r}", 1).checkpoints == [(1, 1)]


def test_summatory_matches_brute_force_1e4():
    funcs = [lambda_e_function(r) for r in (1, 2, 3, 4)] + [phi_e_function()]
    brute = sum_by_spf(funcs, 10 ** 4)
    for func, expected in zip(funcs, brute):
        assert summatory(func, 10 ** 4).checkpoints[-1][1] == expected


def test_summatory_segment_independence():
    reference = summatory("lambda-e3", 10 ** 4).checkpoints
    for seg in (97, 1000, 4096, 10 ** 4 + 1):
        got = summatory("lambda-e3", 10 ** 4,
                        checkpoints=[10, 100, 5000, 10 ** 4],
                        segment_size=seg).checkpoints
        assert got[-1] == reference[-1]
        assert [x for x, _ in got] == [10, 100, 5000, 10 ** 4]


def test_summatory_tau_equals_per_n_sum():
    func = tau_function((1, 3, 5, 5))
    table = summatory(func, 10 ** 4)
    per_n = 1 + sum(func.of_int(n) for n in range(2, 10 ** 4 + 1))
    assert table.checkpoints[-1][1] == per_n


def test_summatory_general_path():
    # h(1) = 2 forces the all-primes path
    func = tau_function((1, 1))
    table = summatory(func, 2000)
    assert table.checkpoints[-1][1] == sum(tau_multi((1, 1), n)
                                           for n in range(1, 2001))


def test_summatory_checkpoints_monotone_and_serialized():
    table = summatory("phi-e", 1000, checkpoints=[1, 10, 100, 1000])
    svals = [s for _, s in table.checkpoints]
    assert svals == sorted(svals)
    assert table.checkpoints[0] == (1, 1)
    csv_text = table.to_csv()
    assert csv_text.splitlines()[0] == "x,value"
    assert "1000" in csv_text
    assert '"S": "1"' in table.to_json()


def test_capacity_error():
    with pytest.raises(CapacityError):
        spf_table(10 ** 6, memory_cap=10 ** 5)


def test_function_by_id():
    assert function_by_id("lambda-e3").of_int(8) == 2  # 2^3: exponent meets the gate
    assert function_by_id("lambda-e3").of_int(4) == 0  # 2^2: below the gate
    assert function_by_id("phi-e").of_int(4) == 1
    assert function_by_id("tau-1,3,5,5").of_int(32) == 4
    with pytest.raises(DomainError):
        function_by_id("nope")


# ---------------------------------------------------------------------------
# dirichlet convolution
# ---------------------------------------------------------------------------

def test_convolution_identity():
    g = [0, 5, 4, 3, 2, 1]
    e = [0, 1, 0, 0, 0, 0]
    assert dirichlet_convolve(e, g) == g


def test_convolution_divisor_counts():
    ones = [0] + [1] * 6
    assert dirichlet_convolve(ones, ones) == [0, 1, 2, 2, 3, 2, 4]


def test_convolution_length_mismatch():
    with pytest.raises(DomainError):
        dirichlet_convolve([0, 1], [0, 1, 2])


# ---------------------------------------------------------------------------
# maximal order
# ---------------------------------------------------------------------------

def test_lambda_sup_attained_at_five_exactly():
    m_star, value = lambda_sup_scan(10 ** 4)
    assert m_star == 5
    assert value == math.log(4) / 5
    # exact integer certificate: lambda(m)^5 <= 4^m with equality only at 5
    for m in range(2, 10 ** 4 + 1):
        lm = carmichael(factorize(m))
        assert lm ** 5 <= 4 ** m
        if lm ** 5 == 4 ** m:
            assert m == 5


def test_max_order_scan_small():
    rep = max_order_scan(31)
    assert rep.max_value == 2
    assert rep.n_star == 8


def test_max_order_scan_requires_16():
    with pytest.raises(DomainError):
        max_order_scan(15)
