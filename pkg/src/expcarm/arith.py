"""Exact evaluation and fast summation of exponential-divisor arithmetic functions.

The central objects are the Carmichael function lambda, the operator that
plants an ordinary arithmetic function f on prime-power exponents
(multiplicative F with F(p^a) = f(a)), and the gate delta_r selecting
integers all of whose prime exponents are >= r.  Everything here is exact
integer arithmetic; no floating point enters any accumulator.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import gcd, isqrt, lcm, log
from typing import Callable, Iterable, Sequence

import numpy as np


class DomainError(ValueError):
    """Raised when an argument is outside an operation's stated domain."""


class CapacityError(MemoryError):
    """Raised when an unsegmented sieve would exceed the configured memory cap."""


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs we ever see."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    """Canonical prime-power factorization, primes strictly increasing."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 1
        for p, a in self.factors:
            if p <= last:
                raise DomainError("primes must be strictly increasing")
            if a < 1:
                raise DomainError("exponents must be >= 1")
            if not is_prime(p):
                raise DomainError(f"{p} is not prime")
            last = p

    @property
    def n(self) -> int:
        value = 1
        for p, a in self.factors:
            value *= p ** a
        return value

    def exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.factors)


def factorize(n: int) -> FactoredInteger:
    """Trial-division factorization; n = 1 yields the empty product."""
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    factors = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            factors.append((p, a))
    # 6k +- 1 wheel
    d = 5
    while d * d <= m:
        for q in (d, d + 2):
            if m % q == 0:
                a = 0
                while m % q == 0:
                    m //= q
                    a += 1
                factors.append((q, a))
        d += 6
    if m > 1:
        factors.append((m, 1))
    factors.sort()
    return FactoredInteger(tuple(factors))


# ---------------------------------------------------------------------------
# Carmichael lambda and the exponential-divisor family
# ---------------------------------------------------------------------------

def carmichael_prime_power(p: int, a: int) -> int:
    """lambda(p^a): the totient, halved when p = 2 and a > 2."""
    if p == 2 and a > 2:
        return 2 ** (a - 2)
    return (p - 1) * p ** (a - 1)


def carmichael(fn: FactoredInteger | int) -> int:
    """lambda(n) = lcm of lambda over the prime powers of n; lambda(1) = 1."""
    fi = fn if isinstance(fn, FactoredInteger) else factorize(fn)
    out = 1
    for p, a in fi.factors:
        out = lcm(out, carmichael_prime_power(p, a))
    return out


def _lambda_of(a: int) -> int:
    return carmichael(factorize(a))


def _phi_of(a: int) -> int:
    out = 1
    for p, e in factorize(a).factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def exp_carmichael_r(fn: FactoredInteger | int, r: int) -> int:
    """delta_r(n) times the exponent-planted Carmichael value.

    Product over prime powers p^a || n of lambda(a) when every a >= r,
    else 0.  The empty product gives 1 at n = 1 for every r.
    """
    if not 1 <= r <= 4:
        raise DomainError(f"r must be in 1..4, got {r}")
    fi = fn if isinstance(fn, FactoredInteger) else factorize(fn)
    out = 1
    for _, a in fi.factors:
        if a < r:
            return 0
        out *= _lambda_of(a)
    return out


def exp_carmichael(fn: FactoredInteger | int) -> int:
    return exp_carmichael_r(fn, 1)


def exp_totient(fn: FactoredInteger | int) -> int:
    """Multiplicative with value phi(a) at p^a; 1 at n = 1."""
    fi = fn if isinstance(fn, FactoredInteger) else factorize(fn)
    out = 1
    for _, a in fi.factors:
        out *= _phi_of(a)
    return out


def _tau_exponent_counts(a: Sequence[int], vmax: int) -> list[int]:
    """counts[v] = #{(e_1..e_k) >= 0 : sum a_i e_i = v}, for v <= vmax."""
    ways = [0] * (vmax + 1)
    ways[0] = 1
    for ai in a:
        for v in range(ai, vmax + 1):
            ways[v] += ways[v - ai]
    return ways


def tau_multi(a: Sequence[int], n: FactoredInteger | int) -> int:
    """Number of ordered representations n = d_1^{a_1} ... d_k^{a_k}."""
    if len(a) == 0:
        raise DomainError("tau_multi needs at least one exponent")
    if any(ai < 1 for ai in a):
        raise DomainError("tau_multi exponents must be >= 1")
    fi = n if isinstance(n, FactoredInteger) else factorize(n)
    if not fi.factors:
        return 1
    vmax = max(e for _, e in fi.factors)
    counts = _tau_exponent_counts(a, vmax)
    out = 1
    for _, e in fi.factors:
        out *= counts[e]
        if out == 0:
            return 0
    return out


# ---------------------------------------------------------------------------
# function registry: everything the sieve can sum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentFunction:
    """A multiplicative function determined by the exponent pattern alone.

    value(p^a) = h(a) for every prime p.  All members of the family here
    (lambda-e_r, phi-e, tau(a;.)) are of this shape, which is what lets one
    sieve pass serve them all.
    """

    name: str
    h: Callable[[int], int]

    def of_factored(self, fi: FactoredInteger) -> int:
        out = 1
        for _, a in fi.factors:
            out *= self.h(a)
            if out == 0:
                return 0
        return out

    def of_int(self, n: int) -> int:
        return self.of_factored(factorize(n))

    def min_support_exponent(self, probe: int = 64) -> int:
        """Least a >= 1 with h(a) != 0 (the delta_r gate order)."""
        for a in range(1, probe + 1):
            if self.h(a) != 0:
                return a
        raise DomainError(f"{self.name}: h vanishes through {probe}")


def lambda_e_function(r: int) -> ExponentFunction:
    if not 1 <= r <= 4:
        raise DomainError(f"r must be in 1..4, got {r}")
    return ExponentFunction(
        name=f"lambda-e{r}" if r > 1 else "lambda-e",
        h=lambda a, _r=r: _lambda_of(a) if a >= _r else 0,
    )


def phi_e_function() -> ExponentFunction:
    return ExponentFunction(name="phi-e", h=lambda a: _phi_of(a))


def tau_function(a: Sequence[int]) -> ExponentFunction:
    a = tuple(a)
    if not a or any(ai < 1 for ai in a):
        raise DomainError("tau exponent tuple must be nonempty, entries >= 1")
    counts = _tau_exponent_counts(a, 256)
    return ExponentFunction(
        name="tau-" + ",".join(map(str, a)),
        h=lambda v: counts[v] if v <= 256 else tau_multi(a, factorize(2 ** v)),
    )


def function_by_id(fid: str) -> ExponentFunction:
    """Resolve CLI-facing ids: lambda-e, lambda-e2..4, phi-e, tau-1,3,5,5."""
    if fid == "lambda-e":
        return lambda_e_function(1)
    if fid.startswith("lambda-e") and fid[8:].isdigit():
        return lambda_e_function(int(fid[8:]))
    if fid == "phi-e":
        return phi_e_function()
    if fid.startswith("tau-"):
        parts = fid[4:].split(",")
        return tau_function([int(x) for x in parts])
    raise DomainError(f"unknown function id {fid!r}")


# ---------------------------------------------------------------------------
# smallest-prime-factor table: the per-n route
# ---------------------------------------------------------------------------

def spf_table(limit: int, memory_cap: int = 2 ** 27) -> np.ndarray:
    """Smallest-prime-factor array up to limit (inclusive), spf[1] = 1."""
    if limit + 1 > memory_cap:
        raise CapacityError(
            f"spf table of {limit + 1} entries exceeds cap {memory_cap}; "
            "use the segmented summatory sieve instead"
        )
    spf = np.arange(limit + 1, dtype=np.int64 if limit >= 2 ** 31 else np.int32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            np.minimum(sl, p, out=sl)
    return spf


def exponent_pattern(n: int, spf: np.ndarray) -> list[int]:
    """Exponent multiset of n read off the spf table (order: increasing prime)."""
    out = []
    while n > 1:
        p = int(spf[n])
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        out.append(a)
    return out


def sum_by_spf(funcs: Sequence[ExponentFunction], x: int,
               memory_cap: int = 2 ** 27) -> list[int]:
    """Brute-force oracle: evaluate each function at every n <= x and sum.

    One spf walk per n serves all functions at once.  Arbitrary-precision
    Python-int accumulators.
    """
    spf = spf_table(x, memory_cap)
    totals = [1] * len(funcs)  # n = 1 contributes 1 to every multiplicative sum
    hs = [f.h for f in funcs]
    for n in range(2, x + 1):
        pattern = exponent_pattern(n, spf)
        for i, h in enumerate(hs):
            v = 1
            for a in pattern:
                v *= h(a)
                if v == 0:
                    break
            totals[i] += v
    return totals


# ---------------------------------------------------------------------------
# summatory sieve (exact-exponent slice algorithm, segmented)
# ---------------------------------------------------------------------------

@dataclass
class SummatoryTable:
    """Exact partial sums S(x') at increasing checkpoints."""

    function_id: str
    checkpoints: list[tuple[int, int]] = field(default_factory=list)

    def validate(self) -> None:
        if not self.checkpoints:
            return
        xs = [x for x, _ in self.checkpoints]
        if xs != sorted(xs):
            raise DomainError("checkpoints must be increasing in x")
        svals = [s for _, s in self.checkpoints]
        if any(b < a for a, b in zip(svals, svals[1:])):
            raise DomainError("S values must be nondecreasing (summands >= 0)")
        if xs[0] == 1 and svals[0] != 1:
            raise DomainError("S(1) must equal 1")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["x", "value"])
        for x, s in self.checkpoints:
            w.writerow([x, str(s)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {"function": self.function_id,
             "checkpoints": [{"x": x, "S": str(s)} for x, s in self.checkpoints]},
            indent=2,
        )


def _primes_upto(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def _segment_values(func: ExponentFunction, lo: int, hi: int,
                    primes_small: np.ndarray, primes_all: np.ndarray | None,
                    support_min: int) -> np.ndarray:
    """Values of func on [lo, hi) as int64, via exact-exponent slice updates.

    For h(1) = 1 only prime powers p^a with a >= 2 matter (primes <= sqrt).
    For support_min >= 2 the gate is applied through a powerful-part check:
    n qualifies iff the product of its prime powers with exponent >=
    support_min reconstructs n.  For h(1) not in {0, 1} every prime matters
    and the full prime list is used.
    """
    size = hi - lo
    val = np.ones(size, dtype=np.int64)
    h1 = func.h(1)

    def exact_slices(p: int, a_start: int, plist_cap: int | None = None):
        pa = p ** a_start
        a = a_start
        while pa < hi:
            start = ((lo + pa - 1) // pa) * pa
            if start < hi:
                ix = np.arange(start, hi, pa)
                keep = (ix // pa) % p != 0
                yield a, ix[keep] - lo
            a += 1
            pa *= p

    if h1 == 1 or support_min >= 2:
        # multiply h(a) for a >= 2 (h(1) treated as 1; gate fixes the rest)
        for p in primes_small:
            p = int(p)
            if p * p >= hi:
                break
            for a, ixs in exact_slices(p, 2):
                ha = func.h(a)
                if ha != 1:
                    val[ixs] *= ha
        if support_min >= 2:
            fullpart = np.ones(size, dtype=np.int64)
            for p in primes_small:
                p = int(p)
                if p ** support_min >= hi:
                    break
                for a, ixs in exact_slices(p, support_min):
                    fullpart[ixs] *= p ** a
            idx = np.arange(lo, hi, dtype=np.int64)
            gate = fullpart == idx
            if lo == 0:
                gate[0] = False  # n = 0 never contributes
                if size > 1:
                    gate[1] = True  # n = 1: empty product
            elif lo == 1:
                gate[0] = True
            val *= gate
        elif lo == 0:
            val[0] = 0
    else:
        # general path: every exact prime power multiplies, all primes needed
        assert primes_all is not None
        for p in primes_all:
            p = int(p)
            if p >= hi:
                break
            for a, ixs in exact_slices(p, 1):
                ha = func.h(a)
                if ha != 1:
                    val[ixs] *= ha
        if lo == 0:
            val[0] = 0
            if size > 1:
                val[1] = 1
    return val


def summatory(func: ExponentFunction | str, x: int,
              checkpoints: Iterable[int] | None = None,
              memory_cap: int = 2 ** 27,
              segment_size: int | None = None) -> SummatoryTable:
    """Exact S(x') at each checkpoint x' <= x.

    Segments of at most memory_cap entries (or segment_size when given) are
    processed left to right; per-segment partial sums are int64-safe because
    every per-n value here is tiny, and the running total is a Python int.
    """
    if isinstance(func, str):
        func = function_by_id(func)
    if x < 1:
        raise DomainError(f"summatory needs x >= 1, got {x}")
    cps = sorted(set(checkpoints)) if checkpoints is not None else [x]
    if any(c < 1 or c > x for c in cps):
        raise DomainError("checkpoints must lie in [1, x]")
    if cps[-1] != x:
        cps.append(x)

    seg = segment_size if segment_size is not None else memory_cap
    support_min = func.min_support_exponent()
    h1 = func.h(1)
    primes_small = _primes_upto(isqrt(x) + 1)
    primes_all = _primes_upto(x) if (h1 not in (0, 1)) else None

    table = SummatoryTable(function_id=func.name)
    total = 0
    cp_iter = iter(cps)
    next_cp = next(cp_iter)
    lo = 0
    while lo <= x:
        hi = min(lo + seg, x + 1)
        vals = _segment_values(func, lo, hi, primes_small, primes_all, support_min)
        # absorb checkpoints that fall inside [lo, hi)
        base = lo
        while next_cp is not None and next_cp < hi:
            total += int(vals[base - lo : next_cp - lo + 1].sum(dtype=object))
            base = next_cp + 1
            table.checkpoints.append((next_cp, total))
            next_cp = next(cp_iter, None)
        if base < hi:
            total += int(vals[base - lo : hi - lo].sum(dtype=object))
        lo = hi
        if next_cp is None:
            break
    table.validate()
    return table


def coefficient_list(func: ExponentFunction | str, n_max: int,
                     memory_cap: int = 2 ** 27) -> list[int]:
    """Per-n values as a 1-based list (index 0 unused, set to 0)."""
    if isinstance(func, str):
        func = function_by_id(func)
    if n_max + 1 > memory_cap:
        raise CapacityError(f"coefficient list of {n_max + 1} entries exceeds cap")
    primes_small = _primes_upto(isqrt(n_max) + 1)
    h1 = func.h(1)
    primes_all = _primes_upto(n_max) if h1 not in (0, 1) else None
    vals = _segment_values(func, 0, n_max + 1, primes_small, primes_all,
                           func.min_support_exponent())
    return [int(v) for v in vals]


# ---------------------------------------------------------------------------
# Dirichlet convolution
# ---------------------------------------------------------------------------

def dirichlet_convolve(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """(f*g)(n) = sum_{d|n} f(d) g(n/d), 1-based lists of equal length."""
    if len(f) != len(g):
        raise DomainError("dirichlet_convolve needs equal-length lists")
    n_max = len(f) - 1
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        fd = f[d]
        if fd == 0:
            continue
        for m in range(d, n_max + 1, d):
            out[m] += fd * g[m // d]
    return out


# ---------------------------------------------------------------------------
# maximal order scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaxOrderReport:
    x: int
    n_star: int
    max_value: int
    normalized_exponent: float
    lambda_sup_m: int          # argmax of log lambda(m)/m over m <= x
    lambda_sup_value: float    # log lambda(m*)/m*


def lambda_sup_scan(m_max: int) -> tuple[int, float]:
    """Smallest maximizer of log lambda(m)/m over 2 <= m <= m_max.

    Comparison is exact: log lam(a)/a <= log lam(b)/b iff lam(a)^b <= lam(b)^a.
    """
    best_m, best_lam = 2, 1
    for m in range(3, m_max + 1):
        lm = _lambda_of(m)
        if lm ** best_m > best_lam ** m:
            best_m, best_lam = m, lm
    return best_m, log(best_lam) / best_m


def max_order_scan(x: int, memory_cap: int = 2 ** 27,
                   segment_size: int | None = None) -> MaxOrderReport:
    """Max of the exponential Carmichael function on [2, x] and its
    normalized exponent log F(n*) * loglog n* / log n* at the smallest
    maximizer n*."""
    if x < 16:
        raise DomainError("max_order_scan needs x >= 16 so loglog n* > 0")
    func = lambda_e_function(1)
    primes_small = _primes_upto(isqrt(x) + 1)
    seg = segment_size or min(memory_cap, x + 1)
    best_v, best_n = 0, 0
    lo = 2
    while lo <= x:
        hi = min(lo + seg, x + 1)
        vals = _segment_values(func, lo, hi, primes_small, None, 1)
        i = int(np.argmax(vals))
        if int(vals[i]) > best_v:
            best_v, best_n = int(vals[i]), lo + i
        lo = hi
    norm = log(best_v) * log(log(best_n)) / log(best_n) if best_v > 1 else 0.0
    m_star, sup_val = lambda_sup_scan(min(x, 10_000))
    return MaxOrderReport(x=x, n_star=best_n, max_value=best_v,
                          normalized_exponent=norm,
                          lambda_sup_m=m_star, lambda_sup_value=sup_val)
