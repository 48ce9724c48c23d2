"""Exact exponent-pair calculus.

Pairs live in the region 0 <= k <= 1/2 <= l <= 1.  New pairs arise from the
A- and B-processes applied to the trivial pair (0, 1) and to Huxley's pair
(32/205, 269/410); the latter carries an implicit epsilon which is
propagated as a flag on every derived pair.  All arithmetic is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .arith import DomainError

HUXLEY_2005 = (Fraction(32, 205), Fraction(269, 410))
TRIVIAL = (Fraction(0), Fraction(1))
SEEDS = {"trivial": TRIVIAL, "H2005": HUXLEY_2005}
SEED_EPS = {"trivial": False, "H2005": True}


@dataclass(frozen=True)
class ExponentPair:
    k: Fraction
    l: Fraction
    word: str = ""
    seed: str = "trivial"
    eps_carrying: bool = False

    def __post_init__(self) -> None:
        if not (0 <= self.k <= Fraction(1, 2) <= self.l <= 1):
            raise DomainError(f"({self.k}, {self.l}) outside 0<=k<=1/2<=l<=1")
        if self.k > self.l:
            raise DomainError("k <= l required")

    def as_json_dict(self) -> dict:
        return {"k": str(self.k), "l": str(self.l), "word": self.word,
                "seed": self.seed, "eps": self.eps_carrying}


def seed_pair(name: str) -> ExponentPair:
    if name not in SEEDS:
        raise DomainError(f"unknown seed {name!r}; choose from {sorted(SEEDS)}")
    k, l = SEEDS[name]
    return ExponentPair(k, l, "", name, SEED_EPS[name])


def process_A(p: ExponentPair) -> ExponentPair:
    """A(k, l) = (k/(2k+2), (k+l+1)/(2k+2))."""
    den = 2 * p.k + 2
    return ExponentPair(p.k / den, (p.k + p.l + 1) / den,
                        "A" + p.word, p.seed, p.eps_carrying)


def process_B(p: ExponentPair) -> ExponentPair:
    """B(k, l) = (l - 1/2, k + 1/2); needs l >= 1/2 so the image is valid."""
    if p.l < Fraction(1, 2):
        raise DomainError("B-process needs l >= 1/2")
    return ExponentPair(p.l - Fraction(1, 2), p.k + Fraction(1, 2),
                        "B" + p.word, p.seed, p.eps_carrying)


def from_word(word: str, seed: str = "H2005") -> ExponentPair:
    """Apply a word over {A, B} right-to-left to a seed pair."""
    p = seed_pair(seed)
    for ch in reversed(word):
        if ch == "A":
            p = process_A(p)
        elif ch == "B":
            p = process_B(p)
        else:
            raise DomainError(f"word may contain only A and B, got {ch!r}")
    return p


def enumerate_pairs(depth: int, seeds: Sequence[str] = ("trivial", "H2005")
                    ) -> Iterator[ExponentPair]:
    """All pairs from words of length <= depth, breadth-first per seed.

    Duplicate (k, l) values are kept: the word is part of the identity and
    the deterministic tie-break needs every route.
    """
    for name in seeds:
        frontier = [seed_pair(name)]
        yield frontier[0]
        for _ in range(depth):
            nxt = []
            for p in frontier:
                pa = process_A(p)
                nxt.append(pa)
                yield pa
                if p.l >= Fraction(1, 2):
                    pb = process_B(p)
                    nxt.append(pb)
                    yield pb
            frontier = nxt


# ---------------------------------------------------------------------------
# fractional-linear optimization over the search tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearConstraint:
    """u*k + v*l + w >= 0."""

    u: Fraction
    v: Fraction
    w: Fraction

    def satisfied(self, p: ExponentPair) -> bool:
        return self.u * p.k + self.v * p.l + self.w >= 0


@dataclass(frozen=True)
class FractionalObjective:
    """(a k + b l + c) / (d k + e l + f), denominator positive on the region."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction

    def __post_init__(self) -> None:
        half, one = Fraction(1, 2), Fraction(1)
        corners = [(Fraction(0), half), (Fraction(0), one),
                   (half, half), (half, one)]
        for k, l in corners:
            if self.d * k + self.e * l + self.f <= 0:
                raise DomainError("objective denominator must be positive on "
                                  "the admissible region (corner check failed)")

    def value(self, p: ExponentPair) -> Fraction:
        num = self.a * p.k + self.b * p.l + self.c
        den = self.d * p.k + self.e * p.l + self.f
        return num / den

    def lower_bound_on_box(self, box: tuple[Fraction, Fraction, Fraction, Fraction]
                           ) -> Fraction:
        """Min over the box [klo,khi]x[llo,lhi]; attained at a corner because
        a fractional-linear function is monotone in each variable."""
        klo, khi, llo, lhi = box
        best = None
        for k in (klo, khi):
            for l in (llo, lhi):
                num = self.a * k + self.b * l + self.c
                den = self.d * k + self.e * l + self.f
                if den <= 0:
                    return Fraction(-10 ** 9)  # box leaves the safe region: no prune
                v = num / den
                if best is None or v < best:
                    best = v
        return best


@dataclass(frozen=True)
class OptimizationResult:
    value: Fraction
    pair: ExponentPair
    feasible: bool
    relaxation_bound: Fraction | None = None

    def as_json_dict(self) -> dict:
        out = {"value": str(self.value), "feasible": self.feasible}
        out.update(self.pair.as_json_dict())
        return out


def _box_image_A(box):
    """Interval image of the A-process; k' increases in k, l' increases in l
    and decreases in k."""
    klo, khi, llo, lhi = box
    k_lo = klo / (2 * klo + 2)
    k_hi = khi / (2 * khi + 2)
    l_lo = (khi + llo + 1) / (2 * khi + 2)
    l_hi = (klo + lhi + 1) / (2 * klo + 2)
    return (k_lo, k_hi, l_lo, l_hi)


def _box_image_B(box):
    klo, khi, llo, lhi = box
    return (llo - Fraction(1, 2), lhi - Fraction(1, 2),
            klo + Fraction(1, 2), khi + Fraction(1, 2))


def _reachable_box(box, depth: int):
    """Hull of everything reachable in <= depth steps from points in box."""
    hull = box
    frontier = [box]
    for _ in range(depth):
        nxt = []
        for b in frontier:
            for img in (_box_image_A(b), _box_image_B(b)):
                img = (max(img[0], Fraction(0)), min(img[1], Fraction(1, 2)),
                       max(img[2], Fraction(1, 2)), min(img[3], Fraction(1)))
                if img[0] > img[1] or img[2] > img[3]:
                    continue
                nxt.append(img)
                hull = (min(hull[0], img[0]), max(hull[1], img[1]),
                        min(hull[2], img[2]), max(hull[3], img[3]))
        frontier = nxt
        if len(frontier) > 64:  # hull stops improving long before this
            frontier = [hull]
    return hull


def _candidate_key(value: Fraction, p: ExponentPair):
    return (value, len(p.word), p.word, p.seed)


def optimize_fractional(obj: FractionalObjective,
                        constraints: Iterable[LinearConstraint] = (),
                        depth: int = 6,
                        seeds: Sequence[str] = ("trivial", "H2005"),
                        prune: bool = True) -> OptimizationResult:
    """Minimal objective value over all pairs within word length <= depth of
    the seeds that satisfy every constraint.

    Branch-and-bound with interval bounds on reachable subtrees; ties break
    deterministically by (shorter word, lexicographically smaller word, seed
    order).  depth < 3 always enumerates fully.
    """
    constraints = list(constraints)
    if depth < 0:
        raise DomainError("depth must be >= 0")
    best: tuple | None = None
    best_relax: Fraction | None = None

    def consider(p: ExponentPair):
        nonlocal best
        if all(c.satisfied(p) for c in constraints):
            key = _candidate_key(obj.value(p), p)
            if best is None or key < best:
                best = key

    if depth < 3 or not prune:
        for p in enumerate_pairs(depth, seeds):
            consider(p)
    else:
        for name in seeds:
            stack = [(seed_pair(name), depth)]
            while stack:
                p, budget = stack.pop()
                consider(p)
                if budget == 0:
                    continue
                box = (p.k, p.k, p.l, p.l)
                hull = _reachable_box(box, budget)
                bound = obj.lower_bound_on_box(hull)
                if best_relax is None or bound < best_relax:
                    best_relax = bound
                if best is not None and bound >= best[0]:
                    continue  # nothing below the incumbent in this subtree
                stack.append((process_A(p), budget - 1))
                if p.l >= Fraction(1, 2):
                    stack.append((process_B(p), budget - 1))

    if best is None:
        return OptimizationResult(value=Fraction(0), pair=seed_pair(seeds[0]),
                                  feasible=False, relaxation_bound=best_relax)
    value, _, word, seed = best
    return OptimizationResult(value=value, pair=from_word(word, seed),
                              feasible=True, relaxation_bound=best_relax)


# ---------------------------------------------------------------------------
# mu(sigma) bounds
# ---------------------------------------------------------------------------

def mu_bound(sigma: Fraction, depth: int = 6,
             seeds: Sequence[str] = ("trivial", "H2005")
             ) -> OptimizationResult:
    """Best bound (k+l-sigma)/2 on the zeta growth exponent at sigma, over
    pairs with l - k >= sigma (the hypothesis that makes the bound valid)."""
    sigma = Fraction(sigma)
    if not Fraction(1, 2) <= sigma <= 1:
        raise DomainError("mu_bound needs sigma in [1/2, 1]")
    obj = FractionalObjective(Fraction(1), Fraction(1), -sigma,
                              Fraction(0), Fraction(0), Fraction(2))
    constraint = LinearConstraint(Fraction(-1), Fraction(1), -sigma)
    return optimize_fractional(obj, [constraint], depth, seeds)


# ---------------------------------------------------------------------------
# four-dimensional divisor error-term conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KratzelReport:
    a: tuple[int, int, int, int]
    pair: ExponentPair
    c1: bool
    c2: bool
    c31: bool
    c32: bool
    condition_32_reading: str

    @property
    def passes(self) -> bool:
        return self.c1 and self.c2 and (self.c31 or self.c32)

    def as_json_dict(self) -> dict:
        return {"a": list(self.a), "c1": self.c1, "c2": self.c2,
                "c31": self.c31, "c32": self.c32, "pass": self.passes,
                "condition_32_reading": self.condition_32_reading,
                **self.pair.as_json_dict()}


def kratzel_check(a: Sequence[int], p: ExponentPair,
                  condition_32_reading: str = "2l-2k-1") -> KratzelReport:
    """Exact-rational check of the error-term conditions for the
    four-dimensional divisor sum with exponents a1 <= a2 <= a3 <= a4.

    condition_32_reading selects the middle coefficient of condition 3.2:
    the default "2l-2k-1"; "literal" uses the degenerate "2l-2l-1" = -1 for
    audit purposes.
    """
    a = tuple(int(x) for x in a)
    if len(a) != 4 or any(x < 1 for x in a):
        raise DomainError("need four exponents >= 1")
    if list(a) != sorted(a):
        raise DomainError("exponents must be nondecreasing")
    a1, a2, a3, a4 = a
    A4 = sum(a)
    k, l = p.k, p.l
    c1 = (k + l + 2) * a4 < (k + l) * a1 + A4
    c2 = 2 * (k + l + 1) * a1 <= (2 * k + 1) * (a2 + a3)
    c31 = (l * a1 <= k * a2) and ((k + l + 1) * a1 >= k * (a2 + a3))
    if condition_32_reading == "2l-2k-1":
        mid = 2 * l - 2 * k - 1
    elif condition_32_reading == "literal":
        mid = Fraction(-1)  # the degenerate printed form 2l-2l-1
    else:
        raise DomainError(f"unknown condition 3.2 reading {condition_32_reading!r}")
    c32 = (l * a1 >= k * a2) and (
        (l - k) * (2 * k + 1) * a3
        <= mid * (k + l + 1) * a1 + (2 * k * (k - l + 1) + 1) * a2
    )
    return KratzelReport(a, p, c1, c2, c31, c32, condition_32_reading)


def kratzel_exponent_formula(a: Sequence[int], p: ExponentPair) -> Fraction:
    """The raw error exponent (k+l+2) / ((k+l) a1 + A4), no condition guard.

    Useful for comparing pairs; only kratzel_exponent certifies validity.
    """
    a = tuple(int(x) for x in a)
    s = p.k + p.l
    return (s + 2) / (s * a[0] + sum(a))


def kratzel_exponent(a: Sequence[int], p: ExponentPair,
                     condition_32_reading: str = "2l-2k-1") -> Fraction:
    """(k+l+2) / ((k+l) a1 + A4); refuses when the conditions fail and checks
    the exponent is < 1/a4 (equivalent to condition 1)."""
    report = kratzel_check(a, p, condition_32_reading)
    if not report.passes:
        failing = [name for name, ok in
                   (("1", report.c1), ("2", report.c2),
                    ("3.1/3.2", report.c31 or report.c32)) if not ok]
        raise DomainError(f"conditions {', '.join(failing)} fail for a={a}, "
                          f"pair ({p.k}, {p.l})")
    a1, _, _, a4 = report.a
    s = p.k + p.l
    exponent = (s + 2) / (s * a1 + sum(report.a))
    assert exponent < Fraction(1, a4)
    return exponent


def pair_report_json(result: OptimizationResult | ExponentPair,
                     value: Fraction | None = None) -> str:
    if isinstance(result, OptimizationResult):
        return json.dumps(result.as_json_dict(), indent=2)
    out = result.as_json_dict()
    if value is not None:
        out["value"] = str(value)
    return json.dumps(out, indent=2)
