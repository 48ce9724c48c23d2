"""Order and moment bounds for zeta on vertical lines, and the C4 solvers.

Everything rational is exact.  The m(sigma) table is the eight-segment
lower bound; the pointwise model improves it for sigma >= 5/8 using
exponent-pair data.  C4 is the root of the Holder feasibility equation
2/m(4C) + 4/m(5C) + 2/m(6C) + 6/m(7C) = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import mpmath
from mpmath import mp

from .arith import DomainError
from .pairs import (
    FractionalObjective,
    LinearConstraint,
    OptimizationResult,
    mu_bound,
    optimize_fractional,
)
from .series import ZetaProductSpec, Z_SPECS

MU_HALF = Fraction(32, 205)
MU_3_5 = Fraction(1409, 12170)

MODELS = ("convexity", "refined-3/5")


# ---------------------------------------------------------------------------
# pointwise growth bound mu_hat
# ---------------------------------------------------------------------------

def mu_hat(sigma: Fraction, model: str = "convexity",
           eta: Fraction = Fraction(1, 100)) -> Fraction:
    """Exponent bound on zeta growth at real part sigma, exact rational.

    Log-power factors near sigma = 1 are absorbed into epsilon, so the
    rational formula continues through the eta-band.  For sigma < 1/2 both
    models fall back to the reflected convexity segments (used only by the
    monotone envelope in the pointwise moment machinery).
    """
    sigma = Fraction(sigma)
    if model not in MODELS:
        raise DomainError(f"unknown model {model!r}; choose from {MODELS}")
    if sigma >= 1:
        return Fraction(0)
    if sigma < 0:
        return Fraction(1, 2) - sigma
    if sigma <= Fraction(1, 2):
        return Fraction(1, 2) - (1 - 2 * MU_HALF) * sigma
    if model == "convexity":
        return 2 * MU_HALF * (1 - sigma)
    if sigma <= Fraction(3, 5):
        return 10 * (MU_3_5 - MU_HALF) * sigma + (6 * MU_HALF - 5 * MU_3_5)
    return Fraction(5, 2) * MU_3_5 * (1 - sigma)


# ---------------------------------------------------------------------------
# the eight-segment moment table
# ---------------------------------------------------------------------------

# boundary between segments 7 and 8: the positive root of this quadratic,
# 0.91591...; sign of the quadratic decides the segment exactly for
# rational sigma
_SEG78_QUAD = (376, -542, 181)

M_TABLE_SEGMENTS = [
    (Fraction(1, 2), Fraction(5, 8), "4/(3-4s)"),
    (Fraction(5, 8), Fraction(35, 54), "10/(5-6s)"),
    (Fraction(35, 54), Fraction(41, 60), "19/(6-6s)"),
    (Fraction(41, 60), Fraction(3, 4), "2112/(859-948s)"),
    (Fraction(3, 4), Fraction(5, 6), "12408/(4537-4890s)"),
    (Fraction(5, 6), Fraction(7, 8), "4324/(1031-1044s)"),
]


def seg78_breakpoint(tol: float = 1e-12) -> tuple[Fraction, Fraction]:
    """Bracket of the segment-7/8 boundary, refined to tol by bisection."""
    a, b, c = _SEG78_QUAD

    def quad(x: Fraction) -> Fraction:
        return a * x * x + b * x + c

    lo, hi = Fraction(9, 10), Fraction(95, 100)
    assert quad(lo) < 0 < quad(hi)
    while hi - lo > Fraction(tol).limit_denominator(10 ** 15):
        mid = (lo + hi) / 2
        if quad(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def m_table(sigma: Fraction) -> Fraction:
    """Lower bound for the moment order m(sigma), sigma in [1/2, 1)."""
    sigma = Fraction(sigma)
    if not Fraction(1, 2) <= sigma < 1:
        raise DomainError(f"m_table needs sigma in [1/2, 1), got {sigma}")
    if sigma <= Fraction(5, 8):
        return 4 / (3 - 4 * sigma)
    if sigma <= Fraction(35, 54):
        return 10 / (5 - 6 * sigma)
    if sigma <= Fraction(41, 60):
        return 19 / (6 - 6 * sigma)
    if sigma <= Fraction(3, 4):
        return 2112 / (859 - 948 * sigma)
    if sigma <= Fraction(5, 6):
        return 12408 / (4537 - 4890 * sigma)
    if sigma < Fraction(7, 8):
        return 4324 / (1031 - 1044 * sigma)
    a, b, c = _SEG78_QUAD
    if a * sigma * sigma + b * sigma + c < 0:
        return 98 / (31 - 32 * sigma)
    return (24 * sigma - 9) / ((4 * sigma - 1) * (1 - sigma))


@dataclass(frozen=True)
class Th3MomentReport:
    m_half: Fraction
    m_two_thirds: Fraction
    m_five_sixths: Fraction

    @property
    def ok(self) -> bool:
        return (self.m_half >= 4 and self.m_two_thirds >= 8
                and self.m_five_sixths >= 16)


def moment_requirements_th3() -> Th3MomentReport:
    """The moment orders the third asymptotic theorem's proof consumes."""
    report = Th3MomentReport(
        m_half=m_table(Fraction(1, 2)),
        m_two_thirds=m_table(Fraction(2, 3)),
        m_five_sixths=m_table(Fraction(5, 6)),
    )
    if not report.ok:
        raise DomainError(f"moment table defect: {report}")
    return report


# ---------------------------------------------------------------------------
# growth exponents for zeta products and the contour threshold
# ---------------------------------------------------------------------------

def alpha_exponent(spec: ZetaProductSpec, sigma: Fraction,
                   model: str = "convexity") -> Fraction:
    """Exponent bound for the product prod zeta^{e_j}(a_j(sigma + ix))."""
    sigma = Fraction(sigma)
    if sigma <= 0:
        raise DomainError("alpha_exponent needs sigma > 0")
    return sum(e * mu_hat(a * sigma, model) for a, e in spec.factors)


@dataclass(frozen=True)
class ContourThreshold:
    threshold: Fraction
    unconstrained: bool
    slope: Fraction
    intercept: Fraction


def contour_threshold(spec: ZetaProductSpec, sigma_hi: Fraction,
                      model: str = "refined-3/5",
                      sigma_lo: Fraction = Fraction(1, 8)) -> ContourThreshold:
    """Least C with alpha(sigma) + sigma - 1 <= C on [C, sigma_hi].

    Requires alpha affine and decreasing on [sigma_lo, sigma_hi] (verified by
    exact three-point collinearity); then the condition reduces to
    alpha(C) <= 1 and the answer is the root of alpha(C) = 1, or sigma_lo
    when even alpha(sigma_lo) <= 1 (reported as unconstrained).
    """
    sigma_lo, sigma_hi = Fraction(sigma_lo), Fraction(sigma_hi)
    if sigma_lo >= sigma_hi:
        raise DomainError("need sigma_lo < sigma_hi")
    mid = (sigma_lo + sigma_hi) / 2
    quarter = (3 * sigma_lo + sigma_hi) / 4
    a_lo = alpha_exponent(spec, sigma_lo, model)
    a_mid = alpha_exponent(spec, mid, model)
    a_hi = alpha_exponent(spec, sigma_hi, model)
    a_q = alpha_exponent(spec, quarter, model)
    slope = (a_hi - a_lo) / (sigma_hi - sigma_lo)
    intercept = a_lo - slope * sigma_lo
    for s, v in ((mid, a_mid), (quarter, a_q)):
        if slope * s + intercept != v:
            raise DomainError(
                f"alpha is not affine on [{sigma_lo}, {sigma_hi}] under "
                f"{model}: deviation at sigma={s}")
    if slope >= 0:
        raise DomainError("alpha must be decreasing on the segment")
    if a_lo <= 1:
        return ContourThreshold(sigma_lo, True, slope, intercept)
    root = (1 - intercept) / slope
    if root > sigma_hi:
        raise DomainError("alpha stays above 1 on the whole segment")
    return ContourThreshold(root, False, slope, intercept)


# ---------------------------------------------------------------------------
# Holder feasibility and C4
# ---------------------------------------------------------------------------

HOLDER_MULTIPLIERS = (4, 5, 6, 7)
HOLDER_EXPONENT_PARTS = (2, 4, 2, 6)


@dataclass
class MomentModel:
    """m(sigma) source: the table, or the table improved pointwise.

    The pointwise improvement applies for sigma >= 5/8; both are valid
    lower bounds so the hybrid takes the max.  Values are memoized on a
    sigma grid (step 1e-4) and queries between grid points use the min of
    the bracketing cells, which keeps the interpolation a lower bound.
    """

    kind: str = "table"
    depth: int = 6
    grid_step: Fraction = Fraction(1, 10_000)
    _memo: dict = field(default_factory=dict)

    def m(self, sigma: Fraction) -> Fraction:
        sigma = Fraction(sigma)
        if self.kind == "table":
            return m_table(sigma)
        if sigma < Fraction(5, 8):
            return m_table(sigma)
        i = int(sigma / self.grid_step)
        lo = self._cell(i)
        if i * self.grid_step == sigma:
            return lo
        return min(lo, self._cell(i + 1))

    def _cell(self, i: int) -> Fraction:
        if i not in self._memo:
            sigma = i * self.grid_step
            value = m_table(sigma)
            if sigma >= Fraction(5, 8) and sigma < 1:
                value = max(value, pointwise_m(sigma, self.depth).value)
            self._memo[i] = value
        return self._memo[i]


def holder_deficit(C, model: MomentModel | None = None) -> Fraction:
    """2/m(4C) + 4/m(5C) + 2/m(6C) + 6/m(7C) - 1; positive below the root."""
    model = model or MomentModel()
    C = Fraction(C)
    total = Fraction(-1)
    for mult, part in zip(HOLDER_MULTIPLIERS, HOLDER_EXPONENT_PARTS):
        arg = mult * C
        if arg == 1:
            continue  # m(sigma) -> infinity as sigma -> 1: zero contribution
        if not Fraction(1, 2) <= arg < 1:
            raise DomainError(
                f"holder_deficit: argument {mult}*C = {arg} outside [1/2, 1]")
        total += Fraction(part) / model.m(arg)
    return total


def holder_q_values(C, model: MomentModel | None = None) -> list[Fraction | None]:
    model = model or MomentModel()
    C = Fraction(C)
    return [None if mult * C == 1 else model.m(mult * C) / part
            for mult, part in zip(HOLDER_MULTIPLIERS, HOLDER_EXPONENT_PARTS)]


@dataclass
class C4Result:
    model: str
    root: mpmath.mpf
    root_fraction: Fraction
    deficit_at_root: float
    active_segments: list[str]
    closed_form: tuple[int, int, int] | None  # (p, D, q): (p + sqrt(D))/q
    closed_form_match: bool | None
    contour: ContourThreshold
    q_values: list[Fraction]
    provenance: dict

    def as_json_dict(self) -> dict:
        return {
            "model": self.model,
            "C": mpmath.nstr(self.root, 20),
            "closed_form_match": self.closed_form_match,
            "contour_threshold": str(self.contour.threshold),
            "active_segments": self.active_segments,
            "deficit_at_C": f"{self.deficit_at_root:.3e}",
            "q_values": [str(q) for q in self.q_values],
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json_dict(), indent=2)


def _active_segment_formulas(C: Fraction):
    """Symbolic (numerator, affine-denominator) data of the table segments
    active at 4C, 5C, 6C, 7C; the last may be the rational segment 8."""
    segs = []
    for mult in HOLDER_MULTIPLIERS:
        arg = mult * C
        if arg <= Fraction(5, 8):
            segs.append(("4/(3-4s)", Fraction(4), (Fraction(3), Fraction(-4))))
        elif arg <= Fraction(35, 54):
            segs.append(("10/(5-6s)", Fraction(10), (Fraction(5), Fraction(-6))))
        elif arg <= Fraction(41, 60):
            segs.append(("19/(6-6s)", Fraction(19), (Fraction(6), Fraction(-6))))
        elif arg <= Fraction(3, 4):
            segs.append(("2112/(859-948s)", Fraction(2112), (Fraction(859), Fraction(-948))))
        elif arg <= Fraction(5, 6):
            segs.append(("12408/(4537-4890s)", Fraction(12408), (Fraction(4537), Fraction(-4890))))
        elif arg < Fraction(7, 8):
            segs.append(("4324/(1031-1044s)", Fraction(4324), (Fraction(1031), Fraction(-1044))))
        else:
            a, b, c = _SEG78_QUAD
            if a * arg * arg + b * arg + c < 0:
                segs.append(("98/(31-32s)", Fraction(98), (Fraction(31), Fraction(-32))))
            else:
                segs.append(("(24s-9)/((4s-1)(1-s))", None, None))
    return segs


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _table_quadratic(C0: Fraction):
    """Clear denominators in the deficit at the active segments around C0;
    returns exact polynomial coefficients in C (degree 2 expected)."""
    segs = _active_segment_formulas(C0)
    # deficit(C) = sum part * den_k(C)/num_k - 1 where m = num/den(affine),
    # except a segment-8 entry contributing part*(4mC-1)(1-mC)/(24mC-9)
    affine_sum = [Fraction(-1)]  # polynomial in C
    rational_terms = []  # (part, mult) for segment-8 entries
    for (mult, part), (name, num, den) in zip(
            zip(HOLDER_MULTIPLIERS, HOLDER_EXPONENT_PARTS), segs):
        if num is not None:
            c0, c1 = den
            term = [part * c0 / num, part * c1 * mult / num]
            affine_sum = [a + (term[i] if i < len(term) else 0)
                          for i, a in enumerate(affine_sum + [Fraction(0)])]
        else:
            rational_terms.append((part, mult))
    poly = affine_sum
    denom_poly = [Fraction(1)]
    for part, mult in rational_terms:
        m = Fraction(mult)
        # part/m(mC) = part (4mC - 1)(1 - mC)/(24mC - 9)
        num_k = [-Fraction(part), part * 5 * m, -part * 4 * m * m]
        den_k = [Fraction(-9), 24 * m]
        poly = _poly_mul(poly, den_k)
        extra = _poly_mul(num_k, denom_poly)
        if len(extra) > len(poly):
            poly = poly + [Fraction(0)] * (len(extra) - len(poly))
        for i, v in enumerate(extra):
            poly[i] += v
        denom_poly = _poly_mul(denom_poly, den_k)
    while poly and poly[-1] == 0:
        poly.pop()
    return poly, [s[0] for s in segs]


def solve_C4(model: str = "table", depth: int = 6, prec: int = 192) -> C4Result:
    """Bisection root of the Holder deficit on (1/8, 1/7), plus the exact
    symbolic quadratic when the table model is active."""
    if model == "table":
        mm = MomentModel(kind="table")
    elif model == "pointwise":
        mm = MomentModel(kind="pointwise", depth=depth)
    else:
        raise DomainError(f"unknown C4 model {model!r}")
    lo, hi = Fraction(1, 8), Fraction(1, 7)
    d_lo, d_hi = holder_deficit(lo, mm), holder_deficit(hi, mm)
    if not (d_lo > 0 > d_hi):
        raise DomainError(
            f"bracketing failure: deficit({lo}) = {float(d_lo):.4e}, "
            f"deficit({hi}) = {float(d_hi):.4e}")
    while hi - lo > Fraction(1, 10 ** 13):
        mid = (lo + hi) / 2
        if holder_deficit(mid, mm) > 0:
            lo = mid
        else:
            hi = mid
    root_frac = (lo + hi) / 2
    mp.prec = prec
    root = mpmath.mpf(root_frac.numerator) / root_frac.denominator
    closed_form = None
    match = None
    segments = [s[0] for s in _active_segment_formulas(root_frac)]
    provenance: dict = {"model": model}
    if model == "table":
        poly, segments = _table_quadratic(root_frac)
        provenance["quadratic"] = [str(c) for c in poly]
        if len(poly) == 3:
            c0, c1, c2 = poly
            den = abs(c0.denominator * c1.denominator * c2.denominator)
            A, B, Cc = (int(c2 * den), int(c1 * den), int(c0 * den))
            disc = B * B - 4 * A * Cc
            mp.prec = prec
            sqrt_disc = mpmath.sqrt(mpmath.mpf(disc))
            for sign in (+1, -1):
                cand = (-B + sign * sqrt_disc) / (2 * A)
                if 1 / mpmath.mpf(8) < cand < 1 / mpmath.mpf(7):
                    root = cand
                    # representation (p + sqrt(D))/q, q of either sign
                    closed_form = (-B, disc, 2 * A) if sign > 0 else (B, disc, -2 * A)
            provenance["discriminant"] = str(disc)
    else:
        provenance.update({
            "depth": depth,
            "m_at_root": {str(m_): str(mm.m(m_ * root_frac))
                          for m_ in HOLDER_MULTIPLIERS},
        })
    contour = contour_threshold(Z_SPECS[4], Fraction(1, 7), "refined-3/5")
    deficit_root = float(holder_deficit(root_frac, mm))
    result = C4Result(model=model, root=root, root_fraction=root_frac,
                      deficit_at_root=deficit_root,
                      active_segments=segments, closed_form=closed_form,
                      closed_form_match=match, contour=contour,
                      q_values=holder_q_values(root_frac, mm),
                      provenance=provenance)
    if closed_form is not None:
        p_, D_, q_ = closed_form
        ref = (mpmath.mpf(p_) + mpmath.sqrt(mpmath.mpf(D_))) / q_
        result.closed_form_match = abs(ref - root) < mpmath.mpf(2) ** (-(prec - 16))
    return result


# ---------------------------------------------------------------------------
# pointwise moment bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointwiseM:
    sigma: Fraction
    value: Fraction
    m1: Fraction
    m2: Fraction | None
    two_f: Fraction
    mu_sigma: Fraction
    theta: Fraction
    c_at_theta: Fraction
    alpha2_at_optimum: Fraction | None
    alpha2_constraint_tight: bool | None


def _c_envelope_steps(depth: int, step: Fraction = Fraction(1, 200)
                      ) -> list[tuple[Fraction, Fraction]]:
    """Monotone (nonincreasing) staircase c(theta) >= mu(theta) for
    theta >= 1/2 from exponent-pair bounds; (theta_j, value on [theta_j,
    theta_{j+1}))."""
    out = []
    best = None
    t = Fraction(1, 2)
    while t < 1:
        b = mu_bound(t, depth).value
        best = b if best is None or b < best else best
        out.append((t, best))
        t += step
    return out


_ENVELOPE_CACHE: dict = {}


def _c_of_theta(depth: int):
    """Piecewise description of c(theta): affine pieces below 1/2, staircase
    above; returns (pieces, steps) where pieces are (lo, hi, slope, icept)."""
    if depth in _ENVELOPE_CACHE:
        return _ENVELOPE_CACHE[depth]
    pieces = [
        (Fraction(-100), Fraction(0), Fraction(-1), Fraction(1, 2)),
        (Fraction(0), Fraction(1, 2), -(1 - 2 * MU_HALF), Fraction(1, 2)),
    ]
    steps = _c_envelope_steps(depth)
    _ENVELOPE_CACHE[depth] = (pieces, steps)
    return pieces, steps


def _solve_theta(sigma: Fraction, depth: int) -> tuple[Fraction, Fraction]:
    """Exact root of 2 c(theta) + 1 + theta - 2(1 + c(theta)) sigma = 0.

    The left side is increasing in theta (affine pieces have slope
    1 - |c'| 2(1-sigma) > 0 for sigma >= 5/8; on staircase runs c is
    constant), so the first sign change pins the root.
    """
    def lhs_with_c(c: Fraction, theta: Fraction) -> Fraction:
        return 2 * c * (1 - sigma) + 1 + theta - 2 * sigma

    pieces, steps = _c_of_theta(depth)
    for lo, hi, slope, icept in pieces:
        # c = slope*theta + icept on [lo, hi): solve linear equation
        denom = 1 + 2 * slope * (1 - sigma)
        if denom <= 0:
            continue
        theta = (2 * sigma - 1 - 2 * icept * (1 - sigma)) / denom
        if lo <= theta < hi:
            return theta, slope * theta + icept
    for i, (t_j, c_j) in enumerate(steps):
        t_next = steps[i + 1][0] if i + 1 < len(steps) else Fraction(1)
        theta = 2 * sigma - 1 - 2 * c_j * (1 - sigma)
        if t_j <= theta < t_next:
            return theta, c_j
        if lhs_with_c(c_j, t_j) >= 0:
            # root fell in the jump at t_j: the staircase is discontinuous,
            # use the left limit point (sound: c there still dominates mu)
            return t_j, c_j
    raise DomainError(
        f"theta bisection failed to bracket for sigma={sigma}: "
        f"lhs at 1/2: {float(lhs_with_c(steps[0][1], Fraction(1, 2))):.4f}, "
        f"lhs at {steps[-1][0]}: {float(lhs_with_c(steps[-1][1], steps[-1][0])):.4f}")


def pointwise_m(sigma: Fraction, depth: int = 6) -> PointwiseM:
    """min(m1, m2, 2 f(sigma)) for sigma >= 5/8 from exponent-pair data.

    The alpha2 <= 1 constraint on the m2 optimization is enforced for every
    sigma (not only sigma < 2/3); whether it is tight at the optimum is
    recorded in the result.
    """
    sigma = Fraction(sigma)
    if not Fraction(5, 8) <= sigma < 1:
        raise DomainError(f"pointwise_m needs sigma in [5/8, 1), got {sigma}")
    mu_res = mu_bound(sigma, depth)
    mu = mu_res.value
    alpha1 = (4 - 4 * sigma) / (1 + 2 * sigma)
    beta1 = Fraction(-12) / (1 + 2 * sigma)
    m1 = (1 - alpha1) / mu - beta1

    # m2(k, l) = (1 - alpha2)/mu - beta2 with
    # alpha2 = 4(1-sigma)(k+l)/den, beta2 = -4(1+2k+2l)/den,
    # den = (2+4l)sigma - 1 + 2k - 2l > 0 on the region for sigma > 1/2
    a = 4 * sigma - 2 + 8 * mu
    b = 8 * sigma - 6 + 8 * mu
    c = 2 * sigma - 1 + 4 * mu
    d = 2 * mu
    e = (4 * sigma - 2) * mu
    f = (2 * sigma - 1) * mu
    obj = FractionalObjective(a, b, c, d, e, f)
    constraint = LinearConstraint(4 * sigma - 2, 8 * sigma - 6, 2 * sigma - 1)
    m2_res = optimize_fractional(obj, [constraint], depth)
    m2 = m2_res.value if m2_res.feasible else None
    alpha2_opt = None
    tight = None
    if m2_res.feasible:
        k, l = m2_res.pair.k, m2_res.pair.l
        den = (2 + 4 * l) * sigma - 1 + 2 * k - 2 * l
        alpha2_opt = 4 * (1 - sigma) * (k + l) / den
        tight = alpha2_opt == 1

    theta, c_theta = _solve_theta(sigma, depth)
    two_f = 4 * (1 + c_theta) / c_theta

    candidates = [m1, two_f] + ([m2] if m2 is not None else [])
    value = min(candidates)
    return PointwiseM(sigma=sigma, value=value, m1=m1, m2=m2, two_f=two_f,
                      mu_sigma=mu, theta=theta, c_at_theta=c_theta,
                      alpha2_at_optimum=alpha2_opt,
                      alpha2_constraint_tight=tight)
