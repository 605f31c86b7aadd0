"""Single-attack success probability: a decreasing logistic curve over the
maturity scale, and the PERT uncertainty band built around it.

The curve is pinned so that a fully immature organization (x=0) sits at U and
a fully mature one (x=10) at L; its midpoint x0 is the complexity index, so
more intricate infrastructures shift the whole curve toward higher success
probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betaln

from .errors import DegenerateCurve, DegenerateDistribution, InputError

#: Curve defaults used by the CLI when the run configuration omits them.
DEFAULT_GROWTH_RATE = -2.0
DEFAULT_UPPER = 0.97
DEFAULT_LOWER = 0.03
#: Default half-width of the maturity band feeding the PERT triple.
DEFAULT_SPREAD = 1.0

#: Below this support width a PERT band collapses to a point mass.
POINT_MASS_EPS = 1e-12


def _sigmoid(z: float) -> float:
    # Stable on both tails.
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def _check_curve_inputs(growth_rate: float, upper: float, lower: float) -> None:
    if not growth_rate < 0:
        raise InputError(f"growth rate B must be negative, got {growth_rate}")
    if not (0.0 < lower < upper < 1.0):
        raise InputError(f"need 0 < L < U < 1, got L={lower}, U={upper}")


@dataclass(frozen=True)
class LogisticParams:
    """Decreasing logistic curve with asymptotes solved from its endpoint values.

    B is the (negative) growth rate, x0 the midpoint, U and L the curve
    values at x=0 and x=10. A and K are the solved lower asymptote and
    saturation level; they are derived quantities, use :func:`solve_asymptotes`
    rather than filling them by hand.
    """

    B: float
    x0: float
    U: float
    L: float
    A: float
    K: float

    def __post_init__(self) -> None:
        _check_curve_inputs(self.B, self.U, self.L)
        if abs(self.curve(0.0) - self.U) > 1e-12 or abs(self.curve(10.0) - self.L) > 1e-12:
            raise InputError("A and K do not satisfy the endpoint conditions f(0)=U, f(10)=L")

    def curve(self, x: float) -> float:
        """Raw curve value A + (K - A) / (1 + exp(-B (x - x0)))."""
        return self.A + (self.K - self.A) * _sigmoid(self.B * (x - self.x0))


def solve_asymptotes(
    growth_rate: float,
    midpoint: float,
    upper: float = DEFAULT_UPPER,
    lower: float = DEFAULT_LOWER,
) -> LogisticParams:
    """Solve the asymptotes A and K so the curve hits ``upper`` at x=0 and ``lower`` at x=10.

    The two endpoint conditions form a 2x2 linear system in A and (K - A);
    its solution is written out explicitly below.

    Raises:
        DegenerateCurve: the curve is numerically flat between x=0 and x=10,
            which makes the system singular.
    """
    _check_curve_inputs(growth_rate, upper, lower)
    g0 = _sigmoid(growth_rate * (0.0 - midpoint))
    g10 = _sigmoid(growth_rate * (10.0 - midpoint))
    denom = g0 - g10
    if abs(denom) < 1e-15:
        raise DegenerateCurve(
            f"curve is flat between x=0 and x=10 for B={growth_rate}, x0={midpoint}"
        )
    span = (upper - lower) / denom
    a = upper - span * g0
    return LogisticParams(B=growth_rate, x0=midpoint, U=upper, L=lower, A=a, K=a + span)


def success_probability(params: LogisticParams, x: float, w: float = 1.0) -> float:
    """Probability that a single attack succeeds against maturity x, scaled by w.

    w is the attacker-maturity weight from the attractiveness class; the
    result is strictly decreasing in x because B < 0.
    """
    if not 0.0 <= x <= 10.0:
        raise InputError(f"maturity index must be in [0, 10], got {x}")
    if not 0.0 < w <= 1.0:
        raise InputError(f"attacker weight must be in (0, 1], got {w}")
    return w * params.curve(x)


@dataclass(frozen=True)
class SuccessDistribution:
    """PERT band (p_m, p_star, p_M) for the single-attack success probability.

    alpha and beta are the shape parameters of the underlying scaled Beta;
    ``w`` records the attacker-maturity weight already applied to the triple.
    A zero-width band is stored as a point mass at p_star with alpha=beta=1.
    """

    p_m: float
    p_star: float
    p_M: float
    alpha: float
    beta: float
    w: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.p_m <= self.p_star <= self.p_M < 1.0):
            raise InputError(
                "need 0 < p_m <= p_star <= p_M < 1, got "
                f"({self.p_m}, {self.p_star}, {self.p_M})"
            )
        if not (self.alpha >= 1.0 and self.beta >= 1.0):
            raise InputError(f"shape parameters must be >= 1, got ({self.alpha}, {self.beta})")
        if not 0.0 < self.w <= 1.0:
            raise InputError(f"attacker weight must be in (0, 1], got {self.w}")

    @classmethod
    def from_triple(
        cls, p_m: float, p_star: float, p_M: float, w: float = 1.0
    ) -> "SuccessDistribution":
        """Build the band from its triple, deriving the canonical shapes."""
        if p_M - p_m < POINT_MASS_EPS:
            return cls.point_mass(p_star, w=w)
        span = p_M - p_m
        return cls(
            p_m=p_m,
            p_star=p_star,
            p_M=p_M,
            alpha=1.0 + 4.0 * (p_star - p_m) / span,
            beta=1.0 + 4.0 * (p_M - p_star) / span,
            w=w,
        )

    @classmethod
    def point_mass(cls, p: float, w: float = 1.0) -> "SuccessDistribution":
        return cls(p_m=p, p_star=p, p_M=p, alpha=1.0, beta=1.0, w=w)

    @property
    def is_point_mass(self) -> bool:
        return self.p_M - self.p_m < POINT_MASS_EPS

    @property
    def mean(self) -> float:
        """Closed-form PERT mean (p_m + 4 p_star + p_M) / 6."""
        return (self.p_m + 4.0 * self.p_star + self.p_M) / 6.0


def pert_from_maturity(
    params: LogisticParams,
    x: float,
    w: float = 1.0,
    q: float = DEFAULT_SPREAD,
) -> SuccessDistribution:
    """PERT band for the success probability around maturity x.

    The endpoints come from shifting the maturity by +-q, clamped to the
    0..10 scale; the curve is decreasing, so x+q yields the band minimum and
    x-q the maximum.
    """
    if not q > 0:
        raise InputError(f"spread q must be positive, got {q}")
    p_m = success_probability(params, min(x + q, 10.0), w)
    p_M = success_probability(params, max(x - q, 0.0), w)
    p_star = success_probability(params, x, w)
    return SuccessDistribution.from_triple(p_m, p_star, p_M, w=w)


def pert_pdf(dist: SuccessDistribution, p: float) -> float:
    """Density of the PERT band at p; zero outside [p_m, p_M].

    Evaluated through log-gamma so large shape sums cannot overflow.

    Raises:
        DegenerateDistribution: the band is a point mass and has no density.
    """
    if dist.is_point_mass:
        raise DegenerateDistribution(
            "point-mass band has no density; evaluate the integrand at p_star instead"
        )
    if p < dist.p_m or p > dist.p_M:
        return 0.0
    span = dist.p_M - dist.p_m
    log_pdf = -betaln(dist.alpha, dist.beta) - (dist.alpha + dist.beta - 1.0) * math.log(span)
    if dist.alpha != 1.0:
        if p == dist.p_m:
            return 0.0
        log_pdf += (dist.alpha - 1.0) * math.log(p - dist.p_m)
    if dist.beta != 1.0:
        if p == dist.p_M:
            return 0.0
        log_pdf += (dist.beta - 1.0) * math.log(dist.p_M - p)
    return math.exp(log_pdf)
