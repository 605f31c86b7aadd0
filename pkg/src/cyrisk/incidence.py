"""Attack attempts per period and the incident likelihoods they induce.

A period holds t slots with at most one attempt each, so the attempt count is
binomial with per-slot probability n_avg/t (a Poisson alternative is offered
for n_avg much smaller than t). Incident likelihoods mix a binomial or
geometric success kernel over the PERT uncertainty band of the single-attack
success probability:

* NO_CHANGE: the posture stays fixed all period, giving the full probability
  mass function of the incident count.
* CHANGE: the organization reassesses after the first incident, giving a
  single probability that at least that first incident happens.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Mapping

from scipy import integrate
from scipy.special import gammaln

from .errors import InputError, QuadratureFailure
from .success import SuccessDistribution, pert_pdf

QUAD_ABS_TOL = 1e-8
QUAD_REL_TOL = 1e-8

#: The sum over attempt counts stops once the remaining tail mass is below this.
TAIL_CUTOFF = 1e-12


class CountKind(Enum):
    BINOMIAL = "binomial"
    POISSON = "poisson"


class TailSide(Enum):
    AT_MOST = "at_most"
    AT_LEAST = "at_least"


class Regime(Enum):
    NO_CHANGE = "no_change"
    CHANGE = "change"


@dataclass(frozen=True)
class AttackCountModel:
    """Distribution of attack attempts over t slots with mean n_avg per period.

    n_avg is typically the attempt count observed in a previous period of the
    same length. delta_t records the slot length and is informational only.
    """

    t: int
    n_avg: float
    kind: CountKind = CountKind.BINOMIAL
    delta_t: float = 1.0

    def __post_init__(self) -> None:
        if self.t < 1:
            raise InputError(f"slot count t must be >= 1, got {self.t}")
        if not self.n_avg >= 0:
            raise InputError(f"n_avg must be >= 0, got {self.n_avg}")
        if self.kind is CountKind.BINOMIAL and self.n_avg > self.t:
            raise InputError(
                f"binomial model needs n_avg <= t, got n_avg={self.n_avg}, t={self.t}"
            )
        if not self.delta_t > 0:
            raise InputError(f"delta_t must be positive, got {self.delta_t}")

    @property
    def attempt_probability(self) -> float:
        """Per-slot probability of an attempt under the binomial parameterization."""
        return self.n_avg / self.t


def _log_binom(n: int, k: int) -> float:
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def attack_count_pmf(model: AttackCountModel, n: int) -> float:
    """Exact probability of seeing n attempts in the period, evaluated in log space."""
    if model.kind is CountKind.BINOMIAL:
        if not 0 <= n <= model.t:
            raise InputError(f"attempt count must be in [0, {model.t}], got {n}")
        p = model.attempt_probability
        if p == 0.0:
            return 1.0 if n == 0 else 0.0
        if p == 1.0:
            return 1.0 if n == model.t else 0.0
        return math.exp(
            _log_binom(model.t, n) + n * math.log(p) + (model.t - n) * math.log1p(-p)
        )
    if n < 0:
        raise InputError(f"attempt count must be >= 0, got {n}")
    lam = model.n_avg
    if lam == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(lam) - lam - float(gammaln(n + 1)))


def attack_count_tail(model: AttackCountModel, n: int, side: TailSide) -> float:
    """Pr(N <= n) or Pr(N >= n) by partial summation of the attempt PMF.

    The two sides are exact complements: AT_MOST(n) + AT_LEAST(n+1) == 1.
    """
    if side is TailSide.AT_LEAST:
        if n <= 0:
            return 1.0
        return 1.0 - attack_count_tail(model, n - 1, TailSide.AT_MOST)
    if n < 0:
        return 0.0
    upper = min(n, model.t) if model.kind is CountKind.BINOMIAL else n
    total = sum(attack_count_pmf(model, k) for k in range(upper + 1))
    return min(total, 1.0)


def _count_support(model: AttackCountModel) -> Iterator[tuple[int, float]]:
    """Yield (n, Pr(N=n)) until the remaining tail mass drops below TAIL_CUTOFF."""
    cumulative = 0.0
    n = 0
    while True:
        weight = attack_count_pmf(model, n)
        yield n, weight
        cumulative += weight
        n += 1
        if cumulative >= 1.0 - TAIL_CUTOFF:
            return
        if model.kind is CountKind.BINOMIAL and n > model.t:
            return


def _quad(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod integral of f over [lo, hi] with (value, error bound)."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(
                f, lo, hi, epsabs=QUAD_ABS_TOL, epsrel=QUAD_REL_TOL
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from None
    return value, abserr


def _conditional_success(
    dist: SuccessDistribution, n: int, s: int
) -> tuple[float, float]:
    if n < 0 or s < 0:
        raise InputError("attempt and incident counts must be non-negative")
    if s > n:
        return 0.0, 0.0
    if n == 0:
        return 1.0, 0.0  # zero attempts always yield zero incidents
    if dist.is_point_mass:
        p = dist.p_star
        log_pmf = _log_binom(n, s) + s * math.log(p) + (n - s) * math.log1p(-p)
        return math.exp(log_pmf), 0.0
    log_coef = _log_binom(n, s)

    def integrand(p: float) -> float:
        return math.exp(
            log_coef + s * math.log(p) + (n - s) * math.log1p(-p)
        ) * pert_pdf(dist, p)

    return _quad(integrand, dist.p_m, dist.p_M)


def conditional_success_pmf(dist: SuccessDistribution, n: int, s: int) -> float:
    """Pr(exactly s incidents | n attempts), mixing the binomial kernel over the band."""
    value, _ = _conditional_success(dist, n, s)
    return value


def _breach_probability(dist: SuccessDistribution, n: int) -> tuple[float, float]:
    """Pr(at least one of n attempts succeeds), mixed over the band.

    The geometric sum over the first-success slot telescopes to 1 - (1-p)^n,
    evaluated via expm1/log1p so tiny p keeps full precision.
    """
    if n == 0:
        return 0.0, 0.0
    if dist.is_point_mass:
        return -math.expm1(n * math.log1p(-dist.p_star)), 0.0

    def integrand(p: float) -> float:
        return -math.expm1(n * math.log1p(-p)) * pert_pdf(dist, p)

    return _quad(integrand, dist.p_m, dist.p_M)


def likelihood_no_change(
    dist: SuccessDistribution, model: AttackCountModel, s: int
) -> float:
    """Pr(exactly s incidents in the period) with the posture held fixed.

    The zero-attempt outcome contributes its full mass to s=0, so the pmf
    over s sums to one.
    """
    if s < 0:
        raise InputError(f"incident count must be >= 0, got {s}")
    if model.kind is CountKind.BINOMIAL and s > model.t:
        raise InputError(f"incident count must be <= t={model.t}, got {s}")
    total = 0.0
    for n, weight in _count_support(model):
        if weight == 0.0 or s > n:
            continue
        value, _ = _conditional_success(dist, n, s)
        total += weight * value
    return min(total, 1.0)


def likelihood_change(dist: SuccessDistribution, model: AttackCountModel) -> float:
    """Pr(the period produces an incident), with posture reassessed after the first one."""
    total = 0.0
    for n, weight in _count_support(model):
        if n == 0 or weight == 0.0:
            continue
        value, _ = _breach_probability(dist, n)
        total += weight * value
    return min(total, 1.0)


@dataclass(frozen=True)
class IncidentLikelihood:
    """Incident-likelihood result for one period.

    NO_CHANGE carries the full pmf over incident counts; CHANGE carries the
    scalar probability of the single incident. quadrature_error accumulates
    the integrator's reported error bounds, weighted by the attempt pmf.
    """

    regime: Regime
    pmf: Mapping[int, float] | None
    value: float | None
    quadrature_error: float

    def __post_init__(self) -> None:
        if (self.pmf is None) == (self.value is None):
            raise InputError("exactly one of pmf and value must be set")
        if self.regime is Regime.NO_CHANGE and self.pmf is None:
            raise InputError("no-change results carry a pmf")
        if self.regime is Regime.CHANGE and self.value is None:
            raise InputError("change results carry a scalar value")
        if self.value is not None and not 0.0 <= self.value <= 1.0:
            raise InputError(f"likelihood must be in [0, 1], got {self.value}")
        if self.pmf is not None:
            for s, p in self.pmf.items():
                if not 0.0 <= p <= 1.0:
                    raise InputError(f"pmf[{s}] must be in [0, 1], got {p}")

    @property
    def mean_events(self) -> float:
        """Expected incident count (NO_CHANGE only)."""
        if self.pmf is None:
            raise InputError("mean_events needs the full pmf")
        return sum(s * p for s, p in self.pmf.items())


def incident_likelihood(
    dist: SuccessDistribution, model: AttackCountModel, regime: Regime
) -> IncidentLikelihood:
    """Evaluate the incident distribution for one period under the given regime."""
    if regime is Regime.CHANGE:
        total = 0.0
        error = 0.0
        for n, weight in _count_support(model):
            if n == 0 or weight == 0.0:
                continue
            value, err = _breach_probability(dist, n)
            total += weight * value
            error += weight * err
        return IncidentLikelihood(
            regime=regime, pmf=None, value=min(total, 1.0), quadrature_error=error
        )

    pmf: dict[int, float] = {0: 0.0}
    error = 0.0
    for n, weight in _count_support(model):
        if weight == 0.0:
            continue
        if n == 0:
            pmf[0] += weight  # zero attempts yield zero incidents
            continue
        for s in range(n + 1):
            value, err = _conditional_success(dist, n, s)
            pmf[s] = pmf.get(s, 0.0) + weight * value
            error += weight * err
    clean = {s: min(p, 1.0) for s, p in sorted(pmf.items())}
    return IncidentLikelihood(
        regime=regime, pmf=clean, value=None, quadrature_error=error
    )
