"""Brute-force replay of the attacker process, used to validate the analytic
incident likelihoods.

Each replication draws the success probability once from the PERT band (the
analytic mixture also integrates it once per period, outside the attempt
kernel), draws an attempt count, runs that many Bernoulli attempts and records
the incident count. Drawing a fresh p per attempt would simulate a different
model and is deliberately not offered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, SupportMismatch
from .incidence import AttackCountModel, CountKind, IncidentLikelihood
from .success import SuccessDistribution

DEFAULT_Z_LIMIT = 3.0
DEFAULT_DEVIATION_FACTOR = 5.0


@dataclass(frozen=True)
class SimConfig:
    replications: int
    seed: int
    model: AttackCountModel
    success: SuccessDistribution

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise InputError(f"replications must be >= 1, got {self.replications}")


@dataclass(frozen=True)
class EmpiricalCounts:
    """Normalized incident-count histogram with binomial standard errors."""

    probabilities: np.ndarray  # index s -> empirical Pr(S = s)
    std_errors: np.ndarray
    replications: int

    def probability(self, s: int) -> float:
        if 0 <= s < self.probabilities.size:
            return float(self.probabilities[s])
        return 0.0

    @property
    def mean(self) -> float:
        return float(np.arange(self.probabilities.size) @ self.probabilities)


def simulate(config: SimConfig) -> EmpiricalCounts:
    """Replay the period ``replications`` times and histogram the incident counts."""
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    dist = config.success
    reps = config.replications
    if dist.is_point_mass:
        p = np.full(reps, dist.p_star)
    else:
        p = dist.p_m + (dist.p_M - dist.p_m) * rng.beta(dist.alpha, dist.beta, size=reps)
    model = config.model
    if model.kind is CountKind.BINOMIAL:
        attempts = rng.binomial(model.t, model.attempt_probability, size=reps)
    else:
        attempts = rng.poisson(model.n_avg, size=reps)
    incidents = rng.binomial(attempts, p)
    probabilities = np.bincount(incidents) / reps
    std_errors = np.sqrt(probabilities * (1.0 - probabilities) / reps)
    return EmpiricalCounts(
        probabilities=probabilities, std_errors=std_errors, replications=reps
    )


@dataclass(frozen=True)
class OracleReport:
    """Outcome of an empirical-vs-analytic comparison."""

    max_abs_deviation: float
    z_scores: dict[int, float]
    passed: bool
    z_limit: float
    deviation_limit: float


def compare_to_analytic(
    empirical: EmpiricalCounts,
    analytic: IncidentLikelihood,
    z_limit: float = DEFAULT_Z_LIMIT,
    deviation_factor: float = DEFAULT_DEVIATION_FACTOR,
) -> OracleReport:
    """Z-score every incident count under the analytic pmf.

    Standard errors come from the analytic probabilities (the null
    hypothesis), so an exact match scores zero everywhere. The comparison
    passes when every |z| stays within ``z_limit`` and the worst absolute
    deviation stays within ``deviation_factor`` times the largest standard
    error.
    """
    if analytic.pmf is None:
        raise SupportMismatch(
            "comparison needs the full no-change pmf, not a scalar likelihood"
        )
    reps = empirical.replications
    top = max(int(empirical.probabilities.size - 1), max(analytic.pmf))
    z_scores: dict[int, float] = {}
    max_deviation = 0.0
    max_std_error = 0.0
    for s in range(top + 1):
        expected = analytic.pmf.get(s, 0.0)
        observed = empirical.probability(s)
        deviation = observed - expected
        std_error = math.sqrt(expected * (1.0 - expected) / reps)
        if std_error == 0.0:
            z = 0.0 if deviation == 0.0 else math.inf * math.copysign(1.0, deviation)
        else:
            z = deviation / std_error
        z_scores[s] = z
        max_deviation = max(max_deviation, abs(deviation))
        max_std_error = max(max_std_error, std_error)
    deviation_limit = deviation_factor * max_std_error
    passed = (
        all(abs(z) <= z_limit for z in z_scores.values())
        and max_deviation <= deviation_limit
    )
    return OracleReport(
        max_abs_deviation=max_deviation,
        z_scores=z_scores,
        passed=passed,
        z_limit=z_limit,
        deviation_limit=deviation_limit,
    )
