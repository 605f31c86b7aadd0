"""Loss-event-frequency and loss-magnitude Monte Carlo in the factor-analysis style.

Each trial draws an incident count from the no-change incident distribution,
then one modified-PERT loss per event and category; the per-trial total is the
loss exposure. Secondary-loss categories ride along structurally and simply
contribute zero when none are supplied.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError, InvalidRange
from .incidence import IncidentLikelihood

#: Stated estimate confidence maps to the PERT shape as gamma = confidence / 5,
#: so the conventional confidence of 20 recovers the canonical shape 4.
CONFIDENCE_TO_SHAPE = 5.0
DEFAULT_CONFIDENCE = 20.0
DEFAULT_TRIALS = 10_000

MODE_HISTOGRAM_BINS = 50
SUMMARY_PERCENTILES = (10, 50, 90)


@dataclass(frozen=True)
class LossCategory:
    """One loss category with a (min, most likely, max) band per event.

    Bands arriving out of order are sorted into a valid PERT support; that is
    the only ordering under which the three numbers can be a band at all, but
    it is loud because it usually signals swapped columns in the source data.
    """

    name: str
    low: float
    most_likely: float
    high: float
    confidence: float = DEFAULT_CONFIDENCE
    secondary: bool = False
    currency: str = "EUR"

    def __post_init__(self) -> None:
        triple = (self.low, self.most_likely, self.high)
        ordered = sorted(triple)
        if list(triple) != ordered:
            warnings.warn(
                f"loss category {self.name!r}: band {triple} is not ordered; "
                f"reordered to {tuple(ordered)}",
                stacklevel=2,
            )
            object.__setattr__(self, "low", ordered[0])
            object.__setattr__(self, "most_likely", ordered[1])
            object.__setattr__(self, "high", ordered[2])
        if self.low < 0:
            raise InvalidRange(f"loss category {self.name!r}: losses must be >= 0")
        if not self.confidence > 0:
            raise InputError(
                f"loss category {self.name!r}: confidence must be positive, got {self.confidence}"
            )

    @property
    def shape(self) -> float:
        return self.confidence / CONFIDENCE_TO_SHAPE

    @property
    def mean(self) -> float:
        """Modified-PERT mean (low + shape * most_likely + high) / (shape + 2)."""
        return (self.low + self.shape * self.most_likely + self.high) / (self.shape + 2.0)


def sample_event_count(
    lik: IncidentLikelihood, rng: np.random.Generator, size: int | None = None
) -> int | np.ndarray:
    """Draw incident counts by inverting the discrete CDF of the no-change pmf."""
    if lik.pmf is None:
        raise InputError("event-count sampling needs the full no-change pmf")
    support = np.fromiter(lik.pmf.keys(), dtype=np.int64)
    cdf = np.cumsum(np.fromiter(lik.pmf.values(), dtype=float))
    cdf /= cdf[-1]  # absorb residual quadrature rounding
    uniforms = rng.uniform(size=size)
    index = np.minimum(np.searchsorted(cdf, uniforms, side="right"), len(support) - 1)
    drawn = support[index]
    return int(drawn) if size is None else drawn


def _pert_draws(
    rng: np.random.Generator,
    low: float,
    mode: float,
    high: float,
    shape: float,
    size: int,
) -> np.ndarray:
    if high == low:
        return np.full(size, low)
    span = high - low
    alpha = 1.0 + shape * (mode - low) / span
    beta = 1.0 + shape * (high - mode) / span
    return low + span * rng.beta(alpha, beta, size=size)


def sample_loss_magnitude(
    categories: Sequence[LossCategory],
    rng: np.random.Generator,
    size: int | None = None,
) -> float | np.ndarray:
    """Per-event loss: the sum of one modified-PERT draw per category."""
    if not categories:
        raise InputError("at least one loss category is required")
    n = 1 if size is None else size
    total = np.zeros(n)
    for category in categories:
        total += _pert_draws(
            rng, category.low, category.most_likely, category.high, category.shape, n
        )
    return float(total[0]) if size is None else total


@dataclass(frozen=True)
class SummaryRow:
    minimum: float
    mean: float
    mode: float
    maximum: float


@dataclass(frozen=True)
class FairResult:
    """Per-trial event counts and losses plus their summaries.

    per_event_loss holds each trial's mean loss per event (zero for trials
    without events); summaries of it cover only trials that saw at least one
    event. lef is the per-slot event rate s/t for each trial.
    """

    events: np.ndarray
    per_event_loss: np.ndarray
    total_loss: np.ndarray
    secondary_loss: np.ndarray
    summary: Mapping[str, SummaryRow]
    percentiles: Mapping[str, Mapping[int, float]]
    slots_per_period: int
    trials: int
    seed: int

    @property
    def lef(self) -> np.ndarray:
        return self.events / self.slots_per_period


def _histogram_mode(values: np.ndarray, bins: int = MODE_HISTOGRAM_BINS) -> float:
    """Midpoint of the densest equal-width bin; ties go to the lower bin."""
    if values.size == 0:
        return 0.0
    low, high = float(values.min()), float(values.max())
    if low == high:
        return low
    counts, edges = np.histogram(values, bins=bins, range=(low, high))
    densest = int(np.argmax(counts))
    return float(0.5 * (edges[densest] + edges[densest + 1]))


def _integer_mode(values: np.ndarray) -> float:
    if values.size == 0:
        return 0.0
    return float(np.argmax(np.bincount(values)))


def _summary(values: np.ndarray, mode: float) -> SummaryRow:
    if values.size == 0:
        return SummaryRow(0.0, 0.0, 0.0, 0.0)
    return SummaryRow(
        minimum=float(values.min()),
        mean=float(values.mean()),
        mode=mode,
        maximum=float(values.max()),
    )


def run_fair(
    lik: IncidentLikelihood,
    categories: Sequence[LossCategory],
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    slots_per_period: int = 365,
) -> FairResult:
    """Simulate total loss exposure over independent trials.

    The draw order is fixed (event counts, then primary magnitudes, then
    secondary magnitudes, each on its own stream derived from the seed), so a
    given seed always reproduces the same trial table.
    """
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    primary = [c for c in categories if not c.secondary]
    secondary = [c for c in categories if c.secondary]
    if not primary:
        raise InputError("at least one primary loss category is required")

    count_stream, primary_stream, secondary_stream = np.random.SeedSequence(seed).spawn(3)
    events = np.asarray(
        sample_event_count(lik, np.random.default_rng(count_stream), size=trials)
    )
    total_events = int(events.sum())

    if total_events > 0:
        primary_draws = np.asarray(
            sample_loss_magnitude(
                primary, np.random.default_rng(primary_stream), size=total_events
            )
        )
        if secondary:
            secondary_draws = np.asarray(
                sample_loss_magnitude(
                    secondary, np.random.default_rng(secondary_stream), size=total_events
                )
            )
        else:
            secondary_draws = np.zeros(total_events)
    else:
        primary_draws = np.zeros(0)
        secondary_draws = np.zeros(0)

    owner = np.repeat(np.arange(trials), events)
    total_loss = np.bincount(owner, weights=primary_draws + secondary_draws, minlength=trials)
    secondary_loss = np.bincount(owner, weights=secondary_draws, minlength=trials)
    with_events = events > 0
    per_event_loss = np.where(with_events, total_loss / np.maximum(events, 1), 0.0)

    magnitudes = per_event_loss[with_events]
    summary = {
        "events_per_period": _summary(events, _integer_mode(events)),
        "per_event_loss": _summary(magnitudes, _histogram_mode(magnitudes)),
        "total_loss": _summary(total_loss, _histogram_mode(total_loss)),
    }
    percentiles = {
        "per_event_loss": {
            p: float(np.percentile(magnitudes, p)) if magnitudes.size else 0.0
            for p in SUMMARY_PERCENTILES
        },
        "total_loss": {
            p: float(np.percentile(total_loss, p)) for p in SUMMARY_PERCENTILES
        },
    }
    return FairResult(
        events=events,
        per_event_loss=per_event_loss,
        total_loss=total_loss,
        secondary_loss=secondary_loss,
        summary=summary,
        percentiles=percentiles,
        slots_per_period=slots_per_period,
        trials=trials,
        seed=seed,
    )
