"""Questionnaire scoring: awareness, maturity and complexity indices, attractiveness.

All indices live on a 0..10 scale. Scoring is a weighted average of control
scores rescaled by the questionnaire's maximum score; controls marked not
applicable are excluded from numerator and denominator alike, so they can
never drag an index toward zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import EmptyAssessment, InputError, NoApplicableControls


class QuestionnaireKind(Enum):
    AWARENESS = "awareness"
    MATURITY_CORE = "maturity_core"
    COMPLEXITY_CATEGORY = "complexity_category"


class Attractiveness(Enum):
    """How interesting the organization looks to attackers, from sector attack share."""

    VERY_LOW = "very_low"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    VERY_HIGH = "very_high"


# Upper bin edges (percent of sector attacks, exclusive); >= 10% is VERY_HIGH.
_ATTRACTIVENESS_BINS = (
    (1.25, Attractiveness.VERY_LOW),
    (2.5, Attractiveness.LOW),
    (5.0, Attractiveness.MEDIUM),
    (10.0, Attractiveness.HIGH),
)

#: Attacker-maturity weight for malicious threats, by attractiveness class.
ATTACKER_WEIGHTS = {
    Attractiveness.VERY_LOW: 0.6,
    Attractiveness.LOW: 0.7,
    Attractiveness.MEDIUM: 0.8,
    Attractiveness.HIGH: 0.9,
    Attractiveness.VERY_HIGH: 1.0,
}


@dataclass(frozen=True)
class ControlResponse:
    """One scored control. ``score=None`` marks the control as not applicable."""

    control_id: str
    score: int | None
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.score is not None and self.score < 0:
            raise InputError(
                f"control {self.control_id!r}: score must be >= 0, got {self.score}"
            )
        if not self.weight >= 0:  # also rejects NaN
            raise InputError(
                f"control {self.control_id!r}: weight must be >= 0, got {self.weight}"
            )

    @property
    def applicable(self) -> bool:
        return self.score is not None


@dataclass(frozen=True)
class Questionnaire:
    """A flat list of scored controls sharing one 0..s_max scale."""

    responses: tuple[ControlResponse, ...]
    s_max: int
    kind: QuestionnaireKind
    category_label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "responses", tuple(self.responses))
        if self.s_max < 1:
            raise InputError(f"s_max must be >= 1, got {self.s_max}")
        if not self.responses:
            raise InputError("questionnaire has no responses")
        for r in self.responses:
            if r.score is not None and r.score > self.s_max:
                raise InputError(
                    f"control {r.control_id!r}: score {r.score} exceeds s_max={self.s_max}"
                )

    @property
    def control_count(self) -> int:
        return len(self.responses)


@dataclass(frozen=True)
class CategoryComplexity:
    """Complexity score of one infrastructure category plus its control count."""

    label: str
    index: float
    control_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.index <= 10.0:
            raise InputError(
                f"category {self.label!r}: index must be in [0, 10], got {self.index}"
            )
        if self.control_count < 1:
            raise InputError(f"category {self.label!r}: control_count must be positive")


@dataclass(frozen=True)
class PostureProfile:
    """The four organization indices plus how many controls fed each of them."""

    awareness_index: float
    maturity_index: float
    complexity_index: float
    attractiveness: Attractiveness
    awareness_control_count: int = 0
    core_control_count: int = 0
    categories: tuple[CategoryComplexity, ...] = ()

    def __post_init__(self) -> None:
        for name in ("awareness_index", "maturity_index", "complexity_index"):
            value = getattr(self, name)
            if not 0.0 <= value <= 10.0:
                raise InputError(f"{name} must be in [0, 10], got {value}")
        object.__setattr__(self, "categories", tuple(self.categories))


def score_index(questionnaire: Questionnaire) -> float:
    """Weighted average of the applicable control scores, rescaled to [0, 10].

    Raises:
        NoApplicableControls: every response is N/A or the applicable ones
            carry zero total weight.
    """
    numerator = 0.0
    total_weight = 0.0
    for r in questionnaire.responses:
        if r.score is None:
            continue
        numerator += r.score * r.weight
        total_weight += r.weight
    if total_weight <= 0.0:
        where = (
            f" in category {questionnaire.category_label!r}"
            if questionnaire.category_label
            else ""
        )
        raise NoApplicableControls(
            f"no applicable control with positive weight{where}"
        )
    return (numerator / total_weight) * (10.0 / questionnaire.s_max)


def maturity_index(
    awareness: float, awareness_count: int, core_score: float, core_count: int
) -> float:
    """Blend the awareness index with the core control score, weighted by control counts."""
    if awareness_count < 0 or core_count < 0:
        raise InputError("control counts must be non-negative")
    total = awareness_count + core_count
    if total == 0:
        raise EmptyAssessment("maturity index needs at least one control")
    return (awareness * awareness_count + core_score * core_count) / total


def complexity_index(categories: Sequence[CategoryComplexity]) -> float:
    """Global complexity: category indices averaged with control-count weights."""
    if not categories:
        raise EmptyAssessment("complexity index needs at least one category")
    total_controls = sum(c.control_count for c in categories)
    return sum(c.index * c.control_count for c in categories) / total_controls


def category_complexity(questionnaire: Questionnaire) -> CategoryComplexity:
    """Score one complexity-category questionnaire."""
    return CategoryComplexity(
        label=questionnaire.category_label or "",
        index=score_index(questionnaire),
        control_count=questionnaire.control_count,
    )


def classify_attractiveness(attack_share_percent: float) -> Attractiveness:
    """Bin a sector's share of observed attacks (percent) into an attractiveness class.

    Lower bounds are inclusive, upper bounds exclusive; every non-negative
    share falls into some class.
    """
    if not attack_share_percent >= 0:
        raise InputError(f"attack share must be >= 0, got {attack_share_percent}")
    for upper, cls in _ATTRACTIVENESS_BINS:
        if attack_share_percent < upper:
            return cls
    return Attractiveness.VERY_HIGH


def attacker_weight(attractiveness: Attractiveness, malicious: bool = True) -> float:
    """Attacker-maturity weight: always 1.0 for non-malicious threats."""
    if not malicious:
        return 1.0
    return ATTACKER_WEIGHTS[attractiveness]


def assess_posture(
    awareness: Questionnaire,
    core: Questionnaire,
    complexity_categories: Sequence[Questionnaire],
    attractiveness: Attractiveness,
) -> PostureProfile:
    """Run the full scoring pipeline over the three questionnaire groups.

    Complexity categories in which every control is N/A are dropped with a
    warning rather than poisoning the weighted average.
    """
    if awareness.kind is not QuestionnaireKind.AWARENESS:
        raise InputError(f"awareness questionnaire has kind {awareness.kind.value!r}")
    if core.kind is not QuestionnaireKind.MATURITY_CORE:
        raise InputError(f"core questionnaire has kind {core.kind.value!r}")

    awareness_score = score_index(awareness)
    core_score = score_index(core)
    maturity = maturity_index(
        awareness_score, awareness.control_count, core_score, core.control_count
    )

    categories = []
    for q in complexity_categories:
        if q.kind is not QuestionnaireKind.COMPLEXITY_CATEGORY:
            raise InputError(
                f"complexity questionnaire {q.category_label!r} has kind {q.kind.value!r}"
            )
        try:
            categories.append(category_complexity(q))
        except NoApplicableControls:
            warnings.warn(
                f"complexity category {q.category_label!r} has no applicable "
                "controls and was dropped",
                stacklevel=2,
            )
    complexity = complexity_index(categories)

    return PostureProfile(
        awareness_index=awareness_score,
        maturity_index=maturity,
        complexity_index=complexity,
        attractiveness=attractiveness,
        awareness_control_count=awareness.control_count,
        core_control_count=core.control_count,
        categories=tuple(categories),
    )
