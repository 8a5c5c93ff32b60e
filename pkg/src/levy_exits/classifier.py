"""Exact predicates for proper two-sided exits, and the window decision.

Every predicate is a disjunction of conditions on the triplet. Each one
returns the first disjunct that holds so reports can say *why* a model
exits properly, not just whether it does. ``decide`` combines them into a
verdict about lambda+ and lambda- both charging a time window [m, M).
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import measures
from .measures import Side
from .model import LevyModel


class InvalidQuery(ValueError):
    """Exit query outside a > 0, b > 0, 0 <= m < M <= inf."""


class Monotonicity(str, Enum):
    INCREASING = "increasing-subordinator"
    DECREASING = "decreasing-subordinator"
    NOT_MONOTONE = "not-monotone"
    ZERO_PROCESS = "zero-process"


class VerdictValue(str, Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    UNKNOWN = "unknown"


class Rule(str, Enum):
    """Stable tags naming the branch of ``decide`` that produced a verdict."""

    ZERO_PROCESS = "zero-process"
    MONOTONE = "monotone"
    PROPER = "proper"
    BEFORE = "before"
    BEFORE_THRESHOLD = "before.threshold"
    BEFORE_EXCLUDED = "before.excluded"
    AFTER = "after"
    AFTER_THRESHOLD = "after.threshold"
    AFTER_THRESHOLD_TWO_SIDED = "after.threshold.two-sided"
    AFTER_EXCLUDED = "after.excluded"
    AFTER_EXCLUDED_TWO_SIDED = "after.excluded.two-sided"
    FULL = "full"
    WINDOW_MONOTONE = "window.monotone"
    UNKNOWN_GAP = "unknown.gap"


class Disjunct(str, Enum):
    """Which condition of a predicate's disjunction held."""

    DIFFUSION = "diffusion"
    INFINITE_VARIATION = "infinite-variation"
    TWO_SIDED_JUMPS = "two-sided-jumps"
    DRIFT_AGAINST_JUMPS = "drift-against-jumps"
    ZERO_DRIFT = "zero-drift"
    ZERO_DRIFT_TWO_SIDED = "zero-drift-two-sided"
    DRIFT_WITH_SMALL_JUMPS = "drift-with-small-jumps"
    NONE = "none"


@dataclass(frozen=True)
class ExitQuery:
    """Annulus (-b, a) and time window [m, M)."""

    a: float
    b: float
    m: float = 0.0
    M: float = math.inf

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidQuery(f"{name} must be finite and > 0, got {value}")
        if not (math.isfinite(self.m) and self.m >= 0.0):
            raise InvalidQuery(f"m must be finite and >= 0, got {self.m}")
        if math.isnan(self.M) or not self.M > self.m:
            raise InvalidQuery(f"window needs m < M, got [{self.m}, {self.M})")

    @property
    def window(self) -> str:
        return f"[{self.m:g}, {self.M:g})"

    def mirrored(self) -> "ExitQuery":
        return ExitQuery(self.b, self.a, self.m, self.M)

    def scaled(self, k: float) -> "ExitQuery":
        return ExitQuery(k * self.a, k * self.b, self.m, self.M)

    def time_scaled(self, c: float) -> "ExitQuery":
        return ExitQuery(self.a, self.b, self.m / c, self.M / c)


@dataclass(frozen=True)
class Verdict:
    value: VerdictValue
    reason: Rule

    def __str__(self) -> str:
        return f"{self.value.value} ({self.reason.value})"


@dataclass(frozen=True)
class PredicateResult:
    holds: bool
    disjunct: Disjunct

    def __bool__(self) -> bool:
        return self.holds


_FAILED = PredicateResult(False, Disjunct.NONE)


def _ok(disjunct: Disjunct) -> PredicateResult:
    return PredicateResult(True, disjunct)


def _gaussian_or_wild(model: LevyModel) -> PredicateResult | None:
    """Disjuncts shared by every predicate: a diffusion or infinite variation."""
    if model.sigma2 > 0.0:
        return _ok(Disjunct.DIFFUSION)
    if not model.variation_finite:
        return _ok(Disjunct.INFINITE_VARIATION)
    return None


def _two_sided(model: LevyModel) -> bool:
    return model.charges(Side.NEG) and model.charges(Side.POS)


def _drift_meets_small_jumps(model: LevyModel) -> bool:
    """Drift pushes one way while jumps arbitrarily close to 0 push back."""
    gamma = model.gamma0
    if gamma > 0.0:
        return measures.zero_in_support(model.measure, Side.NEG)
    if gamma < 0.0:
        return measures.zero_in_support(model.measure, Side.POS)
    return False


# --- predicates -------------------------------------------------------------


def monotonicity(model: LevyModel) -> Monotonicity:
    if model.is_zero_process:
        return Monotonicity.ZERO_PROCESS
    if model.sigma2 == 0.0 and model.variation_finite:
        if not model.charges(Side.NEG) and model.gamma0 >= 0.0:
            return Monotonicity.INCREASING
        if not model.charges(Side.POS) and model.gamma0 <= 0.0:
            return Monotonicity.DECREASING
    return Monotonicity.NOT_MONOTONE


def explain_exits_proper(model: LevyModel) -> PredicateResult:
    if shared := _gaussian_or_wild(model):
        return shared
    if _two_sided(model):
        return _ok(Disjunct.TWO_SIDED_JUMPS)
    gamma = model.gamma0
    if (model.charges(Side.POS) and gamma < 0.0) or (model.charges(Side.NEG) and gamma > 0.0):
        return _ok(Disjunct.DRIFT_AGAINST_JUMPS)
    return _FAILED


def explain_zero_in_exit_support(model: LevyModel) -> PredicateResult:
    if shared := _gaussian_or_wild(model):
        return shared
    if _two_sided(model):
        return _ok(Disjunct.TWO_SIDED_JUMPS)
    return _FAILED


def explain_confinable(model: LevyModel) -> PredicateResult:
    if shared := _gaussian_or_wild(model):
        return shared
    if model.gamma0 == 0.0:
        return _ok(Disjunct.ZERO_DRIFT)
    if _drift_meets_small_jumps(model):
        return _ok(Disjunct.DRIFT_WITH_SMALL_JUMPS)
    return _FAILED


def explain_exit_support_unbounded(model: LevyModel) -> PredicateResult:
    if shared := _gaussian_or_wild(model):
        return shared
    if model.gamma0 == 0.0 and _two_sided(model):
        return _ok(Disjunct.ZERO_DRIFT_TWO_SIDED)
    if _drift_meets_small_jumps(model):
        return _ok(Disjunct.DRIFT_WITH_SMALL_JUMPS)
    return _FAILED


def explain_exit_support_full(model: LevyModel) -> PredicateResult:
    if shared := _gaussian_or_wild(model):
        return shared
    if not _two_sided(model):
        return _FAILED
    if model.gamma0 == 0.0:
        return _ok(Disjunct.ZERO_DRIFT_TWO_SIDED)
    if _drift_meets_small_jumps(model):
        return _ok(Disjunct.DRIFT_WITH_SMALL_JUMPS)
    return _FAILED


def exits_proper(model: LevyModel) -> bool:
    return explain_exits_proper(model).holds


def zero_in_exit_support(model: LevyModel) -> bool:
    return explain_zero_in_exit_support(model).holds


def confinable(model: LevyModel) -> bool:
    return explain_confinable(model).holds


def exit_support_unbounded(model: LevyModel) -> bool:
    return explain_exit_support_unbounded(model).holds


def exit_support_full(model: LevyModel) -> bool:
    return explain_exit_support_full(model).holds


@dataclass(frozen=True)
class Classification:
    """Every predicate of one model, each with the disjunct that decided it."""

    monotonicity: Monotonicity
    proper: PredicateResult
    before: PredicateResult
    after: PredicateResult
    full: PredicateResult
    confinable: PredicateResult

    VECTOR = ("proper", "before", "after", "full", "confinable")

    def vector(self) -> tuple[bool, ...]:
        return tuple(getattr(self, name).holds for name in self.VECTOR)

    def summary(self) -> str:
        return " ".join(f"{name}={str(getattr(self, name).holds).lower()}" for name in self.VECTOR)


def classify(model: LevyModel) -> Classification:
    return Classification(
        monotonicity=monotonicity(model),
        proper=explain_exits_proper(model),
        before=explain_zero_in_exit_support(model),
        after=explain_exit_support_unbounded(model),
        full=explain_exit_support_full(model),
        confinable=explain_confinable(model),
    )


# --- window decision --------------------------------------------------------


def _exact(x: float) -> Fraction:
    return Fraction(x)


def decide_before(model: LevyModel, a: float, b: float, M: float) -> Verdict:
    """Verdict for the window [0, M), M finite, on a non-monotone model."""
    if zero_in_exit_support(model):
        return Verdict(VerdictValue.POSITIVE, Rule.BEFORE)
    # sigma2 = 0, finite variation, jumps on one side only, drift against them:
    # the drift-side boundary is reached deterministically at a' / |gamma0|
    gamma = model.gamma0
    drift_side = a if gamma > 0.0 else b
    if _exact(drift_side) < _exact(M) * abs(_exact(gamma)):
        return Verdict(VerdictValue.POSITIVE, Rule.BEFORE_THRESHOLD)
    return Verdict(VerdictValue.ZERO, Rule.BEFORE_EXCLUDED)


def decide_after(model: LevyModel, a: float, b: float, m: float) -> Verdict:
    """Verdict for the window [m, inf), m > 0, on a non-monotone model."""
    if exit_support_unbounded(model):
        return Verdict(VerdictValue.POSITIVE, Rule.AFTER)
    # sigma2 = 0, finite variation, gamma0 != 0 and the jumps against the drift
    # stay a distance W away from 0
    gamma = model.gamma0
    if gamma > 0.0:
        drift_side, against = a, Side.NEG
    else:
        drift_side, against = b, Side.POS
    gap = measures.support_gap(model.measure, against)
    two_sided = model.charges(against.opposite)
    positive = _exact(m) * abs(_exact(gamma)) < _exact(drift_side) or _exact(a) + _exact(b) > _exact(gap.distance)
    if positive:
        rule = Rule.AFTER_THRESHOLD_TWO_SIDED if two_sided else Rule.AFTER_THRESHOLD
        return Verdict(VerdictValue.POSITIVE, rule)
    rule = Rule.AFTER_EXCLUDED_TWO_SIDED if two_sided else Rule.AFTER_EXCLUDED
    return Verdict(VerdictValue.ZERO, rule)


def decide(model: LevyModel, query: ExitQuery) -> Verdict:
    """Is lambda+[m, M) and lambda-[m, M) both positive for this model?"""
    kind = monotonicity(model)
    if kind is Monotonicity.ZERO_PROCESS:
        return Verdict(VerdictValue.ZERO, Rule.ZERO_PROCESS)
    if kind is not Monotonicity.NOT_MONOTONE:
        return Verdict(VerdictValue.ZERO, Rule.MONOTONE)

    a, b, m, M = query.a, query.b, query.m, query.M
    bounded = math.isfinite(M)
    if m == 0.0 and not bounded:
        return Verdict(VerdictValue.POSITIVE, Rule.PROPER)
    if m == 0.0:
        return decide_before(model, a, b, M)
    if not bounded:
        return decide_after(model, a, b, m)

    if exit_support_full(model):
        return Verdict(VerdictValue.POSITIVE, Rule.FULL)
    for containing in (decide_before(model, a, b, M), decide_after(model, a, b, m)):
        if containing.value is VerdictValue.ZERO:
            return Verdict(VerdictValue.ZERO, Rule.WINDOW_MONOTONE)
    return Verdict(VerdictValue.UNKNOWN, Rule.UNKNOWN_GAP)
