"""Chernoff tail certificates for sums of independent bounded zero-mean variables.

A scenario pairs each variable with a bound family; the per-variable
(log multiplier, rate) pairs add, and the optimal Chernoff parameter for the
combined bound  L + R s^2 - s t  is s* = t / (2R), giving

    log P(S_n >= t) <= L - t^2 / (4R).

Mirroring the supports (X -> -X) expresses the lower tail; the two-sided
certificate is the log-sum-exp of the two one-sided ones and may use
different per-variable orders on each side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .bounds import BoundedSupport, FamilyTag, mgf_bound, order_k


class Side(Enum):
    UPPER = "upper"
    LOWER = "lower"
    TWO_SIDED = "two_sided"


@dataclass(frozen=True)
class SumScenario:
    """Independent variables plus one bound choice per variable."""

    variables: tuple[BoundedSupport, ...]
    choices: tuple[FamilyTag, ...]

    def __post_init__(self) -> None:
        if len(self.variables) < 1:
            raise ValueError("scenario needs at least one variable")
        if len(self.variables) != len(self.choices):
            raise ValueError(
                f"{len(self.variables)} variables but {len(self.choices)} choices"
            )
        for support, tag in zip(self.variables, self.choices):
            mgf_bound(support, tag)  # raises when a precondition is unsatisfied

    @property
    def n(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class TailCertificate:
    """A certified value of log P(tail event at threshold t).

    ``vacuous`` flags log_bound > 0 (the bound exceeds 1; valid but empty).
    ``beyond_support`` flags thresholds the sum cannot even reach, where the
    true probability is 0 and the certificate is merely loose.  For two-sided
    certificates s_star is the upper side's Chernoff parameter.
    """

    t: float
    log_bound: float
    s_star: float
    side: Side
    vacuous: bool
    beyond_support: bool


def order_k_scenario(
    variables: tuple[BoundedSupport, ...] | list[BoundedSupport], ks
) -> SumScenario:
    """Scenario using the order-k family with the given k per variable."""
    return SumScenario(tuple(variables), tuple(order_k(k) for k in ks))


def mirror(support: BoundedSupport) -> BoundedSupport:
    """Support of -X: the interval [-b, -a]; even moments are unchanged."""
    return BoundedSupport(
        a=-support.b,
        b=-support.a,
        m2=support.m2,
        m4=support.m4,
        odd_moments_zero=support.odd_moments_zero,
    )


def mirror_scenario(
    scenario: SumScenario, choices: tuple[FamilyTag, ...] | None = None
) -> SumScenario:
    """Scenario for -S_n; by default each variable keeps its bound choice."""
    mirrored = tuple(mirror(v) for v in scenario.variables)
    return SumScenario(mirrored, choices if choices is not None else scenario.choices)


def _totals(scenario: SumScenario) -> tuple[float, float]:
    """Combined (log multiplier L, rate R) of the per-variable bounds."""
    log_mult = 0.0
    rate = 0.0
    for support, tag in zip(scenario.variables, scenario.choices):
        bound = mgf_bound(support, tag)
        log_mult += bound.log_multiplier
        rate += bound.rate
    return log_mult, rate


def _one_sided(scenario: SumScenario, t: float, side: Side) -> TailCertificate:
    if not t > 0.0:
        raise ValueError("threshold t must be positive")
    log_mult, rate = _totals(scenario)
    log_bound = log_mult - t * t / (4.0 * rate)
    s_star = t / (2.0 * rate)
    reach = sum(v.b for v in scenario.variables)
    return TailCertificate(
        t=t,
        log_bound=log_bound,
        s_star=s_star,
        side=side,
        vacuous=log_bound > 0.0,
        beyond_support=t > reach,
    )


def one_sided_tail(scenario: SumScenario, t: float) -> TailCertificate:
    """Certificate for log P(S_n >= t), t > 0."""
    return _one_sided(scenario, t, Side.UPPER)


def lower_tail(
    scenario: SumScenario, t: float, choices: tuple[FamilyTag, ...] | None = None
) -> TailCertificate:
    """Certificate for log P(S_n <= -t) via the mirrored supports."""
    cert = _one_sided(mirror_scenario(scenario, choices), t, Side.LOWER)
    return cert


def mean_tail(scenario: SumScenario, l: float) -> TailCertificate:
    """Certificate for log P(S_n / n >= l), i.e. the t = n*l upper tail."""
    if not l > 0.0:
        raise ValueError("mean threshold l must be positive")
    return one_sided_tail(scenario, scenario.n * l)


def two_sided_tail(
    scenario: SumScenario,
    t: float,
    mirrored_choices: tuple[FamilyTag, ...] | None = None,
) -> TailCertificate:
    """Certificate for log P(|S_n| >= t): log-sum-exp of the two sides.

    The lower side runs on the mirrored supports and may use its own bound
    choices; omitted, each variable reuses its upper-side choice.
    """
    upper = one_sided_tail(scenario, t)
    lower = lower_tail(scenario, t, mirrored_choices)
    hi = max(upper.log_bound, lower.log_bound)
    log_bound = hi + math.log(
        math.exp(upper.log_bound - hi) + math.exp(lower.log_bound - hi)
    )
    return TailCertificate(
        t=t,
        log_bound=log_bound,
        s_star=upper.s_star,
        side=Side.TWO_SIDED,
        vacuous=log_bound > 0.0,
        beyond_support=upper.beyond_support and lower.beyond_support,
    )


def chernoff_curve(scenario: SumScenario, t: float, s: float) -> float:
    """The pre-optimization exponent L + R s^2 - s t; minimized at s* = t/(2R)."""
    if not s > 0.0:
        raise ValueError("s must be positive")
    log_mult, rate = _totals(scenario)
    return log_mult + rate * s * s - s * t


__all__ = [
    "Side",
    "SumScenario",
    "TailCertificate",
    "chernoff_curve",
    "lower_tail",
    "mean_tail",
    "mirror",
    "mirror_scenario",
    "one_sided_tail",
    "order_k_scenario",
    "two_sided_tail",
]
