"""Life-distribution models for reliability evaluation.

Two lifetime laws are supported: the exponential distribution (constant
hazard, the standard electronics assumption) and the two-parameter Weibull
distribution, which covers all three regions of the bathtub curve depending
on its shape parameter:

    beta < 1   decreasing hazard (infant mortality)
    beta = 1   constant hazard (reduces to exponential with lambda = 1/alpha)
    beta > 1   increasing hazard (wear-out; beta = 2 is Rayleigh)

For each model the four standard metrics are evaluated at a mission time t:
probability density f(t), cumulative failure F(t), reliability R(t), and
the hazard function h(t) = f(t)/R(t).  MTTF is 1/lambda for the exponential
and alpha * Gamma(1 + 1/beta) for the Weibull.

Failure rates carry an explicit unit tag.  Handbook formulas quote rates in
failures per 10^6 hours; everything internal works in failures per hour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

from .errors import DomainError, ValidationError

RATE_SCALE = 1_000_000  # per-million-hours <-> per-hour


class RateUnit(str, Enum):
    PER_HOUR = "per_hour"
    PER_MILLION_HOURS = "per_million_hours"


def _require_finite_nonneg(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValidationError(f"{what} must be finite and >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class FailureRate:
    """A non-negative failure rate with an explicit unit.

    Conversion between the two supported units caches the source value so
    that converting back is lossless: a naive value/1e6*1e6 round trip is
    off by one ulp for a few percent of doubles.
    """

    value: float
    unit: RateUnit = RateUnit.PER_HOUR
    _twin: Optional[Tuple[float, RateUnit]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        object.__setattr__(
            self, "value", _require_finite_nonneg(self.value, "failure rate")
        )
        object.__setattr__(self, "unit", RateUnit(self.unit))

    @property
    def per_hour(self) -> float:
        """Rate expressed in failures per hour."""
        if self.unit is RateUnit.PER_HOUR:
            return self.value
        if self._twin is not None and self._twin[1] is RateUnit.PER_HOUR:
            return self._twin[0]
        return self.value / RATE_SCALE

    def to(self, unit: RateUnit) -> "FailureRate":
        unit = RateUnit(unit)
        if unit is self.unit:
            return self
        if self._twin is not None and self._twin[1] is unit:
            converted = self._twin[0]
        elif unit is RateUnit.PER_HOUR:
            converted = self.value / RATE_SCALE
        else:
            converted = self.value * RATE_SCALE
        return FailureRate(converted, unit, _twin=(self.value, self.unit))

    def scaled(self, factor: float) -> "FailureRate":
        """Rate multiplied by a dimensionless factor (exact when factor == 1)."""
        if factor == 1.0:
            return self
        return FailureRate(self.value * factor, self.unit)


def convert_rate(rate: FailureRate, unit: RateUnit) -> FailureRate:
    """Convert a failure rate to the requested unit (exact round trip)."""
    return rate.to(unit)


def gamma_fn(x: float) -> float:
    """Gamma function on the positive reals.

    Backed by the C library's Lanczos-class implementation; relative error
    is a few ulp, far inside the 1e-12 needed for Weibull MTTF.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    return math.gamma(x)


@dataclass(frozen=True)
class LifeMetrics:
    """The four standard lifetime metrics at a single time point."""

    density: float        # f(t), per hour
    cum_failure: float    # F(t)
    reliability: float    # R(t)
    hazard: float         # h(t) = f(t)/R(t), per hour


def _validate_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    return t


@dataclass(frozen=True)
class Exponential:
    """Constant-hazard lifetime law, parameterized by its failure rate."""

    rate: FailureRate

    def __post_init__(self):
        if not isinstance(self.rate, FailureRate):
            object.__setattr__(self, "rate", FailureRate(self.rate))
        if self.rate.per_hour <= 0.0:
            raise ValidationError("exponential model requires rate > 0")

    @property
    def lambda_per_hour(self) -> float:
        return self.rate.per_hour

    def reliability(self, t: float) -> float:
        return math.exp(-self.lambda_per_hour * _validate_time(t))

    def hazard(self, t: float) -> float:
        _validate_time(t)
        return self.lambda_per_hour

    def metrics(self, t: float) -> LifeMetrics:
        lam = self.lambda_per_hour
        x = lam * _validate_time(t)
        r = math.exp(-x)
        return LifeMetrics(
            density=lam * r,
            cum_failure=-math.expm1(-x),
            reliability=r,
            hazard=lam,
        )

    def mttf(self) -> float:
        return 1.0 / self.lambda_per_hour


@dataclass(frozen=True)
class Weibull:
    """Two-parameter Weibull law: characteristic life alpha (hours), shape beta.

    R(t) = exp(-(t/alpha)^beta), h(t) = (beta/alpha) * (t/alpha)^(beta-1).
    At t = 0 with beta < 1 the hazard and density diverge; this returns an
    infinite sentinel rather than raising, since analysis loops sample t = 0.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise ValidationError(f"weibull {name} must be finite and > 0")
            object.__setattr__(self, name, v)

    def _x(self, t: float) -> float:
        # (t/alpha)^beta, saturating instead of overflowing for extreme t
        try:
            return (t / self.alpha) ** self.beta
        except OverflowError:
            return math.inf

    def reliability(self, t: float) -> float:
        x = self._x(_validate_time(t))
        return 0.0 if x == math.inf else math.exp(-x)

    def hazard(self, t: float) -> float:
        t = _validate_time(t)
        if t == 0.0 and self.beta < 1.0:
            return math.inf
        try:
            p = (t / self.alpha) ** (self.beta - 1.0)
        except OverflowError:
            return math.inf
        return (self.beta / self.alpha) * p

    def metrics(self, t: float) -> LifeMetrics:
        t = _validate_time(t)
        x = self._x(t)
        if x == math.inf:
            return LifeMetrics(density=0.0, cum_failure=1.0, reliability=0.0,
                               hazard=self.hazard(t))
        r = math.exp(-x)
        h = self.hazard(t)
        return LifeMetrics(
            density=h * r,
            cum_failure=-math.expm1(-x),
            reliability=r,
            hazard=h,
        )

    def mttf(self) -> float:
        return self.alpha * gamma_fn((1.0 + self.beta) / self.beta)


LifeModel = Union[Exponential, Weibull]


def eval_life(model: LifeModel, t: float) -> LifeMetrics:
    """Evaluate f, F, R, h for a life model at time t (hours)."""
    return model.metrics(t)


def mttf(model: LifeModel) -> float:
    """Mean time to failure in hours (closed form)."""
    return model.mttf()
