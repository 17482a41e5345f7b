"""Per-component hazard-rate calculators.

Part-stress formulas in the MIL-HDBK-217 / NSWC-92 style: a base failure
rate multiplied by dimensionless adjustment factors (temperature, quality,
environment, load, ...), plus the additive electric-motor model and the
battery constant-rate rule.  Factor *values* are user inputs defaulting to
1.0 -- the handbook lookup tables themselves are not embedded; environment
and quality designators resolve to factors through a user-editable lookup
with an all-ones default.

Electrical formulas quote failures per 10^6 hours; the battery rule yields
failures per hour directly.  Components with no handbook formula here
(springs, actuators, cameras, box PCs, ...) are covered by ``custom_rate``,
a plain base-times-multipliers product.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Union

from .errors import DomainError, ValidationError
from .lifemodels import FailureRate, RateUnit

FactorSet = Mapping[str, float]

# factor list per electrical component kind (product formula: base * factors)
ELECTRICAL_FACTORS = {
    "capacitor": ("piT", "piC", "piV", "piSR", "piQ", "piE"),
    "diode": ("piT", "piS", "piC", "piQ", "piE"),
    "inductor": ("piT", "piQ", "piE"),
    "fuse": ("piE",),
    "resistor": ("piT", "piP", "piS", "piQ", "piE"),
    "connector_general": ("piT", "piK", "piQ", "piE"),
    "connector_socket": ("piP", "piQ", "piE"),
    "quartz_crystal": ("piQ", "piE"),
}

BEARING_FACTORS = ("CY", "CR", "CV", "CCW", "Ct", "CSF", "CC")

# fixed motor sub-rates, failures per 10^6 hours
BRUSH_RATE = 3.2      # per brush
STATOR_RATE = 0.001


class EnvironmentClass(str, Enum):
    """Ground environment category selecting the environment factor."""

    GROUND_BENIGN = "GB"
    GROUND_FIXED = "GF"
    GROUND_MOBILE = "GM"


class BatteryType(str, Enum):
    PRIMARY_CELL = "primary_cell"
    NICD = "nicd"
    LIION = "liion"


# lambda_0 per battery type; rate rule is lambda_0 * 1e-9 per hour
BATTERY_LAMBDA0 = {
    BatteryType.PRIMARY_CELL: 20.0,
    BatteryType.NICD: 100.0,
    BatteryType.LIION: 150.0,
}


def _validate_factors(factors: FactorSet) -> None:
    for name, value in factors.items():
        v = float(value)
        if not math.isfinite(v) or v <= 0.0:
            raise ValidationError(f"factor {name!r} must be finite and > 0, got {value!r}")


def _product(factors: FactorSet, names: Iterable[str]) -> float:
    m = 1.0
    for name in names:
        m *= float(factors.get(name, 1.0))
    return m


def factor_product_rate(kind: str, base: FailureRate, factors: FactorSet) -> FailureRate:
    """Part-stress product formula for an electrical component kind.

    Multiplies the base rate by exactly the kind's factor list (missing
    factors default to 1.0).  Factors outside the list are ignored with a
    warning so a copy-pasted factor set does not silently change the result.
    """
    if kind not in ELECTRICAL_FACTORS:
        raise ValidationError(
            f"unknown electrical kind {kind!r}; expected one of {sorted(ELECTRICAL_FACTORS)}"
        )
    _validate_factors(factors)
    names = ELECTRICAL_FACTORS[kind]
    extras = sorted(set(factors) - set(names))
    if extras:
        warnings.warn(
            f"factors {extras} are not used by kind {kind!r} and were ignored",
            stacklevel=2,
        )
    return base.scaled(_product(factors, names))


def bearing_rate(base: FailureRate, factors: FactorSet) -> FailureRate:
    """Bearing rate: base times the seven C service-condition factors."""
    _validate_factors(factors)
    extras = sorted(set(factors) - set(BEARING_FACTORS))
    if extras:
        warnings.warn(f"factors {extras} are not bearing factors and were ignored",
                      stacklevel=2)
    return base.scaled(_product(factors, BEARING_FACTORS))


def _as_per_million(rate: Union[FailureRate, float], what: str) -> float:
    if isinstance(rate, FailureRate):
        return rate.to(RateUnit.PER_MILLION_HOURS).value
    v = float(rate)
    if not math.isfinite(v) or v < 0.0:
        raise ValidationError(f"{what} must be finite and >= 0, got {rate!r}")
    return v


@dataclass(frozen=True)
class MotorParams:
    """Electric-motor sub-rates; bare floats are failures per 10^6 hours.

    Brush and stator rates are fixed constants (3.2 per brush, 0.001); the
    winding, armature-shaft and gear rates are user-supplied, and the bearing
    term may be wired to a ``bearing_rate`` result.
    """

    base_rate: Union[FailureRate, float] = 0.0
    service_factor: float = 1.0
    winding_rate: Union[FailureRate, float] = 0.0
    brush_count: int = 0
    armature_shaft_rate: Union[FailureRate, float] = 0.0
    bearing_rate: Union[FailureRate, float] = 0.0
    gear_rate: Union[FailureRate, float] = 0.0
    capacitor_rate: Union[FailureRate, float] = 0.0

    def __post_init__(self):
        if self.brush_count < 0 or int(self.brush_count) != self.brush_count:
            raise ValidationError("brush_count must be a non-negative integer")
        sf = float(self.service_factor)
        if not math.isfinite(sf) or sf <= 0.0:
            raise ValidationError("service_factor must be finite and > 0")


def motor_rate(p: MotorParams) -> FailureRate:
    """Total motor rate: load-adjusted base plus the part sub-rates."""
    total = (
        (_as_per_million(p.base_rate, "base_rate") * p.service_factor)
        + _as_per_million(p.winding_rate, "winding_rate")
        + BRUSH_RATE * p.brush_count
        + STATOR_RATE
        + _as_per_million(p.armature_shaft_rate, "armature_shaft_rate")
        + _as_per_million(p.bearing_rate, "bearing_rate")
        + _as_per_million(p.gear_rate, "gear_rate")
        + _as_per_million(p.capacitor_rate, "capacitor_rate")
    )
    return FailureRate(total, RateUnit.PER_MILLION_HOURS)


def battery_rate(battery_type: BatteryType) -> FailureRate:
    """Battery rate: lambda_0 * 1e-9 per hour, lambda_0 by cell chemistry."""
    lam0 = BATTERY_LAMBDA0[BatteryType(battery_type)]
    # divide: 20/1e9 is exactly 2e-8 while 20*1e-9 is not
    return FailureRate(lam0 / 1.0e9, RateUnit.PER_HOUR)


@dataclass(frozen=True)
class RotatingDeviceParams:
    """Inputs to the rotating-device model; alphas are Weibull characteristic
    lives (hours) of the motor bearing and windings."""

    lambda1: float = 0.0
    lambda2: float = 0.0
    A: float = 1.0
    B: float = 1.0
    alpha_bearing: float = 1.0
    alpha_winding: float = 1.0

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise ValidationError(f"{name} must be finite and >= 0")
        for name in ("A", "B"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise ValidationError(f"{name} must be finite and > 0")
        for name in ("alpha_bearing", "alpha_winding"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise DomainError(f"{name} must be finite and > 0")


def rotating_device_rate(p: RotatingDeviceParams) -> FailureRate:
    """Rotating device rate: [l1/(A*alpha_B) + l2/(B*alpha_W)] * 10^6."""
    total = (
        p.lambda1 / (p.A * p.alpha_bearing) + p.lambda2 / (p.B * p.alpha_winding)
    ) * 1.0e6
    return FailureRate(total, RateUnit.PER_MILLION_HOURS)


def custom_rate(base: FailureRate, multipliers: FactorSet = ()) -> FailureRate:
    """User-defined component: base rate times named positive multipliers.

    Covers every part with no handbook formula here -- the user supplies the
    constants.  With no multipliers the base rate is returned untouched.
    """
    if not isinstance(multipliers, Mapping):
        multipliers = dict(multipliers)
    _validate_factors(multipliers)
    return base.scaled(_product(multipliers, multipliers.keys()))


@dataclass(frozen=True)
class FactorLookup:
    """Environment / quality designator resolution to piE / piQ values.

    Defaults to all-ones; a user-editable lookup document (see the model
    store) overrides entries without the handbook tables being embedded.
    """

    environment: Mapping[str, float] = field(default_factory=dict)
    quality: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        _validate_factors(self.environment)
        _validate_factors(self.quality)

    def pi_e(self, env: Optional[EnvironmentClass]) -> float:
        if env is None:
            return 1.0
        return float(self.environment.get(EnvironmentClass(env).value, 1.0))

    def pi_q(self, designator: Optional[str]) -> float:
        if designator is None:
            return 1.0
        return float(self.quality.get(designator, 1.0))


ALL_ONES_LOOKUP = FactorLookup()
