"""Component hazard calculators: products, sums, constants, and properties."""

import json
import math
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fixture_path
from phm.errors import DomainError, ValidationError
from phm.hazards import (
    BRUSH_RATE,
    STATOR_RATE,
    BatteryType,
    FactorLookup,
    MotorParams,
    RotatingDeviceParams,
    battery_rate,
    bearing_rate,
    custom_rate,
    factor_product_rate,
    motor_rate,
    rotating_device_rate,
)
from phm.lifemodels import FailureRate, RateUnit

PM = RateUnit.PER_MILLION_HOURS
PH = RateUnit.PER_HOUR


# -- factor product -----------------------------------------------------------

def test_capacitor_identity_factors():
    out = factor_product_rate("capacitor", FailureRate(0.5, PM), {})
    assert out.value == 0.5
    assert out.unit is PM


def test_fuse_single_factor():
    out = factor_product_rate("fuse", FailureRate(0.01, PM), {"piE": 2.0})
    assert out.value == pytest.approx(0.02, rel=1e-15)


def test_resistor_full_product():
    # frozen from an independent scalar product: 0.002*3*2*1.5*5*4 = 0.36
    out = factor_product_rate(
        "resistor", FailureRate(0.002, PM),
        {"piT": 3.0, "piP": 2.0, "piS": 1.5, "piQ": 5.0, "piE": 4.0})
    assert out.value == pytest.approx(0.36, rel=1e-12)


def test_unknown_kind_rejected():
    with pytest.raises(ValidationError):
        factor_product_rate("transistor", FailureRate(1.0, PM), {})


def test_nonpositive_factor_rejected():
    with pytest.raises(ValidationError):
        factor_product_rate("inductor", FailureRate(1.0, PM), {"piT": 0.0})
    with pytest.raises(ValidationError):
        factor_product_rate("inductor", FailureRate(1.0, PM), {"piT": -2.0})


def test_extra_factor_warns_and_is_ignored():
    with pytest.warns(UserWarning):
        out = factor_product_rate(
            "fuse", FailureRate(0.01, PM), {"piE": 2.0, "piT": 50.0})
    assert out.value == pytest.approx(0.02, rel=1e-15)


def test_factor_product_permutation_invariant():
    base = FailureRate(0.002, PM)
    factors = {"piT": 3.0, "piP": 2.0, "piS": 1.5, "piQ": 5.0, "piE": 4.0}
    reordered = dict(reversed(list(factors.items())))
    a = factor_product_rate("resistor", base, factors)
    b = factor_product_rate("resistor", base, reordered)
    assert a.value == b.value


@given(st.floats(min_value=1e-6, max_value=1e3),
       st.floats(min_value=0.1, max_value=10.0))
def test_factor_product_homogeneous_in_base(base, pi):
    single = factor_product_rate("fuse", FailureRate(base, PM), {"piE": pi})
    doubled = factor_product_rate("fuse", FailureRate(2.0 * base, PM), {"piE": pi})
    assert doubled.value == pytest.approx(2.0 * single.value, rel=1e-14)


@given(st.floats(min_value=1.0, max_value=4.0), st.floats(min_value=1.0, max_value=4.0))
def test_factor_product_monotone(lo, extra):
    base = FailureRate(0.7, PM)
    a = factor_product_rate("inductor", base, {"piT": lo})
    b = factor_product_rate("inductor", base, {"piT": lo * extra})
    assert b.value >= a.value


# -- bearing -------------------------------------------------------------------

def test_bearing_identity():
    assert bearing_rate(FailureRate(1e-5, PM), {}).value == 1e-5


def test_bearing_single_factor():
    out = bearing_rate(FailureRate(1e-5, PM), {"CY": 2.0})
    assert out.value == pytest.approx(2e-5, rel=1e-15)


def test_bearing_ota_row():
    # all-ones factor set returns the stored base untouched
    out = bearing_rate(FailureRate(3.61e-11, PH), {})
    assert out.per_hour == 3.61e-11


def test_bearing_negative_factor_rejected():
    with pytest.raises(ValidationError):
        bearing_rate(FailureRate(1e-5, PM), {"CV": -1.0})


# -- motor ----------------------------------------------------------------------

def test_motor_stator_constant_only():
    out = motor_rate(MotorParams())
    assert out.value == STATOR_RATE
    assert out.unit is PM


def test_motor_direct_sum():
    out = motor_rate(MotorParams(base_rate=1.0, service_factor=2.0, brush_count=2))
    assert out.value == pytest.approx(2.0 + 2 * BRUSH_RATE + STATOR_RATE, rel=1e-15)
    assert out.value == pytest.approx(8.401, rel=1e-12)


def test_motor_ota_fixture():
    with open(fixture_path("ota_dc_motor.json")) as fh:
        doc = json.load(fh)
    params = doc["params"]
    out = motor_rate(MotorParams(
        base_rate=FailureRate(**params["base_rate"]),
        service_factor=params["service_factor"],
        winding_rate=FailureRate(**params["winding_rate"]),
        brush_count=params["brush_count"],
        armature_shaft_rate=FailureRate(**params["armature_shaft_rate"]),
        bearing_rate=FailureRate(**params["bearing_rate"]),
        gear_rate=FailureRate(**params["gear_rate"]),
        capacitor_rate=FailureRate(**params["capacitor_rate"]),
    ))
    assert out.per_hour == 8.04e-6
    # independent summation of the fixture's sub-rates in exact decimal
    total = (
        Decimal(str(params["base_rate"]["value"])) * Decimal(str(params["service_factor"]))
        + Decimal(str(params["winding_rate"]["value"]))
        + Decimal("3.2") * params["brush_count"]
        + Decimal("0.001")
        + Decimal(str(params["armature_shaft_rate"]["value"]))
        + Decimal(str(params["bearing_rate"]["value"]))
        + Decimal(str(params["gear_rate"]["value"]))
        + Decimal(str(params["capacitor_rate"]["value"]))
    )
    assert out.value == pytest.approx(float(total), rel=1e-12)


def test_motor_rejects_negative_inputs():
    with pytest.raises(ValidationError):
        motor_rate(MotorParams(winding_rate=-1.0))
    with pytest.raises(ValidationError):
        MotorParams(brush_count=-1)


# -- battery ----------------------------------------------------------------------

def test_battery_rates_exact():
    assert battery_rate(BatteryType.PRIMARY_CELL).value == 2.0e-8
    assert battery_rate(BatteryType.NICD).value == 1.0e-7
    assert battery_rate(BatteryType.LIION).value == 1.5e-7
    assert battery_rate(BatteryType.PRIMARY_CELL).unit is PH


# -- rotating device ---------------------------------------------------------------

def test_rotating_device_zero():
    out = rotating_device_rate(RotatingDeviceParams(lambda1=0.0, lambda2=0.0))
    assert out.value == 0.0


def test_rotating_device_single_term():
    out = rotating_device_rate(RotatingDeviceParams(
        lambda1=1.0, A=1.0, alpha_bearing=1e6, lambda2=0.0))
    assert out.value == pytest.approx(1.0, rel=1e-12)


def test_rotating_device_two_terms():
    # frozen from an independent scalar evaluation: (5e-6 + 1.5e-6)*1e6 = 6.5
    out = rotating_device_rate(RotatingDeviceParams(
        lambda1=2.0, A=4.0, alpha_bearing=1e5,
        lambda2=3.0, B=2.0, alpha_winding=1e6))
    assert out.value == pytest.approx(6.5, rel=1e-12)


def test_rotating_device_zero_alpha_rejected():
    with pytest.raises(DomainError):
        RotatingDeviceParams(alpha_bearing=0.0)


# -- custom ----------------------------------------------------------------------

def test_custom_constant_rate():
    out = custom_rate(FailureRate(6.8e-6, PH))
    assert out.value == 6.8e-6


def test_custom_product():
    out = custom_rate(FailureRate(1.0, PM), {"wear": 2.0, "load": 3.0})
    assert out.value == pytest.approx(6.0, rel=1e-15)


def test_custom_zero_base():
    out = custom_rate(FailureRate(0.0, PM), {"wear": 2.0})
    assert out.value == 0.0


def test_custom_rejects_nonpositive_multiplier():
    with pytest.raises(ValidationError):
        custom_rate(FailureRate(1.0, PM), {"wear": 0.0})


# -- homogeneity / output sign across all calculators ------------------------------

@given(st.floats(min_value=1e-9, max_value=1e2))
def test_all_calculators_nonnegative_and_unit_tagged(base):
    assert factor_product_rate("quartz_crystal", FailureRate(base, PM), {}).unit is PM
    assert bearing_rate(FailureRate(base, PM), {}).unit is PM
    assert motor_rate(MotorParams(base_rate=base)).unit is PM
    assert battery_rate(BatteryType.NICD).unit is PH
    assert custom_rate(FailureRate(base, PM)).value >= 0.0


# -- factor lookup -----------------------------------------------------------------

def test_lookup_defaults_to_ones():
    lookup = FactorLookup()
    assert lookup.pi_e("GM") == 1.0
    assert lookup.pi_q("JANTX") == 1.0
    assert lookup.pi_e(None) == 1.0


def test_lookup_overrides():
    lookup = FactorLookup(environment={"GM": 4.0}, quality={"JANTX": 2.0})
    assert lookup.pi_e("GM") == 4.0
    assert lookup.pi_e("GB") == 1.0
    assert lookup.pi_q("JANTX") == 2.0
