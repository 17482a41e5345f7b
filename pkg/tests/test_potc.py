"""Task-completion probability and remaining-useful-life contracts."""

import math

import numpy as np
import pytest

from phm.errors import SystemFailedError, ValidationError
from phm.lifemodels import Exponential, FailureRate, Weibull
from phm.potc import (TaskRecord, TaskSpec, actual_potc, predict_potc, rul,
                      task_distance_m, task_duration)
from phm.rbd import Leaf, Series


def exp_leaf(lam, cid="c", q=1):
    return Leaf(component_id=cid, model=Exponential(FailureRate(lam)), quantity=q)


SERIES_TREE = Series([exp_leaf(1e-3, "a", 2), exp_leaf(5e-4, "b")])  # Lambda = 2.5e-3
WEIBULL_TREE = Leaf(component_id="w", model=Weibull(alpha=100.0, beta=2.0), quantity=1)


# -- task duration -----------------------------------------------------------

def test_duration_km_at_kmh():
    spec = TaskSpec("t", distance=3.6, distance_unit="km", speed=3.6, speed_unit="km/h")
    assert task_duration(spec) == pytest.approx(1.0, rel=1e-15)


def test_duration_zero_distance():
    spec = TaskSpec("t", distance=0.0, distance_unit="m", speed=2.0, speed_unit="m/s")
    assert task_duration(spec) == 0.0


def test_duration_seconds():
    spec = TaskSpec("t", duration=1800.0, duration_unit="s")
    assert task_duration(spec) == 0.5


def test_duration_mixed_units_convert_exactly():
    # same physical task: 500 m at 1 m/s = 500 s
    a = TaskSpec("t", distance=500.0, distance_unit="m", speed=3.6, speed_unit="km/h")
    b = TaskSpec("t", distance=0.5, distance_unit="km", speed=1.0, speed_unit="m/s")
    assert task_duration(a) == pytest.approx(500.0 / 3600.0, rel=1e-12)
    assert task_duration(a) == pytest.approx(task_duration(b), rel=1e-12)


def test_task_spec_validation():
    with pytest.raises(ValidationError):
        TaskSpec("t")  # neither distance nor duration
    with pytest.raises(ValidationError):
        TaskSpec("t", distance=1.0, duration=1.0)
    with pytest.raises(ValidationError):
        TaskSpec("t", distance=10.0)  # no speed
    with pytest.raises(ValidationError):
        TaskSpec("t", distance=10.0, speed=0.0)
    with pytest.raises(ValidationError):
        TaskSpec("t", distance=10.0, speed=1.0, speed_unit="furlong/fortnight")


# -- predict -------------------------------------------------------------------

def test_zero_length_task_has_potc_one():
    spec = TaskSpec("t", duration=0.0, duration_unit="h")
    assert predict_potc(SERIES_TREE, 123.0, spec).potc == 1.0


def test_series_exponential_memoryless():
    spec = TaskSpec("t", duration=1.0, duration_unit="h")
    expected = math.exp(-2.5e-3)
    at_zero = predict_potc(SERIES_TREE, 0.0, spec).potc
    at_later = predict_potc(SERIES_TREE, 1e4, spec).potc
    assert at_zero == pytest.approx(expected, rel=1e-12)
    assert at_later == pytest.approx(expected, rel=1e-9)


def test_weibull_conditional_survival():
    # frozen from independent evaluation: exp(-(0.36 - 0.25)) = 0.8958341352965282
    spec = TaskSpec("t", duration=10.0, duration_unit="h")
    potc = predict_potc(WEIBULL_TREE, 50.0, spec).potc
    assert potc == pytest.approx(0.8958341352965282, rel=1e-12)


def test_predict_on_failed_system():
    tree = exp_leaf(1.0)
    spec = TaskSpec("t", duration=1.0, duration_unit="h")
    with pytest.raises(SystemFailedError):
        predict_potc(tree, 50.0, spec)


def test_potc_bounds_and_monotone_in_duration():
    rng = np.random.default_rng(8)
    for _ in range(30):
        d1, d2 = sorted(rng.uniform(0.0, 50.0, size=2))
        p1 = predict_potc(SERIES_TREE, 10.0,
                          TaskSpec("t", duration=float(d1), duration_unit="h")).potc
        p2 = predict_potc(SERIES_TREE, 10.0,
                          TaskSpec("t", duration=float(d2), duration_unit="h")).potc
        assert 0.0 <= p2 <= p1 <= 1.0


def test_potc_chaining_multiplies():
    t0 = 20.0
    for d1, d2 in [(1.0, 2.0), (5.0, 0.5), (10.0, 10.0)]:
        whole = predict_potc(
            WEIBULL_TREE, t0,
            TaskSpec("t", duration=d1 + d2, duration_unit="h")).potc
        first = predict_potc(
            WEIBULL_TREE, t0, TaskSpec("t", duration=d1, duration_unit="h")).potc
        second = predict_potc(
            WEIBULL_TREE, t0 + d1, TaskSpec("t", duration=d2, duration_unit="h")).potc
        assert whole == pytest.approx(first * second, rel=1e-12)


def test_potc_unit_invariance():
    meters = TaskSpec("t", distance=1800.0, distance_unit="m",
                      speed=0.5, speed_unit="m/s")
    kilometers = TaskSpec("t", distance=1.8, distance_unit="km",
                          speed=1.8, speed_unit="km/h")
    pm = predict_potc(SERIES_TREE, 0.0, meters).potc
    pk = predict_potc(SERIES_TREE, 0.0, kilometers).potc
    assert pm == pytest.approx(pk, rel=1e-12)


# -- actual ---------------------------------------------------------------------

def test_actual_zero_duration():
    assert actual_potc(SERIES_TREE, 10.0, 0.0) == 1.0


def test_actual_equals_predicted_for_same_duration():
    spec = TaskSpec("t", duration=2.0, duration_unit="h")
    predicted = predict_potc(SERIES_TREE, 30.0, spec)
    assert actual_potc(SERIES_TREE, 30.0, 2.0) == predicted.potc


def test_actual_smaller_for_longer_measured():
    short = actual_potc(SERIES_TREE, 0.0, 1.0)
    long = actual_potc(SERIES_TREE, 0.0, 2.0)
    assert long < short
    assert short == pytest.approx(math.exp(-2.5e-3), rel=1e-12)
    assert long == pytest.approx(math.exp(-5.0e-3), rel=1e-12)


# -- rul ------------------------------------------------------------------------

def test_rul_exponential_at_e_threshold():
    lam = 2.5e-3
    expected = 1.0 / lam
    for elapsed in (0.0, 100.0, 5000.0):
        value = rul(SERIES_TREE, elapsed, threshold=math.exp(-1.0))
        assert value == pytest.approx(expected, rel=1e-6)


def test_rul_half_life():
    tree = exp_leaf(1e-3)
    assert rul(tree, 0.0, threshold=0.5) == pytest.approx(
        math.log(2.0) / 1e-3, rel=1e-6)


def test_rul_shrinks_with_age_for_wearout():
    fresh = rul(WEIBULL_TREE, 0.0, threshold=0.5)
    aged = rul(WEIBULL_TREE, 100.0, threshold=0.5)
    assert aged < fresh


def test_rul_threshold_crossing_is_tight():
    threshold = 0.3
    elapsed = 50.0
    value = rul(WEIBULL_TREE, elapsed, threshold=threshold)
    from phm.rbd import system_reliability
    ratio = (system_reliability(WEIBULL_TREE, elapsed + value)
             / system_reliability(WEIBULL_TREE, elapsed))
    assert ratio == pytest.approx(threshold, rel=1e-5)


def test_rul_threshold_validation():
    with pytest.raises(ValidationError):
        rul(SERIES_TREE, 0.0, threshold=0.0)
    with pytest.raises(ValidationError):
        rul(SERIES_TREE, 0.0, threshold=1.0)


# -- task record ---------------------------------------------------------------

def test_task_record_round_trip():
    spec = TaskSpec("haul", distance=3.6, distance_unit="km",
                    speed=3.6, speed_unit="km/h", waypoints=((0, 0), (10, 5)))
    record = TaskRecord(
        spec=spec, elapsed_at_start=12.0,
        predicted_potc_nominal=0.999, predicted_potc_sensor=0.998,
        predicted_duration=1.0, predicted_distance_m=task_distance_m(spec))
    wire = record.to_json()
    assert wire["task_id"] == "haul"
    assert wire["task_time"] == 3600.0
    assert wire["task_positions"] == [[0, 0], [10, 5]]
    assert wire["predicted_distance"] == 3600.0
    assert "actual_duration_hours" not in wire

    record.complete(0.997, 0.996, 2.0)
    wire = record.to_json()
    assert wire["actual_duration_hours"] == 2.0

    restored = TaskRecord.from_json(wire)
    assert restored == record


def test_task_distance_normalization():
    km = TaskSpec("a", distance=2.5, distance_unit="km", speed=1.0, speed_unit="m/s")
    m = TaskSpec("b", distance=2500.0, distance_unit="m", speed=1.0, speed_unit="m/s")
    h = TaskSpec("c", duration=1.0, duration_unit="h")
    assert task_distance_m(km) == 2500.0
    assert task_distance_m(m) == 2500.0
    assert task_distance_m(h) is None
