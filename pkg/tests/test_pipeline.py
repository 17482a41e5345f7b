"""Sensor pipeline: curves, bindings, snapshots, replay, smoothing."""

import math

import pytest

from conftest import fixture_path
from phm.errors import ValidationError
from phm.model import build_block_tree, component_rate
from phm.pipeline import (
    AnalysisSnapshot,
    MappingCurve,
    Pipeline,
    SensorBinding,
    SensorReading,
    parse_bindings,
    parse_reading_line,
    parse_readings,
    replay,
    smooth,
)
from phm.rbd import system_hazard

CAP_PATH = "Power/Battery Control Board/Capacitor"
MOTOR_PATH = "Mobility/DC Motor/DC Motor"


def curve(*knots):
    return MappingCurve(tuple(knots))


def binding(sensor="s1", path=CAP_PATH, factor="piT", knots=((0.0, 1.0),)):
    return SensorBinding(sensor_id=sensor, target_path=path,
                         target_factor=factor, curve=MappingCurve(tuple(knots)))


def reading(sensor="s1", ts=0.0, value=0.0):
    return SensorReading(sensor_id=sensor, timestamp=ts, value=value)


# -- mapping curve ------------------------------------------------------------

def test_curve_linear_midpoint():
    c = curve((20.0, 1.0), (60.0, 2.0))
    assert c(40.0) == pytest.approx(1.5, rel=1e-15)


def test_curve_clamps_outside_range():
    c = curve((20.0, 1.0), (60.0, 2.0))
    assert c(100.0) == 2.0
    assert c(-40.0) == 1.0


def test_curve_single_knot_is_constant():
    c = curve((0.0, 3.0))
    assert c(-5.0) == c(0.0) == c(17.0) == 3.0


def test_curve_validation():
    with pytest.raises(ValidationError):
        MappingCurve(())
    with pytest.raises(ValidationError):
        MappingCurve(((0.0, 1.0), (0.0, 2.0)))  # not strictly increasing
    with pytest.raises(ValidationError):
        MappingCurve(((0.0, 0.0),))  # multiplier must be positive


# -- binding ---------------------------------------------------------------------

def test_bind_identity_curve_keeps_snapshots_nominal(ota):
    p = Pipeline(ota)
    p.bind(binding())
    p.apply_reading(reading(value=123.0))
    snap = p.snapshot(10.0)
    assert snap.sensor_lambda == snap.nominal_lambda
    assert snap.sensor_reliability == snap.nominal_reliability


def test_bind_unresolved_path_rejected(ota):
    p = Pipeline(ota)
    with pytest.raises(ValidationError, match="does not resolve"):
        p.bind(binding(path="power/ghost"))


def test_bind_unknown_factor_rejected(ota):
    p = Pipeline(ota)
    with pytest.raises(ValidationError, match="not recognized"):
        p.bind(binding(factor="piZ"))
    # battery kind has no bindable factors at all
    with pytest.raises(ValidationError, match="not recognized"):
        p.bind(binding(path="Power/Battery/Battery", factor="piT"))


def test_bind_custom_slot_allowed(ota):
    p = Pipeline(ota)
    p.bind(binding(path=MOTOR_PATH, factor="anything_goes"))
    assert len(p.bindings) == 1


def test_bind_idempotent(ota):
    p = Pipeline(ota)
    b = binding()
    p.bind(b)
    p.bind(b)
    assert len(p.bindings) == 1


def test_two_bindings_apply_together(ota):
    p = Pipeline(ota)
    p.bind(binding(sensor="s1", path=CAP_PATH, factor="piT",
                   knots=((0.0, 1.0), (10.0, 3.0))))
    p.bind(binding(sensor="s2", path=MOTOR_PATH, factor="wear",
                   knots=((0.0, 1.0), (10.0, 2.0))))
    p.apply_reading(reading("s1", 0.0, 10.0))  # piT multiplier 3
    p.apply_reading(reading("s2", 0.0, 10.0))  # wear multiplier 2
    snap = p.snapshot(0.0)

    # independent recomputation of the modified system rate
    specs = ota.components()
    lam = snap.nominal_lambda
    lam += 2.0 * component_rate(specs[CAP_PATH]).per_hour * 28   # (3-1)x base
    lam += 1.0 * component_rate(specs[MOTOR_PATH]).per_hour * 2  # (2-1)x base
    assert snap.sensor_lambda == pytest.approx(lam, rel=1e-12)


# -- readings -----------------------------------------------------------------------

def test_reading_for_unbound_sensor_counted(ota):
    p = Pipeline(ota)
    p.bind(binding())
    before = p.snapshot(0.0)
    p.apply_reading(reading("nobody", 1.0, 5.0))
    assert p.ignored_readings == 1
    after = p.snapshot(1.0)
    assert after.sensor_lambda == before.sensor_lambda


def test_nonfinite_reading_rejected(ota):
    p = Pipeline(ota)
    p.bind(binding())
    p.apply_reading(reading(value=math.nan))
    assert p.rejected_readings == 1


def test_out_of_order_reading_dropped(ota):
    p = Pipeline(ota)
    p.bind(binding(knots=((0.0, 1.0), (10.0, 2.0))))
    p.apply_reading(reading(ts=5.0, value=10.0))
    p.apply_reading(reading(ts=1.0, value=0.0))  # stale, dropped
    assert p.dropped_out_of_order == 1
    snap = p.snapshot(0.0)
    assert snap.sensor_lambda > snap.nominal_lambda  # multiplier 2 still active


def test_latest_reading_wins(ota):
    p = Pipeline(ota)
    p.bind(binding(knots=((0.0, 1.0), (10.0, 2.0))))
    p.apply_reading(reading(ts=0.0, value=10.0))
    high = p.snapshot(0.0).sensor_lambda
    p.apply_reading(reading(ts=1.0, value=0.0))
    low = p.snapshot(0.0).sensor_lambda
    assert low < high
    assert low == p.snapshot(0.0).nominal_lambda


# -- snapshots ----------------------------------------------------------------------

def test_snapshot_monotonic_time_required(ota):
    p = Pipeline(ota)
    p.snapshot(5.0)
    with pytest.raises(ValidationError):
        p.snapshot(4.0)


def test_snapshot_multiplier_above_one_raises_lambda(ota):
    p = Pipeline(ota)
    p.bind(binding(knots=((0.0, 2.0),)))
    p.apply_reading(reading(value=0.0))
    snap = p.snapshot(100.0)
    assert snap.sensor_lambda > snap.nominal_lambda
    assert snap.sensor_reliability < snap.nominal_reliability


def test_snapshot_multiplier_below_one_lowers_lambda(ota):
    p = Pipeline(ota)
    p.bind(binding(knots=((0.0, 0.5),)))
    p.apply_reading(reading(value=0.0))
    snap = p.snapshot(100.0)
    assert snap.sensor_lambda < snap.nominal_lambda
    assert snap.sensor_reliability > snap.nominal_reliability


def test_unbind_restores_nominal(ota):
    p = Pipeline(ota)
    p.bind(binding(knots=((0.0, 2.0),)))
    p.apply_reading(reading(value=0.0))
    assert p.snapshot(1.0).sensor_lambda > p.snapshot(1.0).nominal_lambda
    p.unbind("s1")
    snap = p.snapshot(2.0)
    assert snap.sensor_lambda == snap.nominal_lambda
    assert snap.sensor_reliability == snap.nominal_reliability


def test_failed_snapshot_flag():
    import json
    doc = {
        "schema_version": 1, "name": "doomed",
        "modules": [{"name": "M", "submodules": [{"name": "S", "components": [{
            "name": "C", "kind": "custom", "quantity": 1,
            "params": {"base_rate": {"value": 1.0, "unit": "per_hour"}}}]}]}],
        "configuration": {"type": "leaf", "ref": "M/S/C"},
    }
    from phm.model import parse_model
    p = Pipeline(parse_model(json.dumps(doc)))
    snap = p.snapshot(40.0)  # R = e^-40 < 1e-12
    assert snap.failed
    assert snap.nominal_lambda == math.inf


# -- replay -----------------------------------------------------------------------

def test_replay_final_state_matches_single_shot(ota):
    with open(fixture_path("bindings.json")) as fh:
        bindings = parse_bindings(fh.read())
    with open(fixture_path("readings.log")) as fh:
        readings = parse_readings(fh.read())

    snapshots = replay(ota, bindings, readings, tick_period=1.0)
    assert len(snapshots) == 1000

    # offline recomputation from the last reading of each sensor
    last = {}
    for r in readings:
        last[r.sensor_id] = r
    p = Pipeline(ota)
    for b in bindings:
        p.bind(b)
    for r in sorted(last.values(), key=lambda r: r.timestamp):
        p.apply_reading(r)
    expected = p.snapshot(snapshots[-1].t)
    assert snapshots[-1].sensor_lambda == expected.sensor_lambda
    assert snapshots[-1].sensor_reliability == expected.sensor_reliability


def test_replay_monotone_with_multipliers_above_one(ota):
    with open(fixture_path("bindings.json")) as fh:
        bindings = parse_bindings(fh.read())
    with open(fixture_path("readings.log")) as fh:
        readings = parse_readings(fh.read())
    snapshots = replay(ota, bindings, readings, tick_period=1.0)
    for snap in snapshots:
        assert snap.sensor_lambda >= snap.nominal_lambda
        assert snap.sensor_reliability <= snap.nominal_reliability


def test_replay_independent_of_batching(ota):
    with open(fixture_path("bindings.json")) as fh:
        bindings = parse_bindings(fh.read())
    with open(fixture_path("readings.log")) as fh:
        readings = parse_readings(fh.read())
    a = replay(ota, bindings, readings[:400], tick_period=7.0)
    p = Pipeline(ota)
    for b in bindings:
        p.bind(b)
    # apply the same readings one by one on the identical tick grid
    t0 = readings[0].timestamp
    idx = 0
    b_snaps = []
    k = 0
    t_end = max(r.timestamp for r in readings[:400])
    while t0 + k * 7.0 <= t_end + 1e-9:
        wall = t0 + k * 7.0
        while idx < 400 and readings[idx].timestamp <= wall + 1e-12:
            p.apply_reading(readings[idx])
            idx += 1
        b_snaps.append(p.snapshot((wall - t0) / 3600.0))
        k += 1
    assert [s.sensor_lambda for s in a] == [s.sensor_lambda for s in b_snaps]


def test_reading_line_round_trip():
    r = parse_reading_line('{"timestamp": 3.5, "sensor_id": "t", "value": 21.0, "unit": "C"}')
    assert r.timestamp == 3.5 and r.value == 21.0
    with pytest.raises(ValidationError):
        parse_reading_line("{}", 4)
    with pytest.raises(ValidationError):
        parse_reading_line("not json", 9)


# -- smoothing -----------------------------------------------------------------------

def snap_with(value, t):
    return AnalysisSnapshot(t=t, nominal_lambda=value, nominal_reliability=value,
                            sensor_lambda=value, sensor_reliability=value)


def test_smooth_window_one_is_identity(ota):
    series = [snap_with(float(i), float(i)) for i in range(5)]
    assert smooth(series, 1) == series


def test_smooth_constant_series_unchanged():
    series = [snap_with(2.5, float(i)) for i in range(10)]
    for window in (1, 3, 5):
        assert [s.nominal_lambda for s in smooth(series, window)] == [2.5] * 10


def test_smooth_window_three_frozen():
    # frozen from direct averaging: [1,2,3,4,5] -> [1.5, 2, 3, 4, 4.5]
    series = [snap_with(float(v), float(i)) for i, v in enumerate([1, 2, 3, 4, 5])]
    out = smooth(series, 3)
    assert [s.nominal_lambda for s in out] == [1.5, 2.0, 3.0, 4.0, 4.5]


def test_smooth_preserves_length_and_scales():
    series = [snap_with(float(v), float(i))
              for i, v in enumerate([3, 1, 4, 1, 5, 9, 2, 6])]
    out = smooth(series, 3)
    assert len(out) == len(series)
    doubled = [snap_with(2.0 * v.nominal_lambda, v.t) for v in series]
    out2 = smooth(doubled, 3)
    for a, b in zip(out, out2):
        assert b.nominal_lambda == pytest.approx(2.0 * a.nominal_lambda, rel=1e-12)


def test_smooth_rejects_window_zero():
    with pytest.raises(ValidationError):
        smooth([], 0)
