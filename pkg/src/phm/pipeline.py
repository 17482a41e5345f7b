"""Telemetry-driven analysis pipeline.

Sensor readings (live or replayed from a log) are mapped through
user-declared piecewise-linear curves to multiplicative overrides on named
factors of bound components.  Each snapshot evaluates the system twice at
the same usage time: the nominal side on the unmodified model and the
sensor side on a copy with every active override applied.  With no active
overrides both sides are identical by construction.

Override semantics: the latest reading through a binding wins and persists
until the next reading; there is no decay.  Readings for unbound sensors,
non-finite values, and per-sensor timestamp regressions are counted and
dropped rather than raised.

One logical writer owns the pipeline state; snapshots are immutable values
safe to hand to any number of readers.  The optional smoothing pass is a
centered moving average with edge truncation (window 1 = off).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ValidationError
from .hazards import ALL_ONES_LOOKUP, FactorLookup
from .model import BINDABLE_FACTORS, RobotModel, build_block_tree
from .potc import TaskSpec, predict_potc
from .rbd import RELIABILITY_FLOOR, _hazard, _reliability

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MappingCurve:
    """Reading -> multiplier transform: piecewise linear between knots,
    clamped to the end multipliers outside the knot range."""

    knots: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        knots = tuple((float(x), float(m)) for x, m in self.knots)
        if len(knots) < 1:
            raise ValidationError("curve requires at least one knot")
        for i, (x, m) in enumerate(knots):
            if not math.isfinite(x):
                raise ValidationError(f"knot {i}: reading value must be finite")
            if not math.isfinite(m) or m <= 0.0:
                raise ValidationError(f"knot {i}: multiplier must be finite and > 0")
            if i > 0 and x <= knots[i - 1][0]:
                raise ValidationError("knot reading values must be strictly increasing")
        object.__setattr__(self, "knots", knots)

    def __call__(self, reading: float) -> float:
        knots = self.knots
        if reading <= knots[0][0]:
            return knots[0][1]
        if reading >= knots[-1][0]:
            return knots[-1][1]
        for (x0, m0), (x1, m1) in zip(knots, knots[1:]):
            if x0 <= reading <= x1:
                frac = (reading - x0) / (x1 - x0)
                return m0 + frac * (m1 - m0)
        raise AssertionError("unreachable: knots are ordered")


@dataclass(frozen=True)
class SensorBinding:
    sensor_id: str
    target_path: str
    target_factor: str
    curve: MappingCurve

    @property
    def key(self) -> Tuple[str, str, str]:
        return (self.sensor_id, self.target_path, self.target_factor)


@dataclass(frozen=True)
class SensorReading:
    sensor_id: str
    timestamp: float  # seconds, monotonic per sensor
    value: float
    unit: str = ""


@dataclass(frozen=True)
class AnalysisSnapshot:
    """One timestamped record of nominal and sensor-based system health."""

    t: float  # elapsed usage hours
    nominal_lambda: float
    nominal_reliability: float
    sensor_lambda: float
    sensor_reliability: float
    potc_nominal: Optional[float] = None
    potc_sensor: Optional[float] = None
    failed: bool = False


def validate_binding(binding: SensorBinding, model: RobotModel) -> None:
    """Reject bindings whose path or factor does not resolve in the model."""
    specs = model.components()
    spec = specs.get(binding.target_path)
    if spec is None:
        raise ValidationError(
            f"binding target path {binding.target_path!r} does not resolve")
    allowed = BINDABLE_FACTORS.get(spec.kind)
    if allowed is None:  # custom: any named multiplier slot
        return
    if binding.target_factor not in allowed:
        raise ValidationError(
            f"factor {binding.target_factor!r} is not recognized for kind "
            f"{spec.kind!r} (allowed: {list(allowed) or 'none'})")


class Pipeline:
    """Single-writer analysis state for one robot model."""

    def __init__(self, model: RobotModel, lookup: FactorLookup = ALL_ONES_LOOKUP):
        self.model = model
        self.lookup = lookup
        self._bindings: Dict[Tuple[str, str, str], SensorBinding] = {}
        self._multipliers: Dict[Tuple[str, str, str], float] = {}
        self._last_timestamp: Dict[str, float] = {}
        self._nominal_tree = build_block_tree(model, lookup)
        self._sensor_tree = None  # rebuilt lazily when overrides change
        self._last_t: Optional[float] = None
        self.ignored_readings = 0
        self.rejected_readings = 0
        self.dropped_out_of_order = 0

    # -- bindings ---------------------------------------------------------

    def bind(self, binding: SensorBinding) -> None:
        """Register a binding; idempotent for an identical re-bind."""
        validate_binding(binding, self.model)
        previous = self._bindings.get(binding.key)
        if previous == binding:
            return
        self._bindings[binding.key] = binding
        # a changed curve invalidates any multiplier derived from the old one
        if previous is not None and binding.key in self._multipliers:
            del self._multipliers[binding.key]
            self._sensor_tree = None

    def unbind(self, sensor_id: str, target_path: Optional[str] = None,
               target_factor: Optional[str] = None) -> int:
        """Remove matching bindings (and their overrides); returns the count."""
        keys = [
            k for k in self._bindings
            if k[0] == sensor_id
            and (target_path is None or k[1] == target_path)
            and (target_factor is None or k[2] == target_factor)
        ]
        for k in keys:
            del self._bindings[k]
            self._multipliers.pop(k, None)
        if keys:
            self._sensor_tree = None
        return len(keys)

    def clear_bindings(self) -> None:
        self._bindings.clear()
        self._multipliers.clear()
        self._sensor_tree = None

    @property
    def bindings(self) -> List[SensorBinding]:
        return list(self._bindings.values())

    # -- readings ---------------------------------------------------------

    def apply_reading(self, reading: SensorReading) -> None:
        if not math.isfinite(reading.value):
            self.rejected_readings += 1
            return
        last = self._last_timestamp.get(reading.sensor_id)
        if last is not None and reading.timestamp < last:
            log.warning("out-of-order reading for %s (%.3f < %.3f) dropped",
                        reading.sensor_id, reading.timestamp, last)
            self.dropped_out_of_order += 1
            return
        self._last_timestamp[reading.sensor_id] = reading.timestamp
        matched = False
        for binding in self._bindings.values():
            if binding.sensor_id == reading.sensor_id:
                self._multipliers[binding.key] = binding.curve(reading.value)
                matched = True
        if matched:
            self._sensor_tree = None
        else:
            self.ignored_readings += 1

    # -- evaluation -------------------------------------------------------

    def active_overrides(self) -> Dict[str, Dict[str, float]]:
        """Current overrides as path -> {factor -> multiplier}.

        Multipliers from distinct bindings on the same factor compose by
        product.
        """
        out: Dict[str, Dict[str, float]] = {}
        for (sensor, path, factor), mult in self._multipliers.items():
            slot = out.setdefault(path, {})
            slot[factor] = slot.get(factor, 1.0) * mult
        return out

    def _sensor_block_tree(self):
        if not self._multipliers:
            return self._nominal_tree
        if self._sensor_tree is None:
            self._sensor_tree = build_block_tree(
                self.model, self.lookup, self.active_overrides())
        return self._sensor_tree

    def snapshot(self, t: float, task: Optional[TaskSpec] = None) -> AnalysisSnapshot:
        """Evaluate both system variants at usage time t (hours)."""
        if self._last_t is not None and t < self._last_t:
            raise ValidationError(
                f"snapshot time {t} is before the previous snapshot {self._last_t}")
        self._last_t = t

        nominal = self._evaluate(self._nominal_tree, t, task)
        if self._multipliers:
            sensor = self._evaluate(self._sensor_block_tree(), t, task)
        else:
            sensor = nominal
        return AnalysisSnapshot(
            t=t,
            nominal_lambda=nominal[0],
            nominal_reliability=nominal[1],
            sensor_lambda=sensor[0],
            sensor_reliability=sensor[1],
            potc_nominal=nominal[2],
            potc_sensor=sensor[2],
            failed=nominal[3] or sensor[3],
        )

    @staticmethod
    def _evaluate(tree, t, task):
        r = _reliability(tree, t)
        failed = r <= RELIABILITY_FLOOR
        hazard = math.inf if failed else _hazard(tree, t)
        potc = None
        if task is not None and not failed:
            potc = predict_potc(tree, t, task).potc
        return hazard, r, potc, failed


def smooth(series: Sequence[AnalysisSnapshot], window: int) -> List[AnalysisSnapshot]:
    """Centered moving average over each numeric field, edges truncated.

    Window 1 is the identity.  Optional POTC fields are averaged only where
    present at the center point; windows mixing present and missing values
    average the present ones.
    """
    if window < 1 or int(window) != window:
        raise ValidationError("smoothing window must be a positive integer")
    if window == 1:
        return list(series)
    half_lo = (window - 1) // 2
    half_hi = window // 2
    n = len(series)
    out = []
    for i, snap in enumerate(series):
        chunk = series[max(0, i - half_lo): min(n, i + half_hi + 1)]

        def avg(get):
            values = [get(s) for s in chunk if get(s) is not None]
            return sum(values) / len(values) if values else None

        out.append(replace(
            snap,
            nominal_lambda=avg(lambda s: s.nominal_lambda),
            nominal_reliability=avg(lambda s: s.nominal_reliability),
            sensor_lambda=avg(lambda s: s.sensor_lambda),
            sensor_reliability=avg(lambda s: s.sensor_reliability),
            potc_nominal=avg(lambda s: s.potc_nominal) if snap.potc_nominal is not None else None,
            potc_sensor=avg(lambda s: s.potc_sensor) if snap.potc_sensor is not None else None,
        ))
    return out


# -- reading log / bindings documents -------------------------------------

def parse_reading_line(line: str, line_no: int = 0) -> SensorReading:
    """One reading record: {"timestamp": s, "sensor_id": id, "value": v, "unit": u}."""
    where = f"reading log line {line_no}" if line_no else "reading record"
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{where}: not valid JSON: {exc}") from exc
    missing = {"timestamp", "sensor_id", "value"} - set(obj)
    if missing:
        raise ValidationError(f"{where}: missing fields {sorted(missing)}")
    return SensorReading(
        sensor_id=str(obj["sensor_id"]),
        timestamp=float(obj["timestamp"]),
        value=float(obj["value"]),
        unit=str(obj.get("unit", "")),
    )


def reading_line(reading: SensorReading) -> str:
    return json.dumps({
        "timestamp": reading.timestamp,
        "sensor_id": reading.sensor_id,
        "value": reading.value,
        "unit": reading.unit,
    })


def parse_readings(text: str) -> List[SensorReading]:
    readings = []
    for i, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            readings.append(parse_reading_line(line, i))
    return readings


def binding_from_json(obj: Mapping) -> SensorBinding:
    missing = {"sensor_id", "target_path", "target_factor", "curve"} - set(obj)
    if missing:
        raise ValidationError(f"binding record missing fields {sorted(missing)}")
    return SensorBinding(
        sensor_id=str(obj["sensor_id"]),
        target_path=str(obj["target_path"]),
        target_factor=str(obj["target_factor"]),
        curve=MappingCurve(tuple((x, m) for x, m in obj["curve"])),
    )


def binding_to_json(binding: SensorBinding) -> dict:
    return {
        "sensor_id": binding.sensor_id,
        "target_path": binding.target_path,
        "target_factor": binding.target_factor,
        "curve": [[x, m] for x, m in binding.curve.knots],
    }


def parse_bindings(text: str) -> List[SensorBinding]:
    """Bindings document: {"schema_version": 1, "bindings": [...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bindings document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema_version") != 1:
        raise ValidationError("bindings document requires schema_version 1")
    return [binding_from_json(b) for b in doc.get("bindings", [])]


def bindings_document(bindings: Iterable[SensorBinding]) -> str:
    return json.dumps({
        "schema_version": 1,
        "bindings": [binding_to_json(b) for b in bindings],
    }, indent=2) + "\n"


# -- deterministic replay ---------------------------------------------------

def replay(
    model: RobotModel,
    bindings: Sequence[SensorBinding],
    readings: Sequence[SensorReading],
    tick_period: float = 1.0,
    time_scale: float = 1.0,
    smooth_window: int = 1,
    lookup: FactorLookup = ALL_ONES_LOOKUP,
) -> List[AnalysisSnapshot]:
    """Replay a reading log against a model, snapshotting on a fixed grid.

    Snapshots are taken at log times t0, t0 + p, ... through the last
    reading timestamp; usage hours advance as (t - t0) * time_scale / 3600.
    The result is a pure function of (model, bindings, readings order,
    tick schedule).
    """
    if tick_period <= 0 or not math.isfinite(tick_period):
        raise ValidationError("tick period must be finite and > 0")
    if time_scale <= 0 or not math.isfinite(time_scale):
        raise ValidationError("time scale must be finite and > 0")
    pipeline = Pipeline(model, lookup)
    for binding in bindings:
        pipeline.bind(binding)
    if not readings:
        return smooth([pipeline.snapshot(0.0)], smooth_window)

    t0 = readings[0].timestamp
    t_end = max(r.timestamp for r in readings)
    ticks = max(0, math.floor((t_end - t0) / tick_period + 1e-9))
    snapshots = []
    idx = 0
    for k in range(ticks + 1):
        wall = t0 + k * tick_period
        while idx < len(readings) and readings[idx].timestamp <= wall + 1e-12:
            pipeline.apply_reading(readings[idx])
            idx += 1
        snapshots.append(pipeline.snapshot((wall - t0) * time_scale / 3600.0))
    return smooth(snapshots, smooth_window)
