"""Task-completion probability and remaining useful life.

A mission is specified either by duration or by distance plus speed; both
reduce to a task duration in hours through exact unit conversions
(1 km/h = 1000 m / 3600 s).  The completion probability is conditional
mission reliability,

    POTC = R(t0 + dt) / R(t0)

the chance the system survives the mission window given it has survived to
mission start.  For a pure-series exponential system this collapses to
exp(-Lambda * dt), independent of accumulated usage.  The same formula
evaluated with the measured duration gives the after-the-fact ("actual")
value.

Remaining useful life is the time until conditional reliability drops to a
threshold (default exp(-1) ~ 0.368), found by bracketing plus bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import SystemFailedError, ValidationError
from .rbd import RELIABILITY_FLOOR, BlockExpr, system_reliability

RUL_DEFAULT_THRESHOLD = 0.368  # ~ exp(-1)
RUL_MAX_HOURS = 1.0e9

DISTANCE_UNITS = ("m", "km")
SPEED_UNITS = ("m/s", "km/h")
TIME_UNITS = ("s", "h")


@dataclass(frozen=True)
class TaskSpec:
    """A mission request: distance at speed, or a plain duration.

    Waypoint lists are carried as opaque metadata for the robot stack;
    distance must be supplied, never derived from waypoints here.
    """

    task_id: str
    distance: Optional[float] = None
    distance_unit: str = "m"
    duration: Optional[float] = None
    duration_unit: str = "h"
    speed: Optional[float] = None
    speed_unit: str = "m/s"
    waypoints: Tuple = ()

    def __post_init__(self):
        if (self.distance is None) == (self.duration is None):
            raise ValidationError("task requires exactly one of distance or duration")
        if self.distance is not None:
            if self.distance_unit not in DISTANCE_UNITS:
                raise ValidationError(f"unknown distance unit {self.distance_unit!r}")
            if self.distance < 0 or not math.isfinite(self.distance):
                raise ValidationError("distance must be finite and >= 0")
            if self.speed is None:
                raise ValidationError("distance tasks require a speed")
            if self.speed_unit not in SPEED_UNITS:
                raise ValidationError(f"unknown speed unit {self.speed_unit!r}")
            if not math.isfinite(self.speed) or self.speed <= 0:
                raise ValidationError("speed must be finite and > 0")
        else:
            if self.duration_unit not in TIME_UNITS:
                raise ValidationError(f"unknown time unit {self.duration_unit!r}")
            if self.duration < 0 or not math.isfinite(self.duration):
                raise ValidationError("duration must be finite and >= 0")


def task_duration(spec: TaskSpec) -> float:
    """Task duration in hours."""
    if spec.duration is not None:
        return spec.duration if spec.duration_unit == "h" else spec.duration / 3600.0
    if spec.distance == 0.0:
        return 0.0
    distance_m = spec.distance * 1000.0 if spec.distance_unit == "km" else spec.distance
    speed_ms = spec.speed * (1000.0 / 3600.0) if spec.speed_unit == "km/h" else spec.speed
    return distance_m / speed_ms / 3600.0


@dataclass(frozen=True)
class PotcPrediction:
    potc: float
    duration_hours: float


@dataclass
class TaskRecord:
    """One task's predict-then-actual lifecycle.

    Actual fields stay None until the robot reports completion.  The wire
    form keeps the externally expected field names (task_time in seconds,
    task_positions, and the nested spec snapshot for lossless reload).
    """

    spec: TaskSpec
    elapsed_at_start: float
    predicted_potc_nominal: float
    predicted_potc_sensor: float
    predicted_duration: float  # hours
    predicted_distance_m: Optional[float] = None
    actual_potc_nominal: Optional[float] = None
    actual_potc_sensor: Optional[float] = None
    actual_duration: Optional[float] = None  # hours
    actual_distance_m: Optional[float] = None

    def complete(self, nominal: float, sensor: float, duration_hours: float,
                 distance_m: Optional[float] = None) -> None:
        self.actual_potc_nominal = nominal
        self.actual_potc_sensor = sensor
        self.actual_duration = duration_hours
        self.actual_distance_m = distance_m

    def to_json(self) -> dict:
        out = {
            "task_id": self.spec.task_id,
            "task_time": self.predicted_duration * 3600.0,
            "task_positions": [list(p) for p in self.spec.waypoints],
            "spec": _spec_to_json(self.spec),
            "elapsed_hours_at_predict": self.elapsed_at_start,
            "predicted_duration_hours": self.predicted_duration,
            "predicted_potc_nominal": self.predicted_potc_nominal,
            "predicted_potc_sensor": self.predicted_potc_sensor,
        }
        if self.predicted_distance_m is not None:
            out["predicted_distance"] = self.predicted_distance_m
        if self.actual_duration is not None:
            out.update({
                "actual_duration_hours": self.actual_duration,
                "actual_potc_nominal": self.actual_potc_nominal,
                "actual_potc_sensor": self.actual_potc_sensor,
            })
            if self.actual_distance_m is not None:
                out["actual_distance"] = self.actual_distance_m
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TaskRecord":
        spec = _spec_from_json(obj["spec"]) if "spec" in obj else TaskSpec(
            task_id=str(obj.get("task_id", "task")),
            duration=float(obj["task_time"]), duration_unit="s",
        )
        record = cls(
            spec=spec,
            elapsed_at_start=float(obj["elapsed_hours_at_predict"]),
            predicted_potc_nominal=float(obj["predicted_potc_nominal"]),
            predicted_potc_sensor=float(obj["predicted_potc_sensor"]),
            predicted_duration=float(obj["predicted_duration_hours"]),
            predicted_distance_m=obj.get("predicted_distance"),
        )
        if "actual_duration_hours" in obj:
            record.complete(
                obj.get("actual_potc_nominal"),
                obj.get("actual_potc_sensor"),
                float(obj["actual_duration_hours"]),
                obj.get("actual_distance"),
            )
        return record


def _spec_to_json(spec: TaskSpec) -> dict:
    out: dict = {"task_id": spec.task_id}
    if spec.distance is not None:
        out.update({"distance": spec.distance, "distance_unit": spec.distance_unit,
                    "speed": spec.speed, "speed_unit": spec.speed_unit})
    else:
        out.update({"duration": spec.duration, "duration_unit": spec.duration_unit})
    if spec.waypoints:
        out["waypoints"] = [list(p) for p in spec.waypoints]
    return out


def _spec_from_json(obj: dict) -> TaskSpec:
    return TaskSpec(
        task_id=str(obj.get("task_id", "task")),
        distance=obj.get("distance"),
        distance_unit=obj.get("distance_unit", "m"),
        duration=obj.get("duration"),
        duration_unit=obj.get("duration_unit", "h"),
        speed=obj.get("speed"),
        speed_unit=obj.get("speed_unit", "m/s"),
        waypoints=tuple(tuple(p) for p in obj.get("waypoints", [])),
    )


def task_distance_m(spec: TaskSpec) -> Optional[float]:
    """Task distance normalized to meters, when the task is distance-based."""
    if spec.distance is None:
        return None
    return spec.distance * 1000.0 if spec.distance_unit == "km" else spec.distance


def _conditional_reliability(expr: BlockExpr, elapsed: float, window: float) -> float:
    r_now = system_reliability(expr, elapsed)
    if r_now <= RELIABILITY_FLOOR:
        raise SystemFailedError(
            f"cannot predict: system reliability at elapsed={elapsed} h is below "
            f"{RELIABILITY_FLOOR}")
    return system_reliability(expr, elapsed + window) / r_now


def predict_potc(expr: BlockExpr, elapsed: float, spec: TaskSpec) -> PotcPrediction:
    """Completion probability for a task arriving at the given usage hours."""
    duration = task_duration(spec)
    return PotcPrediction(
        potc=_conditional_reliability(expr, elapsed, duration),
        duration_hours=duration,
    )


def actual_potc(expr: BlockExpr, elapsed_at_start: float, measured_duration: float) -> float:
    """Post-hoc completion probability using the measured task duration."""
    if measured_duration < 0 or not math.isfinite(measured_duration):
        raise ValidationError("measured duration must be finite and >= 0")
    return _conditional_reliability(expr, elapsed_at_start, measured_duration)


def rul(expr: BlockExpr, elapsed: float,
        threshold: float = RUL_DEFAULT_THRESHOLD) -> float:
    """Remaining useful life: smallest dt with R(elapsed+dt)/R(elapsed) <= threshold.

    Bracketing plus bisection to 1e-6 relative in dt; returns math.inf when
    the conditional reliability never crosses the threshold within 1e9 hours.
    """
    if not (0.0 < threshold < 1.0):
        raise ValidationError("threshold must lie in (0, 1)")
    r_now = system_reliability(expr, elapsed)
    if r_now <= RELIABILITY_FLOOR:
        raise SystemFailedError("system already failed; RUL undefined")

    def crossed(dt: float) -> bool:
        return system_reliability(expr, elapsed + dt) / r_now <= threshold

    hi = 1.0
    while not crossed(hi):
        hi *= 2.0
        if hi > RUL_MAX_HOURS:
            return math.inf
    lo = 0.0
    while hi - lo > 1e-6 * hi:
        mid = 0.5 * (lo + hi)
        if crossed(mid):
            hi = mid
        else:
            lo = mid
    return hi
