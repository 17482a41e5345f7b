"""HTTP/JSON service: model CRUD, analysis control, and live event streams.

The three streams (``/api/stream/hazard``, ``/api/stream/reliability``,
``/api/stream/potc``) emit line-delimited JSON events in snapshot order.
Each subscriber has a bounded buffer with a drop-oldest policy; every event
carries a monotonically increasing ``seq`` and the subscriber's cumulative
``dropped`` count, so consumers can detect loss and deduplicate after a
reconnect.

All state mutation funnels through one writer lock around the sensor
pipeline; handlers never hold the lock across response streaming.  Usage
hours accumulate only while an analysis session is running and persist to
``usage.json`` next to the model document on stop.  Task history persists
to ``tasks.json`` and sensor bindings to ``bindings.json``; a restarted
service reproduces identical nominal curves from those documents alone.

A tick period of 0 disables the wall-clock timer: snapshots then happen
only through ``POST /api/analysis/tick``, which is also how batch replays
are reproduced deterministically over HTTP.
"""

from __future__ import annotations

import json
import math
import os
import threading
import time
from collections import deque
from contextlib import asynccontextmanager
from dataclasses import dataclass, replace
from typing import List, Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse

from . import model as model_store
from . import pipeline as pipeline_mod
from .errors import PhmError, SystemFailedError, ValidationError
from .hazards import ALL_ONES_LOOKUP
from .pipeline import Pipeline, SensorReading, binding_from_json, binding_to_json
from .potc import (RUL_DEFAULT_THRESHOLD, TaskRecord, TaskSpec, actual_potc,
                   predict_potc, rul, task_distance_m)

STREAM_BUFFER_SIZE = 256


@dataclass
class ServiceConfig:
    model_dir: str = "."
    host: str = "127.0.0.1"
    port: int = 8080
    tick_period: float = 1.0     # seconds between snapshots; 0 = manual ticks
    time_scale: float = 1.0      # usage-hours accumulated per wall-hour
    smooth_window: int = 1       # trailing window on published events (1 = off)
    model_file: str = "model.json"
    lookup_file: Optional[str] = None  # factor lookup document path


class _Subscriber:
    def __init__(self):
        self.buffer = deque()
        self.dropped = 0
        self.condition = threading.Condition()
        self.closed = False

    def push(self, event: dict) -> None:
        with self.condition:
            if len(self.buffer) >= STREAM_BUFFER_SIZE:
                self.buffer.popleft()
                self.dropped += 1
            self.buffer.append(event)
            self.condition.notify()

    def pop(self, timeout: float) -> Optional[dict]:
        with self.condition:
            if not self.buffer:
                self.condition.wait(timeout)
            if not self.buffer:
                return None
            event = dict(self.buffer.popleft())
            event["dropped"] = self.dropped
            return event


class EventHub:
    """Fan-out of immutable events to any number of stream subscribers."""

    def __init__(self):
        self._subscribers: List[_Subscriber] = []
        self._lock = threading.Lock()
        self._seq = 0

    def publish(self, event: dict) -> dict:
        with self._lock:
            event = {"seq": self._seq, "wall": time.time(), **event}
            self._seq += 1
            subscribers = list(self._subscribers)
        for sub in subscribers:
            sub.push(event)
        return event

    def subscribe(self) -> _Subscriber:
        sub = _Subscriber()
        with self._lock:
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: _Subscriber) -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)


@dataclass
class SessionState:
    state: str = "idle"          # idle | running | stopped
    tick_period: float = 1.0
    time_scale: float = 1.0
    started_at: Optional[float] = None
    elapsed_hours: float = 0.0
    snapshot_count: int = 0
    session_id: str = "default"


class ServiceState:
    """Everything behind the endpoints; one writer lock guards mutation."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.lock = threading.RLock()
        self.hazard_hub = EventHub()
        self.reliability_hub = EventHub()
        self.potc_hub = EventHub()
        self.session = SessionState(
            tick_period=config.tick_period, time_scale=config.time_scale)
        self._timer: Optional[threading.Thread] = None
        self._timer_stop = threading.Event()
        self.standing_task: Optional[TaskSpec] = None
        self.task_history: List[TaskRecord] = []

        self.model_path = os.path.join(config.model_dir, config.model_file)
        self.usage_path = os.path.join(config.model_dir, "usage.json")
        self.tasks_path = os.path.join(config.model_dir, "tasks.json")
        self.bindings_path = os.path.join(config.model_dir, "bindings.json")

        self.lookup = ALL_ONES_LOOKUP
        if config.lookup_file:
            with open(config.lookup_file, "r", encoding="utf-8") as fh:
                self.lookup = model_store.load_factor_lookup(fh.read())
        if config.smooth_window < 1:
            raise ValidationError("smooth_window must be >= 1")
        self._recent: deque = deque(maxlen=config.smooth_window)

        self.model_text = self._load_model_text()
        self.model = model_store.parse_model(self.model_text)
        self.pipeline = Pipeline(self.model, self.lookup)
        self._restore_persisted()

    def _load_model_text(self) -> str:
        if os.path.exists(self.model_path):
            with open(self.model_path, "r", encoding="utf-8") as fh:
                return fh.read()
        text = model_store.ota_example_text()
        model_store.save_text(text, self.model_path)
        return text

    def _restore_persisted(self) -> None:
        if os.path.exists(self.usage_path):
            with open(self.usage_path, "r", encoding="utf-8") as fh:
                self.session.elapsed_hours = float(json.load(fh)["elapsed_hours"])
        if os.path.exists(self.tasks_path):
            with open(self.tasks_path, "r", encoding="utf-8") as fh:
                self.task_history = [TaskRecord.from_json(r)
                                     for r in json.load(fh)["robot_task_list"]]
        if os.path.exists(self.bindings_path):
            with open(self.bindings_path, "r", encoding="utf-8") as fh:
                for record in json.load(fh)["bindings"]:
                    self.pipeline.bind(binding_from_json(record))

    def persist_usage(self) -> None:
        model_store.save_text(
            json.dumps({"elapsed_hours": self.session.elapsed_hours}) + "\n",
            self.usage_path)

    def persist_tasks(self) -> None:
        model_store.save_text(
            json.dumps({"schema_version": 1,
                        "robot_task_list": [r.to_json() for r in self.task_history]},
                       indent=2) + "\n",
            self.tasks_path)

    def persist_bindings(self) -> None:
        model_store.save_text(
            pipeline_mod.bindings_document(self.pipeline.bindings),
            self.bindings_path)

    # -- snapshots ---------------------------------------------------------

    def emit_snapshot(self, t_hours: float) -> None:
        """Take a snapshot at the given usage hours and publish events.

        Must be called with the writer lock held.  With smooth_window > 1
        the published values are a trailing moving average (a live stream
        cannot see future points; batch replay smoothing is centered).
        """
        snap = self.pipeline.snapshot(t_hours, task=self.standing_task)
        self.session.elapsed_hours = t_hours
        self.session.snapshot_count += 1
        self._recent.append(snap)
        published = snap if self.config.smooth_window == 1 else self._trailing_mean()
        base = {"t": snap.t, "failed": snap.failed}
        self.hazard_hub.publish({
            **base, "nominal": _json_num(published.nominal_lambda),
            "sensor": _json_num(published.sensor_lambda)})
        self.reliability_hub.publish({
            **base, "nominal": published.nominal_reliability,
            "sensor": published.sensor_reliability})
        if published.potc_nominal is not None:
            self.potc_hub.publish({
                **base, "kind": "tick",
                "task_id": self.standing_task.task_id,
                "nominal": published.potc_nominal, "sensor": published.potc_sensor})

    def _trailing_mean(self):
        window = list(self._recent)
        latest = window[-1]

        def avg(get, fallback=None):
            values = [get(s) for s in window
                      if get(s) is not None and math.isfinite(get(s))]
            if not values:
                return fallback
            return sum(values) / len(values)

        return replace(
            latest,
            nominal_lambda=avg(lambda s: s.nominal_lambda, latest.nominal_lambda),
            nominal_reliability=avg(lambda s: s.nominal_reliability,
                                    latest.nominal_reliability),
            sensor_lambda=avg(lambda s: s.sensor_lambda, latest.sensor_lambda),
            sensor_reliability=avg(lambda s: s.sensor_reliability,
                                   latest.sensor_reliability),
            potc_nominal=avg(lambda s: s.potc_nominal),
            potc_sensor=avg(lambda s: s.potc_sensor),
        )

    def _timer_loop(self) -> None:
        period = self.session.tick_period
        while not self._timer_stop.wait(period):
            with self.lock:
                if self.session.state != "running":
                    break
                t = self.session.elapsed_hours + period * self.session.time_scale / 3600.0
                self.emit_snapshot(t)

    def start(self, tick_period: Optional[float], time_scale: Optional[float]) -> None:
        if self.session.state == "running":
            raise ValidationError("an analysis session is already running")
        if tick_period is not None:
            if tick_period < 0 or not math.isfinite(tick_period):
                raise ValidationError("tick_period must be finite and >= 0")
            self.session.tick_period = tick_period
        if time_scale is not None:
            if time_scale <= 0 or not math.isfinite(time_scale):
                raise ValidationError("time_scale must be finite and > 0")
            self.session.time_scale = time_scale
        self.session.state = "running"
        self.session.started_at = time.time()
        self._timer_stop.clear()
        if self.session.tick_period > 0:
            self._timer = threading.Thread(target=self._timer_loop, daemon=True)
            self._timer.start()

    def stop(self) -> None:
        if self.session.state != "running":
            raise ValidationError("no running analysis session")
        self.session.state = "stopped"
        self._timer_stop.set()
        if self._timer is not None:
            self._timer.join(timeout=5.0)
            self._timer = None
        self.persist_usage()

    def close(self) -> None:
        self._timer_stop.set()
        if self._timer is not None:
            self._timer.join(timeout=5.0)


def _json_num(x: float):
    # JSON has no Infinity; the failed flag carries the semantics
    if math.isinf(x):
        return None
    return x


def _task_from_request(body: dict) -> TaskSpec:
    """Task request: task_time (s) or distance+speed, waypoint list opaque."""
    task_id = str(body.get("task_id", "task"))
    waypoints = tuple(tuple(p) for p in body.get("task_positions", []))
    if "task_time" in body:
        return TaskSpec(task_id=task_id, duration=float(body["task_time"]),
                        duration_unit="s", waypoints=waypoints)
    if "duration" in body:
        return TaskSpec(task_id=task_id, duration=float(body["duration"]),
                        duration_unit=str(body.get("duration_unit", "h")),
                        waypoints=waypoints)
    if "distance" in body:
        return TaskSpec(
            task_id=task_id,
            distance=float(body["distance"]),
            distance_unit=str(body.get("distance_unit", "m")),
            speed=float(body["speed"]) if "speed" in body else None,
            speed_unit=str(body.get("speed_unit", "m/s")),
            waypoints=waypoints,
        )
    raise ValidationError("task requires task_time, duration, or distance+speed")


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig()
    state = ServiceState(config)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        state.close()

    app = FastAPI(title="phm-engine", version="0.1.0", lifespan=lifespan)
    app.state.phm = state

    @app.exception_handler(ValidationError)
    async def _validation_error(_request: Request, exc: ValidationError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(SystemFailedError)
    async def _failed_error(_request: Request, exc: SystemFailedError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(PhmError)
    async def _phm_error(_request: Request, exc: PhmError):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    # -- model -----------------------------------------------------------

    @app.get("/api/model")
    def get_model():
        with state.lock:
            return Response(content=state.model_text, media_type="application/json")

    @app.put("/api/model")
    async def put_model(request: Request):
        text = (await request.body()).decode("utf-8")
        with state.lock:
            if state.session.state == "running":
                raise ValidationError("stop the analysis before replacing the model")
            robot = model_store.parse_model(text)
            canonical = model_store.serialize_model(robot)
            model_store.save_text(canonical, state.model_path)
            state.model_text = canonical
            state.model = robot
            state.pipeline = Pipeline(robot)
            state.standing_task = None
        return {"ok": True, "components": len(robot.components())}

    @app.post("/api/model/validate")
    async def validate_model(request: Request):
        text = (await request.body()).decode("utf-8")
        diagnostics = model_store.validate_document(text)
        return {"ok": not diagnostics, "diagnostics": diagnostics}

    # -- analysis control --------------------------------------------------

    @app.post("/api/analysis/start")
    async def analysis_start(request: Request):
        body = await _json_body(request)
        with state.lock:
            state.start(body.get("tick_period"), body.get("time_scale"))
            return _status(state)

    @app.post("/api/analysis/stop")
    def analysis_stop():
        with state.lock:
            state.stop()
            return _status(state)

    @app.get("/api/analysis/status")
    def analysis_status():
        with state.lock:
            return _status(state)

    @app.post("/api/analysis/tick")
    async def analysis_tick(request: Request):
        body = await _json_body(request)
        with state.lock:
            if state.session.state != "running":
                raise ValidationError("ticks require a running analysis session")
            if "t" in body:
                t = float(body["t"])
            else:
                advance = float(body.get("advance_hours", 0.0))
                t = state.session.elapsed_hours + advance
            if t < state.session.elapsed_hours:
                raise ValidationError("tick time precedes accumulated usage hours")
            state.emit_snapshot(t)
            return _status(state)

    # -- sensors -----------------------------------------------------------

    @app.post("/api/sensor/binding")
    async def sensor_binding(request: Request):
        body = await _json_body(request)
        binding = binding_from_json(body)
        with state.lock:
            pipeline_mod.validate_binding(binding, state.model)
            state.pipeline.bind(binding)
            state.persist_bindings()
            return {"ok": True, "bindings": len(state.pipeline.bindings)}

    @app.delete("/api/sensor/binding")
    async def sensor_unbind(request: Request):
        body = await _json_body(request)
        with state.lock:
            removed = state.pipeline.unbind(
                str(body["sensor_id"]),
                body.get("target_path"), body.get("target_factor"))
            state.persist_bindings()
            return {"ok": True, "removed": removed}

    @app.get("/api/sensor/bindings")
    def sensor_bindings():
        with state.lock:
            return {"bindings": [binding_to_json(b) for b in state.pipeline.bindings]}

    @app.post("/api/sensor/reading")
    async def sensor_reading(request: Request):
        body = await _json_body(request)
        missing = {"timestamp", "sensor_id", "value"} - set(body)
        if missing:
            raise ValidationError(f"reading missing fields {sorted(missing)}")
        reading = SensorReading(
            sensor_id=str(body["sensor_id"]),
            timestamp=float(body["timestamp"]),
            value=float(body["value"]),
            unit=str(body.get("unit", "")),
        )
        with state.lock:
            state.pipeline.apply_reading(reading)
            return {
                "ok": True,
                "ignored": state.pipeline.ignored_readings,
                "rejected": state.pipeline.rejected_readings,
            }

    # -- tasks -------------------------------------------------------------

    @app.post("/api/task/predict")
    async def task_predict(request: Request):
        body = await _json_body(request)
        task = _task_from_request(body)
        with state.lock:
            elapsed = state.session.elapsed_hours
            nominal = predict_potc(state.pipeline._nominal_tree, elapsed, task)
            sensor = predict_potc(state.pipeline._sensor_block_tree(), elapsed, task)
            record = TaskRecord(
                spec=task,
                elapsed_at_start=elapsed,
                predicted_potc_nominal=nominal.potc,
                predicted_potc_sensor=sensor.potc,
                predicted_duration=nominal.duration_hours,
                predicted_distance_m=task_distance_m(task),
            )
            state.task_history.append(record)
            state.persist_tasks()
            state.standing_task = task
            state.potc_hub.publish({
                "t": elapsed, "kind": "predict", "task_id": task.task_id,
                "nominal": nominal.potc, "sensor": sensor.potc, "failed": False})
            return record.to_json()

    @app.post("/api/task/actual")
    async def task_actual(request: Request):
        body = await _json_body(request)
        task_id = str(body.get("task_id", "task"))
        if "task_time" in body:
            measured_hours = float(body["task_time"]) / 3600.0
        elif "measured_duration_hours" in body:
            measured_hours = float(body["measured_duration_hours"])
        else:
            raise ValidationError("actual analysis requires task_time (seconds) "
                                  "or measured_duration_hours")
        with state.lock:
            record = next(
                (r for r in reversed(state.task_history)
                 if r.spec.task_id == task_id),
                None)
            if record is None:
                raise ValidationError(f"no predicted task with id {task_id!r}")
            start = record.elapsed_at_start
            nominal = actual_potc(state.pipeline._nominal_tree, start, measured_hours)
            sensor = actual_potc(state.pipeline._sensor_block_tree(), start, measured_hours)
            record.complete(nominal, sensor, measured_hours,
                            distance_m=body.get("distance"))
            state.persist_tasks()
            state.potc_hub.publish({
                "t": state.session.elapsed_hours, "kind": "actual",
                "task_id": task_id, "nominal": nominal, "sensor": sensor,
                "failed": False})
            return record.to_json()

    @app.get("/api/task/history")
    def task_history():
        with state.lock:
            return {"robot_task_list": [r.to_json() for r in state.task_history]}

    # -- prognosis ---------------------------------------------------------

    @app.get("/api/rul")
    def get_rul(threshold: float = Query(default=RUL_DEFAULT_THRESHOLD)):
        with state.lock:
            elapsed = state.session.elapsed_hours
            nominal = rul(state.pipeline._nominal_tree, elapsed, threshold)
            sensor = rul(state.pipeline._sensor_block_tree(), elapsed, threshold)
        return {
            "threshold": threshold,
            "elapsed_hours": elapsed,
            "rul_nominal_hours": _json_num(nominal),
            "rul_sensor_hours": _json_num(sensor),
        }

    # -- streams -----------------------------------------------------------

    def _stream(hub: EventHub, max_events: Optional[int]):
        sub = hub.subscribe()

        def generate():
            sent = 0
            try:
                while max_events is None or sent < max_events:
                    event = sub.pop(timeout=0.5)
                    if event is None:
                        continue
                    yield json.dumps(event) + "\n"
                    sent += 1
            finally:
                hub.unsubscribe(sub)

        return StreamingResponse(generate(), media_type="application/x-ndjson")

    @app.get("/api/stream/hazard")
    def stream_hazard(max_events: Optional[int] = None):
        return _stream(state.hazard_hub, max_events)

    @app.get("/api/stream/reliability")
    def stream_reliability(max_events: Optional[int] = None):
        return _stream(state.reliability_hub, max_events)

    @app.get("/api/stream/potc")
    def stream_potc(max_events: Optional[int] = None):
        return _stream(state.potc_hub, max_events)

    @app.get("/api/health")
    def health():
        return {"ok": True}

    _mount_console(app)
    return app


async def _json_body(request: Request) -> dict:
    body = await request.body()
    if not body:
        return {}
    try:
        obj = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"request body is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        raise ValidationError("request body must be a JSON object")
    return obj


def _status(state: ServiceState) -> dict:
    s = state.session
    return {
        "session_id": s.session_id,
        "state": s.state,
        "tick_period": s.tick_period,
        "time_scale": s.time_scale,
        "elapsed_hours": s.elapsed_hours,
        "snapshot_count": s.snapshot_count,
        "bindings": len(state.pipeline.bindings),
        "model": state.model.name,
    }


def _mount_console(app: FastAPI) -> None:
    """Serve the web console's static build when present."""
    from fastapi.staticfiles import StaticFiles

    for candidate in (
        os.environ.get("PHM_CONSOLE_DIST", ""),
        os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist"),
    ):
        if candidate and os.path.isdir(candidate):
            app.mount("/", StaticFiles(directory=candidate, html=True), name="console")
            return


def serve(config: ServiceConfig) -> int:
    """Run the service; returns a process exit code (2 on startup failure)."""
    import socket

    import uvicorn

    if not os.path.isdir(config.model_dir) or not os.access(config.model_dir, os.R_OK):
        print(f"model directory not readable: {config.model_dir}")
        return 2
    # claim the port up front so a conflict is a clean exit code 2
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.host, config.port))
        probe.close()
    except OSError as exc:
        print(f"cannot bind {config.host}:{config.port}: {exc}")
        return 2
    try:
        app = create_app(config)
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    except (OSError, PhmError) as exc:
        print(f"startup error: {exc}")
        return 2
    except SystemExit as exc:
        return 2 if exc.code else 0
    return 0
