"""Batch command-line interface.

Subcommands mirror the service's three analyses plus housekeeping:

    phm validate MODEL                     document diagnostics (exit 0/1)
    phm hazard MODEL [--at 0h]             nominal system hazard, per hour
    phm reliability MODEL --until 1000h --step 100h     CSV curve
    phm mttf MODEL                         mean time to failure, hours
    phm potc MODEL --elapsed 0h (--distance 3.6km --speed 3.6kmh | --duration 1h)
    phm rul MODEL [--elapsed 0h] [--threshold 0.368]
    phm replay MODEL --log FILE [--bindings FILE] [--tick 1.0] ...
    phm example                            emit the bundled example document
    phm serve [--port 8080] [--model-dir DIR]

Quantity flags carry unit suffixes (100h, 30s, 3.6km, 250m, 3.6kmh, 2ms).
All numeric output is dot-decimal scientific notation with 9 significant
digits.  Exit codes: 64 bad usage, 1 failed validation, 2 startup error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from . import model as model_store
from . import pipeline as pipeline_mod
from .errors import PhmError, ValidationError
from .hazards import ALL_ONES_LOOKUP
from .potc import RUL_DEFAULT_THRESHOLD, TaskSpec, predict_potc, rul
from .rbd import system_hazard, system_mttf, system_reliability
from .report import format_sig9, reliability_curve_csv, snapshots_to_csv

EX_USAGE = 64

_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([a-zA-Z/]*)\s*$")

_TIME_SUFFIXES = {"h": 1.0, "hr": 1.0, "": 1.0, "s": 1.0 / 3600.0}
_DISTANCE_SUFFIXES = {"m": "m", "km": "km"}
_SPEED_SUFFIXES = {"ms": "m/s", "m/s": "m/s", "kmh": "km/h", "km/h": "km/h"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _split_quantity(text: str, what: str):
    m = _QUANTITY_RE.match(text)
    if not m:
        raise ValidationError(f"cannot parse {what} {text!r}")
    try:
        value = float(m.group(1))
    except ValueError:
        raise ValidationError(f"cannot parse {what} {text!r}")
    return value, m.group(2)


def parse_hours(text: str) -> float:
    value, suffix = _split_quantity(text, "time")
    if suffix not in _TIME_SUFFIXES:
        raise ValidationError(f"unknown time unit {suffix!r} (use h or s)")
    return value * _TIME_SUFFIXES[suffix]


def parse_distance(text: str):
    value, suffix = _split_quantity(text, "distance")
    unit = _DISTANCE_SUFFIXES.get(suffix or "m")
    if unit is None:
        raise ValidationError(f"unknown distance unit {suffix!r} (use m or km)")
    return value, unit


def parse_speed(text: str):
    value, suffix = _split_quantity(text, "speed")
    unit = _SPEED_SUFFIXES.get(suffix or "m/s")
    if unit is None:
        raise ValidationError(f"unknown speed unit {suffix!r} (use ms or kmh)")
    return value, unit


def _load_model(path: str) -> model_store.RobotModel:
    try:
        return model_store.load_model(path)
    except FileNotFoundError:
        print(f"model file not found: {path}", file=sys.stderr)
        raise SystemExit(1)


def _flag(parse, *args):
    """Parse a flag value; malformed values are usage errors (exit 64)."""
    try:
        return parse(*args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _load_lookup(path):
    if not path:
        return ALL_ONES_LOOKUP
    with open(path, "r", encoding="utf-8") as fh:
        return model_store.load_factor_lookup(fh.read())


def _build_parser() -> _Parser:
    parser = _Parser(prog="phm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a model document")
    p.add_argument("model")

    p = sub.add_parser("hazard", help="nominal system hazard rate (per hour)")
    p.add_argument("model")
    p.add_argument("--lookup", help="factor lookup document")
    p.add_argument("--at", default="0h", help="usage time, e.g. 100h")

    p = sub.add_parser("reliability", help="reliability curve as CSV")
    p.add_argument("model")
    p.add_argument("--lookup", help="factor lookup document")
    p.add_argument("--until", required=True, help="end of the grid, e.g. 1000h")
    p.add_argument("--step", required=True, help="grid step, e.g. 100h")

    p = sub.add_parser("mttf", help="mean time to failure (hours)")
    p.add_argument("model")
    p.add_argument("--lookup", help="factor lookup document")

    p = sub.add_parser("potc", help="probability of task completion")
    p.add_argument("model")
    p.add_argument("--lookup", help="factor lookup document")
    p.add_argument("--elapsed", default="0h", help="usage hours at task start")
    p.add_argument("--distance", help="task distance, e.g. 3.6km")
    p.add_argument("--speed", help="speed, e.g. 3.6kmh")
    p.add_argument("--duration", help="task duration, e.g. 1h or 1800s")

    p = sub.add_parser("rul", help="remaining useful life (hours)")
    p.add_argument("model")
    p.add_argument("--lookup", help="factor lookup document")
    p.add_argument("--elapsed", default="0h")
    p.add_argument("--threshold", type=float, default=RUL_DEFAULT_THRESHOLD)

    p = sub.add_parser("replay", help="replay a reading log to snapshot CSV")
    p.add_argument("model")
    p.add_argument("--lookup", help="factor lookup document")
    p.add_argument("--log", required=True, help="reading log (JSON lines)")
    p.add_argument("--bindings", help="bindings document (JSON)")
    p.add_argument("--tick", type=float, default=1.0, help="tick period, log seconds")
    p.add_argument("--time-scale", type=float, default=1.0,
                   help="usage-hours per wall-hour of log time")
    p.add_argument("--smooth", type=int, default=1, help="moving-average window")

    sub.add_parser("example", help="emit the bundled example model document")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--model-dir", default=os.environ.get("PHM_MODEL_DIR", "."))
    p.add_argument("--tick", type=float, default=1.0, help="snapshot period, seconds")
    p.add_argument("--time-scale", type=float, default=1.0)
    p.add_argument("--smooth", type=int, default=1)
    p.add_argument("--lookup", help="factor lookup document")
    return parser


def _cmd_validate(args) -> int:
    try:
        with open(args.model, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read model: {exc}", file=sys.stderr)
        return 1
    diagnostics = model_store.validate_document(text)
    if diagnostics:
        for diag in diagnostics:
            print(diag, file=sys.stderr)
        return 1
    print("OK")
    return 0


def _cmd_hazard(args) -> int:
    at = _flag(parse_hours, args.at)
    tree = model_store.build_block_tree(_load_model(args.model), _load_lookup(args.lookup))
    print(format_sig9(system_hazard(tree, at)))
    return 0


def _cmd_reliability(args) -> int:
    until = _flag(parse_hours, args.until)
    step = _flag(parse_hours, args.step)
    if step <= 0 or until < 0:
        print("error: reliability grid requires --until >= 0 and --step > 0", file=sys.stderr)
        return EX_USAGE
    tree = model_store.build_block_tree(_load_model(args.model), _load_lookup(args.lookup))
    points = []
    k = 0
    while True:
        t = k * step
        if t > until + 1e-9 * max(until, 1.0):
            break
        points.append((t, system_reliability(tree, t)))
        k += 1
    sys.stdout.write(reliability_curve_csv(points))
    return 0


def _cmd_mttf(args) -> int:
    tree = model_store.build_block_tree(_load_model(args.model), _load_lookup(args.lookup))
    print(format_sig9(system_mttf(tree)))
    return 0


def _task_from_args(args) -> TaskSpec:
    if args.duration is not None:
        if args.distance is not None or args.speed is not None:
            raise ValidationError("give either --duration or --distance/--speed")
        value, suffix = _split_quantity(args.duration, "duration")
        unit = "s" if suffix == "s" else "h"
        return TaskSpec(task_id="cli", duration=value, duration_unit=unit)
    if args.distance is None or args.speed is None:
        raise ValidationError("distance tasks require both --distance and --speed")
    dvalue, dunit = parse_distance(args.distance)
    svalue, sunit = parse_speed(args.speed)
    return TaskSpec(task_id="cli", distance=dvalue, distance_unit=dunit,
                    speed=svalue, speed_unit=sunit)


def _cmd_potc(args) -> int:
    elapsed = _flag(parse_hours, args.elapsed)
    task = _flag(_task_from_args, args)
    tree = model_store.build_block_tree(_load_model(args.model), _load_lookup(args.lookup))
    prediction = predict_potc(tree, elapsed, task)
    print(format_sig9(prediction.potc))
    return 0


def _cmd_rul(args) -> int:
    elapsed = _flag(parse_hours, args.elapsed)
    tree = model_store.build_block_tree(_load_model(args.model), _load_lookup(args.lookup))
    print(format_sig9(rul(tree, elapsed, args.threshold)))
    return 0


def _cmd_replay(args) -> int:
    robot = _load_model(args.model)
    bindings = []
    if args.bindings:
        with open(args.bindings, "r", encoding="utf-8") as fh:
            bindings = pipeline_mod.parse_bindings(fh.read())
    with open(args.log, "r", encoding="utf-8") as fh:
        readings = pipeline_mod.parse_readings(fh.read())
    snapshots = pipeline_mod.replay(
        robot, bindings, readings,
        tick_period=args.tick, time_scale=args.time_scale,
        smooth_window=args.smooth, lookup=_load_lookup(args.lookup),
    )
    sys.stdout.write(snapshots_to_csv(snapshots))
    return 0


def _cmd_example(_args) -> int:
    sys.stdout.write(model_store.ota_example_text())
    return 0


def _cmd_serve(args) -> int:
    from .service import ServiceConfig, serve

    config = ServiceConfig(
        model_dir=args.model_dir,
        host=args.host,
        port=args.port,
        tick_period=args.tick,
        time_scale=args.time_scale,
        smooth_window=args.smooth,
        lookup_file=args.lookup,
    )
    return serve(config)


_COMMANDS = {
    "validate": _cmd_validate,
    "hazard": _cmd_hazard,
    "reliability": _cmd_reliability,
    "mttf": _cmd_mttf,
    "potc": _cmd_potc,
    "rul": _cmd_rul,
    "replay": _cmd_replay,
    "example": _cmd_example,
    "serve": _cmd_serve,
}


def cli_run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse usage errors, _flag failures
        return int(exc.code or 0)
    except PhmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(cli_run())


if __name__ == "__main__":
    main()
