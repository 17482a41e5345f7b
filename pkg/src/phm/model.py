"""Robot model documents: schema, validation, persistence, and the bundled
example robot.

A robot model is a JSON document (schema in ``data/model.schema.json``) laid
out as modules -> submodules -> components, plus a series/parallel
configuration tree whose leaves reference component paths
(``Module/SubModule/Component``).  Every component resolves to exactly one
hazard calculator with complete parameters; the configuration must reference
each component exactly once unless the component is explicitly excluded.
When the configuration is omitted entirely a conservative all-series
arrangement is synthesized.

Serialization is canonical: fixed key order, defaults omitted, two-space
indent, so serialize(parse(serialize(m))) is byte-identical to
serialize(m).  Rates are stored as ``{"value": v, "unit": u}`` objects and
rendered by the shortest round-trip float representation (scientific
notation for the magnitudes involved).

Sibling documents share the same conventions:

* factor lookup  -- ``{"schema_version": 1, "environment": {...}, "quality": {...}}``
* reading log    -- one JSON object per line:
                    ``{"timestamp": s, "sensor_id": id, "value": v, "unit": u}``
* sensor bindings / task history -- see the pipeline and service modules.

Saves are atomic (write to a temp file, then rename).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import jsonschema

from . import hazards, rbd
from .errors import ValidationError
from .hazards import (
    ALL_ONES_LOOKUP,
    BEARING_FACTORS,
    ELECTRICAL_FACTORS,
    BatteryType,
    EnvironmentClass,
    FactorLookup,
    MotorParams,
    RotatingDeviceParams,
)
from .lifemodels import Exponential, FailureRate, RateUnit, Weibull

SCHEMA_VERSION = 1

KNOWN_KINDS = tuple(ELECTRICAL_FACTORS) + (
    "bearing", "motor", "battery", "rotating_device", "custom",
)

# factor names a sensor binding may target, per kind; None = any named slot
BINDABLE_FACTORS: Dict[str, Optional[Tuple[str, ...]]] = {
    **{kind: names for kind, names in ELECTRICAL_FACTORS.items()},
    "bearing": BEARING_FACTORS,
    "motor": ("CSF",),
    "battery": (),
    "rotating_device": (),
    "custom": None,
}

_MOTOR_RATE_FIELDS = (
    "base_rate", "winding_rate", "armature_shaft_rate",
    "bearing_rate", "gear_rate", "capacitor_rate",
)
_MOTOR_FIELDS = _MOTOR_RATE_FIELDS + ("service_factor", "brush_count")
_ROTATING_FIELDS = ("lambda1", "lambda2", "A", "B", "alpha_bearing", "alpha_winding")


@dataclass(frozen=True)
class UnitPreferences:
    speed_unit: str = "m/s"
    time_unit: str = "h"


@dataclass(frozen=True)
class ComponentSpec:
    """One leaf part: calculator kind, quantity, and calculator parameters."""

    path: str
    name: str
    kind: str
    quantity: int
    params: Mapping
    environment: Optional[EnvironmentClass] = None
    quality: Optional[str] = None
    life_model: Optional[Mapping] = None

    def __post_init__(self):
        if self.environment is not None and not isinstance(self.environment, EnvironmentClass):
            object.__setattr__(self, "environment", EnvironmentClass(self.environment))


@dataclass(frozen=True)
class SubModule:
    name: str
    components: Tuple[ComponentSpec, ...]


@dataclass(frozen=True)
class Module:
    name: str
    submodules: Tuple[SubModule, ...]


@dataclass(frozen=True)
class ConfigLeaf:
    ref: str


@dataclass(frozen=True)
class ConfigGroup:
    mode: str  # "series" | "parallel"
    children: Tuple["ConfigNode", ...]


ConfigNode = Union[ConfigLeaf, ConfigGroup]


@dataclass(frozen=True)
class RobotModel:
    name: str
    modules: Tuple[Module, ...]
    configuration: ConfigNode
    unit_preferences: UnitPreferences = field(default_factory=UnitPreferences)
    life_model_default: Mapping = field(default_factory=lambda: {"family": "exponential"})
    excluded: Tuple[str, ...] = ()

    def components(self) -> Dict[str, ComponentSpec]:
        """Component specs keyed by path, in document order."""
        out: Dict[str, ComponentSpec] = {}
        for module in self.modules:
            for sub in module.submodules:
                for comp in sub.components:
                    out[comp.path] = comp
        return out


def _model_schema() -> dict:
    text = resources.files("phm.data").joinpath("model.schema.json").read_text()
    return json.loads(text)


_SCHEMA_CACHE: Optional[dict] = None


def _schema() -> dict:
    global _SCHEMA_CACHE
    if _SCHEMA_CACHE is None:
        _SCHEMA_CACHE = _model_schema()
    return _SCHEMA_CACHE


def _rate_from_json(obj, where: str) -> FailureRate:
    if not isinstance(obj, Mapping) or set(obj) != {"value", "unit"}:
        raise ValidationError(f"{where}: rate must be an object with value and unit")
    try:
        return FailureRate(obj["value"], RateUnit(obj["unit"]))
    except (ValueError, ValidationError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _rate_to_json(rate: FailureRate) -> dict:
    return {"value": rate.value, "unit": rate.unit.value}


def _check_params(kind: str, params: Mapping, where: str) -> None:
    """Kind-specific parameter completeness; unknown keys are rejected."""
    def reject_unknown(allowed):
        unknown = sorted(set(params) - set(allowed))
        if unknown:
            raise ValidationError(f"{where}: unknown params for kind {kind!r}: {unknown}")

    if kind in ELECTRICAL_FACTORS or kind == "bearing":
        reject_unknown({"base_rate", "factors"})
        if "base_rate" not in params:
            raise ValidationError(f"{where}: missing required param 'base_rate'")
        _rate_from_json(params["base_rate"], where)
        factors = params.get("factors", {})
        allowed = ELECTRICAL_FACTORS.get(kind, BEARING_FACTORS)
        bad = sorted(set(factors) - set(allowed))
        if bad:
            raise ValidationError(f"{where}: factors {bad} are not valid for kind {kind!r}")
        for name, value in factors.items():
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{where}: factor {name!r} must be a positive number")
    elif kind == "motor":
        reject_unknown(_MOTOR_FIELDS)
        for fname in _MOTOR_RATE_FIELDS:
            if fname in params:
                _rate_from_json(params[fname], where)
    elif kind == "battery":
        reject_unknown({"battery_type"})
        if "battery_type" not in params:
            raise ValidationError(f"{where}: missing required param 'battery_type'")
        try:
            BatteryType(params["battery_type"])
        except ValueError:
            raise ValidationError(f"{where}: unknown battery_type {params['battery_type']!r}")
    elif kind == "rotating_device":
        reject_unknown(_ROTATING_FIELDS)
    elif kind == "custom":
        reject_unknown({"base_rate", "multipliers"})
        if "base_rate" not in params:
            raise ValidationError(f"{where}: missing required param 'base_rate'")
        _rate_from_json(params["base_rate"], where)
        for name, value in params.get("multipliers", {}).items():
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise ValidationError(f"{where}: multiplier {name!r} must be a positive number")
    else:
        raise ValidationError(f"{where}: unknown component kind {kind!r}")


def component_rate(
    spec: ComponentSpec,
    lookup: FactorLookup = ALL_ONES_LOOKUP,
    overrides: Optional[Mapping[str, float]] = None,
) -> FailureRate:
    """Effective failure rate of one component in its calculator's unit.

    ``overrides`` multiplies named factors (sensor-driven adjustments).
    Environment/quality designators resolve to piE/piQ through the lookup
    for kinds whose formula includes those factors, unless the document
    already pins them explicitly.
    """
    params = spec.params
    overrides = dict(overrides or {})

    if spec.kind in ELECTRICAL_FACTORS or spec.kind == "bearing":
        base = _rate_from_json(params["base_rate"], spec.path)
        factors = dict(params.get("factors", {}))
        names = ELECTRICAL_FACTORS.get(spec.kind, BEARING_FACTORS)
        if "piE" in names and "piE" not in factors:
            pi_e = lookup.pi_e(spec.environment)
            if pi_e != 1.0:
                factors["piE"] = pi_e
        if "piQ" in names and "piQ" not in factors:
            pi_q = lookup.pi_q(spec.quality)
            if pi_q != 1.0:
                factors["piQ"] = pi_q
        for fname, mult in overrides.items():
            factors[fname] = factors.get(fname, 1.0) * mult
        if spec.kind == "bearing":
            return hazards.bearing_rate(base, factors)
        return hazards.factor_product_rate(spec.kind, base, factors)

    if spec.kind == "motor":
        kwargs = {}
        for fname in _MOTOR_RATE_FIELDS:
            if fname in params:
                kwargs[fname] = _rate_from_json(params[fname], spec.path)
        if "service_factor" in params:
            kwargs["service_factor"] = params["service_factor"]
        if "brush_count" in params:
            kwargs["brush_count"] = params["brush_count"]
        if "CSF" in overrides:
            kwargs["service_factor"] = kwargs.get("service_factor", 1.0) * overrides["CSF"]
        return hazards.motor_rate(MotorParams(**kwargs))

    if spec.kind == "battery":
        return hazards.battery_rate(BatteryType(params["battery_type"]))

    if spec.kind == "rotating_device":
        return hazards.rotating_device_rate(RotatingDeviceParams(**params))

    # custom: overrides land on named multiplier slots
    base = _rate_from_json(params["base_rate"], spec.path)
    multipliers = dict(params.get("multipliers", {}))
    for name, mult in overrides.items():
        multipliers[name] = multipliers.get(name, 1.0) * mult
    return hazards.custom_rate(base, multipliers)


def _leaf_life_model(spec: ComponentSpec, model: RobotModel,
                     rate_per_hour: float):
    family = dict(spec.life_model or model.life_model_default)
    if rate_per_hour <= 0.0:
        raise ValidationError(
            f"{spec.path}: component rate is zero; no life model can be formed")
    if family.get("family") == "weibull":
        beta = family.get("beta", 1.0)
        return Weibull(alpha=1.0 / rate_per_hour, beta=beta)
    return Exponential(FailureRate(rate_per_hour))


def build_block_tree(
    model: RobotModel,
    lookup: FactorLookup = ALL_ONES_LOOKUP,
    overrides: Optional[Mapping[str, Mapping[str, float]]] = None,
) -> rbd.BlockExpr:
    """Instantiate the configuration as an evaluable block tree.

    ``overrides`` maps component path -> {factor -> multiplier} and is how
    the sensor pipeline produces the sensor-based variant of the system.
    """
    overrides = overrides or {}
    specs = model.components()

    def build(node: ConfigNode) -> rbd.BlockExpr:
        if isinstance(node, ConfigLeaf):
            spec = specs[node.ref]
            rate = component_rate(spec, lookup, overrides.get(node.ref))
            life = _leaf_life_model(spec, model, rate.per_hour)
            return rbd.Leaf(component_id=node.ref, model=life, quantity=spec.quantity)
        children = [build(c) for c in node.children]
        if node.mode == "series":
            return rbd.Series(children)
        return rbd.Parallel(children)

    return build(model.configuration)


def _default_configuration(model_paths: Sequence[str]) -> ConfigNode:
    return ConfigGroup("series", tuple(ConfigLeaf(p) for p in model_paths))


def _config_from_json(obj) -> ConfigNode:
    if obj["type"] == "leaf":
        return ConfigLeaf(obj["ref"])
    return ConfigGroup(obj["type"], tuple(_config_from_json(c) for c in obj["children"]))


def _config_to_json(node: ConfigNode) -> dict:
    if isinstance(node, ConfigLeaf):
        return {"type": "leaf", "ref": node.ref}
    return {"type": node.mode, "children": [_config_to_json(c) for c in node.children]}


def _config_refs(node: ConfigNode, acc: list) -> list:
    if isinstance(node, ConfigLeaf):
        acc.append(node.ref)
    else:
        for child in node.children:
            _config_refs(child, acc)
    return acc


def validate_document(text: str) -> list:
    """All diagnostics for a model document; empty list means valid."""
    try:
        parse_model(text)
        return []
    except ValidationError as exc:
        return [str(exc)]


def parse_model(text: str) -> RobotModel:
    """Parse and fully validate a model document.

    Raises ValidationError naming the offending document path for schema
    violations, and listing semantic problems (duplicate paths, dangling
    references, incomplete parameters) otherwise.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"document is not valid JSON: {exc}") from exc

    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"schema violation at {path}: {exc.message}") from exc

    problems = []
    modules = []
    seen_paths = set()
    for mod in doc["modules"]:
        submodules = []
        for sub in mod["submodules"]:
            comps = []
            for comp in sub["components"]:
                path = f"{mod['name']}/{sub['name']}/{comp['name']}"
                if path in seen_paths:
                    problems.append(f"duplicate component path {path!r}")
                seen_paths.add(path)
                try:
                    _check_params(comp["kind"], comp["params"], path)
                except ValidationError as exc:
                    problems.append(str(exc))
                env = comp.get("environment")
                comps.append(ComponentSpec(
                    path=path,
                    name=comp["name"],
                    kind=comp["kind"],
                    quantity=comp["quantity"],
                    params=comp["params"],
                    environment=EnvironmentClass(env) if env else None,
                    quality=comp.get("quality"),
                    life_model=comp.get("life_model"),
                ))
            submodules.append(SubModule(sub["name"], tuple(comps)))
        modules.append(Module(mod["name"], tuple(submodules)))

    excluded = tuple(sorted(doc.get("excluded", [])))
    for path in excluded:
        if path not in seen_paths:
            problems.append(f"excluded path {path!r} does not exist")

    if "configuration" in doc:
        configuration = _config_from_json(doc["configuration"])
    else:
        configuration = _default_configuration(
            [p for p in seen_paths_ordered(modules) if p not in excluded])

    refs = _config_refs(configuration, [])
    ref_counts: Dict[str, int] = {}
    for ref in refs:
        ref_counts[ref] = ref_counts.get(ref, 0) + 1
    for ref, count in ref_counts.items():
        if ref not in seen_paths:
            problems.append(f"configuration references unknown component {ref!r}")
        elif count > 1:
            problems.append(f"configuration references {ref!r} {count} times")
        if ref in excluded:
            problems.append(f"configuration references excluded component {ref!r}")
    for path in seen_paths_ordered(modules):
        if path not in ref_counts and path not in excluded:
            problems.append(
                f"component {path!r} is neither configured nor explicitly excluded")

    prefs = doc.get("unit_preferences", {})
    unit_preferences = UnitPreferences(
        speed_unit=prefs.get("speed_unit", "m/s"),
        time_unit=prefs.get("time_unit", "h"),
    )
    life_default = doc.get("life_model_default", {"family": "exponential"})
    if life_default.get("family") == "weibull" and "beta" not in life_default:
        problems.append("life_model_default with family 'weibull' requires beta")

    if problems:
        raise ValidationError("; ".join(problems))

    model = RobotModel(
        name=doc["name"],
        modules=tuple(modules),
        configuration=configuration,
        unit_preferences=unit_preferences,
        life_model_default=life_default,
        excluded=excluded,
    )

    # every component must resolve to a working calculator
    for spec in model.components().values():
        try:
            component_rate(spec)
        except (ValidationError, ValueError) as exc:
            raise ValidationError(f"{spec.path}: {exc}") from exc
    return model


def seen_paths_ordered(modules: Sequence[Module]) -> list:
    out = []
    for mod in modules:
        for sub in mod.submodules:
            for comp in sub.components:
                out.append(comp.path)
    return out


def _component_to_json(comp: ComponentSpec) -> dict:
    params = dict(comp.params)
    # canonical form drops identity factors and empty maps
    for key in ("factors", "multipliers"):
        if key in params:
            cleaned = {k: v for k, v in sorted(params[key].items()) if v != 1.0}
            if cleaned:
                params[key] = cleaned
            else:
                params.pop(key)
    out = {
        "name": comp.name,
        "kind": comp.kind,
        "quantity": comp.quantity,
        "params": params,
    }
    if comp.environment is not None:
        out["environment"] = comp.environment.value
    if comp.quality is not None:
        out["quality"] = comp.quality
    if comp.life_model is not None:
        out["life_model"] = dict(comp.life_model)
    return out


def serialize_model(model: RobotModel) -> str:
    """Canonical document text for a model (stable under re-parsing)."""
    doc: dict = {"schema_version": SCHEMA_VERSION, "name": model.name}
    prefs = model.unit_preferences
    if prefs != UnitPreferences():
        doc["unit_preferences"] = {
            "speed_unit": prefs.speed_unit, "time_unit": prefs.time_unit}
    if dict(model.life_model_default) != {"family": "exponential"}:
        doc["life_model_default"] = dict(model.life_model_default)
    doc["modules"] = [
        {
            "name": mod.name,
            "submodules": [
                {
                    "name": sub.name,
                    "components": [_component_to_json(c) for c in sub.components],
                }
                for sub in mod.submodules
            ],
        }
        for mod in model.modules
    ]
    if model.excluded:
        doc["excluded"] = list(model.excluded)
    doc["configuration"] = _config_to_json(model.configuration)
    return json.dumps(doc, indent=2) + "\n"


def load_model(path: Union[str, os.PathLike]) -> RobotModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model(fh.read())


def save_model(model: RobotModel, path: Union[str, os.PathLike]) -> None:
    """Atomic save: write to a temp file in the same directory, then rename."""
    save_text(serialize_model(model), path)


def save_text(text: str, path: Union[str, os.PathLike]) -> None:
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_factor_lookup(text: str) -> FactorLookup:
    """Parse a factor lookup document (all-ones defaults apply per entry)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"lookup document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema_version") != 1:
        raise ValidationError("lookup document requires schema_version 1")
    unknown = sorted(set(doc) - {"schema_version", "environment", "quality"})
    if unknown:
        raise ValidationError(f"lookup document has unknown fields {unknown}")
    try:
        return FactorLookup(
            environment=doc.get("environment", {}),
            quality=doc.get("quality", {}),
        )
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def ota_example() -> RobotModel:
    """The bundled example robot: a mobile platform whose full component
    inventory, quantities, and per-hour rates ship as a fixture document."""
    text = resources.files("phm.data").joinpath("ota.json").read_text()
    return parse_model(text)


def ota_example_text() -> str:
    """Raw canonical text of the bundled example document."""
    return resources.files("phm.data").joinpath("ota.json").read_text()
