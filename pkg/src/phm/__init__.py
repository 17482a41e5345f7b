"""Prognostics and health management engine for robotic systems.

Models a robot as a configurable tree of components with handbook hazard
rates, composes system reliability through series/parallel block diagrams,
and streams nominal and sensor-adjusted hazard rate, reliability, remaining
useful life, and probability-of-task-completion estimates.
"""

from .errors import (
    DomainError,
    NumericError,
    PhmError,
    SystemFailedError,
    ValidationError,
)
from .hazards import (
    BatteryType,
    EnvironmentClass,
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
from .lifemodels import (
    Exponential,
    FailureRate,
    LifeMetrics,
    LifeModel,
    RateUnit,
    Weibull,
    convert_rate,
    eval_life,
    gamma_fn,
    mttf,
)
from .model import (
    ComponentSpec,
    RobotModel,
    build_block_tree,
    component_rate,
    load_model,
    ota_example,
    parse_model,
    save_model,
    serialize_model,
)
from .pipeline import (
    AnalysisSnapshot,
    MappingCurve,
    Pipeline,
    SensorBinding,
    SensorReading,
    smooth,
)
from .potc import TaskRecord, TaskSpec, actual_potc, predict_potc, rul, task_duration
from .rbd import (
    Leaf,
    Parallel,
    Series,
    failure_attribution,
    mc_reliability_oracle,
    system_hazard,
    system_mttf,
    system_reliability,
    validate_block,
)

__version__ = "0.1.0"
