"""Reliability-block-diagram composition.

A system is a finite tree of blocks: leaves carry a life model and a
quantity, and groups combine children in series (any failure fails the
system) or parallel (all must fail).  Blocks are assumed statistically
independent and parallel redundancy is hot-standby -- every unit ages from
t = 0.

    series:    R = prod(R_i)
    parallel:  R = 1 - prod(1 - R_i)
    leaf(q):   R = R_model^q   (equivalent to a q-fold series)

System hazard is -d/dt ln R.  Leaves and series groups compose exactly
(quantity-weighted model hazards, sums over children); parallel groups fall
back to a central finite difference on ln R.  MTTF integrates R from zero
until it is numerically dead; a pure-series exponential tree short-circuits
to 1/sum(lambda).

``mc_reliability_oracle`` is an independent Monte Carlo check used by the
test suite: leaf lifetimes are drawn by inverse CDF and combined with
min/max, which shares no code with the analytic path above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericError, SystemFailedError, ValidationError
from .lifemodels import Exponential, LifeModel, Weibull, _validate_time

RELIABILITY_FLOOR = 1e-12

# numeric policy: relative step for the ln R derivative, quad tolerance
_HAZARD_STEP_REL = 1e-5
_MTTF_EPSREL = 1e-8


@dataclass(frozen=True)
class Leaf:
    component_id: str
    model: LifeModel
    quantity: int = 1


@dataclass(frozen=True)
class Series:
    children: Tuple["BlockExpr", ...]

    def __init__(self, children: Sequence["BlockExpr"]):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Parallel:
    children: Tuple["BlockExpr", ...]

    def __init__(self, children: Sequence["BlockExpr"]):
        object.__setattr__(self, "children", tuple(children))


BlockExpr = Union[Leaf, Series, Parallel]


def validate_block(expr: BlockExpr, known_components=None) -> list:
    """Structural diagnostics for a block tree; empty list means valid.

    ``known_components`` is an optional collection of resolvable component
    ids (the model store passes the component paths of the owning model).
    """
    diagnostics = []

    def walk(node, path):
        if isinstance(node, Leaf):
            if node.quantity < 1 or int(node.quantity) != node.quantity:
                diagnostics.append(f"{path}: quantity must be a positive integer")
            if known_components is not None and node.component_id not in known_components:
                diagnostics.append(f"{path}: unresolved component reference "
                                   f"{node.component_id!r}")
            if not isinstance(node.model, (Exponential, Weibull)):
                diagnostics.append(f"{path}: leaf has no life model")
        elif isinstance(node, (Series, Parallel)):
            kind = "series" if isinstance(node, Series) else "parallel"
            if len(node.children) == 0:
                diagnostics.append(f"{path}: empty {kind} group")
            for i, child in enumerate(node.children):
                walk(child, f"{path}.{kind}[{i}]")
        else:
            diagnostics.append(f"{path}: unknown block node {type(node).__name__}")

    walk(expr, "root")
    return diagnostics


def _check_valid(expr: BlockExpr) -> None:
    diags = validate_block(expr)
    if diags:
        raise ValidationError("invalid block tree: " + "; ".join(diags))


def system_reliability(expr: BlockExpr, t: float) -> float:
    """System survival probability at time t (hours)."""
    _check_valid(expr)
    _validate_time(t)
    return _reliability(expr, t)


def _reliability(expr: BlockExpr, t: float) -> float:
    if isinstance(expr, Leaf):
        if expr.quantity == 1:
            return expr.model.reliability(t)
        return expr.model.reliability(t) ** expr.quantity
    # single-child groups are their child, exactly
    if len(expr.children) == 1:
        return _reliability(expr.children[0], t)
    if isinstance(expr, Series):
        r = 1.0
        for child in expr.children:
            r *= _reliability(child, t)
        return r
    u = 1.0
    for child in expr.children:
        u *= 1.0 - _reliability(child, t)
    return 1.0 - u


def system_hazard(expr: BlockExpr, t: float) -> float:
    """System hazard h(t) = -d/dt ln R(t), per hour."""
    _check_valid(expr)
    _validate_time(t)
    if _reliability(expr, t) <= RELIABILITY_FLOOR:
        raise SystemFailedError(f"system reliability at t={t} is below "
                                f"{RELIABILITY_FLOOR}; hazard undefined")
    return _hazard(expr, t)


def _hazard(expr: BlockExpr, t: float) -> float:
    if isinstance(expr, Leaf):
        return expr.quantity * expr.model.hazard(t)
    if len(expr.children) == 1:
        return _hazard(expr.children[0], t)
    if isinstance(expr, Series):
        # ln R of a series is the sum of child ln R, so hazards add
        return sum(_hazard(child, t) for child in expr.children)
    return _numeric_hazard(expr, t)


def _log_r(expr: BlockExpr, t: float) -> float:
    r = _reliability(expr, t)
    if r <= 0.0:
        return -math.inf
    return math.log(r)


def _numeric_hazard(expr: BlockExpr, t: float) -> float:
    step = _HAZARD_STEP_REL * max(t, 1.0)
    if t >= step:
        return -(_log_r(expr, t + step) - _log_r(expr, t - step)) / (2.0 * step)
    # second-order one-sided difference near t = 0
    f0 = _log_r(expr, t)
    f1 = _log_r(expr, t + step)
    f2 = _log_r(expr, t + 2.0 * step)
    return -(-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step)


def _is_pure_series_exponential(expr: BlockExpr) -> bool:
    if isinstance(expr, Leaf):
        return isinstance(expr.model, Exponential)
    if isinstance(expr, Series):
        return all(_is_pure_series_exponential(c) for c in expr.children)
    return False


def _series_exponential_lambda(expr: BlockExpr) -> float:
    if isinstance(expr, Leaf):
        return expr.quantity * expr.model.lambda_per_hour
    return sum(_series_exponential_lambda(c) for c in expr.children)


def system_mttf(expr: BlockExpr) -> float:
    """Mean time to failure: integral of R(t) dt from 0, in hours."""
    _check_valid(expr)
    if _is_pure_series_exponential(expr):
        return 1.0 / _series_exponential_lambda(expr)

    # horizon: double until the system is numerically dead
    horizon = 1.0
    for _ in range(4000):
        if _reliability(expr, horizon) < RELIABILITY_FLOOR:
            break
        horizon *= 2.0
    else:
        raise NumericError("could not bracket the reliability decay horizon")

    value, abserr = integrate.quad(
        lambda t: _reliability(expr, t), 0.0, horizon,
        epsabs=0.0, epsrel=_MTTF_EPSREL, limit=400,
    )
    if value > 0.0 and abserr / value > 1e-6:
        raise NumericError(
            f"MTTF integration error estimate {abserr:.3e} exceeds budget",
            partial=value,
        )
    return value


def failure_attribution(counts: Mapping[str, int]) -> Dict[str, float]:
    """Fraction of observed failures caused by each component type."""
    if not counts:
        raise DomainError("failure attribution requires at least one count")
    for name, c in counts.items():
        if c < 0 or int(c) != c:
            raise ValidationError(f"count for {name!r} must be a non-negative integer")
    total = sum(counts.values())
    if total < 1:
        raise DomainError("failure attribution requires a positive total count")
    return {name: c / total for name, c in counts.items()}


@dataclass(frozen=True)
class OracleEstimate:
    estimate: float
    std_error: float
    samples: int


def _sample_lifetimes(expr: BlockExpr, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(expr, Leaf):
        u = rng.random((expr.quantity, n))
        model = expr.model
        if isinstance(model, Exponential):
            draws = -np.log1p(-u) / model.lambda_per_hour
        else:
            draws = model.alpha * (-np.log1p(-u)) ** (1.0 / model.beta)
        return draws.min(axis=0)
    parts = [_sample_lifetimes(c, n, rng) for c in expr.children]
    if isinstance(expr, Series):
        return np.minimum.reduce(parts)
    return np.maximum.reduce(parts)


def mc_reliability_oracle(expr: BlockExpr, t: float, n: int, seed: int) -> OracleEstimate:
    """Monte Carlo estimate of R(t) with its binomial standard error.

    Deterministic for a fixed seed.  Lifetimes are drawn per leaf by inverse
    CDF; series takes the min of child lifetimes, parallel the max.
    """
    if n < 1000:
        raise ValidationError("oracle needs at least 1000 samples")
    _check_valid(expr)
    _validate_time(t)
    rng = np.random.default_rng(seed)
    lifetimes = _sample_lifetimes(expr, int(n), rng)
    estimate = float(np.mean(lifetimes > t))
    std_error = math.sqrt(max(estimate * (1.0 - estimate), 1.0 / n) / n)
    return OracleEstimate(estimate=estimate, std_error=std_error, samples=int(n))
