"""Independent oracles and generators shared by the test modules.

Everything here deliberately avoids the code paths it is used to check:
derivatives come from central differences on the CDF, MTTF from direct
quadrature of the survival function, parallel hazards from a hand-derived
closed form, and random trees from a seeded numpy generator.
"""

import math

import numpy as np
from scipy import integrate

from phm.lifemodels import Exponential, FailureRate, Weibull
from phm.rbd import Leaf, Parallel, Series


def numeric_density(model, t: float) -> float:
    """Central-difference derivative of F(t), step 1e-4 * max(t, 1)."""
    step = 1e-4 * max(t, 1.0)
    if t < step:
        # one-sided second order at the left edge
        f0 = model.metrics(t).cum_failure
        f1 = model.metrics(t + step).cum_failure
        f2 = model.metrics(t + 2 * step).cum_failure
        return (-3 * f0 + 4 * f1 - f2) / (2 * step)
    hi = model.metrics(t + step).cum_failure
    lo = model.metrics(t - step).cum_failure
    return (hi - lo) / (2 * step)


def mttf_by_quadrature(reliability, scale: float) -> float:
    """Direct adaptive quadrature of R(t) dt with a decay horizon search."""
    horizon = scale
    while reliability(horizon) > 1e-13:
        horizon *= 2.0
    value, _ = integrate.quad(reliability, 0.0, horizon,
                              epsabs=0.0, epsrel=1e-10, limit=400)
    return value


def two_unit_parallel_hazard(lam: float, t: float) -> float:
    """Analytic hazard of two identical exponential units in parallel:
    h = 2*lam*(e^{-lt} - e^{-2lt}) / (2 e^{-lt} - e^{-2lt})."""
    e1 = math.exp(-lam * t)
    e2 = math.exp(-2.0 * lam * t)
    return 2.0 * lam * (e1 - e2) / (2.0 * e1 - e2)


def random_life_model(rng: np.random.Generator):
    if rng.random() < 0.5:
        lam = 10.0 ** rng.uniform(-5.0, -2.0)
        return Exponential(FailureRate(lam))
    alpha = 10.0 ** rng.uniform(1.5, 4.0)
    beta = rng.uniform(0.6, 3.5)
    return Weibull(alpha=alpha, beta=beta)


def model_scale(model) -> float:
    """A characteristic lifetime for sampling sensible time points."""
    if isinstance(model, Exponential):
        return 1.0 / model.lambda_per_hour
    return model.alpha


def random_tree(rng: np.random.Generator, max_leaves: int = 6):
    """Random series/parallel tree with mixed models, <= max_leaves leaves."""
    n_leaves = int(rng.integers(1, max_leaves + 1))
    leaves = [
        Leaf(component_id=f"c{i}", model=random_life_model(rng),
             quantity=int(rng.integers(1, 4)))
        for i in range(n_leaves)
    ]
    return _combine(list(leaves), rng), leaves


def _combine(nodes, rng):
    while len(nodes) > 1:
        k = int(rng.integers(2, min(3, len(nodes)) + 1))
        group = [nodes.pop() for _ in range(k)]
        if rng.random() < 0.5:
            nodes.insert(0, Series(group))
        else:
            nodes.insert(0, Parallel(group))
    return nodes[0]


def tree_scale(leaves) -> float:
    return min(model_scale(leaf.model) for leaf in leaves)
