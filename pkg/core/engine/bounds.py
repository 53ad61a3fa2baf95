"""
Sensitivity bounds around a warmstarted basis.

All norms are the induced infinity norm, so the row norm of c_B^T is
sum |c_B,i| and every unit row e_i^T has norm 1. The step formulas use
|lambda| rather than lambda: since |lambda + delta| <= |lambda| + |delta|,
one expression is valid for both directions.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .exceptions import EngineError
from .linalg import inf_norm
from .warmstart import (
    WarmstartCache, check_existence, eval_solution, resolve, singular_points,
)

logger = logging.getLogger(__name__)

BINDING_TERMS = ('norm', 'epsilon', 'component')


@dataclass(frozen=True, eq=False)
class BoundInputs:
    norm_E: float
    norm_cB: float
    x_lambda: np.ndarray
    norm_Ex: float
    lam: float


def bound_inputs(cache: WarmstartCache, lam: float) -> BoundInputs:
    """Collect the norms the bounds need at ``lam``; one O(m^2) evaluation."""
    x = eval_solution(cache, lam)
    return BoundInputs(
        norm_E=cache.norm_E,
        norm_cB=cache.norm_cB,
        x_lambda=x,
        norm_Ex=inf_norm(cache.E @ x),
        lam=float(lam),
    )


@dataclass(frozen=True)
class DeltaCertificate:
    """
    Radius around ``lam`` (towards ``direction``) where the basis stays
    feasible and o_B moves by at most ``epsilon``, except at the absolute
    lambda values listed in ``excluded``.
    """
    lam: float
    delta_max: float
    epsilon: float
    binding_term: str
    direction: int
    excluded: List[float] = field(default_factory=list)
    terms: Dict[str, float] = field(default_factory=dict)

    @property
    def interval(self):
        far = self.lam + self.direction * self.delta_max
        return (min(self.lam, far), max(self.lam, far))

    def to_dict(self) -> Dict[str, Any]:
        def finite(value):
            return value if math.isfinite(value) else None

        return {
            'lambda': self.lam,
            'delta_max': finite(self.delta_max),
            'epsilon': self.epsilon,
            'binding_term': self.binding_term,
            'direction': self.direction,
            'excluded': list(self.excluded),
            'terms': {name: finite(value) for name, value in self.terms.items()},
        }


def solution_shift(cache: WarmstartCache, lam: float, delta: float) -> np.ndarray:
    """x_B(lam + delta) - x_B(lam) = -delta (I + (lam + delta) E_B)^{-1} E_B x_B(lam)."""
    x = eval_solution(cache, lam)
    if delta == 0:
        return np.zeros_like(x)
    return -delta * resolve(cache, lam + delta, cache.E @ x)


def deviation_bound(inputs: BoundInputs, delta: float) -> Optional[float]:
    """
    Upper bound on |o_B(lam + delta) - o_B(lam)|, or None when
    |lam + delta| * ||E_B|| >= 1 and the bound does not apply.
    """
    if delta == 0:
        return 0.0
    slack = 1.0 - abs(inputs.lam + delta) * inputs.norm_E
    if slack <= 0:
        return None
    return abs(delta) * inputs.norm_cB * inputs.norm_Ex / slack


def feasibility_conditions(cache: WarmstartCache, inputs: BoundInputs, lam: float, delta: float) -> bool:
    """Sufficient (not necessary) conditions for the basis to stay feasible at lam + delta."""
    target = lam + delta
    slack = 1.0 - abs(target) * inputs.norm_E
    if slack <= 0:
        return False
    if not check_existence(cache, target):
        return False
    drift = abs(delta) * inputs.norm_Ex / slack
    return bool(np.all(drift <= inputs.x_lambda))


def _ratio(numerator: float, denominator: float) -> float:
    if denominator > 0:
        return numerator / denominator
    return math.inf if numerator >= 0 else 0.0


def max_delta(
    cache: WarmstartCache, inputs: BoundInputs, lam: float, epsilon: float, direction: int = 1,
) -> DeltaCertificate:
    """
    Largest certified step from ``lam``: the minimum of the norm, epsilon and
    per-component terms, clamped at 0.
    """
    if not epsilon > 0:
        raise EngineError(f"epsilon must be positive, got {epsilon!r}")
    if direction not in (1, -1):
        raise EngineError(f"direction must be +1 or -1, got {direction!r}")

    norm_E = inputs.norm_E
    slack = 1.0 - abs(lam) * norm_E
    norm_term = (1.0 / norm_E - abs(lam)) if norm_E > 0 else math.inf
    epsilon_term = _ratio(epsilon * slack, inputs.norm_cB * inputs.norm_Ex + epsilon * norm_E)
    component_term = min(
        (_ratio(x_i * slack, inputs.norm_Ex + x_i * norm_E) for x_i in inputs.x_lambda),
        default=math.inf,
    )

    terms = {'norm': norm_term, 'epsilon': epsilon_term, 'component': component_term}
    binding = min(BINDING_TERMS, key=lambda name: terms[name])
    delta = max(0.0, terms[binding])

    excluded = []
    if delta > 0:
        reach = lam + direction * delta
        excluded = [
            point for point in singular_points(cache, min(lam, reach), max(lam, reach))
            if point != lam
        ]
        if excluded:
            logger.warning(f"Certificate at lambda={lam!r} contains singular points {excluded}")

    return DeltaCertificate(
        lam=float(lam),
        delta_max=float(delta),
        epsilon=float(epsilon),
        binding_term=binding,
        direction=direction,
        excluded=excluded,
        terms=terms,
    )


def certify(cache: WarmstartCache, lam: float, epsilon: float, direction: int = 1) -> DeltaCertificate:
    return max_delta(cache, bound_inputs(cache, lam), lam, epsilon, direction)
