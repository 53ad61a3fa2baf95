from dataclasses import dataclass, field
from typing import Optional, Tuple, Dict, Any

import numpy as np
from django.db import models

from .exceptions import ProblemFormatError, BasisError


class Sense(models.TextChoices):
    EQ = 'eq', 'Equality'
    LE = 'le', 'Less or equal'


class Strategy(models.TextChoices):
    EIGEN = 'eigen', 'Eigendecomposition'
    SCHUR = 'schur', 'Complex Schur decomposition'
    TWEAKED = 'tweaked', 'Bordered (tweaked) eigendecomposition'
    AUTO = 'auto', 'Eigendecomposition with fallback'


class SolveStatus(models.TextChoices):
    OPTIMAL = 'optimal', 'Optimal'
    INFEASIBLE = 'infeasible', 'Infeasible'
    UNBOUNDED = 'unbounded', 'Unbounded'


class EvaluationStatus(models.TextChoices):
    SINGULAR = 'singular', 'Singular basis'
    INFEASIBLE_BASIS = 'infeasible_basis', 'Basis infeasible'
    FEASIBLE_SUBOPTIMAL = 'feasible_suboptimal', 'Feasible, not optimal'
    OPTIMAL = 'optimal', 'Optimal'


def _frozen_array(values, name, ndim) -> np.ndarray:
    try:
        array = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"non-numeric entries ({exc})", location=name) from exc
    if array.ndim != ndim:
        raise ProblemFormatError(f"expected a {ndim}-dimensional array, got shape {array.shape}", location=name)
    if not np.all(np.isfinite(array)):
        raise ProblemFormatError("entries must be finite", location=name)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ParametricLP:
    """
    The family P(lambda): min c^T x s.t. (A + lambda D) x (=|<=) b, x >= 0.

    Arrays are copied and made read-only on construction, so instances can
    be shared freely between worker threads.
    """
    c: np.ndarray
    A: np.ndarray
    D: np.ndarray
    b: np.ndarray
    senses: Tuple[str, ...]
    standard_form: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'c', _frozen_array(self.c, 'c', 1))
        object.__setattr__(self, 'b', _frozen_array(self.b, 'b', 1))
        object.__setattr__(self, 'A', _frozen_array(self.A, 'A', 2))
        object.__setattr__(self, 'D', _frozen_array(self.D, 'D', 2))
        senses = tuple(str(s) for s in self.senses)
        for row, sense in enumerate(senses):
            if sense not in Sense.values:
                raise ProblemFormatError(f"unknown sense token {sense!r}", location=f"senses[{row}]")
        object.__setattr__(self, 'senses', senses)
        self._check_dimensions()

    def _check_dimensions(self):
        m, n = self.A.shape
        if m < 1:
            raise ProblemFormatError("at least one constraint row is required", location='A')
        if self.D.shape != (m, n):
            raise ProblemFormatError(f"shape {self.D.shape} differs from A {(m, n)}", location='D')
        if len(self.c) != n:
            raise ProblemFormatError(f"length {len(self.c)} but A has {n} columns", location='c')
        if len(self.b) != m:
            raise ProblemFormatError(f"length {len(self.b)} but A has {m} rows", location='b')
        if len(self.senses) != m:
            raise ProblemFormatError(f"length {len(self.senses)} but A has {m} rows", location='senses')
        if self.standard_form:
            if any(s != Sense.EQ for s in self.senses):
                raise ProblemFormatError("standard form requires every sense to be 'eq'", location='senses')
            if n < m:
                raise ProblemFormatError(f"{n} columns cannot hold a basis of {m}", location='A')

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def matrix_at(self, lam: float) -> np.ndarray:
        """Constraint matrix A + lambda D."""
        return self.A + lam * self.D

    def shifted(self, anchor: float) -> 'ParametricLP':
        """Same family re-parametrized so that lambda = 0 lands on ``anchor``."""
        if anchor == 0.0:
            return self
        return ParametricLP(
            c=self.c, A=self.A + anchor * self.D, D=self.D, b=self.b,
            senses=self.senses, standard_form=self.standard_form,
        )

    def __eq__(self, other):
        if not isinstance(other, ParametricLP):
            return NotImplemented
        return (
            self.senses == other.senses
            and self.standard_form == other.standard_form
            and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in ('c', 'A', 'D', 'b'))
        )

    __hash__ = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'c': self.c.tolist(),
            'A': self.A.tolist(),
            'D': self.D.tolist(),
            'b': self.b.tolist(),
            'senses': list(self.senses),
        }


@dataclass(frozen=True)
class Basis:
    """Ordered basic column indices; the order fixes the row order of x_B."""
    indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def validate(self, n: int, m: Optional[int] = None) -> 'Basis':
        if m is not None and len(self.indices) != m:
            raise BasisError(f"basis has {len(self.indices)} indices, expected {m}")
        seen = set()
        for position, index in enumerate(self.indices):
            if not 0 <= index < n:
                raise BasisError(f"index {index} at position {position} outside [0, {n})")
            if index in seen:
                raise BasisError(f"duplicate index {index} at position {position}")
            seen.add(index)
        return self

    def nonbasic(self, n: int) -> Tuple[int, ...]:
        basic = set(self.indices)
        return tuple(j for j in range(n) if j not in basic)

    def __str__(self):
        return '{' + ','.join(str(i) for i in self.indices) + '}'


@dataclass(frozen=True, eq=False)
class BasisPartition:
    A_B: np.ndarray
    D_B: np.ndarray
    A_N: np.ndarray
    D_N: np.ndarray
    c_B: np.ndarray
    c_N: np.ndarray
    basis: Basis
    nonbasic: Tuple[int, ...]

    @property
    def m(self) -> int:
        return self.A_B.shape[0]

    @property
    def n(self) -> int:
        return self.m + len(self.nonbasic)

    def reassemble(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Undo the column permutation, returning (A, D, c)."""
        order = np.array(self.basis.indices + self.nonbasic, dtype=int)
        inverse = np.empty_like(order)
        inverse[order] = np.arange(len(order))
        A = np.hstack([self.A_B, self.A_N])[:, inverse]
        D = np.hstack([self.D_B, self.D_N])[:, inverse]
        c = np.concatenate([self.c_B, self.c_N])[inverse]
        return A, D, c


@dataclass(frozen=True, eq=False)
class SolveResult:
    status: str
    lam: float
    iterations: int
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    basis: Optional[Basis] = None

    def is_optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lam,
            'status': str(self.status),
            'objective': self.objective,
            'basis': list(self.basis.indices) if self.basis else None,
            'x': self.x.tolist() if self.x is not None else None,
            'iterations': self.iterations,
        }


@dataclass(frozen=True)
class EvaluationDiagnostics:
    max_imag_residual: Optional[float] = None
    min_x_component: Optional[float] = None
    min_reduced_cost: Optional[float] = None


@dataclass(frozen=True, eq=False)
class EvaluationResult:
    """Outcome of the existence/feasibility/optimality pipeline at one lambda."""
    lam: float
    status: str
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    diagnostics: EvaluationDiagnostics = field(default_factory=EvaluationDiagnostics)

    def is_optimal(self) -> bool:
        return self.status == EvaluationStatus.OPTIMAL

    def is_upper_bound(self) -> bool:
        """True when ``objective`` bounds o*(lambda) from above."""
        return self.status in (EvaluationStatus.OPTIMAL, EvaluationStatus.FEASIBLE_SUBOPTIMAL)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lam,
            'status': str(self.status),
            'objective': self.objective,
            'min_x': self.diagnostics.min_x_component,
            'min_rc': self.diagnostics.min_reduced_cost,
            'imag_resid': self.diagnostics.max_imag_residual,
        }
