"""
Timing harness comparing warmstart strategies against per-lambda baselines.

Methods:
    eigen / schur / tweaked  preprocess once, then evaluate every lambda
    zuidwijk                 eigenvalue product formula (objective only)
    basis_solve              dense LU of A_B + lambda D_B for every lambda
    naive                    full simplex solve for every lambda
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lu_solve

from .config import config, Tolerances
from .exceptions import EngineError
from .linalg import factorize
from .lp_model import partition, to_standard_form
from .models import ParametricLP, Strategy
from .simplex import optimal_basis, solve_lp
from .warmstart import evaluate, preprocess, zuidwijk_objective, zuidwijk_preprocess

logger = logging.getLogger(__name__)

NAIVE = 'naive'
BASIS_SOLVE = 'basis_solve'
ZUIDWIJK = 'zuidwijk'
DEFAULT_STRATEGIES = (Strategy.EIGEN.value, Strategy.SCHUR.value, Strategy.TWEAKED.value)
AGREEMENT_TOL = 1e-6

# One run of a method: (preprocess seconds, per-lambda seconds, objectives).
MethodRun = Tuple[float, List[float], List[Optional[float]]]


@dataclass(frozen=True)
class BenchRow:
    method: str
    lambdas: int
    preprocess_seconds: Optional[float] = None
    total_seconds: Optional[float] = None
    median_per_lambda_seconds: Optional[float] = None
    max_objective_gap: Optional[float] = None
    agrees: Optional[bool] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'lambdas': self.lambdas,
            'preprocess_seconds': self.preprocess_seconds,
            'total_seconds': self.total_seconds,
            'median_per_lambda_seconds': self.median_per_lambda_seconds,
            'max_objective_gap': self.max_objective_gap,
            'agrees': self.agrees,
            'error': self.error,
        }


@dataclass(frozen=True)
class BenchReport:
    m: int
    n: int
    rows: List[BenchRow] = field(default_factory=list)

    def row(self, method: str) -> Optional[BenchRow]:
        return next((row for row in self.rows if row.method == method), None)

    def to_rows(self) -> List[Dict[str, Any]]:
        return [row.to_dict() for row in self.rows]


def _timed_loop(setup: Callable, per_lambda: Callable, lambdas: Sequence[float]) -> MethodRun:
    start = time.perf_counter()
    state = setup()
    preprocess_seconds = time.perf_counter() - start
    timings, objectives = [], []
    for lam in lambdas:
        start = time.perf_counter()
        objective = per_lambda(state, lam)
        timings.append(time.perf_counter() - start)
        objectives.append(objective)
    return preprocess_seconds, timings, objectives


def _warmstart_method(lp, basis, strategy, tol, seed):
    def setup():
        return preprocess(lp, basis, strategy, tolerances=tol, seed=seed)

    def per_lambda(cache, lam):
        return evaluate(cache, lam).objective

    return setup, per_lambda


def _zuidwijk_method(lp, basis, tol):
    def setup():
        return zuidwijk_preprocess(partition(lp, basis), lp.b, tol)

    def per_lambda(zcache, lam):
        try:
            return zuidwijk_objective(zcache, lam)
        except EngineError:
            return None

    return setup, per_lambda


def _basis_solve_method(lp, basis, tol):
    def setup():
        return partition(lp, basis)

    def per_lambda(part, lam):
        try:
            lu = factorize(part.A_B + lam * part.D_B)
        except EngineError:
            return None
        return float(part.c_B @ lu_solve(lu, lp.b))

    return setup, per_lambda


def _naive_method(lp, tol):
    def per_lambda(_, lam):
        return solve_lp(lp, lam, tol).objective

    return (lambda: None), per_lambda


def _median_run(runs: List[MethodRun]) -> Tuple[float, float, float]:
    preprocess_seconds = float(np.median([run[0] for run in runs]))
    total_seconds = float(np.median([run[0] + sum(run[1]) for run in runs]))
    per_lambda = float(np.median([np.median(run[1]) for run in runs])) if runs[0][1] else 0.0
    return preprocess_seconds, total_seconds, per_lambda


def _objective_gap(objectives, reference) -> Optional[float]:
    gaps = [
        abs(value - expected) / (1.0 + abs(expected))
        for value, expected in zip(objectives, reference)
        if value is not None and expected is not None
    ]
    return max(gaps) if gaps else None


def benchmark(
    lp: ParametricLP,
    lambdas: Sequence[float],
    strategies: Sequence[str] = DEFAULT_STRATEGIES,
    repeats: int = 3,
    comparators: Sequence[str] = (ZUIDWIJK, BASIS_SOLVE, NAIVE),
    tolerances: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> BenchReport:
    """
    Time every method on the optimal basis of P(0) and compare objectives
    with the basis_solve values. Methods run sequentially; a failing method
    gets an error row and the others still run.
    """
    tol = tolerances or config.tolerances
    seed = config.seed if seed is None else seed
    lambdas = [float(lam) for lam in lambdas]
    standard = to_standard_form(lp)
    basis = optimal_basis(solve_lp(standard, 0.0, tol))

    methods = [(strategy, _warmstart_method(standard, basis, strategy, tol, seed)) for strategy in strategies]
    builders = {
        ZUIDWIJK: lambda: _zuidwijk_method(standard, basis, tol),
        BASIS_SOLVE: lambda: _basis_solve_method(standard, basis, tol),
        NAIVE: lambda: _naive_method(standard, tol),
    }
    methods += [(name, builders[name]()) for name in comparators]

    reference = _timed_loop(*_basis_solve_method(standard, basis, tol), lambdas)[2]
    rows = []
    for name, (setup, per_lambda) in methods:
        try:
            runs = [_timed_loop(setup, per_lambda, lambdas) for _ in range(max(repeats, 1))]
        except Exception as exc:
            logger.warning(f"Benchmark method {name} failed: {exc}")
            rows.append(BenchRow(method=name, lambdas=len(lambdas), error=str(exc)))
            continue
        preprocess_seconds, total_seconds, per_lambda_seconds = _median_run(runs)
        gap = _objective_gap(runs[0][2], reference)
        rows.append(BenchRow(
            method=name,
            lambdas=len(lambdas),
            preprocess_seconds=preprocess_seconds,
            total_seconds=total_seconds,
            median_per_lambda_seconds=per_lambda_seconds,
            max_objective_gap=gap,
            agrees=gap is None or gap <= AGREEMENT_TOL,
        ))
        logger.info(f"Benchmark {name}: total {total_seconds:.4f}s over {len(lambdas)} lambda values")
    return BenchReport(m=standard.m, n=standard.n, rows=rows)
