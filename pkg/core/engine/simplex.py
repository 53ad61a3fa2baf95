"""
Dense two-phase revised simplex for min c^T x s.t. (A + lambda D) x = b, x >= 0.

The basis matrix is refactorized with LU at every iteration. Pricing is
Dantzig's rule until a run of degenerate pivots, then Bland's rule takes over
until a pivot makes progress again.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import lu_solve

from .config import config, Tolerances
from .exceptions import ConvergenceError, NotOptimalError, ProblemFormatError, SingularBasisError
from .linalg import factorize
from .models import Basis, ParametricLP, SolveResult, SolveStatus

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9


class RevisedSimplex:
    """One simplex phase over the columns of ``W`` with right-hand side ``b``."""

    def __init__(self, W: np.ndarray, b: np.ndarray, tolerances: Tolerances):
        self.W = W
        self.b = b
        self.tol = tolerances
        self.iterations = 0

    def factor(self, basis: List[int]):
        return factorize(self.W[:, basis])

    def run(self, basis: List[int], cost: np.ndarray, candidates: np.ndarray) -> Tuple[str, List[int]]:
        """
        Iterate from a primal feasible ``basis`` until optimal or unbounded.

        ``candidates`` masks the columns allowed to enter the basis.
        """
        basis = list(basis)
        m = len(basis)
        degenerate_streak = 0
        for _ in range(self.tol.max_iterations):
            lu = self.factor(basis)
            x_B = lu_solve(lu, self.b)
            y = lu_solve(lu, cost[basis], trans=1)
            reduced = cost - self.W.T @ y

            eligible = candidates.copy()
            eligible[basis] = False
            entering_pool = np.flatnonzero(eligible & (reduced < -self.tol.opt))
            if entering_pool.size == 0:
                return SolveStatus.OPTIMAL, basis

            if degenerate_streak >= self.tol.bland_after:
                entering = int(entering_pool[0])
            else:
                entering = int(entering_pool[np.argmin(reduced[entering_pool])])

            direction = lu_solve(lu, self.W[:, entering])
            rising = direction > PIVOT_TOL
            if not rising.any():
                return SolveStatus.UNBOUNDED, basis

            ratios = np.full(m, np.inf)
            ratios[rising] = np.maximum(x_B[rising], 0.0) / direction[rising]
            step = float(ratios.min())
            ties = np.flatnonzero(ratios <= step + 1e-12 * (1.0 + step))
            leaving_row = min(ties, key=lambda row: basis[row])

            degenerate_streak = degenerate_streak + 1 if step <= self.tol.feas else 0
            basis[leaving_row] = entering
            self.iterations += 1

        raise ConvergenceError(
            f"simplex did not converge in {self.tol.max_iterations} iterations",
            details={'iterations': self.iterations},
        )

    def drive_out(self, basis: List[int], n: int) -> List[int]:
        """Pivot zero-level artificial columns (index >= n) out of the basis."""
        basis = list(basis)
        for row in range(len(basis)):
            if basis[row] < n:
                continue
            lu = self.factor(basis)
            unit = np.zeros(len(basis))
            unit[row] = 1.0
            tableau_row = lu_solve(lu, unit, trans=1) @ self.W[:, :n]
            tableau_row[[j for j in basis if j < n]] = 0.0
            entering = int(np.argmax(np.abs(tableau_row)))
            if abs(tableau_row[entering]) <= PIVOT_TOL:
                raise SingularBasisError(
                    "constraint rows are linearly dependent; no basis of structural columns exists",
                    details={'row': row},
                )
            basis[row] = entering
            self.iterations += 1
        return basis


def _primal_feasible(M: np.ndarray, b: np.ndarray, basis: Basis, tol: Tolerances) -> bool:
    try:
        lu = factorize(M[:, list(basis.indices)])
    except SingularBasisError:
        return False
    return bool(np.all(lu_solve(lu, b) >= -tol.feas))


def solve_lp(
    lp: ParametricLP,
    lam: float = 0.0,
    tolerances: Optional[Tolerances] = None,
    initial_basis: Optional[Basis] = None,
) -> SolveResult:
    """
    Solve P(lam). Infeasible and unbounded problems are reported through the
    status; a singular basis refactorization raises SingularBasisError.

    When ``initial_basis`` is primal feasible at ``lam`` phase 1 is skipped.
    """
    if not lp.standard_form:
        raise ProblemFormatError("solve_lp requires a standard-form problem", location='standard_form')
    tol = tolerances or config.tolerances
    m, n = lp.m, lp.n

    M = lp.matrix_at(lam)
    b = np.array(lp.b, dtype=float)
    flip = b < 0
    M[flip] *= -1.0
    b[flip] *= -1.0

    phase2 = RevisedSimplex(M, b, tol)
    if initial_basis is not None and _primal_feasible(M, b, initial_basis.validate(n, m), tol):
        basis = list(initial_basis.indices)
        logger.debug(f"Warm start from basis {initial_basis} at lambda={lam}")
    else:
        phase1 = RevisedSimplex(np.hstack([M, np.eye(m)]), b, tol)
        cost = np.concatenate([np.zeros(n), np.ones(m)])
        _, basis = phase1.run(list(range(n, n + m)), cost, np.ones(n + m, dtype=bool))
        x_B = lu_solve(phase1.factor(basis), b)
        infeasibility = float(cost[basis] @ x_B)
        if infeasibility > max(tol.feas, tol.res) * (1.0 + float(np.max(np.abs(b)))):
            logger.debug(f"Phase 1 ended with infeasibility {infeasibility:.3e} at lambda={lam}")
            return SolveResult(status=SolveStatus.INFEASIBLE, lam=lam, iterations=phase1.iterations)
        basis = phase1.drive_out(basis, n)
        phase2.iterations = phase1.iterations

    status, basis = phase2.run(basis, np.asarray(lp.c, dtype=float), np.ones(n, dtype=bool))
    if status != SolveStatus.OPTIMAL:
        return SolveResult(status=status, lam=lam, iterations=phase2.iterations)

    x = np.zeros(n)
    x[basis] = lu_solve(phase2.factor(basis), b)
    objective = float(lp.c @ x)
    logger.debug(f"Solved lambda={lam}: objective={objective!r} in {phase2.iterations} iterations")
    return SolveResult(
        status=SolveStatus.OPTIMAL,
        lam=lam,
        iterations=phase2.iterations,
        x=x,
        objective=objective,
        basis=Basis(tuple(basis)),
    )


def optimal_basis(result: SolveResult) -> Basis:
    if not result.is_optimal():
        raise NotOptimalError(f"no optimal basis: solve status is {result.status}", status=result.status)
    return result.basis
