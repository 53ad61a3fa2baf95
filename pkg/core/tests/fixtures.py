"""Small hand-checked problems and dense oracles shared by the engine tests."""

from itertools import combinations

import numpy as np

from core.engine.models import Basis, ParametricLP


def standard(c, A, D, b):
    return ParametricLP(c=c, A=A, D=D, b=b, senses=('eq',) * len(b), standard_form=True)


def p1():
    """min x s.t. (2 + lambda) x = 4; o*(lambda) = 4 / (2 + lambda)."""
    return standard([1], [[2]], [[1]], [4])


def p2():
    """A = I, D a Jordan block: E_B is nilpotent for the basis {0, 1}."""
    return standard([1, 1], [[1, 0], [0, 1]], [[0, 1], [0, 0]], [1, 1])


def p4():
    """Basis {0} is optimal for lambda <= 2, basis {1} beyond."""
    return standard([1, 3], [[1, 1]], [[0, 1]], [2])


def infeasible():
    return standard([1], [[1]], [[0]], [-1])


def problem_document(lp, **extra):
    document = lp.to_dict()
    document.update(extra)
    return document


def dense_solution(lp, basis, lam):
    columns = list(basis.indices)
    return np.linalg.solve(lp.matrix_at(lam)[:, columns], lp.b)


def dense_reduced_costs(lp, basis, lam):
    M = lp.matrix_at(lam)
    basic = list(basis.indices)
    nonbasic = list(basis.nonbasic(lp.n))
    y = np.linalg.solve(M[:, basic].T, lp.c[basic])
    return lp.c[nonbasic] - y @ M[:, nonbasic]


def brute_force_optimum(lp, lam, tol=1e-9):
    """Minimum objective over every feasible basic solution; None when there is none."""
    M = lp.matrix_at(lam)
    best = None
    for columns in combinations(range(lp.n), lp.m):
        block = M[:, list(columns)]
        if np.linalg.cond(block) > 1e10:
            continue
        x = np.linalg.solve(block, lp.b)
        if np.all(x >= -tol):
            objective = float(lp.c[list(columns)] @ x)
            best = objective if best is None else min(best, objective)
    return best


def first_basis(lp):
    return Basis(tuple(range(lp.m)))


def spectra_match(left, right, tol):
    """Greedy multiset comparison of two complex spectra."""
    remaining = list(right)
    for value in left:
        distances = [abs(value - other) for other in remaining]
        index = int(np.argmin(distances))
        if distances[index] > tol:
            return False
        remaining.pop(index)
    return not remaining
