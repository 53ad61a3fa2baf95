"""Small dense linear-algebra helpers shared by the solver and the engine."""

import warnings

import numpy as np
from scipy.linalg import lu_factor, LinAlgWarning

from .exceptions import SingularBasisError

# Relative pivot size below which an LU factor is treated as singular.
SINGULAR_PIVOT = 1e-13


def factorize(matrix: np.ndarray, what: str = 'basis matrix'):
    """LU factorization with partial pivoting; raises SingularBasisError."""
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = lu_factor(matrix, check_finite=False)
    pivots = np.abs(np.diag(lu))
    scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
    if pivots.size and float(pivots.min()) <= SINGULAR_PIVOT * scale:
        raise SingularBasisError(
            f"{what} is numerically singular",
            details={'min_pivot': float(pivots.min()), 'scale': scale},
        )
    return lu, piv


def inf_norm(matrix: np.ndarray) -> float:
    """Induced infinity norm (max absolute row sum); 0 for empty input."""
    if matrix.size == 0:
        return 0.0
    if matrix.ndim == 1:
        return float(np.max(np.abs(matrix)))
    return float(np.max(np.sum(np.abs(matrix), axis=1)))
