"""
Spectral factorizations of E_B = A_B^{-1} D_B.

Three forms are produced, each enabling an O(m^2) application of
(I + lambda E_B)^{-1} once computed:

* eigendecomposition E = Q diag(sigma) Q^{-1} (fails on defective E),
* complex Schur form E = Q U Q^H (always exists),
* eigendecomposition of the bordered matrix F = [[E, alpha], [beta, 0]],
  whose random border makes it diagonalizable almost surely.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .config import config, Tolerances
from .exceptions import ConvergenceError, DefectiveError
from .linalg import inf_norm

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigenCache:
    Q: np.ndarray
    Q_inv: np.ndarray
    sigma: np.ndarray
    q_cond: float


@dataclass(frozen=True, eq=False)
class SchurCache:
    Q: np.ndarray
    U: np.ndarray

    @property
    def sigma(self) -> np.ndarray:
        return np.diag(self.U).copy()


@dataclass(frozen=True, eq=False)
class TweakCache:
    """
    Eigendecomposition of the bordered matrix F plus the rank-one factors
    u = Q^{-1} (alpha; 0) and v^T = (beta, 0) Q, so that
    u v^T = Q^{-1} blockdiag(alpha beta, 0) Q.
    """
    alpha: np.ndarray
    beta: np.ndarray
    F: np.ndarray
    Q: np.ndarray
    Q_inv: np.ndarray
    sigma: np.ndarray
    u: np.ndarray
    v: np.ndarray
    seed: int
    attempt: int = 0


def recon_tolerance(tol: Tolerances, m: int) -> float:
    return tol.recon * max(m, 1)


def eigen_decompose(E: np.ndarray, tolerances: Optional[Tolerances] = None) -> EigenCache:
    """
    Eigendecomposition of a real square matrix.

    Raises DefectiveError when the eigenvector matrix is numerically singular
    (2-norm condition above ``cond_threshold``) or does not reproduce E.
    """
    tol = tolerances or config.tolerances
    m = E.shape[0]
    try:
        sigma, Q = scipy.linalg.eig(E, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc
    Q = np.asarray(Q, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        q_cond = float(np.linalg.cond(Q))
    if not np.isfinite(q_cond) or q_cond > tol.cond_threshold:
        raise DefectiveError(
            f"eigenvector matrix is numerically singular (condition {q_cond:.3e})",
            condition=q_cond,
        )

    Q_inv = np.linalg.inv(Q)
    residual = inf_norm(Q @ (sigma[:, None] * Q_inv) - E)
    if residual > recon_tolerance(tol, m) * (1.0 + inf_norm(E)):
        raise DefectiveError(
            f"eigendecomposition does not reproduce the matrix (residual {residual:.3e})",
            condition=q_cond,
            details={'residual': residual},
        )
    return EigenCache(Q=Q, Q_inv=Q_inv, sigma=sigma, q_cond=q_cond)


def schur_decompose(E: np.ndarray, tolerances: Optional[Tolerances] = None) -> SchurCache:
    """Complex Schur form E = Q U Q^H with Q unitary and U upper-triangular."""
    tol = tolerances or config.tolerances
    m = E.shape[0]
    try:
        U, Q = scipy.linalg.schur(E, output='complex', check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"QR iteration did not converge: {exc}") from exc

    U = np.triu(U)
    Q = np.asarray(Q, dtype=complex)
    limit = recon_tolerance(tol, m)
    unitarity = inf_norm(Q @ Q.conj().T - np.eye(m))
    residual = inf_norm(Q @ U @ Q.conj().T - E)
    if unitarity > limit or residual > limit * (1.0 + inf_norm(E)):
        raise ConvergenceError(
            f"Schur factors failed verification (unitarity {unitarity:.3e}, residual {residual:.3e})",
            details={'unitarity': unitarity, 'residual': residual},
        )
    return SchurCache(Q=Q, U=U)


def bordered(E: np.ndarray, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """The (m+1)x(m+1) matrix [[E, alpha], [beta, 0]]."""
    m = E.shape[0]
    F = np.zeros((m + 1, m + 1))
    F[:m, :m] = E
    F[:m, m] = alpha
    F[m, :m] = beta
    return F


def _unit(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    return vector / norm if norm > 0 else vector


def tweaked_assemble(E: np.ndarray, seed: int = 0, tolerances: Optional[Tolerances] = None) -> TweakCache:
    """
    Border E with a random column alpha and row beta (standard normal,
    scaled to unit 2-norm) and eigendecompose the result.

    A defective draw is retried up to ``max_retries`` times with seeds
    derived from ``seed``; the whole procedure is deterministic in ``seed``.
    """
    tol = tolerances or config.tolerances
    m = E.shape[0]
    for attempt in range(tol.max_retries + 1):
        rng = np.random.default_rng(seed if attempt == 0 else [seed, attempt])
        alpha = _unit(rng.standard_normal(m))
        beta = _unit(rng.standard_normal(m))
        F = bordered(E, alpha, beta)
        try:
            eig = eigen_decompose(F, tol)
        except DefectiveError as exc:
            logger.warning(f"Bordered matrix defective on attempt {attempt} (seed {seed}): {exc}")
            continue
        u = eig.Q_inv[:, :m] @ alpha
        v = beta @ eig.Q[:m, :]
        return TweakCache(
            alpha=alpha, beta=beta, F=F, Q=eig.Q, Q_inv=eig.Q_inv, sigma=eig.sigma,
            u=u, v=v, seed=seed, attempt=attempt,
        )
    raise DefectiveError(
        f"bordered matrix stayed defective after {tol.max_retries + 1} draws (seed {seed})",
    )
