"""
Warmstart engine: preprocess a basis once, then evaluate P(lambda) for many
lambda values in O(m^2) each.

With E_B = A_B^{-1} D_B and x_B(0) = A_B^{-1} b, the basic solution is
x_B(lambda) = (I + lambda E_B)^{-1} x_B(0). Every per-lambda operation works
in the coordinates of a precomputed factorization of E_B, so the only
per-lambda solves are diagonal, triangular or diagonal-plus-rank-one.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.linalg import eigvals, lu_solve, solve_triangular

from .config import config, Tolerances
from .decomposition import (
    EigenCache, SchurCache, TweakCache,
    eigen_decompose, schur_decompose, tweaked_assemble,
)
from .exceptions import DefectiveError, NumericalError, SingularityError
from .linalg import factorize, inf_norm
from .lp_model import partition
from .models import (
    Basis, BasisPartition, EvaluationDiagnostics, EvaluationResult,
    EvaluationStatus, ParametricLP, Strategy,
)

logger = logging.getLogger(__name__)

Decomposition = Union[EigenCache, SchurCache, TweakCache]


@dataclass(frozen=True, eq=False)
class WarmstartCache:
    """
    Everything needed to evaluate one basis at any lambda.

    ``g``, ``h``, ``Y`` and ``Z`` are x_B(0), the row c_B^T, A_B^{-1} A_N and
    A_B^{-1} D_N expressed in the decomposition's coordinates (Q^{-1} or
    Q^H on the left, Q on the right). For the tweaked strategy they live in
    the (m+1)-dimensional bordered space.
    """
    strategy: str
    partition: BasisPartition
    E: np.ndarray
    nu: np.ndarray
    x0: np.ndarray
    decomp: Decomposition
    g: np.ndarray
    h: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    norm_E: float
    norm_cB: float
    tolerances: Tolerances

    @property
    def m(self) -> int:
        return self.partition.m

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def basis(self) -> Basis:
        return self.partition.basis


def _nonbasic_solve(lu, block: np.ndarray) -> np.ndarray:
    if block.shape[1] == 0:
        return np.zeros(block.shape)
    return lu_solve(lu, block)


def _eigen_factors(E, x0, c_B, Y0, Z0, tol, seed):
    eig = eigen_decompose(E, tol)
    return eig, eig.sigma, eig.Q_inv @ x0, c_B @ eig.Q, eig.Q_inv @ Y0, eig.Q_inv @ Z0


def _schur_factors(E, x0, c_B, Y0, Z0, tol, seed):
    schur = schur_decompose(E, tol)
    Q_h = schur.Q.conj().T
    return schur, schur.sigma, Q_h @ x0, c_B @ schur.Q, Q_h @ Y0, Q_h @ Z0


def _tweaked_factors(E, x0, c_B, Y0, Z0, tol, seed):
    tweak = tweaked_assemble(E, seed, tol)
    m = E.shape[0]
    left = tweak.Q_inv[:, :m]
    # F's spectrum is not E's; existence is decided on E's own Schur form.
    nu = schur_decompose(E, tol).sigma
    return tweak, nu, left @ x0, c_B @ tweak.Q[:m, :], left @ Y0, left @ Z0


FACTOR_BUILDERS = {
    Strategy.EIGEN: _eigen_factors,
    Strategy.SCHUR: _schur_factors,
    Strategy.TWEAKED: _tweaked_factors,
}


def preprocess(
    lp: ParametricLP,
    basis: Basis,
    strategy: str = Strategy.AUTO,
    fallback: str = Strategy.SCHUR,
    tolerances: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> WarmstartCache:
    """
    Factor A_B once, form E_B and the nonbasic products, and decompose E_B.

    ``strategy='auto'`` tries the eigendecomposition and falls back to
    ``fallback`` (schur or tweaked) when E_B is defective.
    """
    tol = tolerances or config.tolerances
    seed = config.seed if seed is None else seed
    part = partition(lp, basis)
    m = part.m

    lu = factorize(part.A_B, 'A_B')
    E = lu_solve(lu, part.D_B)
    x0 = lu_solve(lu, np.asarray(lp.b, dtype=float))
    Y0 = _nonbasic_solve(lu, part.A_N)
    Z0 = _nonbasic_solve(lu, part.D_N)

    norm_AB = inf_norm(part.A_B)
    e_residual = inf_norm(part.A_B @ E - part.D_B)
    if e_residual > tol.res * (1.0 + inf_norm(part.D_B) + norm_AB * inf_norm(E)):
        raise NumericalError(f"E_B residual {e_residual:.3e} exceeds tolerance", details={'residual': e_residual})
    x_residual = inf_norm(part.A_B @ x0 - lp.b)
    if x_residual > tol.res * (1.0 + inf_norm(lp.b) + norm_AB * inf_norm(x0)):
        raise NumericalError(f"x_B(0) residual {x_residual:.3e} exceeds tolerance", details={'residual': x_residual})

    chosen = Strategy(strategy)
    if chosen == Strategy.AUTO:
        try:
            factors = _eigen_factors(E, x0, part.c_B, Y0, Z0, tol, seed)
            chosen = Strategy.EIGEN
        except DefectiveError as exc:
            chosen = Strategy(fallback)
            logger.info(f"E_B is defective ({exc}); falling back to {chosen}")
            factors = FACTOR_BUILDERS[chosen](E, x0, part.c_B, Y0, Z0, tol, seed)
    else:
        factors = FACTOR_BUILDERS[chosen](E, x0, part.c_B, Y0, Z0, tol, seed)

    decomp, nu, g, h, Y, Z = factors
    logger.debug(f"Preprocessed basis {basis} (m={m}) with strategy {chosen}")
    return WarmstartCache(
        strategy=chosen.value,
        partition=part,
        E=E,
        nu=np.asarray(nu, dtype=complex),
        x0=x0,
        decomp=decomp,
        g=g,
        h=h,
        Y=Y,
        Z=Z,
        norm_E=inf_norm(E),
        norm_cB=float(np.sum(np.abs(part.c_B))),
        tolerances=tol,
    )


def singular_tolerance(cache: WarmstartCache, lam: float) -> float:
    return cache.tolerances.sing * (1.0 + abs(lam) * cache.norm_E)


def check_existence(cache: WarmstartCache, lam: float) -> bool:
    """True iff A_B + lambda D_B is invertible, i.e. 1 + lambda nu_i != 0 for all i."""
    if cache.m == 0:
        return True
    return float(np.min(np.abs(1.0 + lam * cache.nu))) > singular_tolerance(cache, lam)


def singular_points(cache: WarmstartCache, lo: float = -np.inf, hi: float = np.inf) -> List[float]:
    """Real lambdas in [lo, hi] where the basis matrix is singular (-1/nu, nu real)."""
    points = []
    for nu in cache.nu:
        if nu == 0 or abs(nu.imag) > cache.tolerances.imag * (1.0 + abs(nu)):
            continue
        point = -1.0 / nu.real
        if lo <= point <= hi:
            points.append(float(point))
    return sorted(points)


def _require_existence(cache: WarmstartCache, lam: float):
    if not check_existence(cache, lam):
        raise SingularityError(f"basis matrix is singular at lambda={lam!r}", lam=lam)


def _sherman_morrison_terms(cache: WarmstartCache, lam: float) -> Tuple[np.ndarray, complex]:
    tweak = cache.decomp
    diagonal = 1.0 + lam * tweak.sigma
    limit = singular_tolerance(cache, lam)
    if float(np.min(np.abs(diagonal))) <= limit:
        raise SingularityError(f"bordered diagonal is singular at lambda={lam!r}", lam=lam)
    denominator = 1.0 + lam * lam * (tweak.v @ (tweak.u / diagonal))
    if abs(denominator) <= limit:
        raise SingularityError(f"Sherman-Morrison denominator vanishes at lambda={lam!r}", lam=lam)
    return diagonal, denominator


def _apply(cache: WarmstartCache, lam: float, w: np.ndarray) -> np.ndarray:
    """Solve the strategy's transformed system M(lambda) z = w."""
    if cache.strategy == Strategy.EIGEN:
        return w / (1.0 + lam * cache.decomp.sigma)
    if cache.strategy == Strategy.SCHUR:
        T = lam * cache.decomp.U
        T[np.diag_indices_from(T)] += 1.0
        return solve_triangular(T, w, lower=False, check_finite=False)
    tweak = cache.decomp
    diagonal, denominator = _sherman_morrison_terms(cache, lam)
    scaled = w / diagonal
    return scaled - (lam * lam * (tweak.v @ scaled) / denominator) * (tweak.u / diagonal)


def _apply_left(cache: WarmstartCache, lam: float, row: np.ndarray) -> np.ndarray:
    """Solve the row-vector system p M(lambda) = row."""
    if cache.strategy == Strategy.EIGEN:
        return row / (1.0 + lam * cache.decomp.sigma)
    if cache.strategy == Strategy.SCHUR:
        T = lam * cache.decomp.U
        T[np.diag_indices_from(T)] += 1.0
        return solve_triangular(T, row, trans='T', lower=False, check_finite=False)
    tweak = cache.decomp
    diagonal, denominator = _sherman_morrison_terms(cache, lam)
    scaled = row / diagonal
    return scaled - (lam * lam * (scaled @ tweak.u) / denominator) * (tweak.v / diagonal)


def _to_coordinates(cache: WarmstartCache, w: np.ndarray) -> np.ndarray:
    if cache.strategy == Strategy.SCHUR:
        return cache.decomp.Q.conj().T @ w
    return cache.decomp.Q_inv[:, :cache.m] @ w


def _from_coordinates(cache: WarmstartCache, z: np.ndarray) -> Tuple[np.ndarray, float]:
    values = (cache.decomp.Q @ z)[:cache.m]
    imaginary = float(np.max(np.abs(values.imag))) if cache.m else 0.0
    return values.real.copy(), imaginary


def _solution(cache: WarmstartCache, lam: float) -> Tuple[np.ndarray, float]:
    _require_existence(cache, lam)
    x, imaginary = _from_coordinates(cache, _apply(cache, lam, cache.g))
    if imaginary > cache.tolerances.imag * (1.0 + inf_norm(x)):
        logger.warning(f"Imaginary residual {imaginary:.3e} at lambda={lam!r} exceeds tolerance")
    return x, imaginary


def eval_solution(cache: WarmstartCache, lam: float) -> np.ndarray:
    """x_B(lambda), in basis order."""
    return _solution(cache, lam)[0]


def resolve(cache: WarmstartCache, lam: float, w: np.ndarray) -> np.ndarray:
    """(I + lambda E_B)^{-1} w for an arbitrary real vector w, in O(m^2)."""
    _require_existence(cache, lam)
    return _from_coordinates(cache, _apply(cache, lam, _to_coordinates(cache, w)))[0]


def _objective(cache: WarmstartCache, lam: float, x_B: Optional[np.ndarray] = None) -> float:
    if cache.strategy == Strategy.EIGEN:
        return float(np.sum(cache.h * cache.g / (1.0 + lam * cache.decomp.sigma)).real)
    if x_B is None:
        x_B = eval_solution(cache, lam)
    return float(cache.partition.c_B @ x_B)


def eval_objective(cache: WarmstartCache, lam: float) -> float:
    """o_B(lambda) = c_B^T x_B(lambda); O(m) for the eigen strategy."""
    _require_existence(cache, lam)
    return _objective(cache, lam)


def reduced_costs(cache: WarmstartCache, lam: float) -> np.ndarray:
    """r(lambda) = c_N^T - c_B^T (A_B + lambda D_B)^{-1} (A_N + lambda D_N)."""
    _require_existence(cache, lam)
    if cache.Y.shape[1] == 0:
        return np.zeros(0)
    p = _apply_left(cache, lam, cache.h)
    return cache.partition.c_N - (p @ cache.Y + lam * (p @ cache.Z)).real


def evaluate(cache: WarmstartCache, lam: float, check_optimality: bool = True) -> EvaluationResult:
    """
    Run existence, feasibility, optimality, objective and solution at ``lam``.

    Failure modes are statuses, never exceptions. With
    ``check_optimality=False`` a feasible basis is reported as
    feasible_suboptimal: its objective is an upper bound on o*(lambda).
    """
    tol = cache.tolerances
    lam = float(lam)
    if not check_existence(cache, lam):
        return EvaluationResult(lam=lam, status=EvaluationStatus.SINGULAR)
    try:
        x_B, imaginary = _solution(cache, lam)
    except SingularityError:
        return EvaluationResult(lam=lam, status=EvaluationStatus.SINGULAR)

    min_x = float(np.min(x_B)) if cache.m else None
    x = np.zeros(cache.n)
    x[list(cache.basis.indices)] = x_B
    objective = _objective(cache, lam, x_B)

    if min_x is not None and min_x < -tol.feas:
        diagnostics = EvaluationDiagnostics(max_imag_residual=imaginary, min_x_component=min_x)
        return EvaluationResult(lam=lam, status=EvaluationStatus.INFEASIBLE_BASIS, x=x,
                                objective=objective, diagnostics=diagnostics)

    min_rc = None
    status = EvaluationStatus.FEASIBLE_SUBOPTIMAL
    if check_optimality:
        costs = reduced_costs(cache, lam)
        min_rc = float(np.min(costs)) if costs.size else None
        if min_rc is None or min_rc >= -tol.opt:
            status = EvaluationStatus.OPTIMAL

    diagnostics = EvaluationDiagnostics(
        max_imag_residual=imaginary, min_x_component=min_x, min_reduced_cost=min_rc,
    )
    return EvaluationResult(lam=lam, status=status, x=x, objective=objective, diagnostics=diagnostics)


@dataclass(frozen=True, eq=False)
class ZuidwijkCache:
    """Eigenvalues of A_B^{-1} D_B (alphas) and A_B^{-1}(D_B + b c_B^T) (betas)."""
    alphas: np.ndarray
    betas: np.ndarray
    tolerances: Tolerances


def zuidwijk_preprocess(
    part: BasisPartition, b: np.ndarray, tolerances: Optional[Tolerances] = None,
) -> ZuidwijkCache:
    tol = tolerances or config.tolerances
    lu = factorize(part.A_B, 'A_B')
    E = lu_solve(lu, part.D_B)
    x0 = lu_solve(lu, np.asarray(b, dtype=float))
    alphas = np.asarray(eigvals(E, check_finite=False), dtype=complex)
    # A_B^{-1}(D_B + b c_B^T) = E_B + x_B(0) c_B^T
    betas = np.asarray(eigvals(E + np.outer(x0, part.c_B), check_finite=False), dtype=complex)

    trace_gap = complex(np.sum(betas - alphas))
    base = float(part.c_B @ x0)
    if abs(trace_gap.imag) > tol.imag * (1.0 + abs(trace_gap)) or abs(trace_gap.real - base) > 1e-6 * (1.0 + abs(base)):
        raise NumericalError(
            f"eigenvalue sums disagree with c_B^T x_B(0) ({trace_gap} vs {base})",
            details={'trace_gap': trace_gap.real, 'objective': base},
        )
    return ZuidwijkCache(alphas=alphas, betas=betas, tolerances=tol)


def _log1p(z: np.ndarray) -> np.ndarray:
    """log(1 + z) for complex z, keeping full relative accuracy when |z| is small."""
    x, y = z.real, z.imag
    # |1 + z|^2 - 1 = x (2 + x) + y^2
    return 0.5 * np.log1p(x * (2.0 + x) + y * y) + 1j * np.arctan2(y, 1.0 + x)


def _real_expm1(s: complex) -> float:
    """Re(exp(s) - 1) without cancellation for small s."""
    a, b = float(np.real(s)), float(np.imag(s))
    return float(np.expm1(a) * np.cos(b) - 2.0 * np.sin(0.5 * b) ** 2)


def zuidwijk_objective(zcache: ZuidwijkCache, lam: float) -> float:
    """
    o_B(lambda) = (prod_j (1 + lambda beta_j) / (1 + lambda alpha_j) - 1) / lambda,
    evaluated as expm1(sum of log1p differences) to stay accurate near 0.
    """
    tol = zcache.tolerances
    if abs(lam) < tol.lambda0:
        return float(np.sum(zcache.betas - zcache.alphas).real)
    scale = 1.0 + abs(lam) * (float(np.max(np.abs(zcache.alphas))) if zcache.alphas.size else 0.0)
    if zcache.alphas.size and float(np.min(np.abs(1.0 + lam * zcache.alphas))) <= tol.sing * scale:
        raise SingularityError(f"product formula has a pole at lambda={lam!r}", lam=lam)
    with np.errstate(divide='ignore'):
        log_ratio = np.sum(_log1p(lam * zcache.betas) - _log1p(lam * zcache.alphas))
    return _real_expm1(log_ratio) / lam
