import logging
import time
from typing import Optional, Sequence, Tuple

from .benchmark import BenchReport, benchmark, DEFAULT_STRATEGIES
from .bounds import DeltaCertificate, certify
from .config import config, Tolerances
from .exceptions import NotOptimalError
from .lp_model import to_standard_form
from .models import ParametricLP, SolveResult, Strategy
from .simplex import solve_lp
from .sweep import PiecewiseLinearApprox, SweepReport, adaptive_approx, sweep
from .warmstart import WarmstartCache, preprocess

logger = logging.getLogger(__name__)


class WarmstartService:
    """Entry points used by the management commands; each takes a raw (possibly non-standard) problem."""

    def __init__(self, tolerances: Optional[Tolerances] = None):
        self._tolerances = tolerances

    @property
    def tolerances(self) -> Tolerances:
        return self._tolerances or config.tolerances

    def solve(self, lp: ParametricLP, lam: float = 0.0) -> SolveResult:
        return solve_lp(to_standard_form(lp), lam, self.tolerances)

    def anchor(
        self,
        lp: ParametricLP,
        lam: float = 0.0,
        strategy: str = Strategy.AUTO,
        fallback: str = Strategy.SCHUR,
        seed: Optional[int] = None,
    ) -> Tuple[WarmstartCache, float]:
        """Solve P(lam), preprocess its optimal basis and return the cache with the preprocessing time."""
        result = self.solve(lp, lam)
        if not result.is_optimal():
            raise NotOptimalError(f"P({lam!r}) is {result.status}", status=result.status)
        start = time.perf_counter()
        cache = preprocess(
            to_standard_form(lp).shifted(lam), result.basis, strategy, fallback, self.tolerances, seed,
        )
        return cache, time.perf_counter() - start

    def sweep(
        self,
        lp: ParametricLP,
        lambdas: Sequence[float],
        strategy: str = Strategy.AUTO,
        fallback: str = Strategy.SCHUR,
        seed: Optional[int] = None,
        check_optimality: bool = True,
        threads: Optional[int] = None,
    ) -> SweepReport:
        cache, seconds = self.anchor(lp, 0.0, strategy, fallback, seed)
        return sweep(cache, lambdas, threads, check_optimality, preprocess_seconds=seconds)

    def bound(
        self,
        lp: ParametricLP,
        lam: float,
        epsilon: float,
        direction: int = 1,
        strategy: str = Strategy.AUTO,
        fallback: str = Strategy.SCHUR,
        seed: Optional[int] = None,
    ) -> DeltaCertificate:
        """Certificate at ``lam`` for the basis that is optimal for P(0)."""
        cache, _ = self.anchor(lp, 0.0, strategy, fallback, seed)
        return certify(cache, lam, epsilon, direction)

    def approximate(
        self,
        lp: ParametricLP,
        lo: float,
        hi: float,
        epsilon: float,
        max_points: Optional[int] = None,
        min_width: Optional[float] = None,
        strategy: str = Strategy.AUTO,
        fallback: str = Strategy.SCHUR,
        seed: Optional[int] = None,
    ) -> PiecewiseLinearApprox:
        kwargs = {'max_points': max_points} if max_points else {}
        return adaptive_approx(
            lp, lo, hi, epsilon, min_width=min_width, strategy=strategy, fallback=fallback,
            tolerances=self.tolerances, seed=seed, **kwargs,
        )

    def benchmark(
        self,
        lp: ParametricLP,
        lambdas: Sequence[float],
        strategies: Sequence[str] = DEFAULT_STRATEGIES,
        repeats: int = 3,
        seed: Optional[int] = None,
    ) -> BenchReport:
        return benchmark(lp, lambdas, strategies, repeats, tolerances=self.tolerances, seed=seed)


# Global service instance
warmstart_service = WarmstartService()
