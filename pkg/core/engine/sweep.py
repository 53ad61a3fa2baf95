"""
Orchestration over many lambda values: parallel sweeps with one cache and
the adaptive piecewise-linear approximation of o*(lambda) with re-anchoring.
"""

import bisect
import heapq
import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from .bounds import certify
from .config import config, Tolerances
from .exceptions import EngineError, NotOptimalError
from .lp_model import to_standard_form
from .models import Basis, EvaluationResult, EvaluationStatus, ParametricLP, Strategy
from .simplex import solve_lp
from .warmstart import WarmstartCache, evaluate, preprocess, singular_points

logger = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 10_000
DEFAULT_WIDTH_FRACTION = 2.0 ** -20


@dataclass(frozen=True, eq=False)
class SweepReport:
    results: List[EvaluationResult]
    strategy: str
    preprocess_seconds: float = 0.0
    per_lambda_seconds: List[float] = field(default_factory=list)

    @property
    def counts(self) -> Dict[str, int]:
        counts = Counter(str(result.status) for result in self.results)
        return {status: counts.get(status, 0) for status in EvaluationStatus.values}

    def to_rows(self) -> List[Dict[str, Any]]:
        return [result.to_dict() for result in self.results]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'strategy': self.strategy,
            'counts': self.counts,
            'timings': {
                'preprocess_seconds': self.preprocess_seconds,
                'per_lambda_seconds': list(self.per_lambda_seconds),
            },
            'results': self.to_rows(),
        }


def sweep(
    cache: WarmstartCache,
    lambdas: Sequence[float],
    threads: Optional[int] = None,
    check_optimality: bool = True,
    preprocess_seconds: float = 0.0,
) -> SweepReport:
    """
    Evaluate ``cache`` at every lambda, in request order.

    Work is spread over a thread pool (``PARAWARM_THREADS`` workers by
    default); the cache is read-only so results do not depend on the schedule.
    """
    lambdas = [float(lam) for lam in lambdas]
    if not lambdas:
        return SweepReport(results=[], strategy=cache.strategy, preprocess_seconds=preprocess_seconds)

    def timed(lam):
        start = time.perf_counter()
        result = evaluate(cache, lam, check_optimality)
        return result, time.perf_counter() - start

    workers = min(threads or config.threads, len(lambdas))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(timed, lambdas))

    report = SweepReport(
        results=[result for result, _ in outcomes],
        strategy=cache.strategy,
        preprocess_seconds=preprocess_seconds,
        per_lambda_seconds=[seconds for _, seconds in outcomes],
    )
    logger.info(f"Swept {len(lambdas)} lambda values with {workers} workers: {report.counts}")
    return report


@dataclass(frozen=True, eq=False)
class Anchor:
    """A cache built on the family re-parametrized around ``lam``."""
    lam: float
    basis: Basis
    cache: WarmstartCache


@dataclass(frozen=True)
class Breakpoint:
    lam: float
    objective: Optional[float]
    status: str
    basis: Optional[Basis] = None
    anchor: Optional[int] = None
    delta_plus: float = 0.0
    delta_minus: float = 0.0

    def is_optimal(self) -> bool:
        return self.status == EvaluationStatus.OPTIMAL

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lambda': self.lam,
            'objective': self.objective,
            'status': str(self.status),
            'basis': list(self.basis.indices) if self.basis else None,
        }


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    certified: bool


@dataclass(frozen=True)
class ExcludedInterval:
    lo: float
    hi: float
    point: float
    basis: Basis


@dataclass(frozen=True)
class ReanchorEvent:
    lam: float
    old_basis: Basis
    new_basis: Basis


@dataclass(frozen=True, eq=False)
class PiecewiseLinearApprox:
    breakpoints: List[Breakpoint]
    intervals: List[Interval]
    epsilon: float
    excluded: List[ExcludedInterval] = field(default_factory=list)
    reanchor_events: List[ReanchorEvent] = field(default_factory=list)
    anchors: int = 1

    @property
    def fully_certified(self) -> bool:
        return all(interval.certified for interval in self.intervals)

    @property
    def certified_intervals(self) -> List[Interval]:
        return [interval for interval in self.intervals if interval.certified]

    def interpolate(self, lam: float) -> Optional[float]:
        """Linear interpolation between the breakpoints bracketing ``lam``."""
        lams = [point.lam for point in self.breakpoints]
        if not lams or lam < lams[0] or lam > lams[-1]:
            return None
        right = bisect.bisect_left(lams, lam)
        if lams[right] == lam:
            return self.breakpoints[right].objective
        left_point, right_point = self.breakpoints[right - 1], self.breakpoints[right]
        if left_point.objective is None or right_point.objective is None:
            return None
        weight = (lam - left_point.lam) / (right_point.lam - left_point.lam)
        return left_point.objective + weight * (right_point.objective - left_point.objective)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'epsilon': self.epsilon,
            'fully_certified': self.fully_certified,
            'anchors': self.anchors,
            'breakpoints': [point.to_dict() for point in self.breakpoints],
            'intervals': [
                {'lo': interval.lo, 'hi': interval.hi, 'certified': interval.certified}
                for interval in self.intervals
            ],
            'excluded': [
                {'lo': item.lo, 'hi': item.hi, 'point': item.point, 'basis': list(item.basis.indices)}
                for item in self.excluded
            ],
            'reanchor_events': [
                {'lambda': event.lam, 'old_basis': list(event.old_basis.indices),
                 'new_basis': list(event.new_basis.indices)}
                for event in self.reanchor_events
            ],
        }


class _Approximator:
    """
    Bisection worklist over [lo, hi]. Every breakpoint is evaluated with an
    anchor whose basis is optimal there; certificates use epsilon/2 so the
    linear interpolant stays within 2 * epsilon of o_B on certified intervals.
    """

    def __init__(self, lp, epsilon, strategy, fallback, tolerances, seed):
        self.lp = lp
        self.epsilon = epsilon
        self.strategy = strategy
        self.fallback = fallback
        self.tol = tolerances
        self.seed = seed
        self.anchors: List[Anchor] = []
        self.points: Dict[float, Breakpoint] = {}
        self.events: List[ReanchorEvent] = []

    def add_anchor(self, lam: float, basis: Basis) -> int:
        cache = preprocess(self.lp.shifted(lam), basis, self.strategy, self.fallback, self.tol, self.seed)
        self.anchors.append(Anchor(lam=lam, basis=basis, cache=cache))
        logger.debug(f"Anchor {len(self.anchors) - 1} at lambda={lam!r} with basis {basis}")
        return len(self.anchors) - 1

    def breakpoint_from(self, index: int, result: EvaluationResult, recenter: bool = True) -> Breakpoint:
        anchor = self.anchors[index]
        local = result.lam
        lam = anchor.lam + local
        if not result.is_optimal():
            return Breakpoint(lam=lam, objective=result.objective, status=result.status,
                              basis=anchor.basis, anchor=index)
        plus = certify(anchor.cache, local, self.epsilon / 2, 1)
        if recenter and local != 0.0 and plus.binding_term == 'norm':
            # The distance from the anchor is what limits the radius: re-center here.
            index = self.add_anchor(lam, anchor.basis)
            return self.breakpoint_from(index, evaluate(self.anchors[index].cache, 0.0), recenter=False)
        minus = certify(anchor.cache, local, self.epsilon / 2, -1)
        return Breakpoint(
            lam=lam, objective=result.objective, status=result.status, basis=anchor.basis,
            anchor=index, delta_plus=plus.delta_max, delta_minus=minus.delta_max,
        )

    def resolve_at(self, lam: float, previous: int) -> Breakpoint:
        old_basis = self.anchors[previous].basis
        solved = solve_lp(self.lp, lam, self.tol, initial_basis=old_basis)
        if not solved.is_optimal():
            logger.warning(f"P({lam!r}) is {solved.status}; breakpoint left without objective")
            return Breakpoint(lam=lam, objective=None, status=solved.status)
        index = self.add_anchor(lam, solved.basis)
        if solved.basis != old_basis:
            self.events.append(ReanchorEvent(lam=lam, old_basis=old_basis, new_basis=solved.basis))
            logger.info(f"Re-anchored at lambda={lam!r}: basis {old_basis} -> {solved.basis}")
        return self.breakpoint_from(index, evaluate(self.anchors[index].cache, 0.0), recenter=False)

    def evaluate_point(self, lam: float, candidates: Sequence[int]) -> Breakpoint:
        tried = []
        for index in candidates:
            if index is None or index in tried:
                continue
            tried.append(index)
            anchor = self.anchors[index]
            result = evaluate(anchor.cache, lam - anchor.lam)
            if result.is_optimal():
                return self.breakpoint_from(index, result)
        return self.resolve_at(lam, tried[0])

    def covers(self, left: Breakpoint, right: Breakpoint) -> bool:
        return (
            left.is_optimal() and right.is_optimal()
            and left.basis == right.basis
            and left.delta_plus + right.delta_minus >= right.lam - left.lam
        )

    def excluded_in(self, left: Breakpoint, right: Breakpoint) -> List[ExcludedInterval]:
        found = []
        for index in {left.anchor, right.anchor} - {None}:
            anchor = self.anchors[index]
            for local in singular_points(anchor.cache, left.lam - anchor.lam, right.lam - anchor.lam):
                point = anchor.lam + local
                if not left.lam < point < right.lam:
                    continue
                radius = self.tol.exclusion_radius * (1.0 + abs(point))
                found.append(ExcludedInterval(
                    lo=max(left.lam, point - radius), hi=min(right.lam, point + radius),
                    point=point, basis=anchor.basis,
                ))
        return found


def adaptive_approx(
    lp: ParametricLP,
    lo: float,
    hi: float,
    epsilon: float,
    max_points: int = DEFAULT_MAX_POINTS,
    min_width: Optional[float] = None,
    strategy: str = Strategy.AUTO,
    fallback: str = Strategy.SCHUR,
    tolerances: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> PiecewiseLinearApprox:
    """
    Piecewise-linear approximation of o*(lambda) on [lo, hi].

    Intervals are bisected widest first until their endpoint certificates
    cover them, they shrink below ``min_width`` or ``max_points`` breakpoints
    exist; the leftovers are reported uncertified. A midpoint where neither
    neighbouring basis is optimal triggers a warm-started simplex solve and a
    new anchor.
    """
    if not epsilon > 0:
        raise EngineError(f"epsilon must be positive, got {epsilon!r}")
    if hi < lo:
        raise EngineError(f"empty range [{lo!r}, {hi!r}]")
    tol = tolerances or config.tolerances
    seed = config.seed if seed is None else seed
    if min_width is None:
        min_width = (hi - lo) * DEFAULT_WIDTH_FRACTION

    standard = to_standard_form(lp)
    base = solve_lp(standard, lo, tol)
    if not base.is_optimal():
        raise NotOptimalError(f"P({lo!r}) is {base.status}", status=base.status)

    approx = _Approximator(standard, epsilon, strategy, fallback, tol, seed)
    first = approx.add_anchor(lo, base.basis)
    approx.points[lo] = approx.breakpoint_from(first, evaluate(approx.anchors[first].cache, 0.0), recenter=False)
    if hi == lo:
        return PiecewiseLinearApprox(breakpoints=[approx.points[lo]], intervals=[], epsilon=epsilon)

    approx.points[hi] = approx.evaluate_point(hi, [first])
    worklist = [(-(hi - lo), lo, hi)]
    intervals = []
    excluded = []
    while worklist:
        _, a, b = heapq.heappop(worklist)
        left, right = approx.points[a], approx.points[b]
        if approx.covers(left, right):
            intervals.append(Interval(a, b, True))
            continue
        mid = a + (b - a) / 2
        if b - a <= min_width or len(approx.points) >= max_points or not a < mid < b:
            intervals.append(Interval(a, b, False))
            excluded.extend(approx.excluded_in(left, right))
            continue
        approx.points[mid] = approx.evaluate_point(mid, [left.anchor, right.anchor, first])
        heapq.heappush(worklist, (-(mid - a), a, mid))
        heapq.heappush(worklist, (-(b - mid), mid, b))

    intervals.sort(key=lambda interval: interval.lo)
    excluded.sort(key=lambda item: item.point)
    result = PiecewiseLinearApprox(
        breakpoints=[approx.points[lam] for lam in sorted(approx.points)],
        intervals=intervals,
        epsilon=epsilon,
        excluded=excluded,
        reanchor_events=list(approx.events),
        anchors=len(approx.anchors),
    )
    uncertified = len(intervals) - len(result.certified_intervals)
    logger.info(
        f"Approximation on [{lo!r}, {hi!r}]: {len(result.breakpoints)} breakpoints, "
        f"{uncertified} uncertified intervals, {len(approx.events)} re-anchors"
    )
    return result
