from .config import EngineConfig, Tolerances, config
from .exceptions import (
    EngineError, ProblemFormatError, BasisError, NumericalError, SingularBasisError,
    SingularityError, DefectiveError, ConvergenceError, NotOptimalError,
)
from .models import ParametricLP, Basis, EvaluationStatus, SolveStatus, Strategy
from .service import WarmstartService, warmstart_service

__all__ = [
    'EngineConfig', 'Tolerances', 'config',
    'EngineError', 'ProblemFormatError', 'BasisError', 'NumericalError', 'SingularBasisError',
    'SingularityError', 'DefectiveError', 'ConvergenceError', 'NotOptimalError',
    'ParametricLP', 'Basis', 'EvaluationStatus', 'SolveStatus', 'Strategy',
    'WarmstartService', 'warmstart_service',
]
