class EngineError(Exception):
    """Base class for every failure raised by the warmstart engine."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class ProblemFormatError(EngineError):
    """Problem document is malformed or violates a dimension invariant."""

    def __init__(self, message, location=None, details=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message, details)
        self.location = location


class BasisError(EngineError):
    """Basis indices are out of range, duplicated or of the wrong length."""


class NumericalError(EngineError):
    """A computation could not be carried out to the requested accuracy."""


class SingularBasisError(NumericalError):
    """A basis matrix is numerically singular."""


class SingularityError(NumericalError):
    """The basis matrix is singular at the requested lambda."""

    def __init__(self, message, lam=None, details=None):
        super().__init__(message, details)
        self.lam = lam


class DefectiveError(NumericalError):
    """The eigenvector matrix is numerically singular (E_B is not diagonalizable)."""

    def __init__(self, message, condition=None, details=None):
        super().__init__(message, details)
        self.condition = condition


class ConvergenceError(NumericalError):
    """An iterative factorization or the simplex ran out of iterations."""


class NotOptimalError(EngineError):
    """An operation that needs an optimal solve received another status."""

    def __init__(self, message, status=None, details=None):
        super().__init__(message, details)
        self.status = status
