"""Exception hierarchy shared by all modules."""


class GammaInterpError(Exception):
    """Base class for library errors."""


class DomainError(GammaInterpError, ValueError):
    """Argument outside the domain of the requested operation."""


class PathError(DomainError):
    """Continuation path meets a branch point or a branch cut."""


class AccuracyError(GammaInterpError, ArithmeticError):
    """Requested accuracy was not reached.

    ``best`` carries the best estimate available when the budget ran out.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class EvaluationError(GammaInterpError, ArithmeticError):
    """An integrand or summand produced NaN."""


class RangeError(GammaInterpError, OverflowError):
    """A log-scaled value does not fit in native floating point."""


class DataIntegrityError(GammaInterpError, RuntimeError):
    """Numerical data contradicts a structural fact (e.g. uniqueness of a zero)."""
