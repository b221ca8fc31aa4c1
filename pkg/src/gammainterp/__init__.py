"""Entire-in-lambda interpolation of the Gamma-function derivatives.

``G(lambda, z)`` equals ``Gamma^(m)(z)`` at every nonnegative integer
``lambda = m``.  See :mod:`gammainterp.g_eval` for evaluation,
:mod:`gammainterp.asymptotics` for large-lambda forms and
:mod:`gammainterp.zeros` for the zeros of the odd derivatives.
"""

__version__ = "0.1.0"

from .branchlog import LogScaledComplex, log_upper, loglog_on_contour, pow_branched
from .errors import (
    AccuracyError,
    DataIntegrityError,
    DomainError,
    EvaluationError,
    GammaInterpError,
    PathError,
    RangeError,
)
from .g_eval import EvalRequest, GSplit, evaluate, g, g_continue_left, g_contour, g_split
from .gamma_core import deriv_oracle, gamma

__all__ = [
    "__version__",
    "LogScaledComplex",
    "log_upper",
    "loglog_on_contour",
    "pow_branched",
    "GammaInterpError",
    "DomainError",
    "PathError",
    "AccuracyError",
    "EvaluationError",
    "RangeError",
    "DataIntegrityError",
    "EvalRequest",
    "GSplit",
    "evaluate",
    "g",
    "g_contour",
    "g_split",
    "g_continue_left",
    "gamma",
    "deriv_oracle",
]
