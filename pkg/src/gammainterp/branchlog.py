"""Branch-fixed logarithms and powers, and log-scaled complex arithmetic.

The logarithm used throughout maps the closed upper half-plane (minus the
origin) onto the strip ``0 <= Im w <= pi``, so that ``ln 1 = 0`` and
``ln(-1) = i*pi``.  Powers are always formed as ``exp(exponent * log)`` from an
already-branched logarithm.

Magnitudes such as ``Gamma(lambda + 1)`` overflow doubles long before the
interesting asymptotic regime, so values are carried as
:class:`LogScaledComplex`: a natural log-modulus plus an unwrapped phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError

__all__ = [
    "LogScaledComplex",
    "ZERO",
    "arg",
    "ONE",
    "OVERFLOW_LOGMOD",
    "ADD_CUTOFF",
    "log_upper",
    "loglog_on_contour",
    "pow_branched",
    "ls_mul",
    "ls_add",
    "ls_to_complex",
    "ls_from_complex",
    "rel_diff",
]

# log of the largest finite double
OVERFLOW_LOGMOD = math.log(np.finfo(float).max)
# operands further apart than this (in logmod) are below double resolution
ADD_CUTOFF = 40.0


@dataclass(frozen=True, slots=True)
class LogScaledComplex:
    """Complex number ``exp(logmod + i*phase)``.

    ``logmod = -inf`` (with ``phase = 0``) encodes an exact zero.  The phase is
    never reduced modulo 2*pi.
    """

    logmod: float
    phase: float = 0.0

    def __post_init__(self):
        if math.isnan(self.logmod) or self.logmod == math.inf:
            raise DomainError(f"invalid logmod {self.logmod!r}")
        if not math.isfinite(self.phase):
            raise DomainError(f"phase must be finite, got {self.phase!r}")

    @classmethod
    def from_complex(cls, value, log_scale: float = 0.0) -> "LogScaledComplex":
        return ls_from_complex(value, log_scale)

    @property
    def is_zero(self) -> bool:
        return self.logmod == -math.inf

    def to_complex(self) -> complex:
        return ls_to_complex(self)

    def log(self) -> complex:
        """Continuous-branch logarithm ``logmod + i*phase``."""
        if self.is_zero:
            raise DomainError("logarithm of zero")
        return complex(self.logmod, self.phase)

    def scaled(self, log_factor: float) -> "LogScaledComplex":
        if self.is_zero:
            return self
        return LogScaledComplex(self.logmod + log_factor, self.phase)

    def reciprocal(self) -> "LogScaledComplex":
        if self.is_zero:
            raise DomainError("reciprocal of zero")
        return LogScaledComplex(-self.logmod, -self.phase)

    def __mul__(self, other):
        if not isinstance(other, LogScaledComplex):
            other = ls_from_complex(other)
        return ls_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogScaledComplex):
            other = ls_from_complex(other)
        return ls_mul(self, other.reciprocal())

    def __add__(self, other):
        if not isinstance(other, LogScaledComplex):
            other = ls_from_complex(other)
        return ls_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return LogScaledComplex(self.logmod, self.phase + math.pi)

    def __sub__(self, other):
        if not isinstance(other, LogScaledComplex):
            other = ls_from_complex(other)
        return ls_add(self, -other)


ZERO = LogScaledComplex(-math.inf, 0.0)
ONE = LogScaledComplex(0.0, 0.0)


def log_upper(zeta):
    """Logarithm with ``Im`` in ``[0, pi]`` on the closed upper half-plane.

    Accepts a scalar or a numpy array.  Real negative input (with either sign
    of zero imaginary part) maps to ``ln|zeta| + i*pi``.
    """
    arr = np.asarray(zeta, dtype=complex)
    if np.any(arr == 0):
        raise DomainError("log_upper: zero argument")
    if np.any(arr.imag < 0):
        raise DomainError("log_upper: argument in the open lower half-plane")
    w = np.log(arr)
    # np.log(-x - 0j) lands on -pi
    w = np.where(w.imag < 0, w.real + 1j * math.pi, w)
    if np.ndim(zeta) == 0:
        return complex(w)
    return w


def loglog_on_contour(zeta):
    """``ln(ln zeta)`` with both logarithms on the upper branch.

    For ``t`` in (0, 1) this is ``ln(-ln t) + i*pi``; for ``t > 1`` it is the
    real ``ln(ln t)``.
    """
    arr = np.asarray(zeta, dtype=complex)
    if np.any(arr == 1):
        raise DomainError("loglog_on_contour: singular point zeta = 1")
    return log_upper(log_upper(zeta))


def pow_branched(base_log, exponent) -> LogScaledComplex:
    """``exp(exponent * base_log)`` in log-scaled form (cannot overflow)."""
    w = complex(exponent) * complex(base_log)
    return LogScaledComplex(w.real, w.imag)


def ls_mul(a: LogScaledComplex, b: LogScaledComplex) -> LogScaledComplex:
    if a.is_zero or b.is_zero:
        return ZERO
    return LogScaledComplex(a.logmod + b.logmod, a.phase + b.phase)


def ls_add(a: LogScaledComplex, b: LogScaledComplex) -> LogScaledComplex:
    """Sum, rescaled by the larger operand; keeps that operand's phase branch."""
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    big, small = (a, b) if a.logmod >= b.logmod else (b, a)
    gap = small.logmod - big.logmod
    if gap < -ADD_CUTOFF:
        return big
    turn = small.phase - big.phase
    if gap == 0 and math.cos(turn) == -1.0:
        # equal moduli half a turn apart: the float sin(pi) residue is not a value
        return ZERO
    s = 1.0 + cmath.exp(complex(gap, turn))
    if s == 0:
        return ZERO
    return LogScaledComplex(big.logmod + math.log(abs(s)), big.phase + arg(s))


def arg(c) -> float:
    """Principal argument; unlike ``cmath.phase`` it does not raise on subnormal parts."""
    c = complex(c)
    return math.atan2(c.imag, c.real)


def ls_to_complex(a: LogScaledComplex) -> complex:
    if a.is_zero:
        return 0j
    if a.logmod > OVERFLOW_LOGMOD:
        raise RangeError(f"logmod {a.logmod:.6g} exceeds the double range ({OVERFLOW_LOGMOD:.6g})")
    return cmath.rect(math.exp(a.logmod), a.phase)


def ls_from_complex(value, log_scale: float = 0.0) -> LogScaledComplex:
    c = complex(value)
    if c == 0:
        return ZERO
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise DomainError(f"non-finite value {c!r}")
    return LogScaledComplex(math.log(abs(c)) + log_scale, arg(c))


def rel_diff(a: LogScaledComplex, b: LogScaledComplex) -> float:
    """``|a/b - 1|`` without leaving log space."""
    if b.is_zero:
        return 0.0 if a.is_zero else math.inf
    if a.is_zero:
        return 1.0
    x = a.logmod - b.logmod
    y = a.phase - b.phase
    # expm1(x + iy) with cos(y) - 1 = -2 sin^2(y/2)
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    im = math.exp(x) * math.sin(y)
    return math.hypot(re, im)
