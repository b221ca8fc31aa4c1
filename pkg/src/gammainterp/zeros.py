"""Zeros of the odd derivatives of Gamma.

``zeta_k``: the zero of ``Gamma^(2k+1)`` on ``(0, inf)``.
``eta_k``: the zero of ``Gamma^(2k+1)`` on ``(-1, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .branchlog import LogScaledComplex
from .errors import DataIntegrityError, DomainError
from .gamma_core import deriv_left_of_zero, deriv_oracle

__all__ = [
    "ZeroRecord",
    "TableRow",
    "KINDS",
    "find_zeta",
    "find_eta",
    "zero_table",
    "divergence_signs",
    "K_MAX",
]

KINDS = ("zeta", "eta")
K_MAX = 12
ETA_DELTA = 1e-6
BISECT_TOL = 1e-10
# the sign function only needs a few correct digits
_SIGN_TOL = 1e-10


@dataclass(frozen=True)
class ZeroRecord:
    kind: str
    k: int
    location: float
    bracket: Tuple[float, float]
    residual: float

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.location <= hi:
            raise DataIntegrityError(f"{self.kind}_{self.k}: location {self.location} outside bracket {self.bracket}")


@dataclass(frozen=True)
class TableRow:
    record: ZeroRecord
    # None for the first row; monotonicity is reported, not required
    increasing: Optional[bool]
    # |eta_k + 1/2| for eta, 1/zeta_k for zeta
    limit_distance: float


def _sign(v: LogScaledComplex) -> int:
    if v.is_zero:
        return 0
    c = math.cos(v.phase)
    return 1 if c > 0 else -1


def _value(v: LogScaledComplex) -> float:
    return 0.0 if v.is_zero else math.copysign(math.exp(v.logmod), math.cos(v.phase))


def _oracle_deriv(m: int) -> Callable[[float], LogScaledComplex]:
    return lambda x: deriv_oracle(m, x, rel_tol=_SIGN_TOL)


def _recursion_deriv(m: int) -> Callable[[float], LogScaledComplex]:
    return lambda x: deriv_left_of_zero(m, x)


def _check_k(k):
    if int(k) != k or k < 0:
        raise DomainError(f"zero index must be a nonnegative integer, got {k}")
    return int(k)


def _sign_changes(f, xs) -> List[Tuple[float, float, int, int]]:
    signs = [_sign(f(x)) for x in xs]
    return [(xs[i], xs[i + 1], signs[i], signs[i + 1]) for i in range(len(xs) - 1) if signs[i] != signs[i + 1]]


def _bisect(f, lo: float, hi: float, s_lo: int) -> Tuple[float, Tuple[float, float]]:
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        s = _sign(f(mid))
        if s == 0:
            return mid, (lo, hi)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), (lo, hi)


def _record(kind, k, f, fprime, lo, hi, s_lo) -> ZeroRecord:
    x, bracket = _bisect(f, lo, hi, s_lo)
    slope = _value(fprime(x))
    residual = abs(_value(f(x))) / abs(slope) if slope else math.inf
    return ZeroRecord(kind, k, x, bracket, residual)


def find_zeta(k: int) -> ZeroRecord:
    """Zero of ``Gamma^(2k+1)`` on ``(0, inf)``, signs from the Cauchy oracle.

    Scans ``(0, 4]`` in steps of 0.1, doubling the right end (and the step)
    until a sign change shows up, then bisects.
    """
    k = _check_k(k)
    f = _oracle_deriv(2 * k + 1)
    lo, hi, step = 0.0, 4.0, 0.1
    while True:
        n = round((hi - lo) / step)
        xs = [lo + step * (i + 1) for i in range(n)] if lo == 0 else [lo + step * i for i in range(n + 1)]
        changes = _sign_changes(f, xs)
        if len(changes) > 1:
            raise DataIntegrityError(f"Gamma^({2 * k + 1}) changes sign {len(changes)} times on ({lo}, {hi}]")
        if changes:
            a, b, sa, _ = changes[0]
            return _record("zeta", k, f, _oracle_deriv(2 * k + 2), a, b, sa)
        if hi > 1e4:
            raise DataIntegrityError(f"no sign change of Gamma^({2 * k + 1}) on (0, {hi}]")
        lo, hi, step = hi, 2 * hi, 2 * step


def find_eta(k: int, source: str = "recursion") -> ZeroRecord:
    """Zero of ``Gamma^(2k+1)`` on ``(-1, 0)``.

    Signs come from the functional-equation recursion (``source="recursion"``)
    or from the Cauchy oracle (``source="oracle"``).  The bracket is
    ``(-1 + 1e-6, -1e-6)``; a 20-point scan confirms a single sign change first.
    """
    k = _check_k(k)
    makers = {"recursion": _recursion_deriv, "oracle": _oracle_deriv}
    if source not in makers:
        raise DomainError(f"unknown source {source!r}; expected one of {tuple(makers)}")
    f = makers[source](2 * k + 1)
    lo, hi = -1.0 + ETA_DELTA, -ETA_DELTA
    xs = [lo] + [-1.0 + 0.05 * i for i in range(1, 20)] + [hi]
    changes = _sign_changes(f, xs)
    if not changes:
        raise DataIntegrityError(f"Gamma^({2 * k + 1}) has no sign change on ({lo}, {hi})")
    if len(changes) > 1:
        raise DataIntegrityError(f"Gamma^({2 * k + 1}) changes sign {len(changes)} times on ({lo}, {hi})")
    a, b, sa, _ = changes[0]
    return _record("eta", k, f, makers[source](2 * k + 2), a, b, sa)


def zero_table(kind: str, k_max: int) -> List[TableRow]:
    """Zeros for ``k = 0..k_max`` with descriptive monotonicity and limit columns."""
    if kind not in KINDS:
        raise DomainError(f"unknown kind {kind!r}; expected one of {KINDS}")
    k_max = _check_k(k_max)
    if k_max > K_MAX:
        raise DomainError(f"k_max is limited to {K_MAX}, got {k_max}")
    finder = find_zeta if kind == "zeta" else find_eta
    rows: List[TableRow] = []
    prev = None
    for k in range(k_max + 1):
        rec = finder(k)
        inc = None if prev is None else rec.location > prev.location
        dist = abs(rec.location + 0.5) if kind == "eta" else 1.0 / rec.location
        rows.append(TableRow(rec, inc, dist))
        prev = rec
    return rows


def divergence_signs(M: float, k_max: int = K_MAX) -> List[int]:
    """``sign Gamma^(2k+1)(M)`` for ``k = 0..k_max`` (oracle)."""
    if M <= 0:
        raise DomainError(f"M must be positive, got {M}")
    return [_sign(deriv_oracle(2 * k + 1, M, rel_tol=_SIGN_TOL)) for k in range(_check_k(k_max) + 1)]
