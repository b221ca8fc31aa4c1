"""Evaluation of G(lambda, z), the entire-in-lambda interpolant of Gamma^(m)(z).

Strategies:

``contour``
    Integral of ``e^{-zeta} (ln zeta)^lambda zeta^{z-1}`` over C_r.  Any complex
    lambda, ``Re z > 0``.
``split``
    ``G = G0 + G1`` with both pieces by quadrature (``Re lambda > -1``).
``series_plus_tail``
    G0 from its rapidly converging series, G1 by quadrature.
``auto``
    series_plus_tail when ``Re lambda > -1``, contour otherwise, and
    continuation through the functional equation when ``Re z <= 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .branchlog import (
    ONE,
    ZERO,
    LogScaledComplex,
    log_upper,
    loglog_on_contour,
    ls_add,
    ls_from_complex,
    pow_branched,
)
from .errors import AccuracyError, DomainError, PathError
from .gamma_core import gamma, lower_moment, upper_moment
from .quadrature import ContourSpec, QuadResult, combine, integrate_contour, integrate_interval

__all__ = [
    "METHODS",
    "EvalRequest",
    "GResult",
    "GSplit",
    "evaluate",
    "g",
    "g_contour",
    "g_split",
    "g0_series",
    "g1_integral",
    "g_recurrence_residual",
    "g_dz",
    "g_dz_check",
    "g_continue_left",
    "default_path",
    "property1_ratio",
    "property1_deviation",
]

METHODS = ("contour", "split", "series_plus_tail", "auto")
DEFAULT_R = 0.5
DEFAULT_REL_TOL = 1e-10
_MIN_INNER_TOL = 1e-13


def _inner(rel_tol: float) -> float:
    return max(rel_tol * 1e-2, _MIN_INNER_TOL)


def _iπ_power(lam: complex) -> LogScaledComplex:
    """``e^{i pi lambda}``: the power of ``ln(-1) = i pi``."""
    return pow_branched(1j * math.pi, lam)


@dataclass(frozen=True)
class EvalRequest:
    lam: complex
    z: complex
    method: str = "auto"
    r: float = DEFAULT_R
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "z", complex(self.z))
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not 0.0 < self.rel_tol <= 1e-4:
            raise DomainError(f"rel_tol must lie in (0, 1e-4], got {self.rel_tol}")
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"contour radius must lie in (0, 1), got {self.r}")


@dataclass(frozen=True)
class GSplit:
    g0: LogScaledComplex
    g1: LogScaledComplex

    @property
    def total(self) -> LogScaledComplex:
        return ls_add(self.g0, self.g1)


@dataclass(frozen=True)
class GResult:
    """A value of G with its relative error estimate and bookkeeping."""

    value: LogScaledComplex
    rel_err: float
    n_evals: int
    method: str
    continued: bool = False
    parts: dict = field(default_factory=dict, compare=False)


def _from_quad(q: QuadResult, method: str, **parts) -> GResult:
    return GResult(q.value, q.abs_err, q.n_evals, method, parts=parts)


# --- contour ---------------------------------------------------------------


def _contour(lam: complex, z: complex, r: float, rel_tol: float) -> GResult:
    if z.real <= 0:
        raise DomainError(
            f"the contour integral needs Re z > 0 (got z = {z}); use g_continue_left for Re z <= 0"
        )
    tol = _inner(rel_tol)
    spec = ContourSpec(r)
    tau0 = -math.log1p(-r)
    u0 = math.log1p(r)

    def left(t):
        q = lower_moment(lam, z, t, tau_start=tau0)
        return QuadResult(q.value * _iπ_power(lam), q.abs_err, q.n_evals)

    def right(t):
        return upper_moment(lam, z, t, u_start=u0)

    def log_f(zeta):
        return -zeta + lam * loglog_on_contour(zeta) + (z - 1.0) * log_upper(zeta)

    probe = spec.semicircle(np.linspace(0.02, math.pi - 0.02, 48))
    shift = float(np.max(log_f(probe).real))

    def f(zeta):
        return np.exp(log_f(zeta) - shift)

    q = integrate_contour(f, spec, tol, left=left, right=right, log_scale=shift)
    return _from_quad(q, "contour")


def g_contour(lam, z, r: float = DEFAULT_R, rel_tol: float = DEFAULT_REL_TOL) -> LogScaledComplex:
    """G by integration along C_r; the value does not depend on ``r``."""
    req = EvalRequest(lam, z, "contour", r, rel_tol)
    return _contour(req.lam, req.z, req.r, req.rel_tol).value


# --- split and series ------------------------------------------------------


def _check_split_domain(lam: complex, z: complex, what: str):
    if lam.real <= -1:
        raise DomainError(f"{what} needs Re lambda > -1 (got {lam}); use the contour method")
    if z.real <= 0:
        raise DomainError(f"{what} needs Re z > 0 (got z = {z}); use g_continue_left")


def _g1(lam: complex, z: complex, rel_tol: float) -> QuadResult:
    return upper_moment(lam, z, _inner(rel_tol))


def g1_integral(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> LogScaledComplex:
    """``G1 = int_1^inf e^{-(t - lambda ln ln t)} t^{z-1} dt`` by log-scaled quadrature."""
    lam, z = complex(lam), complex(z)
    if lam.real <= -1:
        raise DomainError(f"G1 needs Re lambda > -1, got {lam}")
    return _g1(lam, z, rel_tol).value


def _split(lam: complex, z: complex, rel_tol: float) -> GResult:
    _check_split_domain(lam, z, "the split representation")
    low = lower_moment(lam, z, _inner(rel_tol))
    g0 = QuadResult(low.value * _iπ_power(lam), low.abs_err, low.n_evals)
    g1 = _g1(lam, z, rel_tol)
    return _from_quad(combine([g0, g1]), "split", g0=g0.value, g1=g1.value)


def g_split(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> GSplit:
    """``G0`` and ``G1`` (lower and upper halves of the real-axis integral)."""
    lam, z = complex(lam), complex(z)
    res = _split(lam, z, rel_tol)
    return GSplit(res.parts["g0"], res.parts["g1"])


def _series_terms(lam: complex, z: complex, n: int):
    k = np.arange(n)
    logs = -special.gammaln(k + 1.0) - (lam + 1.0) * np.log(k + z)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    return logs, signs


def _g0_series(lam: complex, z: complex, rel_tol: float):
    """Returns (value, relative error estimate, number of terms)."""
    _check_split_domain(lam, z, "the G0 series")
    n = 32
    while True:
        logs, signs = _series_terms(lam, z, n)
        top = float(np.max(logs.real))
        terms = signs * np.exp(logs - top)
        s = terms.sum()
        last = abs(terms[-1])
        if s != 0 and last <= rel_tol * 1e-3 * abs(s):
            break
        n *= 2
        if n > 8192:
            raise AccuracyError(f"G0 series stagnated for lambda={lam}, z={z}", best=s)
    # keep terms until the next one is below rel_tol of the partial sum, n >= 10
    mags = np.abs(terms)
    partial = np.abs(np.cumsum(terms))
    ok = np.nonzero((mags[1:] <= rel_tol * 1e-3 * partial[:-1]) & (np.arange(1, n) >= 10))[0]
    used = int(ok[0]) + 1 if ok.size else n
    s = terms[:used].sum()
    err = (abs(terms[used]) if used < n else 0.0) + 4 * np.finfo(float).eps * mags[:used].sum()
    value = ls_from_complex(s, top) * gamma(lam + 1.0) * _iπ_power(lam)
    return value, err / abs(s), used


def g0_series(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> LogScaledComplex:
    """``e^{i pi lambda} Gamma(lambda+1) sum_n (-1)^n / (n! (n+z)^{lambda+1})``."""
    return _g0_series(complex(lam), complex(z), rel_tol)[0]


def _series_plus_tail(lam: complex, z: complex, rel_tol: float) -> GResult:
    value, err, used = _g0_series(lam, z, _inner(rel_tol))
    g1 = _g1(lam, z, rel_tol)
    q = combine([QuadResult(value, err, used), g1])
    return _from_quad(q, "series_plus_tail", g0=value, g1=g1.value)


# --- dispatch --------------------------------------------------------------


def evaluate(request: EvalRequest) -> GResult:
    lam, z, method = request.lam, request.z, request.method
    if method == "auto":
        if z.real <= 0:
            return _continue_left(lam + 1.0, z, 1.0 + 0j, None, request.rel_tol)
        method = "series_plus_tail" if lam.real > -1 else "contour"
    if method == "contour":
        return _contour(lam, z, request.r, request.rel_tol)
    if method == "split":
        return _split(lam, z, request.rel_tol)
    return _series_plus_tail(lam, z, request.rel_tol)


def g(lam, z, method: str = "auto", r: float = DEFAULT_R, rel_tol: float = DEFAULT_REL_TOL) -> LogScaledComplex:
    """G(lambda, z) with the requested strategy (log-scaled)."""
    return evaluate(EvalRequest(lam, z, method, r, rel_tol)).value


# --- functional relations --------------------------------------------------


def g_recurrence_residual(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``|G(l, z+1) - z G(l, z) - l G(l-1, z)| / |G(l, z+1)|``."""
    lam, z = complex(lam), complex(z)
    if z.real <= 0:
        raise DomainError(f"recurrence check needs Re z > 0, got z = {z}")
    a = g(lam, z + 1.0, rel_tol=rel_tol)
    b = g(lam, z, rel_tol=rel_tol) * z
    c = g(lam - 1.0, z, rel_tol=rel_tol) * lam if lam != 0 else ZERO
    rb = (b / a).to_complex()
    rc = (c / a).to_complex() if not c.is_zero else 0j
    return abs(1.0 - rb - rc)


def g_dz(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> LogScaledComplex:
    """``d/dz G(lambda, z) = G(lambda + 1, z)``."""
    return g(complex(lam) + 1.0, z, rel_tol=rel_tol)


def g_dz_check(lam, z, rel_tol: float = DEFAULT_REL_TOL):
    """Compare ``G(lambda+1, z)`` with a central difference of ``G(lambda, .)``.

    Step ``h = 1e-5 max(1, |z|)``.  Returns ``(derivative, difference, rel_dev)``.
    """
    lam, z = complex(lam), complex(z)
    h = 1e-5 * max(1.0, abs(z))
    d = g_dz(lam, z, rel_tol)
    up = g(lam, z + h, rel_tol=rel_tol)
    down = g(lam, z - h, rel_tol=rel_tol)
    fd = ls_add(up, -down) * (1.0 / (2.0 * h))
    dev = abs((fd / d).to_complex() - 1.0)
    return d, fd, dev


# --- continuation into Re z <= 0 --------------------------------------------


def _on_cut(w: complex) -> bool:
    return w.imag == 0 and w.real < 0


def _is_branch_point(w: complex) -> bool:
    return w.imag == 0 and w.real <= 0 and w.real == math.floor(w.real)


def _check_segment(p: complex, q: complex, is_last: bool):
    """Reject segments through a branch point or along/through the cut (-inf, 0)."""
    if p.imag == 0 and q.imag == 0:
        lo, hi = min(p.real, q.real), max(p.real, q.real)
        if lo < 0 or (lo <= 0 <= hi):
            raise PathError(f"segment [{p}, {q}] runs along the branch cut or through 0")
        return
    # crossing of the real axis strictly inside the segment
    if (p.imag > 0 > q.imag) or (p.imag < 0 < q.imag):
        s = p.imag / (p.imag - q.imag)
        x = p.real + s * (q.real - p.real)
        if x <= 0:
            raise PathError(f"segment [{p}, {q}] crosses the branch cut at {x:g}")
    for w in (p, q):
        if _is_branch_point(w):
            raise PathError(f"path vertex {w} is a branch point")
    if _on_cut(p):
        raise PathError(f"path vertex {p} lies on the branch cut")
    if _on_cut(q) and not is_last:
        raise PathError(f"path vertex {q} lies on the branch cut")


def default_path(z0: complex, z: complex) -> list:
    """Straight segment when admissible, else one detour vertex above (or below) z.

    A point on the negative real axis is reached from the upper half-plane,
    where ``z^lambda`` takes ``arg z = pi``.
    """
    try:
        _check_segment(z0, z, True)
        return [z0, z]
    except PathError:
        pass
    side = -1.0 if z.imag < 0 else 1.0
    lift = max(1.0, abs(z.imag))
    return [z0, complex(z.real, side * lift), z]


def _path_log(w, side: float):
    """Principal log, with points of the negative axis taken on ``side``."""
    w = np.asarray(w, dtype=complex)
    out = np.log(w)
    cut = (w.imag == 0) & (w.real < 0)
    return np.where(cut, np.log(np.abs(w)) + 1j * math.pi * side, out)


def _continue_left(lam: complex, z: complex, z0: complex, path: Optional[Sequence[complex]], rel_tol: float) -> GResult:
    if z0.real <= 0:
        raise DomainError(f"continuation needs Re z0 > 0, got z0 = {z0}")
    if _is_branch_point(z):
        raise DomainError(f"z = {z.real:g} is a branch point of G")
    vertices = [z0, *[complex(w) for w in path], z] if path is not None else default_path(z0, z)
    for i in range(len(vertices) - 1):
        _check_segment(vertices[i], vertices[i + 1], i == len(vertices) - 2)
    side = -1.0 if vertices[-2].imag < 0 else 1.0
    tol = _inner(rel_tol)
    n_evals = 0

    def log_g_shifted(zeta):
        """log of zeta^{lam-1} G(lam, zeta+1) at scalar zeta."""
        nonlocal n_evals
        n_evals += 1
        val = evaluate(EvalRequest(lam, zeta + 1.0, "auto", DEFAULT_R, max(tol, 1e-13))).value
        if val.is_zero:
            return -math.inf + 0j
        return complex(_path_log(zeta, side)) * (lam - 1.0) + val.log()

    parts = []
    for p, q in zip(vertices[:-1], vertices[1:]):
        dz = q - p
        sample = [p + s * dz for s in np.linspace(0.05, 0.95, 7)]
        shift = max(log_g_shifted(w).real for w in sample)

        def f(s, p=p, dz=dz, shift=shift):
            zeta = p + np.asarray(s) * dz
            logs = np.array([log_g_shifted(w) for w in zeta])
            return np.exp(logs - shift) * dz

        parts.append(integrate_interval(f, 0.0, 1.0, max(0.1 * rel_tol, 1e-12), log_scale=shift))
    integral = combine(parts)

    start = evaluate(EvalRequest(lam - 1.0, z0, "auto", DEFAULT_R, max(tol, 1e-13)))
    anchor = start.value * pow_branched(cmath.log(z0), lam)
    bracket = ls_add(anchor, integral.value)
    value = bracket * pow_branched(complex(_path_log(z, side)), -lam)
    err_abs = math.exp(integral.log_abs_err) if integral.abs_err else 0.0
    scale = bracket.logmod if not bracket.is_zero else 0.0
    rel = err_abs * math.exp(-scale) + start.rel_err * math.exp(anchor.logmod - scale)
    return GResult(value, rel, integral.n_evals + n_evals, "continuation", continued=True)


def g_continue_left(lam, z, z0=1.0, path: Optional[Sequence[complex]] = None,
                    rel_tol: float = DEFAULT_REL_TOL) -> LogScaledComplex:
    """``G(lambda - 1, z)`` from its value at ``z0`` (``Re z0 > 0``).

    ``z^lambda G(lambda-1, z) = z0^lambda G(lambda-1, z0)
    + int_{z0}^{z} zeta^{lambda-1} G(lambda, zeta+1) dzeta`` along a polygonal
    path in the plane cut along ``(-inf, 0]``.  ``path`` lists intermediate
    vertices; by default see :func:`default_path`.  Powers are principal,
    except that a point of the negative axis is taken on the side from which
    the path arrives.
    """
    return _continue_left(complex(lam), complex(z), complex(z0), path, rel_tol).value


# --- behaviour near z = 0 --------------------------------------------------


def property1_deviation(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> complex:
    """``z^{lambda+1} G(lambda, z) / (e^{i pi lambda} Gamma(lambda+1)) - 1``.

    Uses the series for G0, whose leading term cancels the 1 exactly; the
    remainder is ``sum_{n>=1} (-1)^n/n! (z/(n+z))^{lambda+1}`` plus the
    rescaled G1.
    """
    lam, z = complex(lam), complex(z)
    _check_split_domain(lam, z, "property1_ratio")
    logs, signs = _series_terms(lam, z, 64)
    log_zp = (lam + 1.0) * cmath.log(z)
    rest = np.sum(signs[1:] * np.exp(logs[1:] + log_zp))
    g1 = _g1(lam, z, rel_tol).value
    norm = gamma(lam + 1.0) * _iπ_power(lam)
    tail = (g1 / norm) * LogScaledComplex(log_zp.real, log_zp.imag)
    return complex(rest) + tail.to_complex()


def property1_ratio(lam, z, rel_tol: float = DEFAULT_REL_TOL) -> complex:
    """``z^{lambda+1} G(lambda, z) / (e^{i pi lambda} Gamma(lambda+1))``; tends to 1 as z -> 0."""
    return 1.0 + property1_deviation(lam, z, rel_tol)
