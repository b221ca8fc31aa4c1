"""Reference Gamma machinery.

* :func:`gamma` -- Gamma on the complex plane, log-scaled.
* :func:`lower_moment`, :func:`upper_moment` -- the log-power integrals over
  ``(0, 1)`` and ``(1, inf)`` whose integer orders are the derivatives of the
  incomplete gammas at the split point 1.
* :func:`deriv_oracle` -- Cauchy-integral ground truth for ``Gamma^(m)``.
* :func:`deriv_left_of_zero` -- derivatives on ``-1 < Re z``, with the poles
  at 0 and -1 split off in closed form (or through the functional equation).
"""

from __future__ import annotations

import math
import threading

import mpmath
import numpy as np
from scipy import special

from .branchlog import ZERO, LogScaledComplex, arg, ls_add, ls_from_complex
from .errors import AccuracyError, DomainError
from .quadrature import QuadResult, integrate_tail

__all__ = [
    "gamma",
    "loggamma",
    "pole_distance",
    "lower_moment",
    "log_power_moment",
    "upper_moment",
    "upper_incomplete_at_1",
    "lower_incomplete_at_1",
    "deriv_by_quadrature",
    "deriv_oracle",
    "deriv_left_of_zero",
    "dominant_part",
    "remainder_moment",
    "LEFT_METHODS",
    "ORACLE_MIN_NODES",
    "ORACLE_MAX_NODES",
]

ORACLE_MIN_NODES = 64
ORACLE_MAX_NODES = 8192


def _is_pole(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def pole_distance(z) -> float:
    """Distance from ``z`` to the nearest pole of Gamma (0, -1, -2, ...)."""
    z = complex(z)
    if z.real >= 0:
        return abs(z)
    lo = math.floor(-z.real)
    return min(abs(z + n) for n in (lo, lo + 1))


def loggamma(z) -> complex:
    """Principal branch of log Gamma (imaginary part continuous off the cut)."""
    z = complex(z)
    if _is_pole(z):
        raise DomainError(f"Gamma has a pole at z = {z.real:g}")
    return complex(special.loggamma(z))


def gamma(z) -> LogScaledComplex:
    w = loggamma(z)
    return LogScaledComplex(w.real, w.imag)


# --- log-power integrals -------------------------------------------------


def lower_moment(lam, z, rel_tol: float = 1e-12, tau_start: float = 0.0) -> QuadResult:
    """``int_0^{exp(-tau_start)} e^{-t} (-ln t)^lam t^{z-1} dt``.

    Evaluated after the substitution ``tau = -ln t`` as
    ``int_{tau_start}^inf exp(-e^{-tau} - z tau) tau^lam dtau``.
    """
    lam = complex(lam)
    z = complex(z)
    if z.real <= 0:
        raise DomainError(f"lower moment needs Re z > 0, got z = {z}")
    if tau_start == 0.0 and lam.real <= -1:
        raise DomainError(f"lower moment over (0, 1) needs Re lambda > -1, got {lam}")
    a, b = lam.real, z.real
    if a > 0:
        peak = max(a / b, tau_start)
        shift = a * math.log(peak) - b * peak if peak > 0 else 0.0
        width = math.sqrt(a) / b
    else:
        peak = tau_start
        shift = 0.0
        width = 1.0 / b
    breaks = [peak + k * width for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]

    def integrand(tau):
        tau = np.asarray(tau, dtype=float)
        logf = -np.exp(-tau) - z * tau + lam * np.log(tau) - shift
        return np.exp(logf)

    def tail_bound(T):
        denom = b - max(a, 0.0) / T
        if denom <= 0 or T <= peak:
            return math.inf
        return math.exp(a * math.log(T) - b * T - shift) / denom

    return integrate_tail(
        integrand,
        tau_start,
        rel_tol,
        tail_bound=tail_bound,
        length_scale=max(1.0, width),
        breakpoints=breaks,
        singular="left" if tau_start == 0.0 else None,
        log_scale=shift,
    )


def log_power_moment(lam, s, rel_tol: float = 1e-13) -> QuadResult:
    """``int_0^1 (-ln t)^lam t^{s-1} dt = int_0^inf tau^lam e^{-s tau} dtau`` by quadrature.

    The closed form is ``Gamma(lam + 1) / s^{lam + 1}``; this routine does not use it.
    """
    lam, s = complex(lam), complex(s)
    if s.real <= 0 or lam.real <= -1:
        raise DomainError(f"log-power moment needs Re s > 0 and Re lambda > -1, got s={s}, lambda={lam}")
    a, b = lam.real, s.real
    peak = max(a / b, 0.0)
    shift = a * math.log(peak) - b * peak if peak > 0 else 0.0
    width = max(math.sqrt(max(a, 1.0)) / b, 1e-3)
    breaks = [peak + k * width for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]

    def integrand(tau):
        tau = np.asarray(tau, dtype=float)
        return np.exp(lam * np.log(tau) - s * tau - shift)

    def tail_bound(T):
        denom = b - max(a, 0.0) / T
        if denom <= 0 or T <= peak:
            return math.inf
        return math.exp(a * math.log(T) - b * T - shift) / denom

    return integrate_tail(integrand, 0.0, rel_tol, tail_bound=tail_bound, length_scale=max(1.0, width),
                          breakpoints=breaks, singular="left", log_scale=shift)


def _upper_peak(a: float, b: float, u0: float):
    """Location, log-height and width of ``Re log`` of the upper integrand."""
    hi = math.log(abs(a) + abs(b) + 60.0) + 1.0
    lo = max(u0, 1e-12)
    if hi <= lo:
        hi = lo + 1.0
    grid = np.concatenate([np.geomspace(lo, hi, 200), np.linspace(lo, hi, 200)])
    vals = -np.exp(grid) + a * np.log(grid) + b * grid
    i = int(np.argmax(vals))
    u = float(grid[i])
    curv = math.exp(u) + (a / u**2 if a > 0 else 0.0)
    return u, float(vals[i]), 1.0 / math.sqrt(curv)


def upper_moment(lam, z, rel_tol: float = 1e-12, u_start: float = 0.0) -> QuadResult:
    """``int_{exp(u_start)}^inf e^{-t} (ln t)^lam t^{z-1} dt``.

    Evaluated after ``t = e^u`` as ``int exp(-e^u + lam ln u + z u) du``,
    divided by the height of its peak (the minimum of ``t - lam ln ln t``
    for real lambda) and rescaled in the log-scaled result.
    """
    lam = complex(lam)
    z = complex(z)
    if u_start == 0.0 and lam.real <= -1:
        raise DomainError(f"upper moment over (1, inf) needs Re lambda > -1, got {lam}")
    a, b = lam.real, z.real
    peak, shift, width = _upper_peak(a, b, u_start)
    breaks = [peak + k * width for k in (-12, -6, -3, -1, 0, 1, 3, 6, 12)]

    def integrand(u):
        u = np.asarray(u, dtype=float)
        logf = -np.exp(u) + lam * np.log(u) + z * u - shift
        return np.exp(logf)

    def tail_bound(U):
        if U <= peak:
            return math.inf
        denom = math.exp(U) - max(a, 0.0) / U - b
        if denom <= 0:
            return math.inf
        return math.exp(-math.exp(U) + a * math.log(U) + b * U - shift) / denom

    return integrate_tail(
        integrand,
        u_start,
        rel_tol,
        tail_bound=tail_bound,
        length_scale=max(width, 0.05),
        breakpoints=breaks,
        singular="left" if u_start == 0.0 else None,
        log_scale=shift,
    )


def upper_incomplete_at_1(z, rel_tol: float = 1e-13) -> LogScaledComplex:
    """``Gamma(z, 1)``, entire in z."""
    return upper_moment(0.0, z, rel_tol).value


def lower_incomplete_at_1(z, rel_tol: float = 1e-13) -> LogScaledComplex:
    """``gamma(z, 1)`` for ``Re z > 0``."""
    z = complex(z)
    if z.real <= 0:
        raise DomainError(f"lower incomplete gamma at 1 needs Re z > 0, got z = {z}")
    return lower_moment(0.0, z, rel_tol).value


def deriv_by_quadrature(m: int, z, rel_tol: float = 1e-13) -> LogScaledComplex:
    """``Gamma^(m)(z) = (-1)^m lower_moment(m, z) + upper_moment(m, z)``, Re z > 0."""
    low = lower_moment(m, z, rel_tol).value
    if m % 2:
        low = -low
    return ls_add(low, upper_moment(m, z, rel_tol).value)


# --- Cauchy-integral oracle ------------------------------------------------

_MP_LOCK = threading.Lock()


def _oracle_sum(m, z0, radius, dps, rel_tol):
    """Trapezoidal mean of Gamma(z0 + r e^{i theta}) e^{-i m theta}, node doubling."""
    # mpmath precision is process-global
    with _MP_LOCK, mpmath.workdps(dps):
        zc = mpmath.mpc(z0.real, z0.imag)
        r = mpmath.mpf(radius)
        cache = {}

        def term(k, n):
            # node k of n, stored on the finest grid index
            key = k * (ORACLE_MAX_NODES // n)
            if key not in cache:
                e = mpmath.expjpi(mpmath.mpf(2 * key) / ORACLE_MAX_NODES)
                cache[key] = mpmath.gamma(zc + r * e) / e**m
            return cache[key]

        n = ORACLE_MIN_NODES
        total = mpmath.fsum(term(k, n) for k in range(n))
        prev = total / n
        while True:
            n2 = 2 * n
            total += mpmath.fsum(term(k, n2) for k in range(1, n2, 2))
            cur = total / n2
            peak = max(abs(v) for v in cache.values())
            floor = mpmath.mpf(10) ** (-(dps - 8)) * peak
            diff = abs(cur - prev)
            if diff <= rel_tol * abs(cur) or diff <= floor:
                return complex(cur), float(mpmath.log10(peak)), float(mpmath.log10(abs(cur))) if cur != 0 else -math.inf
            if n2 >= ORACLE_MAX_NODES:
                raise AccuracyError(
                    f"Cauchy oracle for m={m} at z0={z0} did not settle with {n2} nodes",
                    best=complex(cur),
                )
            prev = cur
            n = n2


def deriv_oracle(m: int, z0, radius=None, rel_tol: float = 1e-12) -> LogScaledComplex:
    """``Gamma^(m)(z0)`` by the Cauchy integral formula on ``|z - z0| = radius``.

    The trapezoidal rule on the circle converges geometrically; node counts
    double from 64 up to 8192 until successive means agree to ``rel_tol``.
    The sum is carried in extended precision, raised automatically when the
    cancellation between Gamma values on the circle and the Taylor coefficient
    would eat the double-precision budget.  ``radius`` defaults to half the
    distance to the nearest pole.
    """
    if m < 0 or int(m) != m:
        raise DomainError(f"derivative order must be a nonnegative integer, got {m}")
    m = int(m)
    z0 = complex(z0)
    dist = pole_distance(z0)
    if radius is None:
        radius = 0.5 * dist
    radius = float(radius)
    if radius <= 0:
        raise DomainError(f"oracle radius must be positive, got {radius}")
    if radius >= dist:
        raise DomainError(f"oracle disc of radius {radius} about {z0} touches a pole of Gamma")
    dps = 30
    while True:
        s, log_peak, log_s = _oracle_sum(m, z0, radius, dps, rel_tol)
        loss = log_peak - log_s
        if loss <= dps - 20 or dps >= 160:
            break
        dps = min(160, int(loss) + 26)
    if s == 0:
        return ZERO
    logmod = math.log(abs(s)) + math.lgamma(m + 1) - m * math.log(radius)
    return LogScaledComplex(logmod, arg(s))


# --- left of zero ----------------------------------------------------------


def dominant_part(m: int, z) -> LogScaledComplex:
    """m-th derivative of ``1/z - 1/(z+1)``: ``(-1)^m m! (z^{-(m+1)} - (z+1)^{-(m+1)})``."""
    z = complex(z)
    if z == 0 or z == -1:
        raise DomainError(f"z = {z.real:g} is a pole of 1/z - 1/(z+1)")
    sign = -1.0 if m % 2 else 1.0
    try:
        # integer powers are exact for dyadic z, so an exact cancellation stays exact
        diff = z ** -(m + 1) - (z + 1) ** -(m + 1)
        if math.isfinite(abs(diff)):
            return ls_from_complex(sign * diff, math.lgamma(m + 1))
    except OverflowError:
        pass
    a = LogScaledComplex(-(m + 1) * math.log(abs(z)), -(m + 1) * arg(z))
    b = LogScaledComplex(-(m + 1) * math.log(abs(z + 1)), -(m + 1) * arg(z + 1))
    return ls_add(a, -b).scaled(math.lgamma(m + 1)) * sign


def _phi_two(x):
    """``e^{-x} - 1 + x`` for ``0 <= x <= 1`` without cancellation."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    term = x * x / 2.0
    for k in range(3, 24):
        total += term
        term = term * (-x) / k
    return total


def remainder_moment(m: int, z, rel_tol: float = 1e-13) -> QuadResult:
    """``int_0^1 (e^{-t} - 1 + t) (-ln t)^m t^{z-1} dt`` for ``Re z > -2``.

    Integrated as ``int_0^inf phi(e^{-tau}) tau^m e^{-z tau} dtau``; the
    integrand decays like ``tau^m e^{-(z+2) tau} / 2``.
    """
    z = complex(z)
    b = z.real + 2.0
    if b <= 0:
        raise DomainError(f"remainder moment needs Re z > -2, got z = {z}")
    a = float(m)
    peak = a / b
    shift = (a * math.log(peak) - b * peak if peak > 0 else 0.0) - math.log(2.0)
    width = max(math.sqrt(max(a, 1.0)) / b, 0.5)
    breaks = [peak + k * width for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]

    def integrand(tau):
        tau = np.asarray(tau, dtype=float)
        with np.errstate(divide="ignore"):
            logp = a * np.log(tau) if a else np.zeros_like(tau)
        return _phi_two(np.exp(-tau)) * np.exp(logp - z * tau - shift)

    def tail_bound(T):
        denom = b - a / T
        if denom <= 0 or T <= peak:
            return math.inf
        return math.exp(a * math.log(T) - b * T - math.log(2.0) - shift) / denom

    return integrate_tail(
        integrand,
        0.0,
        rel_tol,
        tail_bound=tail_bound,
        length_scale=width,
        breakpoints=breaks,
        log_scale=shift,
    )


LEFT_METHODS = ("subtracted", "recursion")


def deriv_left_of_zero(m: int, z, rel_tol: float = 1e-13, method: str = "subtracted") -> LogScaledComplex:
    """``Gamma^(m)(z)`` for ``Re(z + 1) > 0``, z != 0.

    ``method="recursion"`` differentiates ``Gamma(z + 1) = z Gamma(z)`` j
    times, ``Gamma^(j)(z) = (Gamma^(j)(z + 1) - j Gamma^(j-1)(z)) / z``, and
    solves upward in j from ``Gamma(z) = Gamma(z + 1) / z`` with the shifted
    derivatives taken from the log-power integrals.  Where the poles at 0 and
    -1 cancel (odd m near z = -1/2) the recursion subtracts numbers up to
    ``3^{m+1}`` times larger than the result and loses that many digits.

    ``method="subtracted"`` (default) removes the two poles analytically:
    ``Gamma^(m)(z) = D^(m)(z) + (-1)^m R_m(z) + Gamma^(m)(z, 1)`` with
    ``D(z) = 1/z - 1/(z+1)`` and ``R_m`` from :func:`remainder_moment`; every
    piece is computed without cancellation.
    """
    if m < 0 or int(m) != m:
        raise DomainError(f"derivative order must be a nonnegative integer, got {m}")
    m = int(m)
    z = complex(z)
    if z == 0 or z == -1:
        raise DomainError(f"z = {z.real:g} is a pole of Gamma")
    if (z + 1).real <= 0:
        raise DomainError(f"need Re(z + 1) > 0, got z = {z}")
    if method == "subtracted":
        rem = remainder_moment(m, z, rel_tol).value
        if m % 2:
            rem = -rem
        upper = upper_moment(m, z, rel_tol).value
        return ls_add(ls_add(dominant_part(m, z), rem), upper)
    if method != "recursion":
        raise DomainError(f"unknown method {method!r}; expected one of {LEFT_METHODS}")
    inv_z = LogScaledComplex(-math.log(abs(z)), -arg(z))
    prev = gamma(z + 1) * inv_z
    for j in range(1, m + 1):
        shifted = deriv_by_quadrature(j, z + 1, rel_tol)
        prev = ls_add(shifted, -(prev * j)) * inv_z
    return prev
