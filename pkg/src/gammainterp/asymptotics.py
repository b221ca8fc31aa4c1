"""Large-lambda behaviour: the inverse of t ln t, Laplace-type leading terms for G1,
the large-m form of Gamma^(m)(z), and the closed forms at z = -1/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .branchlog import LogScaledComplex, ls_add, ls_from_complex, pow_branched
from .errors import AccuracyError, DomainError
from .quadrature import integrate_interval

__all__ = [
    "OmegaSolve",
    "AsymptoticEstimate",
    "DEFAULT_ALPHA",
    "psi",
    "omega",
    "curvature_A",
    "g1_lemma1",
    "g1_corollary1",
    "gamma_deriv_asym",
    "j_integral",
    "j_closed",
    "gm_at_minus_half_asym",
    "dominant_part_deriv",
    "c15_integral",
]

# any value in (1/3, 1/2) is admissible; the error term is O(lambda^-alpha)
DEFAULT_ALPHA = 0.4


@dataclass(frozen=True)
class OmegaSolve:
    lam: float
    omega: float
    residual: float
    iterations: int = 0


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Leading-order value with the declared relative error exponent."""

    leading: LogScaledComplex
    error_exponent_alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not 1.0 / 3.0 < self.error_exponent_alpha < 0.5:
            raise DomainError(f"alpha must lie in (1/3, 1/2), got {self.error_exponent_alpha}")


def psi(t: float) -> float:
    """``t ln t`` on ``[1, inf)``."""
    if t < 1:
        raise DomainError(f"psi is defined for t >= 1, got {t}")
    return t * math.log(t)


def omega(lam: float) -> OmegaSolve:
    """Solve ``t ln t = lam`` for ``t >= 1`` by Newton's method.

    Falls back to bisection on ``[1, 2 + lam]`` if an iterate leaves the bracket
    or the residual stalls.
    """
    lam = float(lam)
    if not lam >= 0 or math.isinf(lam):
        raise DomainError(f"omega needs a finite lambda >= 0, got {lam}")
    if lam == 0:
        return OmegaSolve(0.0, 1.0, 0.0, 0)
    tol = 1e-12 * max(1.0, lam)
    lo, hi = 1.0, 2.0 + lam
    t = 1.0 + lam if lam <= math.e else lam / math.log(lam)
    for it in range(1, 60):
        f = psi(t) - lam
        if abs(f) <= tol:
            return OmegaSolve(lam, t, abs(f), it)
        if f > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        step = f / (1.0 + math.log(t))
        t_new = t - step
        if not lo <= t_new <= hi:
            t_new = 0.5 * (lo + hi)
        if t_new == t:
            break
        t = t_new
    # bisection to the last representable bracket
    while hi - lo > 4 * np.spacing(hi):
        mid = 0.5 * (lo + hi)
        if psi(mid) > lam:
            hi = mid
        else:
            lo = mid
    t = min((lo, hi), key=lambda s: abs(psi(s) - lam))
    res = abs(psi(t) - lam)
    if res > tol:
        raise AccuracyError(f"omega({lam}) residual {res:.3g} exceeds {tol:.3g}", best=t)
    return OmegaSolve(lam, t, res, 60)


def curvature_A(lam: float) -> float:
    """``lam (1 + ln w) / (2 ln^2 w)`` with ``w = omega(lam)``."""
    if lam <= 0:
        raise DomainError(f"curvature_A needs lambda > 0, got {lam}")
    lw = math.log(omega(lam).omega)
    if lw == 0:
        raise DomainError(f"ln omega({lam}) vanishes; A is undefined")
    return lam * (1.0 + lw) / (2.0 * lw * lw)


def _require_large(lam: float, what: str):
    if not lam > math.e:
        raise DomainError(f"{what} needs lambda > e, got {lam}")


def g1_lemma1(lam: float, z, alpha: float = DEFAULT_ALPHA) -> AsymptoticEstimate:
    """Laplace leading term ``sqrt(pi) (ln w)^lam e^{-w} w^z / sqrt(A)`` for G1."""
    lam = float(lam)
    _require_large(lam, "g1_lemma1")
    return AsymptoticEstimate(_lemma1_term(lam, complex(z)), alpha)


def _lemma1_term(lam: float, z: complex) -> LogScaledComplex:
    w = omega(lam).omega
    lw = math.log(w)
    log_val = 0.5 * math.log(math.pi) + lam * math.log(lw) - w - 0.5 * math.log(curvature_A(lam)) + z * lw
    return LogScaledComplex(log_val.real, log_val.imag)


def g1_corollary1(lam: float, z, alpha: float = DEFAULT_ALPHA) -> AsymptoticEstimate:
    """``sqrt(pi/2) (ln w)^lam e^{-w} (lam/ln lam)^{z - 1/2}`` for G1.

    Obtained from :func:`g1_lemma1` by replacing ``w`` with ``lam/ln lam`` in
    ``w^z`` and ``A`` with ``lam/(2 ln lam)``.  Those substitutions converge
    only like ``ln ln lam / ln lam``; the prefactor is a factor 2 below the
    large-lambda limit of the Laplace constant ``sqrt(pi/A) w^{1/2}``.
    """
    lam = float(lam)
    _require_large(lam, "g1_corollary1")
    return AsymptoticEstimate(_corollary1_term(lam, complex(z)), alpha)


def _corollary1_term(lam: float, z: complex) -> LogScaledComplex:
    # every logarithm is real once lam > 1
    w = omega(lam).omega
    q = math.log(lam / math.log(lam))
    log_val = 0.5 * math.log(0.5 * math.pi) + lam * math.log(math.log(w)) - w + (z - 0.5) * q
    return LogScaledComplex(log_val.real, log_val.imag)


def _g0_partial_sum(m: int, z: complex, n_terms: int) -> LogScaledComplex:
    """``(-1)^m m! sum_{n < n_terms} (-1)^n / (n! (n+z)^{m+1})``."""
    n = np.arange(n_terms)
    logs = -special.gammaln(n + 1.0) - (m + 1) * np.log(n + z)
    top = float(np.max(logs.real))
    s = np.sum(np.where(n % 2 == 0, 1.0, -1.0) * np.exp(logs - top))
    val = ls_from_complex(s, top + math.lgamma(m + 1))
    return -val if m % 2 else val


def gamma_deriv_asym(m: int, z, n_terms: int = 40, form: str = "corollary1") -> LogScaledComplex:
    """Large-m form of ``Gamma^(m)(z)``: the truncated G0 series plus a G1 term.

    ``form`` picks the G1 term: ``"corollary1"`` (default) or ``"lemma1"``,
    the sharper Laplace term with exact ``omega`` and ``A``.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"gamma_deriv_asym needs an integer m >= 2, got {m}")
    m = int(m)
    z = complex(z)
    if z.real <= 0:
        raise DomainError(f"gamma_deriv_asym needs Re z > 0, got z = {z}")
    if n_terms < 1:
        raise DomainError(f"n_terms must be positive, got {n_terms}")
    if form == "corollary1":
        tail = _corollary1_term(m, z)
    elif form == "lemma1":
        tail = _lemma1_term(m, z)
    else:
        raise DomainError(f"unknown form {form!r}; expected 'corollary1' or 'lemma1'")
    return ls_add(_g0_partial_sum(m, z, n_terms), tail)


# --- the integral J and the point z = -1/2 -----------------------------------


def _check_j(lam: float):
    if not lam > 1:
        raise DomainError(f"J needs lambda > 1, got {lam}")


def j_closed(lam: float) -> float:
    """``(1/(2 lam)) sum_n (-1)^n / ((n+1)! (2n+1)^lam)``."""
    lam = float(lam)
    _check_j(lam)
    terms = []
    for n in range(200):
        t = (-1) ** n * math.exp(-math.lgamma(n + 2) - lam * math.log(2 * n + 1))
        terms.append(t)
        if abs(t) < 1e-18 * abs(terms[0]):
            break
    return math.fsum(terms) / (2.0 * lam)


def j_integral(lam: float, rel_tol: float = 1e-13) -> float:
    """``sum_n (-1)^n/n! int_0^1 (1-xi)^{lam-1} / (2n+1+xi)^{lam+1} dxi`` by quadrature."""
    lam = float(lam)
    _check_j(lam)
    terms = []
    for n in range(200):
        a = 2 * n + 1

        def f(xi, a=a):
            xi = np.asarray(xi, dtype=float)
            return np.exp((lam - 1) * np.log1p(-xi) - (lam + 1) * np.log(a + xi))

        q = integrate_interval(f, 0.0, 1.0, rel_tol, singular="right" if lam < 2 else None)
        t = (-1) ** n * q.to_complex().real / math.factorial(n)
        terms.append(t)
        if abs(t) < 1e-18 * abs(terms[0]):
            break
    else:
        raise AccuracyError(f"J({lam}) terms did not become negligible", best=math.fsum(terms))
    return math.fsum(terms)


def gm_at_minus_half_asym(m: int) -> LogScaledComplex:
    """Large-m form of ``Gamma^(m)(-1/2)``.

    ``2^{m+1} m! {[(-1)^{m+1} - 1] - (-1)^m S} + sqrt(pi/2) [ln w]^{m+1} e^{-w} / (m+1)``
    with ``S = sum_{n>=1} (-1)^n / ((n+1)! (2n+1)^{m+1})`` and ``w = omega(m+1)``.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"gm_at_minus_half_asym needs an integer m >= 2, got {m}")
    m = int(m)
    s = math.fsum(
        (-1) ** n * math.exp(-math.lgamma(n + 2) - (m + 1) * math.log(2 * n + 1)) for n in range(1, 60)
    )
    brace = ((-1) ** (m + 1) - 1) - (-1) ** m * s
    head = ls_from_complex(brace, (m + 1) * math.log(2.0) + math.lgamma(m + 1))
    w = omega(m + 1).omega
    log_tail = 0.5 * math.log(0.5 * math.pi) + (m + 1) * math.log(math.log(w)) - w - math.log(m + 1)
    return ls_add(head, LogScaledComplex(log_tail, 0.0))


def dominant_part_deriv(m: int) -> float:
    """m-th derivative of ``1/z - 1/(z+1)`` at ``z = -1/2``: ``(-1)^m m! ((-2)^{m+1} - 2^{m+1})``."""
    if int(m) != m or m < 0:
        raise DomainError(f"derivative order must be a nonnegative integer, got {m}")
    m = int(m)
    return float((-1) ** m * math.factorial(m) * ((-2) ** (m + 1) - 2 ** (m + 1)))


def c15_integral(lam: float, rel_tol: float = 1e-12) -> complex:
    """``int_0^1 (xi - 1)^{lam-1} (lam/ln lam)^{xi/2} dxi`` with ``(xi-1)^{lam-1} = e^{i pi (lam-1)} (1-xi)^{lam-1}``.

    ``lam * |value| -> 1`` as lam grows.
    """
    lam = float(lam)
    _require_large(lam, "c15_integral")
    q = 0.5 * math.log(lam / math.log(lam))

    def f(xi):
        xi = np.asarray(xi, dtype=float)
        return np.exp((lam - 1) * np.log1p(-xi) + q * xi)

    val = integrate_interval(f, 0.0, 1.0, rel_tol).to_complex()
    return (pow_branched(1j * math.pi, lam - 1) * val).to_complex()
