"""Registry of invariant checks across all modules, run by ``gammainterp verify``."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from . import asymptotics as asy
from . import branchlog as bl
from . import g_eval as ge
from . import gamma_core as gc
from . import quadrature as qd
from . import zeros as zr
from .errors import AccuracyError, GammaInterpError

__all__ = ["Check", "CheckOutcome", "CHECKS", "SUITES", "run_suite"]

SUITES = ("fast", "all")


@dataclass(frozen=True)
class Check:
    ident: str
    description: str
    fast: bool
    fn: Callable[[], Tuple[bool, str]]


@dataclass(frozen=True)
class CheckOutcome:
    ident: str
    description: str
    passed: bool
    detail: str


CHECKS: List[Check] = []


def _check(ident: str, description: str, fast: bool = True):
    def wrap(fn):
        CHECKS.append(Check(ident, description, fast, fn))
        return fn

    return wrap


def _worst(values) -> float:
    return max(values) if values else 0.0


# --- branchlog ------------------------------------------------------------


@_check("branchlog.strip", "log_upper lands in 0 <= Im <= pi and inverts exp")
def _log_upper_strip():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(200):
        zeta = complex(rng.uniform(-5, 5), rng.uniform(0, 5))
        w = bl.log_upper(zeta)
        if not 0 <= w.imag <= math.pi:
            return False, f"Im log_upper({zeta}) = {w.imag}"
        worst = max(worst, abs(cmath.exp(w) / zeta - 1))
    return worst <= 1e-14, f"max roundtrip error {worst:.2e}"


@_check("branchlog.loglog_identity", "(ln t)^lambda on (0,1) equals e^{i pi lambda} (-ln t)^lambda")
def _loglog_identity():
    worst = 0.0
    for t in (0.01, 0.2, 0.5, 0.9, 0.999):
        for lam in (-2.5, 0.3, 1.7 + 0.3j, 4.0):
            a = bl.pow_branched(bl.loglog_on_contour(t), lam)
            b = bl.pow_branched(1j * math.pi, lam) * bl.pow_branched(math.log(-math.log(t)), lam)
            worst = max(worst, bl.rel_diff(a, b))
    return worst <= 1e-13, f"max deviation {worst:.2e}"


@_check("branchlog.mul_algebra", "ls_mul associative and commutative (relative 1e-14), phases unwrapped")
def _mul_algebra():
    rng = random.Random(11)
    worst = 0.0
    for _ in range(100):
        a, b, c = (bl.LogScaledComplex(rng.uniform(-50, 50), rng.uniform(-10, 10)) for _ in range(3))
        x, y = bl.ls_mul(bl.ls_mul(a, b), c), bl.ls_mul(a, bl.ls_mul(b, c))
        ab, ba = bl.ls_mul(a, b), bl.ls_mul(b, a)
        for u, v in ((x, y), (ab, ba)):
            worst = max(worst, abs(u.logmod - v.logmod) / max(1.0, abs(u.logmod)),
                        abs(u.phase - v.phase) / max(1.0, abs(u.phase)))
    three = bl.LogScaledComplex(0.0, 3 * math.pi)
    unwrapped = bl.ls_mul(three, three).phase == 6 * math.pi
    return worst <= 1e-14 and unwrapped, f"max discrepancy {worst:.2e}, 6pi phase kept: {unwrapped}"


# --- quadrature -----------------------------------------------------------


def _closed_form_family():
    """(name, integrator call, exact value) triples with closed forms."""
    return [
        ("exp", lambda tol, mp: qd.integrate_interval(lambda t: np.exp(-t), 0.0, 30.0, tol, max_panels=mp),
         -math.expm1(-30.0)),
        ("log", lambda tol, mp: qd.integrate_interval(lambda t: -np.log(t), 0.0, 1.0, tol, singular="left", max_panels=mp),
         1.0),
        ("b4", lambda tol, mp: qd.integrate_interval(lambda t: np.sqrt(-np.log(t)) * np.sqrt(t), 0.0, 1.0, tol,
                                                     singular="both", max_panels=mp),
         math.exp(math.lgamma(1.5)) / 1.5 ** 1.5),
    ]


def _quad_best(call, tol, mp):
    try:
        return call(tol, mp)
    except AccuracyError as exc:
        return exc.best


@_check("quadrature.r_independence", "contour value independent of r within the summed error estimates")
def _r_independence():
    worst = 0.0
    for lam, z in ((-2.5, 1.0), (0.5, 2.5), (1.7 + 0.3j, 1.0)):
        res = [ge.evaluate(ge.EvalRequest(lam, z, "contour", r)) for r in (0.2, 0.5, 0.8)]
        for i in range(3):
            for j in range(i + 1, 3):
                d = bl.rel_diff(res[i].value, res[j].value)
                allowed = res[i].rel_err + res[j].rel_err + 1e-15
                worst = max(worst, d / allowed)
    return worst <= 1.0, f"max deviation / summed estimate {worst:.2e}"


@_check("quadrature.conservative_error", "true error <= 5x reported error on closed-form integrands")
def _conservative():
    worst = 0.0
    for name, call, exact in _closed_form_family():
        for tol in (1e-6, 1e-9, 1e-12):
            q = call(tol, qd.DEFAULT_MAX_PANELS)
            true = abs(q.to_complex() / exact - 1)
            floor = 4 * np.finfo(float).eps
            worst = max(worst, max(true - floor, 0.0) / max(q.abs_err, 1e-300))
    return worst <= 5.0, f"max true/reported ratio {worst:.2f}"


@_check("quadrature.budget_monotone", "doubling the panel budget never increases the true error")
def _budget():
    bad = []
    for name, call, exact in _closed_form_family():
        prev = None
        for mp in (2, 4, 8, 16, 32):
            q = _quad_best(call, 1e-14, mp)
            true = abs(q.to_complex() / exact - 1)
            if prev is not None and true > max(prev, 1e-15):
                bad.append(f"{name}@{mp}")
            prev = true
    return not bad, "ok" if not bad else "increase at " + ", ".join(bad)


# --- gamma_core -----------------------------------------------------------


@_check("gamma_core.recursion", "gamma(z+1) = z gamma(z) on a random grid")
def _gamma_recursion():
    rng = random.Random(3)
    worst = 0.0
    for _ in range(200):
        z = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
        worst = max(worst, bl.rel_diff(gc.gamma(z + 1), gc.gamma(z) * z))
    return worst <= 1e-13, f"max deviation {worst:.2e}"


@_check("gamma_core.split_identity", "Gamma(z,1) + gamma(z,1) = Gamma(z) for 0 < Re z < 20")
def _split_identity():
    worst = 0.0
    for z in (0.05, 0.5, 1.0, 2.0 + 1j, 7.3, 12.0 - 3j, 19.5):
        s = bl.ls_add(gc.upper_incomplete_at_1(z), gc.lower_incomplete_at_1(z))
        worst = max(worst, bl.rel_diff(s, gc.gamma(z)))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


@_check("gamma_core.oracle_radii", "oracle agrees with itself at radii 0.3 and 0.6, m <= 20", fast=False)
def _oracle_radii():
    worst = 0.0
    for z0 in (1.0, 2.5, 1.0 + 1j):
        for m in range(0, 21, 2):
            worst = max(worst, bl.rel_diff(gc.deriv_oracle(m, z0, 0.3), gc.deriv_oracle(m, z0, 0.6)))
    return worst <= 1e-11, f"max deviation {worst:.2e}"


@_check("gamma_core.left_of_zero", "derivatives on (-1,0) match the oracle, m <= 10", fast=False)
def _left_of_zero():
    worst = 0.0
    for z in (-0.25, -0.5, -0.75):
        rad = min(abs(z), abs(z + 1)) / 2
        for m in range(11):
            worst = max(worst, bl.rel_diff(gc.deriv_left_of_zero(m, z), gc.deriv_oracle(m, z, rad)))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


# --- g_eval ---------------------------------------------------------------

INTERP_Z = (0.5, 1.0, 1.5, 2.0, 3 + 2j)


@_check("g_eval.interpolation", "G(m, z) equals the oracle for m <= 12", fast=False)
def _interpolation():
    worst = 0.0
    for z in INTERP_Z:
        for m in range(13):
            worst = max(worst, bl.rel_diff(ge.g(m, z), gc.deriv_oracle(m, z)))
    return worst <= 1e-8, f"max deviation {worst:.2e}"


@_check("g_eval.interpolation_small", "G(m, 1) equals the oracle for m <= 4")
def _interpolation_small():
    worst = _worst([bl.rel_diff(ge.g(m, 1.0), gc.deriv_oracle(m, 1.0)) for m in range(5)])
    return worst <= 1e-8, f"max deviation {worst:.2e}"


@_check("g_eval.method_agreement", "contour, split and series_plus_tail agree within 5x combined error")
def _method_agreement():
    worst = 0.0
    for lam in (-0.5, 0.5, 1.7 + 0.3j):
        for z in (1.0, 2.5, 1 + 1j):
            res = [ge.evaluate(ge.EvalRequest(lam, z, m)) for m in ("contour", "split", "series_plus_tail")]
            for i in range(3):
                for j in range(i + 1, 3):
                    d = bl.rel_diff(res[i].value, res[j].value)
                    worst = max(worst, d / (5 * (res[i].rel_err + res[j].rel_err) + 1e-15))
    return worst <= 1.0, f"max deviation / allowance {worst:.2e}"


@_check("g_eval.b4_identity", "int_0^1 (-ln t)^lam t^{n+z-1} dt = Gamma(lam+1)/(n+z)^{lam+1}")
def _b4():
    worst = 0.0
    for lam in (0.5, 3.2):
        for n in (0, 1, 5):
            for z in (1.0, 2 + 1j):
                q = gc.log_power_moment(lam, n + z, 1e-13).value
                closed = gc.gamma(lam + 1) * bl.pow_branched(cmath.log(n + z), -(lam + 1))
                worst = max(worst, bl.rel_diff(q, closed))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


@_check("g_eval.recurrence", "functional-equation residual <= 1e-9")
def _recurrence():
    worst = _worst([ge.g_recurrence_residual(lam, z) for lam in (0.5, 1.0, 2.5) for z in (0.7, 1.0, 3.0)])
    return worst <= 1e-9, f"max residual {worst:.2e}"


@_check("g_eval.path_independence", "continuation from z0 = 1 and z0 = 2 agree", fast=False)
def _path_independence():
    worst = 0.0
    for lam, z in ((1.5, -0.5), (2.5, -0.5 + 0.5j), (1.0, -0.3)):
        worst = max(worst, bl.rel_diff(ge.g_continue_left(lam, z, 1.0), ge.g_continue_left(lam, z, 2.0)))
    return worst <= 1e-8, f"max deviation {worst:.2e}"


# --- asymptotics ----------------------------------------------------------

OMEGA_GRID = (0.0, 0.5, 1.0, math.e, 10.0, 1e3, 1e6)


@_check("asymptotics.omega_residual", "psi(omega(lam)) = lam to 1e-12 max(1, lam)")
def _omega_residual():
    worst = 0.0
    for lam in OMEGA_GRID:
        w = asy.omega(lam).omega
        worst = max(worst, abs(asy.psi(w) - lam) / max(1.0, lam))
    return worst <= 1e-12 and asy.omega(0).omega == 1.0, f"max scaled residual {worst:.2e}"


@_check("asymptotics.omega_increasing", "omega strictly increasing on the grid")
def _omega_increasing():
    ws = [asy.omega(lam).omega for lam in OMEGA_GRID]
    ok = all(a < b for a, b in zip(ws, ws[1:]))
    return ok, "increasing" if ok else f"values {ws}"


def lemma1_deviations(lams=(50, 100, 200, 400, 800), z=1.0):
    return [abs((ge.g1_integral(lam, z) / asy.g1_lemma1(lam, z).leading).to_complex() - 1) for lam in lams]


@_check("asymptotics.lemma1_decrease", "|G1/leading - 1| strictly decreasing over lam = 50..800")
def _lemma1():
    dev = lemma1_deviations()
    ok = all(a > b for a, b in zip(dev, dev[1:])) and dev[-1] <= 0.1
    return ok, "deviations " + ", ".join(f"{d:.3e}" for d in dev)


def growth_gaps(ms=(10, 15, 20)):
    return [ge.g0_series(m, 1.0).logmod - ge.g1_integral(m, 1.0).logmod for m in ms]


@_check("asymptotics.growth_order", "logmod G0 - logmod G1 positive and increasing, m = 10, 15, 20")
def _growth():
    gaps = growth_gaps()
    ok = gaps[0] > 0 and all(a < b for a, b in zip(gaps, gaps[1:]))
    return ok, "gaps " + ", ".join(f"{g:.3f}" for g in gaps)


@_check("asymptotics.leading_at_one", "Gamma^(m)(1) / ((-1)^m m!) within 1e-4 of 1 at m = 20")
def _leading_at_one():
    v = gc.deriv_oracle(20, 1.0)
    dev = abs(math.exp(v.logmod - math.lgamma(21)) * math.cos(v.phase) - 1)
    return dev <= 1e-4, f"deviation {dev:.2e}"


# --- zeros ----------------------------------------------------------------


def _zero_ok(rec: zr.ZeroRecord) -> bool:
    lo, hi = rec.bracket
    m = 2 * rec.k + 1
    if rec.kind == "zeta":
        s_lo, s_hi = (zr._sign(gc.deriv_oracle(m, x)) for x in (lo, hi))
    else:
        s_lo, s_hi = (zr._sign(gc.deriv_left_of_zero(m, x)) for x in (lo, hi))
    return s_lo * s_hi < 0 and rec.residual <= 1e-9


@_check("zeros.records_k0", "zeta_0 and eta_0 have verified sign changes and residual <= 1e-9")
def _zeros_k0():
    recs = [zr.find_zeta(0), zr.find_eta(0)]
    ok = all(_zero_ok(r) for r in recs)
    return ok, ", ".join(f"{r.kind}_0={r.location:.10f} (res {r.residual:.1e})" for r in recs)


@_check("zeros.records", "zeros for k <= 3 have verified sign changes and residual <= 1e-9", fast=False)
def _zeros_records():
    recs = [f(k) for k in range(4) for f in (zr.find_zeta, zr.find_eta)]
    bad = [f"{r.kind}_{r.k}" for r in recs if not _zero_ok(r)]
    return not bad, "ok" if not bad else "failed " + ", ".join(bad)


def divergence_k0(k_max: int = zr.K_MAX):
    """Smallest k0 with sign Gamma^(2k+1)(M) = -1 for every scanned k >= k0 (None if none)."""
    M = zr.find_zeta(5).location + 1.0
    signs = zr.divergence_signs(M, k_max)
    k0 = None
    for k in range(len(signs) - 1, -1, -1):
        if signs[k] != -1:
            break
        k0 = k
    return M, signs, k0


@_check("zeros.divergence", "Gamma^(2k+1)(zeta_5 + 1) < 0 for all scanned k >= some k0 <= 12", fast=False)
def _divergence():
    M, signs, k0 = divergence_k0()
    return k0 is not None and k0 <= zr.K_MAX, f"M = {M:.6f}, k0 = {k0}, signs {signs}"


# --- cli ------------------------------------------------------------------


@_check("cli.json_roundtrip", "JSON records parse back to the identical record")
def _json_roundtrip():
    from .cli import OutputRecord, eval_record

    recs = [eval_record(0.5, 2 + 1j, "auto", 0.5, 1e-10, scaled=s) for s in (False, True)]
    ok = all(OutputRecord.from_json(r.to_json()) == r for r in recs)
    return ok, "round trip exact" if ok else "mismatch"


@_check("cli.csv_header", "CSV headers carry the schema version and are stable")
def _csv_header():
    from .cli import CSV_HEADERS, SCHEMA_VERSION

    ok = all(h.split(",")[0] == "schema_version" for h in CSV_HEADERS.values()) and SCHEMA_VERSION
    return bool(ok), f"schema {SCHEMA_VERSION}"


def run_suite(suite: str = "fast", on_result: Callable[[CheckOutcome], None] | None = None) -> List[CheckOutcome]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    out = []
    for chk in CHECKS:
        if suite == "fast" and not chk.fast:
            continue
        try:
            passed, detail = chk.fn()
        except (GammaInterpError, ArithmeticError, ValueError) as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        res = CheckOutcome(chk.ident, chk.description, bool(passed), detail)
        out.append(res)
        if on_result is not None:
            on_result(res)
    return out
