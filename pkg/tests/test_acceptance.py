"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (run with ``-s`` to see
them) before asserting.
"""

import cmath
import io
import math
import time
from pathlib import Path

import pytest

from gammainterp import asymptotics as asy
from gammainterp import cli
from gammainterp import g_eval as ge
from gammainterp import gamma_core as gc
from gammainterp import verify
from gammainterp import zeros as zr
from gammainterp.branchlog import pow_branched, rel_diff

GOLDEN = Path(__file__).parent / "golden"


def report(n: int, name: str, ok: bool, detail: str):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n:2d} {name}: {detail}")
    assert ok, detail


def _strictly_decreasing(xs):
    return all(a > b for a, b in zip(xs, xs[1:]))


def test_01_interpolation():
    t0 = time.perf_counter()
    worst = max(
        rel_diff(ge.g(m, z), gc.deriv_oracle(m, z))
        for z in (0.5, 1.0, 1.5, 2.0, 3 + 2j)
        for m in range(13)
    )
    dt = time.perf_counter() - t0
    report(1, "interpolation", worst <= 1e-8 and dt <= 60, f"max deviation {worst:.2e}, {dt:.1f} s")


def test_02_r_independence():
    worst_rel, worst_ratio = 0.0, 0.0
    for lam in (-2.5, 0.5, 1.7 + 0.3j):
        for z in (1.0, 2.5):
            res = [ge.evaluate(ge.EvalRequest(lam, z, "contour", r=r)) for r in (0.2, 0.5, 0.8)]
            for i in range(3):
                for j in range(i + 1, 3):
                    d = rel_diff(res[i].value, res[j].value)
                    allow = 5 * (res[i].rel_err + res[j].rel_err)
                    worst_rel = max(worst_rel, d)
                    worst_ratio = max(worst_ratio, d / allow if allow else (0.0 if d == 0 else math.inf))
    ok = worst_rel <= 1e-8 and worst_ratio <= 1.0
    report(2, "r-independence", ok, f"max deviation {worst_rel:.2e}, max deviation/allowance {worst_ratio:.2e}")


def test_03_method_agreement():
    worst = 0.0
    for lam in (-0.5, 0.5, 1.0, 1.7 + 0.3j, 4.0):
        for z in (0.5, 1.0, 2.5, 1 + 1j):
            vals = [ge.g(lam, z, method=m) for m in ("contour", "split", "series_plus_tail")]
            worst = max(worst, *(rel_diff(vals[i], vals[j]) for i in range(3) for j in range(i + 1, 3)))
    report(3, "method agreement", worst <= 1e-8, f"max deviation {worst:.2e}")


def test_04_log_power_moment_closed_form():
    worst = 0.0
    for lam in (0.5, 3.2):
        for n in (0, 1, 5):
            for z in (1.0, 2 + 1j):
                q = gc.log_power_moment(lam, n + z).value
                closed = gc.gamma(lam + 1) * pow_branched(cmath.log(n + z), -(lam + 1))
                worst = max(worst, rel_diff(q, closed))
    report(4, "log-power moment closed form", worst <= 1e-10, f"max deviation {worst:.2e}")


def test_05_behaviour_at_origin():
    ks = range(2, 7)
    axis = [abs(ge.property1_deviation(1.5, 10.0 ** -k)) for k in ks]
    ray = [abs(ge.property1_deviation(1.5, 10.0 ** -k * cmath.exp(0.25j * math.pi))) for k in ks]
    ok = all(_strictly_decreasing(d) and d[-1] <= 1e-3 for d in (axis, ray))
    fmt = lambda d: ", ".join(f"{x:.1e}" for x in d)
    report(5, "ratio -> 1 as z -> 0", ok, f"real axis [{fmt(axis)}]; ray [{fmt(ray)}]")


def test_06_functional_equation():
    res = max(ge.g_recurrence_residual(lam, z) for lam in (0.5, 1.0, 2.5) for z in (0.7, 1.0, 3.0))
    fd = max(ge.g_dz_check(lam, z)[2] for lam in (0.5, 2.5) for z in (1.0, 2 + 1j))
    ok = res <= 1e-9 and fd <= 1e-5
    report(6, "functional equation", ok, f"max residual {res:.2e}, d/dz vs finite difference {fd:.2e}")


def test_07_omega_solver():
    grid = [0.0, 1e-3, 0.5, 1.0, math.e, 10.0, 123.4, 1e3, 1e4, 1e5, 1e6]
    worst = max(abs(asy.psi(asy.omega(lam).omega) - lam) / max(1.0, lam) for lam in grid)
    ok = worst <= 1e-12 and asy.omega(0).omega == 1.0
    report(7, "omega solver", ok, f"max scaled residual {worst:.2e}, omega(0) = {asy.omega(0).omega!r}")


def test_08_laplace_leading_term():
    t0 = time.perf_counter()
    dev = verify.lemma1_deviations()
    dt = time.perf_counter() - t0
    ok = _strictly_decreasing(dev) and dev[-1] <= 0.1 and dt <= 120
    report(8, "G1 Laplace leading term", ok, "deviations " + ", ".join(f"{d:.3e}" for d in dev) + f", {dt:.1f} s")


def test_09_large_order_derivative():
    asym = asy.gamma_deriv_asym(20, 1.0)
    dev = rel_diff(asym, gc.deriv_oracle(20, 1.0))
    bad = []
    for m in range(2, 21):
        want = (-1) ** m
        for v in (asy.gamma_deriv_asym(m, 1.0), gc.deriv_oracle(m, 1.0)):
            if round(math.cos(v.phase)) != want:
                bad.append(m)
    ok = dev <= 1e-5 and not bad
    report(9, "large-m derivative form", ok, f"deviation at m=20 {dev:.2e}, sign failures {sorted(set(bad)) or 'none'}")


def test_10_j_identity():
    ratio = max(abs(asy.j_integral(lam) / asy.j_closed(lam) - 1) for lam in (3.0, 10.0))
    scaled = [2 * lam * asy.j_closed(lam) for lam in (10.0, 20.0, 40.0)]
    gaps = [abs(s - 1) for s in scaled]
    ok = ratio <= 1e-10 and all(a > b or b == 0 for a, b in zip(gaps, gaps[1:])) and all(s <= 1 for s in scaled)
    report(10, "J identity", ok, f"quadrature/closed deviation {ratio:.2e}, 2 lam J = " + ", ".join(f"{s:.12f}" for s in scaled))


def test_11_continuation():
    worst, worst_path = 0.0, 0.0
    for m in range(9):
        cont = ge.g_continue_left(m + 1, -0.5)
        worst = max(worst, rel_diff(cont, gc.deriv_left_of_zero(m, -0.5, method="recursion")),
                    rel_diff(cont, gc.deriv_oracle(m, -0.5)))
    for lam, z in ((1.5, -0.5), (3.0, -0.5), (2.5, -0.5 + 0.5j)):
        worst_path = max(worst_path, rel_diff(ge.g_continue_left(lam, z, 1.0), ge.g_continue_left(lam, z, 2.0)))
    ok = worst <= 1e-7 and worst_path <= 1e-8
    report(11, "continuation left of zero", ok, f"vs recursion/oracle {worst:.2e}, z0=1 vs z0=2 {worst_path:.2e}")


def test_12_zeros():
    z0 = zr.find_zeta(0)
    e0 = zr.find_eta(0)
    e0_oracle = zr.find_eta(0, source="oracle")
    loc_ok = (abs(z0.location - 1.4616321) <= 1e-6 and abs(e0.location + 0.5040830) <= 1e-6
              and abs(e0_oracle.location + 0.5040830) <= 1e-6)
    recs = [f(k) for k in range(7) for f in (zr.find_zeta, zr.find_eta)]
    worst = max(r.residual for r in recs)
    M, signs, k0 = verify.divergence_k0()
    ok = loc_ok and worst <= 1e-9 and k0 is not None
    report(12, "zeros of odd derivatives", ok,
           f"zeta_0 {z0.location:.10f}, eta_0 {e0.location:.10f} (oracle {e0_oracle.location:.10f}), "
           f"max residual {worst:.1e}, negative for k >= {k0} at M = {M:.5f}")


def test_13_growth_ordering():
    gaps = verify.growth_gaps()
    ok = gaps[0] > 0 and all(a < b for a, b in zip(gaps, gaps[1:]))
    report(13, "G0 outgrows G1", ok, "logmod gaps " + ", ".join(f"{g:.3f}" for g in gaps))


GOLDEN_CASES = {
    "table_m0-3_z1.csv": ["table", "--m", "0:3", "--z", "1"],
    "table_scaled_m0-2_z3+2i.csv": ["table", "--m", "0:2", "--z=3+2i", "--scaled"],
    "asym_lemma1_z1.csv": ["asym", "--form", "lemma1", "--z", "1"],
    "asym_corollary1_z0.5.csv": ["asym", "--form", "corollary1", "--z", "0.5", "--lambda-grid", "50,100"],
    "zeros_eta_k0-1.csv": ["zeros", "--kind", "eta", "--k", "0:1"],
    "eval_half_2+1i.csv": ["eval", "--lambda", "0.5", "--z=2+1i", "--csv"],
}


def _run(argv):
    buf = io.StringIO()
    code = cli.main(argv, out=buf)
    return code, buf.getvalue()


def test_14_cli():
    code, text = _run(["verify", "--suite", "all"])
    verify_ok = code == 0
    recs = [cli.eval_record(0.5, 2 + 1j, "auto", 0.5, 1e-10, scaled=s) for s in (False, True)]
    json_ok = all(cli.OutputRecord.from_json(r.to_json()) == r for r in recs)
    bad = []
    for name, argv in GOLDEN_CASES.items():
        first, second = _run(argv)[1], _run(argv)[1]
        if not (first == second and first.encode() == (GOLDEN / name).read_bytes()):
            bad.append(name)
    ok = verify_ok and json_ok and not bad
    summary = text.strip().splitlines()[-1] if text.strip() else "no output"
    report(14, "command line", ok, f"verify: {summary}; JSON round trip {'exact' if json_ok else 'broken'}; "
           f"golden mismatches {bad or 'none'}")
