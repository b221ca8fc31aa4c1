import math

import pytest

from gammainterp.asymptotics import (
    AsymptoticEstimate,
    c15_integral,
    curvature_A,
    dominant_part_deriv,
    g1_corollary1,
    g1_lemma1,
    gamma_deriv_asym,
    gm_at_minus_half_asym,
    j_closed,
    j_integral,
    omega,
    psi,
)
from gammainterp.branchlog import ONE, rel_diff
from gammainterp.errors import DomainError
from gammainterp.g_eval import g1_integral
from gammainterp.gamma_core import deriv_left_of_zero, deriv_oracle

# J(10) and J(3) summed with mpmath at 40 digits
J10 = 0.049999577468879736456
J3 = 0.16378396813823470992


class TestPsiOmega:
    def test_psi(self):
        assert psi(1) == 0
        assert psi(math.e) == pytest.approx(math.e)
        assert psi(math.e ** 2) == pytest.approx(2 * math.e ** 2)
        with pytest.raises(DomainError):
            psi(0.5)

    def test_omega_fixed_points(self):
        assert omega(0).omega == 1.0
        assert omega(math.e).omega == pytest.approx(math.e, rel=1e-15)

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, math.e, 10.0, 1e3, 1e6, 3.7e9])
    def test_residual(self, lam):
        sol = omega(lam)
        assert abs(psi(sol.omega) - lam) <= 1e-12 * max(1.0, lam)
        assert sol.residual <= 1e-12 * max(1.0, lam)

    def test_million(self):
        w = omega(1e6).omega
        assert abs(w * math.log(w) - 1e6) <= 1e-6
        assert 1 < w / (1e6 / math.log(1e6)) < 1.25

    def test_increasing(self):
        ws = [omega(x).omega for x in (0, 0.5, 1, math.e, 10, 1e3, 1e6)]
        assert all(a < b for a, b in zip(ws, ws[1:]))

    def test_negative(self):
        with pytest.raises(DomainError):
            omega(-1)


class TestCurvature:
    def test_at_e(self):
        assert curvature_A(math.e) == pytest.approx(math.e)

    def test_ratio_to_simplified_form(self):
        r100 = curvature_A(100) / (100 / (2 * math.log(100)))
        r1e4 = curvature_A(1e4) / (1e4 / (2 * math.log(1e4)))
        assert 0.5 < r100 < 2
        assert abs(r1e4 - 1) < abs(r100 - 1)

    def test_zero(self):
        with pytest.raises(DomainError):
            curvature_A(0)


def lemma_dev(lam, z=1.0):
    return abs((g1_integral(lam, z) / g1_lemma1(lam, z).leading).to_complex() - 1)


class TestLemma1:
    def test_ratio_at_100(self):
        r = (g1_integral(100, 1) / g1_lemma1(100, 1).leading).to_complex().real
        assert 0.5 < r < 1.5

    def test_strict_decrease(self):
        devs = [lemma_dev(lam) for lam in (50, 100, 200, 400, 800)]
        assert all(a > b for a, b in zip(devs, devs[1:]))
        # calibration run: 6.83e-4 at 800
        assert devs[-1] <= 0.1

    def test_complex_z(self):
        assert lemma_dev(400, 1 + 0.5j) < 0.05

    def test_alpha_window(self):
        assert 1 / 3 < g1_lemma1(100, 1).error_exponent_alpha < 1 / 2
        with pytest.raises(DomainError):
            AsymptoticEstimate(ONE, 0.6)

    def test_precondition(self):
        with pytest.raises(DomainError):
            g1_lemma1(2.0, 1)


class TestCorollary1:
    def test_power_factor_vanishes_at_half(self):
        lam = math.e ** 2
        est = g1_corollary1(lam, 0.5).leading
        w = omega(lam).omega
        assert est.logmod == pytest.approx(0.5 * math.log(math.pi / 2) + lam * math.log(math.log(w)) - w)

    def test_same_scale_as_lemma(self):
        lam = 100
        gap = g1_corollary1(lam, 1).leading.logmod - g1_lemma1(lam, 1).leading.logmod
        assert abs(gap) <= 2 * math.log(math.log(lam))

    def test_log_ratio_bounded(self):
        for lam in (100, 1e4):
            lr = g1_corollary1(lam, 1).leading.logmod - g1_integral(lam, 1).logmod
            assert -1.0 < lr < 0.0

    @pytest.mark.xfail(strict=True, reason="log-ratio grows from -0.722 at 100 to -0.749 at 1e4; see notes")
    def test_log_ratio_shrinks(self):
        lr = [abs(g1_corollary1(lam, 1).leading.logmod - g1_integral(lam, 1).logmod) for lam in (100, 1e4)]
        assert lr[1] < lr[0]


class TestGammaDerivAsym:
    def test_m20(self):
        assert rel_diff(gamma_deriv_asym(20, 1), deriv_oracle(20, 1, 0.5)) <= 1e-6

    @pytest.mark.parametrize("m", range(2, 21))
    def test_sign_pattern(self, m):
        v = gamma_deriv_asym(m, 1).to_complex().real
        assert math.copysign(1, v) == (-1) ** m

    def test_m6_positive(self):
        assert gamma_deriv_asym(6, 1).to_complex().real > 0

    def test_leading_term_m10_z2(self):
        lead = math.factorial(10) / 2 ** 11
        v = gamma_deriv_asym(10, 2).to_complex().real
        assert abs(v / lead - 1) < 0.2

    def test_lemma_form_is_sharper(self):
        o = deriv_oracle(10, 2)
        assert rel_diff(gamma_deriv_asym(10, 2, form="lemma1"), o) < rel_diff(gamma_deriv_asym(10, 2), o)
        assert rel_diff(gamma_deriv_asym(10, 2, form="lemma1"), o) <= 3e-3

    @pytest.mark.xfail(strict=True, reason="relative error is 1.0e-2 at m=10, z=2; see notes")
    def test_m10_z2_within_1e3(self):
        assert rel_diff(gamma_deriv_asym(10, 2), deriv_oracle(10, 2)) <= 1e-3

    def test_errors_shrink_with_m(self):
        devs = [rel_diff(gamma_deriv_asym(m, 1), deriv_oracle(m, 1)) for m in (2, 6, 10)]
        assert devs[0] > devs[1] > devs[2]

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_deriv_asym(1, 1)
        with pytest.raises(DomainError):
            gamma_deriv_asym(4, -1)
        with pytest.raises(DomainError):
            gamma_deriv_asym(4, 1, form="other")


class TestJ:
    @pytest.mark.parametrize("lam", [3, 10])
    def test_integral_matches_closed(self, lam):
        assert abs(j_integral(lam) / j_closed(lam) - 1) <= 1e-10

    def test_frozen_values(self):
        assert j_closed(10) == pytest.approx(J10, rel=1e-14)
        assert j_closed(3) == pytest.approx(J3, rel=1e-14)

    def test_first_terms(self):
        direct = (1 - 0.5 * 3.0 ** -10 + 5.0 ** -10 / 6 - 7.0 ** -10 / 24) / 20
        assert j_closed(10) == pytest.approx(direct, rel=1e-12)

    def test_normalised_limit(self):
        vals = [2 * lam * j_closed(lam) for lam in (10, 20, 40)]
        assert all(abs(a - 1) > abs(b - 1) for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            j_closed(1)


class TestMinusHalf:
    def test_even_orders_approach_dominant(self):
        ratios = [gm_at_minus_half_asym(2 * k).to_complex().real / dominant_part_deriv(2 * k) for k in (2, 5, 8)]
        assert all(abs(a - 1) > abs(b - 1) for a, b in zip(ratios, ratios[1:]))

    def test_odd_orders_approach_one_third_law(self):
        def ref(k):
            return -(2 ** (2 * k + 1)) * math.factorial(2 * k + 1) / 3 ** (2 * k + 2)

        ratios = [gm_at_minus_half_asym(2 * k + 1).to_complex().real / ref(k) for k in (2, 5, 8)]
        assert all(abs(a - 1) > abs(b - 1) for a, b in zip(ratios, ratios[1:]))

    def test_sign_at_8(self):
        assert gm_at_minus_half_asym(8).to_complex().real * deriv_oracle(8, -0.5, 0.25).to_complex().real > 0

    def test_converges_to_exact(self):
        for m in (8, 14):
            assert rel_diff(gm_at_minus_half_asym(m), deriv_left_of_zero(m, -0.5)) <= 1e-8

    @pytest.mark.parametrize("m, expected", [(0, -4.0), (1, 0.0), (2, -32.0), (3, 0.0), (4, -(2.0 ** 6) * 24)])
    def test_dominant_part(self, m, expected):
        assert dominant_part_deriv(m) == expected

    def test_c15_scaling(self):
        vals = [lam * abs(c15_integral(lam)) for lam in (10, 100, 1000)]
        assert all(abs(a - 1) > abs(b - 1) for a, b in zip(vals, vals[1:]))
        assert abs(vals[-1] - 1) < 0.01

    def test_c15_branch(self):
        v = c15_integral(10.5)
        # e^{i pi 9.5} = -i
        assert abs(v.real) <= 1e-12 * abs(v) and v.imag < 0
