import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammainterp.branchlog import ls_add, rel_diff
from gammainterp.errors import DomainError
from gammainterp.gamma_core import (
    deriv_left_of_zero,
    deriv_oracle,
    dominant_part,
    gamma,
    log_power_moment,
    lower_incomplete_at_1,
    pole_distance,
    remainder_moment,
    upper_incomplete_at_1,
)

# Reference derivatives below were computed with mpmath.diff(mpmath.gamma, ...) at 40 digits.
EULER_GAMMA = 0.57721566490153286061
GAMMA2_AT_1 = 1.9781119906559451108
GAMMA3_AT_2 = 0.48946151548251759827
GAMMA2_AT_MINUS_HALF = -31.677769243994665783


class TestGamma:
    @pytest.mark.parametrize("z, expected", [(1, 1), (5, 24), (0.5, math.sqrt(math.pi))])
    def test_values(self, z, expected):
        assert gamma(z).to_complex() == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(DomainError, match=str(z)):
            gamma(z)

    @given(st.floats(-20, 20), st.floats(-20, 20))
    @settings(max_examples=150, deadline=None)
    def test_recursion(self, x, y):
        z = complex(x, y)
        if pole_distance(z) < 1e-3 or pole_distance(z + 1) < 1e-3:
            return
        assert rel_diff(gamma(z + 1), gamma(z) * z) <= 1e-13

    def test_large_argument_log_scaled(self):
        assert gamma(500).logmod == pytest.approx(math.lgamma(500), rel=1e-15)


class TestIncomplete:
    def test_values(self):
        assert upper_incomplete_at_1(1).to_complex() == pytest.approx(math.exp(-1), rel=1e-13)
        assert lower_incomplete_at_1(1).to_complex() == pytest.approx(1 - math.exp(-1), rel=1e-13)
        assert upper_incomplete_at_1(2).to_complex() == pytest.approx(2 * math.exp(-1), rel=1e-13)

    @pytest.mark.parametrize("z", [0.05, 0.5, 1.0, 2 + 1j, 7.3, 12 - 3j, 19.5])
    def test_split_identity(self, z):
        s = ls_add(upper_incomplete_at_1(z), lower_incomplete_at_1(z))
        assert rel_diff(s, gamma(z)) <= 1e-12

    def test_upper_entire(self):
        # Gamma(-1/2, 1) = 2/sqrt(e) - 2 sqrt(pi) erfc(1)
        expected = 2 * math.exp(-1) / 1.0 - 2 * math.sqrt(math.pi) * math.erfc(1)
        assert upper_incomplete_at_1(-0.5).to_complex().real == pytest.approx(expected, rel=1e-12)

    def test_lower_domain(self):
        with pytest.raises(DomainError):
            lower_incomplete_at_1(-0.5)


class TestLogPowerMoment:
    @pytest.mark.parametrize("lam", [0.5, 3.2])
    @pytest.mark.parametrize("n", [0, 1, 5])
    @pytest.mark.parametrize("z", [1.0, 2 + 1j])
    def test_closed_form(self, lam, n, z):
        import cmath

        from gammainterp.branchlog import pow_branched

        q = log_power_moment(lam, n + z).value
        closed = gamma(lam + 1) * pow_branched(cmath.log(n + z), -(lam + 1))
        assert rel_diff(q, closed) <= 1e-10

    def test_unit_case(self):
        assert log_power_moment(1, 1).to_complex() == pytest.approx(1.0, rel=1e-13)

    def test_half_order(self):
        # Gamma(1.5) / 1.5^1.5
        assert log_power_moment(0.5, 1.5).to_complex() == pytest.approx(0.48240083637217843958, rel=1e-12)


class TestOracle:
    def test_values(self):
        assert deriv_oracle(0, 1).to_complex() == pytest.approx(1.0, rel=1e-14)
        assert deriv_oracle(1, 1).to_complex().real == pytest.approx(-EULER_GAMMA, rel=1e-13)
        assert deriv_oracle(2, 1).to_complex().real == pytest.approx(GAMMA2_AT_1, rel=1e-13)

    @pytest.mark.parametrize("m", [0, 1, 5, 12, 20])
    @pytest.mark.parametrize("z0", [1.0, 2.5, 1 + 1j])
    def test_radius_independence(self, m, z0):
        assert rel_diff(deriv_oracle(m, z0, 0.3), deriv_oracle(m, z0, 0.6)) <= 1e-11

    def test_disc_touching_pole(self):
        with pytest.raises(DomainError):
            deriv_oracle(1, 0.5, 0.5)
        with pytest.raises(DomainError):
            deriv_oracle(1, 0.5, 0.0)

    def test_large_order_log_scaled(self):
        v = deriv_oracle(60, 1.0)
        assert v.logmod == pytest.approx(math.lgamma(61), rel=1e-6)


class TestLeftOfZero:
    def test_gamma_minus_half(self):
        assert deriv_left_of_zero(0, -0.5).to_complex() == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)

    def test_second_derivative(self):
        v = deriv_left_of_zero(2, -0.5)
        assert v.to_complex().real == pytest.approx(GAMMA2_AT_MINUS_HALF, rel=1e-12)
        assert rel_diff(v, deriv_oracle(2, -0.5, 0.25)) <= 1e-10

    def test_first_derivative_vanishes_at_eta0(self):
        v = deriv_left_of_zero(1, -0.50408300826445540925)
        assert abs(v.to_complex()) <= 1e-9

    @pytest.mark.parametrize("z", [-0.25, -0.5, -0.75])
    @pytest.mark.parametrize("m", range(11))
    def test_matches_oracle(self, m, z):
        rad = min(abs(z), abs(z + 1)) / 2
        assert rel_diff(deriv_left_of_zero(m, z), deriv_oracle(m, z, rad)) <= 1e-10

    @pytest.mark.parametrize("z", [-0.25, -0.5, -0.75])
    @pytest.mark.parametrize("m", range(0, 11, 2))
    def test_recursion_even_orders(self, m, z):
        rad = min(abs(z), abs(z + 1)) / 2
        v = deriv_left_of_zero(m, z, method="recursion")
        assert rel_diff(v, deriv_oracle(m, z, rad)) <= 1e-10

    @pytest.mark.parametrize("m", [1, 5, 9])
    def test_recursion_cancellation_is_bounded(self, m):
        # odd orders at -1/2 lose about (m+1) log10(3) digits in the recursion
        v = deriv_left_of_zero(m, -0.5, method="recursion")
        assert rel_diff(v, deriv_oracle(m, -0.5, 0.25)) <= 1e-13 * 3 ** (m + 1)

    def test_complex_argument(self):
        z = -0.4 + 0.3j
        assert rel_diff(deriv_left_of_zero(4, z), deriv_oracle(4, z)) <= 1e-10

    @pytest.mark.parametrize("z", [0, -1, -1.5])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            deriv_left_of_zero(1, z)

    def test_dominant_part_cancels_exactly(self):
        assert dominant_part(3, -0.5).is_zero
        assert dominant_part(2, -0.5).to_complex() == pytest.approx(-32.0)

    def test_remainder_domain(self):
        with pytest.raises(DomainError):
            remainder_moment(2, -2.5)
