import math

import numpy as np
import pytest
from scipy.integrate import quad

from zfdmt.special_functions import (
    exp_integral_en,
    gauss_q,
    laguerre,
    log_reg_lower_inc_gamma,
    reg_lower_inc_gamma,
    reg_lower_inc_gamma_ratio,
    upper_inc_gamma_int,
)


class TestRegLowerIncGamma:
    def test_zero(self):
        assert reg_lower_inc_gamma(0.0, 5) == 0.0

    def test_shape_one_closed_form(self):
        # a = 1 reduces to 1 - e^-x
        assert reg_lower_inc_gamma(math.log(2.0), 1) == pytest.approx(0.5, abs=1e-15)

    def test_against_quadrature(self):
        oracle, _ = quad(lambda t: t**2 * math.exp(-t) / 2.0, 0.0, 2.0, epsabs=1e-14, epsrel=1e-13)
        assert abs(reg_lower_inc_gamma(2.0, 3) - oracle) <= 1e-12

    @pytest.mark.parametrize("a", [1, 2, 5, 9])
    def test_monotone_in_x(self, a):
        xs = np.linspace(0.01, 20.0, 50)
        vals = [reg_lower_inc_gamma(float(x), a) for x in xs]
        assert all(b > a_ for a_, b in zip(vals, vals[1:]))

    def test_decreasing_in_shape(self):
        for x in (0.5, 2.0, 8.0):
            vals = [reg_lower_inc_gamma(x, a) for a in range(1, 10)]
            assert all(b < a_ for a_, b in zip(vals, vals[1:]))

    def test_domain_error(self):
        with pytest.raises(ValueError):
            reg_lower_inc_gamma(-0.1, 2)
        with pytest.raises(ValueError):
            reg_lower_inc_gamma(1.0, 0)

    def test_branch_agreement(self):
        # the series branch must match the textbook closed form where both are stable
        for a in (1, 3, 7):
            x = a + 0.9  # series branch territory, cancellation still mild
            acc, term = 0.0, 1.0
            for j in range(a):
                if j > 0:
                    term *= x / j
                acc += term
            closed = 1.0 - math.exp(-x) * acc
            assert reg_lower_inc_gamma(x, a) == pytest.approx(closed, rel=1e-13)

    def test_log_form_matches(self):
        for x, a in ((0.3, 2), (5.0, 3), (40.0, 4)):
            assert log_reg_lower_inc_gamma(x, a) == pytest.approx(
                math.log(reg_lower_inc_gamma(x, a)), rel=1e-13
            )

    def test_log_form_tiny_argument(self):
        # log P(a, x) ~ a ln x - ln a!  as x -> 0; the plain form underflows here
        val = log_reg_lower_inc_gamma(1e-200, 3)
        assert val == pytest.approx(3 * math.log(1e-200) - math.log(6.0), rel=1e-12)

    def test_ratio_matches_density_over_mass(self):
        for x, a in ((0.4, 2), (3.0, 3), (12.0, 5)):
            pdf = x ** (a - 1) * math.exp(-x) / math.factorial(a - 1)
            assert reg_lower_inc_gamma_ratio(x, a) == pytest.approx(
                pdf / reg_lower_inc_gamma(x, a), rel=1e-12
            )

    def test_ratio_small_x_limit(self):
        assert reg_lower_inc_gamma_ratio(1e-12, 4) == pytest.approx(4e12, rel=1e-9)


class TestGaussQ:
    def test_at_zero(self):
        assert gauss_q(0.0) == 0.5

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_symmetry(self, x):
        assert gauss_q(x) + gauss_q(-x) == pytest.approx(1.0, abs=1e-15)

    def test_five_percent_point(self):
        assert gauss_q(1.6448536) == pytest.approx(0.05, abs=1e-7)

    def test_against_quadrature(self):
        oracle, _ = quad(
            lambda t: math.exp(-t * t / 2.0) / math.sqrt(2.0 * math.pi),
            1.6448536,
            40.0,
            epsabs=1e-15,
            epsrel=1e-13,
        )
        assert gauss_q(1.6448536) == pytest.approx(oracle, abs=1e-12)

    def test_strictly_decreasing(self):
        xs = np.linspace(-6, 6, 60)
        vals = [gauss_q(float(x)) for x in xs]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert all(0.0 < v < 1.0 for v in vals)


class TestExpIntegral:
    def test_order_zero_closed_form(self):
        assert exp_integral_en(0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)

    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_recurrence_residual(self, x):
        # n E_{n+1}(x) - e^-x + x E_n(x) = 0
        for n in range(1, 10):
            resid = n * exp_integral_en(n + 1, x) - math.exp(-x) + x * exp_integral_en(n, x)
            assert abs(resid) <= 1e-14

    def test_e1_against_quadrature(self):
        oracle, _ = quad(lambda t: math.exp(-t) / t, 1.0, np.inf, epsabs=1e-15, epsrel=1e-13)
        assert exp_integral_en(1, 1.0) == pytest.approx(oracle, abs=1e-10)
        assert exp_integral_en(1, 1.0) == pytest.approx(0.2193839, abs=1e-7)

    def test_series_and_cf_branches(self):
        from scipy.special import exp1

        # series branch (x < 1) and continued fraction (x >= 1) against scipy
        assert exp_integral_en(1, 0.999) == pytest.approx(float(exp1(0.999)), rel=1e-13)
        assert exp_integral_en(1, 1.001) == pytest.approx(float(exp1(1.001)), rel=1e-13)
        assert exp_integral_en(1, 25.0) == pytest.approx(float(exp1(25.0)), rel=1e-13)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            exp_integral_en(1, 0.0)
        with pytest.raises(ValueError):
            exp_integral_en(-1, 1.0)


class TestUpperIncGamma:
    def test_shape_one(self):
        assert upper_inc_gamma_int(1, 2.0) == pytest.approx(0.1353353, abs=1e-7)

    def test_complete_limit(self):
        # Gamma(3, 0+) -> 2! = 2
        assert upper_inc_gamma_int(3, 1e-10) == pytest.approx(2.0, abs=1e-9)

    def test_negative_order_against_quadrature(self):
        oracle, _ = quad(lambda t: math.exp(-t) / t**2, 1.0, np.inf, epsabs=1e-15, epsrel=1e-13)
        assert upper_inc_gamma_int(-1, 1.0) == pytest.approx(oracle, abs=1e-10)
        assert upper_inc_gamma_int(-1, 1.0) == pytest.approx(0.1484955, abs=1e-7)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            upper_inc_gamma_int(2, 0.0)


class TestLaguerre:
    def test_order_zero(self):
        for alpha in (0, 2, 5):
            for x in (-1.0, 0.0, 3.7):
                assert laguerre(0, alpha, x) == 1.0

    def test_order_one(self):
        assert laguerre(1, 2, 1.0) == pytest.approx(2.0, abs=1e-15)

    def test_series_oracle(self):
        # L_n^a(x) = sum_i (-1)^i C(n+a, n-i) x^i / i!
        n, alpha, x = 3, 1, 2.5
        series = sum(
            (-1.0) ** i * math.comb(n + alpha, n - i) * x**i / math.factorial(i)
            for i in range(n + 1)
        )
        assert laguerre(n, alpha, x) == pytest.approx(series, abs=1e-12)

    def test_vectorized(self):
        xs = np.linspace(0, 10, 7)
        vec = laguerre(4, 2, xs)
        assert np.allclose(vec, [laguerre(4, 2, float(x)) for x in xs], rtol=1e-13)
