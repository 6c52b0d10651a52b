import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from thermeit.special import (BESSEL_I_SERIES_RADIUS, BESSEL_K_SERIES_RADIUS, EULER_GAMMA,
                              FADDEEVA_CF_RADIUS, bessel_i, bessel_k, brownian_h, faddeeva,
                              plasma_integral)

mp.mp.dps = 30

# e * erfc(1), 30-digit mpmath evaluation
W_OF_I = 0.427583576155807004410750344491
# 200-term ascending series at 30 digits
I0_1P1J = complex(0.937608476806029276599738197426, 0.496529947609122132166459721225)
# int_0^inf exp(-cosh t) dt by adaptive quadrature
K0_OF_1 = 0.421024438240708333335627379213


def mp_w(z):
    z = mp.mpc(z)
    return complex(mp.exp(-z * z) * mp.erfc(-1j * z))


def rel(a, b):
    return abs(a - b) / abs(b)


class TestFaddeeva:
    def test_origin(self):
        assert faddeeva(0) == pytest.approx(1.0, abs=1e-15)

    def test_imaginary_unit(self):
        assert faddeeva(1j) == pytest.approx(W_OF_I, rel=1e-13)

    def test_large_real_asymptote(self):
        w = faddeeva(100.0)
        assert rel(w, 1j / (math.sqrt(math.pi) * 100.0)) < 1e-4

    @pytest.mark.parametrize("z", [
        0.5 + 0.5j, 3 + 0.01j, -2 + 1e-3j, 7.9 + 0.2j, 8.1 + 0.2j, 1e-8 + 1e-8j,
        20 + 5j, 1e3 + 1j, 1e4 + 1e4j, 0.1 + 30j, -6 + 6j,
    ])
    def test_against_mpmath_upper(self, z):
        assert rel(faddeeva(z), mp_w(z)) < 1e-10

    @pytest.mark.parametrize("z", [1 - 0.5j, -2 - 1j, 5 - 0.1j, 0.3 - 2j])
    def test_against_mpmath_lower(self, z):
        assert rel(faddeeva(z), mp_w(z)) < 1e-10

    @pytest.mark.parametrize("r", [FADDEEVA_CF_RADIUS * (1 - 1e-9), FADDEEVA_CF_RADIUS * (1 + 1e-9)])
    @pytest.mark.parametrize("angle", [0.01, 0.4, 1.2, 1.5])
    def test_seam(self, r, angle):
        z = r * complex(math.cos(angle), math.sin(angle))
        assert rel(faddeeva(z), mp_w(z)) < 1e-12

    def test_parity_on_real_axis(self):
        x = np.linspace(-10, 10, 401)
        w, wm = faddeeva(x), faddeeva(-x)
        np.testing.assert_allclose(w.real, wm.real, rtol=1e-13, atol=1e-16)
        np.testing.assert_allclose(w.imag, -wm.imag, rtol=1e-13, atol=1e-16)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            faddeeva(complex(np.nan, 0))
        with pytest.raises(ValueError):
            faddeeva(np.array([1.0, np.inf]))

    @given(st.floats(-50, 50), st.floats(1e-6, 50))
    def test_random_upper_half_plane(self, x, y):
        z = complex(x, y)
        assert rel(faddeeva(z), mp_w(z)) < 1e-10

    def test_plasma_integral_matches_quadrature(self):
        from scipy.integrate import quad
        for z in (0.3 + 0.5j, -1.0 - 0.7j):
            re = quad(lambda t: (np.exp(-t * t) / (z - t)).real, -np.inf, np.inf, epsabs=1e-13)[0]
            im = quad(lambda t: (np.exp(-t * t) / (z - t)).imag, -np.inf, np.inf, epsabs=1e-13)[0]
            assert rel(plasma_integral(z), complex(re, im) / math.sqrt(math.pi)) < 1e-9


class TestBessel:
    def test_values_at_zero(self):
        assert bessel_i(0, 0) == 1
        assert bessel_i(1, 0) == 0

    def test_i0_series_oracle(self):
        assert rel(bessel_i(0, 1 + 1j), I0_1P1J) < 1e-13

    def test_k0_quadrature_oracle(self):
        assert bessel_k(0, 1.0) == pytest.approx(K0_OF_1, rel=1e-12)

    def test_wronskian_fixed_point(self):
        z = 0.7 + 0.3j
        w = bessel_i(0, z) * bessel_k(1, z) + bessel_i(1, z) * bessel_k(0, z)
        assert rel(w, 1 / z) < 1e-9

    def test_k0_small_argument(self):
        z = 1e-3
        assert abs(bessel_k(0, z) + (math.log(z / 2) + EULER_GAMMA) * bessel_i(0, z)) < 1e-5

    @pytest.mark.parametrize("order", [0, 1])
    @pytest.mark.parametrize("z", [1e-3, 0.5 + 2j, 3 - 4j, 11.9, 12.1 + 1j, 40 + 30j, 300 + 10j, 650])
    def test_against_mpmath(self, order, z):
        exact_i = complex(mp.besseli(order, z))
        exact_k = complex(mp.besselk(order, z))
        assert rel(bessel_i(order, z), exact_i) < 1e-9
        assert rel(bessel_k(order, z), exact_k) < 1e-9

    @pytest.mark.parametrize("order", [0, 1])
    @pytest.mark.parametrize("z", [1e3, 600 + 800j, 1e-3 + 1e-3j])
    def test_k_range_ends(self, order, z):
        # exp(-1000) underflows, so compare the scaled function there
        expect = complex(mp.besselk(order, z) * mp.exp(z))
        assert rel(bessel_k(order, z, scaled=True), expect) < 1e-9

    @pytest.mark.parametrize("order", [0, 1])
    @pytest.mark.parametrize("r", [BESSEL_I_SERIES_RADIUS, BESSEL_K_SERIES_RADIUS])
    def test_seams(self, order, r):
        for z in (r * (1 - 1e-9), r * (1 + 1e-9) + 0.5j):
            assert rel(bessel_i(order, z), complex(mp.besseli(order, z))) < 1e-9
            assert rel(bessel_k(order, z), complex(mp.besselk(order, z))) < 1e-9

    def test_scaled_variants(self):
        z = 800 + 5j
        expect_i = complex(mp.besseli(0, z) * mp.exp(-z))
        expect_k = complex(mp.besselk(1, z) * mp.exp(z))
        assert rel(bessel_i(0, z, scaled=True), expect_i) < 1e-9
        assert rel(bessel_k(1, z, scaled=True), expect_k) < 1e-9

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            bessel_i(0, 701.0)

    def test_k_domain(self):
        with pytest.raises(ValueError):
            bessel_k(0, 0.0)
        with pytest.raises(ValueError):
            bessel_k(1, -1.0 + 1j)

    def test_order_check(self):
        with pytest.raises(ValueError):
            bessel_i(2, 1.0)

    def test_wronskian_random(self):
        rng = np.random.default_rng(3)
        z = rng.uniform(0.1, 50, 100) + 1j * rng.uniform(-50, 50, 100)
        w = bessel_i(0, z) * bessel_k(1, z) + bessel_i(1, z) * bessel_k(0, z)
        assert np.max(np.abs(w * z - 1)) < 1e-9

    @given(st.floats(0.1, 50), st.floats(-50, 50))
    def test_wronskian_property(self, x, y):
        z = complex(x, y)
        w = bessel_i(0, z) * bessel_k(1, z) + bessel_i(1, z) * bessel_k(0, z)
        assert abs(w * z - 1) < 1e-9


class TestBrownian:
    def test_values(self):
        assert brownian_h(0.0) == 0.0
        assert brownian_h(1.0) == pytest.approx(math.exp(-1), rel=1e-15)
        assert brownian_h(50.0) == pytest.approx(49.0 + math.exp(-50), rel=1e-15)

    def test_series_seam(self):
        for x in (0.99e-4, 1.01e-4, 3e-7):
            exact = float(mp.exp(-mp.mpf(x)) - 1 + mp.mpf(x))
            assert brownian_h(x) == pytest.approx(exact, rel=1e-12)

    def test_complex_argument(self):
        z = 0.3 + 2j
        assert rel(brownian_h(z), complex(mp.exp(-z) - 1 + z)) < 1e-14

    def test_shape_on_positive_axis(self):
        x = np.linspace(0, 20, 2001)
        h = brownian_h(x)
        assert np.all(h >= 0)
        assert np.all(np.diff(h) > 0)
        assert np.all(np.diff(h, 2) > -1e-15)

    @given(st.floats(0, 1e3), st.floats(0, 1e3))
    def test_monotone_property(self, a, b):
        lo, hi = sorted((a, b))
        assert brownian_h(lo) <= brownian_h(hi)
