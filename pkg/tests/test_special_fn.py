"""Gamma, Stirling, Bessel, and zeta evaluation against precision oracles."""

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from oscillax.errors import DomainError, PoleError
from oscillax.special_fn import (
    StirlingConfig,
    bessel_combo_maass,
    bessel_j,
    gamma_factor,
    gamma_factor_asymptotic,
    gamma_stirling,
    ln_gamma,
    zeta_line,
)


class TestLnGamma:
    def test_half(self):
        assert abs(ln_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14

    def test_one(self):
        assert abs(ln_gamma(1.0)) < 1e-14

    def test_complex_point_oracle(self):
        with mpmath.workdps(40):
            ref = complex(mpmath.loggamma(mpmath.mpc(0.5, 10.0)))
        got = ln_gamma(0.5 + 10.0j)
        assert abs(got - ref) < 1e-12 * abs(ref)

    def test_pole(self):
        for z in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                ln_gamma(z)

    def test_schwarz_reflection(self, rng):
        for _ in range(20):
            z = complex(0.1 + 4.9 * rng.random(), 100.0 * (rng.random() - 0.5))
            assert abs(ln_gamma(z.conjugate()) - ln_gamma(z).conjugate()) < 1e-12

    def test_functional_identity(self, rng):
        # Gamma(z + 1) = z Gamma(z) across the strip
        for _ in range(200):
            z = complex(0.1 + 4.9 * rng.random(), 200.0 * (rng.random() - 0.5))
            lhs = ln_gamma(z + 1.0)
            rhs = ln_gamma(z) + cmath.log(z)
            # both sides may differ by 2 pi i from branch choices; compare
            # exponentials relatively
            assert abs(cmath.exp(lhs - rhs) - 1.0) < 1e-11


class TestGammaStirling:
    def test_matches_exact_at_tau50(self):
        got = gamma_stirling(0.5, 50.0, StirlingConfig(K2=8))
        ref = cmath.exp(ln_gamma(0.5 + 50.0j))
        assert abs(got - ref) < 1e-10 * abs(ref)

    def test_leading_term_domain_edge(self):
        got = gamma_stirling(0.5, 2.0, StirlingConfig(K2=0))
        ref = cmath.exp(ln_gamma(0.5 + 2.0j))
        assert abs(got - ref) < 0.25 * abs(ref)

    def test_modulus_reflection(self):
        assert abs(
            abs(gamma_stirling(0.0, -50.0)) - abs(gamma_stirling(0.0, 50.0))
        ) < 1e-13 * abs(gamma_stirling(0.0, 50.0))

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            gamma_stirling(0.5, 1.0)

    def test_error_monotone_in_order(self):
        ref = cmath.exp(ln_gamma(0.5 + 50.0j))
        errs = [
            abs(gamma_stirling(0.5, 50.0, StirlingConfig(K2=k)) - ref) / abs(ref)
            for k in (0, 2, 4, 6, 8)
        ]
        assert all(a >= b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-10


class TestGammaFactor:
    MU = 9.533695

    def test_finite_pair_with_envelope(self):
        s = complex(-0.5, 31.0)
        gp, gm = gamma_factor(s, self.MU)
        env = (abs(s.imag + self.MU) * abs(s.imag - self.MU)) ** (s.real + 0.5)
        assert all(map(cmath.isfinite, (gp, gm)))
        # sigma + 1/2 = 0 makes the envelope O(1); the dominant member
        # saturates it within a factor 10, the other is exponentially small
        assert max(abs(gp), abs(gm)) <= 10.0 * env
        assert max(abs(gp), abs(gm)) >= 0.1 * env

    def test_schwarz_reflection(self):
        s = complex(0.3, 17.0)
        gp, gm = gamma_factor(s, self.MU)
        gpc, gmc = gamma_factor(s.conjugate(), self.MU)
        assert abs(gpc - gp.conjugate()) < 1e-12 * abs(gp)
        assert abs(gmc - gm.conjugate()) < 1e-12 * abs(gm)

    def test_asymptotic_path_agrees(self):
        s = complex(-0.5, 200.0)
        exact = gamma_factor(s, 5.0)
        asym = gamma_factor_asymptotic(-0.5, 200.0, 5.0)
        for e, a in zip(exact, asym):
            assert abs(a - e) < 1e-6 * abs(e)

    def test_envelope_constant_over_log_grid(self):
        mu = self.MU
        worst = 0.0
        for sigma in (-0.5, 0.0, 0.5):
            for tau in np.geomspace(2.0 * mu, 100.0 * mu, 7):
                gp, gm = gamma_factor(complex(sigma, tau), mu)
                env = ((tau + mu) * (tau - mu)) ** (sigma + 0.5)
                worst = max(worst, max(abs(gp), abs(gm)) / env)
        assert worst <= 10.0


class TestGammaFactorAsymptotic:
    def test_dominant_band_sigma_half(self):
        gp, gm = gamma_factor_asymptotic(-0.5, 100.0, 10.0)
        assert 0.1 <= max(abs(gp), abs(gm)) <= 10.0

    def test_envelope_ratio_sigma_zero(self):
        gp, gm = gamma_factor_asymptotic(0.0, 100.0, 10.0)
        ratio = max(abs(gp), abs(gm)) / math.sqrt(110.0 * 90.0)
        assert 0.05 <= ratio <= 20.0

    def test_mu_zero_collapse(self):
        exact = gamma_factor(complex(-0.5, 200.0), 0.0)
        asym = gamma_factor_asymptotic(-0.5, 200.0, 0.0)
        for e, a in zip(exact, asym):
            assert abs(a - e) < 1e-6 * abs(e)

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            gamma_factor_asymptotic(0.0, 10.0, 8.0)


class TestBessel:
    def test_j0_near_zero(self):
        assert abs(bessel_j(0.0, 1e-8) - 1.0) < 1e-12

    def test_j11_series_oracle(self):
        with mpmath.workdps(40):
            ref = float(mpmath.besselj(11, 1.0))
        assert abs(bessel_j(11.0, 1.0) - ref) < 1e-12 * abs(ref)

    def test_j1_first_zero(self):
        with mpmath.workdps(30):
            root = float(mpmath.findroot(lambda x: mpmath.besselj(1, x), 3.8317))
        assert abs(bessel_j(1.0, root)) < 1e-6

    def test_wronskian(self):
        # J_nu J'_{-nu} - J_{-nu} J'_nu = -2 sin(nu pi)/(pi x); the negative
        # order comes from the library backend, the positive from bessel_j
        nu, x, h = 1.0 / 3.0, 2.7, 1e-6
        dpos = (bessel_j(nu, x + h) - bessel_j(nu, x - h)) / (2.0 * h)
        dneg = (jv(-nu, x + h) - jv(-nu, x - h)) / (2.0 * h)
        w = bessel_j(nu, x) * dneg - jv(-nu, x) * dpos
        target = -2.0 * math.sin(nu * math.pi) / (math.pi * x)
        assert abs(w - target) < 1e-8 * abs(target)

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            bessel_j(0.0, -1.0)
        with pytest.raises(DomainError):
            bessel_j(-1.0, 1.0)


class TestBesselComboMaass:
    def test_small_mu_limit_k0(self):
        with mpmath.workdps(30):
            k0 = float(mpmath.besselk(0, 1.0))
        _, second = bessel_combo_maass(1e-6, 1.0)
        assert abs(second - 4.0 * k0) < 1e-5 * abs(4.0 * k0)

    def test_components_real(self):
        first, second = bessel_combo_maass(1.7, 3.0)
        assert isinstance(first, float) and isinstance(second, float)

    def test_large_argument_asymptotic(self):
        _, second = bessel_combo_maass(1.0, 100.0)
        target = 4.0 * math.cosh(math.pi) * math.sqrt(math.pi / 200.0) * math.exp(-100.0)
        assert abs(second - target) < 1e-3 * abs(target)

    @settings(max_examples=10, deadline=None)
    @given(mu=st.floats(0.2, 4.0), x=st.floats(0.5, 20.0))
    def test_second_component_positive(self, mu, x):
        _, second = bessel_combo_maass(mu, x)
        assert second > 0.0


class TestZetaLine:
    def test_basel(self):
        assert abs(zeta_line(2.0) - math.pi**2 / 6.0) < 1e-12

    def test_critical_line_oracle(self):
        for s in (1.0 + 10.0j, 0.9 + 0.0j, 2.0 + 3.0j, 0.8 + 100.0j):
            with mpmath.workdps(30):
                ref = complex(mpmath.zeta(s))
            assert abs(zeta_line(s) - ref) < 1e-10 * abs(ref)

    def test_continuation_sign(self):
        v = zeta_line(0.9)
        assert abs(v.imag) < 1e-12 and v.real < 0.0

    def test_pole_and_domain(self):
        with pytest.raises(PoleError):
            zeta_line(1.0)
        with pytest.raises(DomainError):
            zeta_line(0.5 + 3.0j)
