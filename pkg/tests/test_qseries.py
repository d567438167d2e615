import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from appell_lab.errors import DomainError, NonFiniteInputError, PoleProximityError, ThetaZeroError
from appell_lab.qseries import (
    TauPoint,
    Truncation,
    kappa,
    kappa_estimate,
    kappa_residue_y,
    theta,
    theta_coefficient,
    theta_estimate,
    theta_product_oracle,
)
from appell_lab.sampling import make_rng, random_tau, random_x


def brute_theta(x, q, n=60):
    return sum(q ** (k * (k - 1) / 2) * (-x) ** k for k in range(-n, n + 1))


def brute_appell(x, y, q, n=60):
    return sum(q ** (k * (k - 1) / 2) * (-x) ** k / (q ** k - y) for k in range(-n, n + 1))


class TestTauPoint:
    def test_from_q_round_trip(self):
        t = TauPoint.from_q(0.3 + 0.1j)
        assert abs(t.q - (0.3 + 0.1j)) < 1e-15

    @pytest.mark.parametrize("q", [0, 1.0, 1.5, -2j])
    def test_rejects_outside_disc(self, q):
        with pytest.raises(DomainError):
            TauPoint.from_q(q)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(DomainError):
            TauPoint(-1j)

    def test_rejects_nan(self):
        with pytest.raises((NonFiniteInputError, DomainError)):
            TauPoint(complex(math.nan, 1))


class TestTheta:
    def test_matches_brute_force(self, tau):
        for x in (0.7, 2.3 - 0.4j, -3.1j):
            assert abs(theta(x, tau) - brute_theta(x, tau.q)) < 1e-12 * max(1, abs(brute_theta(x, tau.q)))

    def test_vanishes_at_one(self, tau):
        assert abs(theta(1, tau)) < 1e-12

    def test_vanishes_on_q_powers(self, tau):
        for k in (-2, -1, 1, 2):
            x = tau.q ** k
            scale = sum(abs(tau.q) ** (n * (n - 1) / 2) * abs(x) ** n for n in range(-40, 41))
            assert abs(theta(x, tau)) < 1e-12 * scale

    def test_quasi_periodicity(self, tau):
        for x in (0.8 + 0.3j, 4.0, -0.2j):
            assert abs(theta(tau.q * x, tau) + theta(x, tau) / x) < 1e-12 * abs(theta(x, tau) / x)

    def test_inversion(self, tau):
        # theta(1/x) = -theta(x) / x
        x = 1.7 + 0.6j
        assert abs(theta(1 / x, tau) + theta(x, tau) / x) < 1e-12

    def test_product_oracle(self, tau):
        for x in (0.5 + 0.5j, 3.0, -1.2):
            ref = theta_product_oracle(x, tau)
            assert abs(theta(x, tau) - ref) < 1e-11 * max(1.0, abs(ref))

    def test_coefficients(self, tau):
        assert theta_coefficient(0, tau) == 1
        assert abs(theta_coefficient(1, tau) + 1) < 1e-15
        assert abs(theta_coefficient(3, tau) + tau.q ** 3) < 1e-15

    def test_estimate_error_bounds_truncation(self, tau):
        x = 1.3 + 0.2j
        coarse = theta_estimate(x, tau, Truncation(n_max=4, tol=1.0))
        assert abs(coarse.value - theta(x, tau)) <= coarse.error + 1e-15

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**31), st.integers(0, 50))
    def test_quasi_periodicity_property(self, seed, stream):
        rng = make_rng(seed, stream)
        t, x = random_tau(rng), random_x(rng)
        lhs = theta(t.q * x, t) + theta(x, t) / x
        assert abs(lhs) < 1e-10 * max(1.0, abs(theta(x, t) / x))


class TestKappa:
    def test_closed_form_at_y_zero(self, tau):
        for x in (2.0, 0.4 + 0.9j):
            assert abs(kappa(x, 0, tau) + x / tau.q) < 1e-10 * abs(x / tau.q)

    def test_cli_example(self):
        assert abs(kappa(2, 0, TauPoint.from_q(0.1)) + 20) < 1e-12

    def test_y_translation_example(self):
        tau = TauPoint.from_q(0.1)
        lhs = kappa(2, 0.1 * 0.3, tau)
        assert abs(lhs - (-(2 * 0.3 / 0.1) * kappa(2, 0.3, tau) - 2 / 0.1)) < 1e-10 * abs(lhs)

    def test_matches_brute_force(self, tau):
        x, y = 1.4 + 0.3j, 0.55 - 0.2j
        ref = brute_appell(x, y, tau.q) / brute_theta(x, tau.q)
        assert abs(kappa(x, y, tau) - ref) < 1e-11 * abs(ref)

    def test_x_translation(self, tau):
        # kappa(qx, y) = -x y kappa(x, y) - x
        x, y = 0.9 + 0.4j, 0.3 + 0.1j
        q = tau.q
        assert abs(kappa(q * x, y, tau) - (-x * y * kappa(x, y, tau) - x)) < 1e-10

    def test_y_translation(self, tau):
        # kappa(x, qy) = -(x / q) (1 + y kappa(x, y))
        x, y = 1.9 - 0.4j, 0.45 + 0.2j
        expected = -(x / tau.q) * (1 + y * kappa(x, y, tau))
        assert abs(kappa(x, tau.q * y, tau) - expected) < 1e-10 * abs(expected)

    def test_residue_in_y(self, tau):
        x, n = 1.3 + 0.2j, 1
        y0 = tau.q ** n
        r = 1e-4 * abs(y0)
        w = r * np.exp(2j * np.pi * np.arange(64) / 64)
        avg = np.mean([wk * kappa(x, y0 + wk, tau) for wk in w])
        assert abs(avg - kappa_residue_y(n, x, tau)) < 1e-8 * abs(avg)

    def test_pole_rejected(self, tau):
        with pytest.raises(PoleProximityError) as info:
            kappa(1.3, tau.q ** 2, tau)
        assert info.value.rule == "pole-exclusion"

    def test_theta_zero_rejected(self):
        with pytest.raises(ThetaZeroError) as info:
            kappa(1, 0.3, TauPoint.from_q(0.1))
        assert info.value.rule == "theta-zero-exclusion"

    def test_estimate_reports_error(self, tau):
        est = kappa_estimate(1.1 + 0.5j, 0.3, tau)
        assert est.error >= 0 and math.isfinite(est.error)
        assert cmath.isfinite(est.value)
