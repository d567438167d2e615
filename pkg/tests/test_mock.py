import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from appell_lab.automorphy import GENERATORS, S
from appell_lab.mock import (
    Grid,
    QuadratureParams,
    completed_mu,
    dbar_R,
    dolbeault_residual,
    jacobi_cocycle,
    kappa_completion_check,
    mordell_h,
    mordell_h_estimate,
    n_section,
    s_section_check,
    smooth_splitting_check,
    zwegers_R,
    zwegers_mu,
)
from appell_lab.mock import calibrate_s_section, dbar_fd
from appell_lab.qseries import TauPoint
from appell_lab.sampling import make_rng, random_jacobi_point

TAUS = [TauPoint(1j), TauPoint(0.3 + 0.8j), TauPoint(-0.4 + 1.5j)]


def h_oracle(z, tau):
    def integrand(t, part):
        # 1 / cosh(pi t) = 2 e^{-pi |t|} / (1 + e^{-2 pi |t|}), which does not overflow
        a = abs(t)
        v = 2 * cmath.exp(1j * math.pi * tau * t * t - 2 * math.pi * z * t - math.pi * a) / (1 + math.exp(-2 * math.pi * a))
        return v.real if part == 0 else v.imag

    re = quad(integrand, -40, 40, args=(0,), epsabs=1e-13, limit=400)[0]
    im = quad(integrand, -40, 40, args=(1,), epsabs=1e-13, limit=400)[0]
    return re + 1j * im


@pytest.fixture(scope="module")
def points():
    rng = make_rng(5, 0)
    return [random_jacobi_point(rng) for _ in range(6)]


class TestMordell:
    @pytest.mark.parametrize("tau", TAUS, ids=str)
    @pytest.mark.parametrize("z", [0, 0.2 + 0.1j, -0.3 - 0.2j])
    def test_against_adaptive_quadrature(self, tau, z):
        assert abs(mordell_h(z, tau) - h_oracle(z, tau.tau)) < 1e-9

    @pytest.mark.parametrize("tau", TAUS, ids=str)
    def test_shift_by_one(self, tau):
        z, t = 0.7 - 0.2j, tau.tau
        rhs = 2 / cmath.sqrt(-1j * t) * cmath.exp(1j * math.pi * (z + 0.5) ** 2 / t)
        assert abs(mordell_h(z, tau) + mordell_h(z + 1, tau) - rhs) < 1e-9 * max(1, abs(rhs))

    @pytest.mark.parametrize("tau", TAUS, ids=str)
    def test_shift_by_tau(self, tau):
        z, t = 0.1 + 0.05j, tau.tau
        lhs = mordell_h(z, tau) + cmath.exp(-2j * math.pi * z - 1j * math.pi * t) * mordell_h(z + t, tau)
        rhs = 2 * cmath.exp(-1j * math.pi * z - 1j * math.pi * t / 4)
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)

    def test_even(self):
        assert abs(mordell_h(0.3 + 0.2j, TAUS[1]) - mordell_h(-0.3 - 0.2j, TAUS[1])) < 1e-12

    def test_value_at_origin(self):
        h0 = mordell_h(0, TAUS[0])
        assert abs(h0.imag) < 1e-14 and 0 < h0.real < 1

    def test_error_estimate_covers_oracle(self):
        coarse = QuadratureParams(half_width=4.0, step=0.25, tol=1e-2)
        est = mordell_h_estimate(0.2, TAUS[1], coarse)
        assert abs(est.value - h_oracle(0.2, TAUS[1].tau)) < max(est.error, 1e-12) * 10


class TestMuAndR:
    def test_mu_symmetric(self, points):
        for p in points:
            a, b = zwegers_mu(p.u, p.v, p.tau), zwegers_mu(p.v, p.u, p.tau)
            assert abs(a - b) < 1e-10 * abs(a)

    def test_mu_integer_shift(self, points):
        for p in points:
            assert abs(zwegers_mu(p.u + 1, p.v, p.tau) + zwegers_mu(p.u, p.v, p.tau)) < 1e-10

    def test_R_even(self):
        tau = TAUS[1]
        for u in (0.1 + 0.2j, -0.3 + 0.05j):
            assert abs(zwegers_R(-u, tau) - zwegers_R(u, tau)) < 1e-12

    def test_R_elliptic_shift(self):
        # R(u + 1) = -R(u)
        tau = TAUS[2]
        u = 0.2 - 0.1j
        assert abs(zwegers_R(u + 1, tau) + zwegers_R(u, tau)) < 1e-12

    def test_dbar_R_matches_finite_differences(self):
        tau, u = TAUS[1], 0.15 + 0.1j
        fd = dbar_fd(lambda du: zwegers_R(u + du, tau), 0j, 1e-4)
        assert abs(fd - dbar_R(u, tau)) < 1e-6 * max(1, abs(fd))

    def test_dolbeault_residual_small(self):
        tau, v = TAUS[0], 0.1 - 0.2j
        rep = dolbeault_residual(lambda u: 0.5j * zwegers_R(u - v, tau), lambda u: 0.5j * dbar_R(u - v, tau),
                                 Grid(0.3 + 0.1j, 1e-3, 2), 1e-4)
        assert rep.passed

    def test_completed_mu_symmetric(self, points):
        for p in points:
            a, b = completed_mu(p.u, p.v, p.tau), completed_mu(p.v, p.u, p.tau)
            assert abs(a - b) < 1e-10 * abs(a)


class TestCompletion:
    def test_mu_tilde_scalar_laws(self, points):
        reps = smooth_splitting_check(points, tol=1e-6)
        assert sorted(r.law.split()[-1] for r in reps) == ["S", "T", "sx", "tx"]
        assert all(r.passed for r in reps), [(r.law, r.max_residual) for r in reps]

    def test_ablation_fails(self, points):
        reps = smooth_splitting_check(points, tol=1e-6, ablate_R=True)
        assert max(r.max_residual for r in reps) > 1e-2

    def test_kappa_completion_laws(self, points):
        zeta = calibrate_s_section(n_section, points[0]).zeta
        reps = kappa_completion_check(points, zeta=zeta)
        assert all(r.passed for r in reps), [(r.law, r.max_residual) for r in reps]

    def test_n_section_under_s(self, points):
        rep = s_section_check(lambda p: n_section(p), points, 1e-6)
        assert rep.passed, rep.max_residual

    def test_jacobi_cocycle_closes_on_s_s(self, points):
        from appell_lab.automorphy import check_cocycle

        zeta = calibrate_s_section(n_section, points[0]).zeta
        assert check_cocycle(jacobi_cocycle(zeta), S, S, points, 1e-6).passed
        assert check_cocycle(jacobi_cocycle(zeta), GENERATORS["tx"], S, points, 1e-6).passed
