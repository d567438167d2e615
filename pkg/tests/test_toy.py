import cmath
import math

import pytest

from appell_lab.errors import InconsistentIncrementError
from appell_lab.mock import Grid, cocycle_from_antiderivative, dolbeault_residual
from appell_lab.sampling import make_rng
from appell_lab.toy import (
    ToyLattice,
    contour_residue,
    invariance_check,
    normalized_s,
    quasi_periods,
    random_toy_points,
    shift_action,
    toy_F,
    toy_lambda,
    zeta_raw,
)

LATTICES = [ToyLattice(1j), ToyLattice(2j), ToyLattice(0.3 + 0.8j)]


@pytest.fixture(params=LATTICES, ids=lambda lat: f"tau={lat.tau.tau}")
def lattice(request):
    return request.param


@pytest.fixture
def pts(lattice):
    return random_toy_points(make_rng(9, 1), lattice, 12)


class TestWeierstrassZeta:
    def test_square_lattice_quasi_period(self):
        # for tau = i the quasi-period eta_1 = zeta(z + 1) - zeta(z) equals pi
        qp = quasi_periods(LATTICES[0])
        assert abs(qp.p1 - math.pi) < 1e-10

    def test_legendre_relation(self, lattice):
        qp = quasi_periods(lattice)
        assert abs(qp.legendre(lattice.tau.tau) - 2j * math.pi) < 1e-9

    def test_odd(self, lattice, pts):
        for z in pts:
            assert abs(zeta_raw(z, lattice) + zeta_raw(-z, lattice)) < 1e-9

    def test_residue_one_at_lattice_points(self, lattice):
        for w in (0, 1, lattice.tau.tau, 1 + lattice.tau.tau):
            assert abs(contour_residue(lambda z: zeta_raw(z, lattice), w) - 1) < 1e-10

    def test_increments_constant_over_twenty_points(self, lattice):
        tau = lattice.tau.tau
        zs = random_toy_points(make_rng(9, 2), lattice, 20)
        d1 = [zeta_raw(z + 1, lattice) - zeta_raw(z, lattice) for z in zs]
        d2 = [zeta_raw(z + tau, lattice) - zeta_raw(z, lattice) for z in zs]
        assert max(abs(d - d1[0]) for d in d1) < 1e-10
        assert max(abs(d - d2[0]) for d in d2) < 1e-10

    def test_quasi_periods_depend_on_tau(self):
        assert abs(quasi_periods(LATTICES[0]).p1 - quasi_periods(LATTICES[1]).p1) > 1e-3

    def test_inconsistent_increments_detected(self, lattice):
        with pytest.raises(InconsistentIncrementError):
            quasi_periods(lattice, tol=1e-30)


class TestSplitting:
    def test_s_increments(self, lattice, pts):
        qp = quasi_periods(lattice)
        tau = lattice.tau.tau
        for z in pts[:4]:
            s0 = normalized_s(z, lattice, qp=qp)
            assert abs(normalized_s(z + 1, lattice, qp=qp) - s0) < 1e-10
            assert abs(normalized_s(z + tau, lattice, qp=qp) - s0 - 1) < 1e-10

    def test_s_plus_F_doubly_periodic(self, lattice, pts):
        assert invariance_check(pts, lattice, 1e-9).passed

    def test_dropping_F_breaks_periodicity(self, lattice, pts):
        rep = invariance_check(pts, lattice, 1e-9, with_F=False)
        assert not rep.passed and rep.extra["shift_tau"] > 0.1

    def test_rescaled_s_breaks_periodicity(self, lattice, pts):
        assert not invariance_check(pts, lattice, 1e-9, s_scale=1.1).passed

    def test_dbar_F_is_lambda(self, lattice, pts):
        rep = dolbeault_residual(lambda z: toy_F(z, lattice), lambda z: toy_lambda(lattice), Grid(pts[0], 1e-3, 2),
                                 1e-10)
        assert rep.passed

    def test_F_is_minus_im_ratio(self, lattice):
        z = 0.3 + 0.7j
        assert abs(toy_F(z, lattice) + z.imag / lattice.t) < 1e-15

    @pytest.mark.parametrize("g, expected", [((1, 0), 0.0), ((0, 1), 1.0), ((2, -1), -1.0)])
    def test_cocycle_from_antiderivative(self, lattice, pts, g, expected):
        rep = cocycle_from_antiderivative(lambda z: toy_F(z, lattice), lambda g, z: 1.0, g, pts, 1e-12, expected,
                                          lambda g, z: shift_action(g, z, lattice))
        assert rep.passed, rep.max_residual
