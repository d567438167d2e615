"""The elliptic-curve toy model: Weierstrass zeta, its quasi-periods, and s + F.

On E = C / (Z + tau Z) the logarithmic derivative of theta,
L(z) = d/dz log theta(e^{2 pi i z}; tau), is meromorphic with simple
poles of residue 1 on the lattice.  Its Laurent expansion at 0 is
1/z + c0 + c1 z + O(z^2); c0 and c1 are measured by contour averages and
removed, which gives the Weierstrass normalization

    zeta_raw(z) = L(z) - c0 - c1 z = 1/z + O(z^3)

(odd, with constant increments p1, p2 under z -> z + 1 and z -> z + tau).  The normalized
splitting s = (zeta_raw - p1 z) / (p2 - p1 tau) has increments 0 and 1,
and F(z) = (conj(z) - z) / (2 i Im tau) has increments 0 and -1, so s + F
is doubly periodic.  Im tau is called ``t`` here to keep it apart from the
multiplicative coordinate y elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .automorphy import CheckReport, report_from_residuals, scaled
from .errors import EvaluationError, InconsistentIncrementError
from .qseries import (
    DEFAULT_TRUNCATION,
    ZERO_RADIUS,
    TauPoint,
    Truncation,
    _as_tau,
    _check_theta_zero,
    theta_log_estimate,
)

TWO_PI_I = 2j * math.pi
#: fixed base points (in units of the periods) for measuring increments
BASE_POINTS = ((0.13, 0.21), (0.37, -0.29), (-0.41, 0.07), (0.05, 0.44), (-0.23, -0.36))


@dataclass(frozen=True)
class ToyLattice:
    """The lattice Z + tau Z."""

    tau: TauPoint

    def __post_init__(self):
        object.__setattr__(self, "tau", _as_tau(self.tau))

    @property
    def t(self) -> float:
        return self.tau.tau.imag

    def point(self, a: float, b: float) -> complex:
        return a + b * self.tau.tau


@dataclass(frozen=True)
class QuasiPeriods:
    p1: complex
    p2: complex
    spread: float

    def legendre(self, tau: complex) -> complex:
        """p1 tau - p2; its modulus is 2 pi and (p1 tau - p2) / 2 pi records the orientation."""
        return self.p1 * tau - self.p2

    def legendre_residual(self, tau: complex) -> float:
        return abs(abs(self.legendre(tau)) - 2 * math.pi)


def log_derivative(z: complex, lattice: ToyLattice, trunc: Truncation = DEFAULT_TRUNCATION,
                   zero_radius: float = ZERO_RADIUS) -> complex:
    """d/dz log theta(e^{2 pi i z}) = 2 pi i x theta'(x) / theta(x)."""
    lz = TWO_PI_I * complex(z)
    _check_theta_zero(lz, lattice.tau, zero_radius, "e^{2 pi i z}")
    th = theta_log_estimate(lz, lattice.tau, trunc)
    dth = theta_log_estimate(lz, lattice.tau, trunc, deriv=1)
    return TWO_PI_I * dth.value / th.value


@lru_cache(maxsize=64)
def _laurent_gauge(tau: complex, n_max: int, tol: float) -> tuple[complex, complex]:
    lattice = ToyLattice(TauPoint(tau))
    trunc = Truncation(n_max, tol)
    # stay well inside the disc free of other lattice points
    nearest = min(abs(m + n * tau) for m in range(-2, 3) for n in range(-2, 3) if (m, n) != (0, 0))
    r = 0.4 * nearest
    w = r * np.exp(2j * math.pi * np.arange(64) / 64)
    vals = np.array([log_derivative(wk, lattice, trunc) for wk in w])
    c0 = complex(np.mean(vals))
    c1 = complex(np.mean(vals / w))
    return c0, c1


def laurent_gauge(lattice: ToyLattice, trunc: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex]:
    """Measured (c0, c1) in log_derivative(z) = 1/z + c0 + c1 z + O(z^2)."""
    return _laurent_gauge(lattice.tau.tau, int(trunc.n_max), float(trunc.tol))


def zeta_raw(z: complex, lattice: ToyLattice, trunc: Truncation = DEFAULT_TRUNCATION,
             zero_radius: float = ZERO_RADIUS) -> complex:
    """Weierstrass zeta: the theta log-derivative minus its measured c0 + c1 z."""
    c0, c1 = laurent_gauge(lattice, trunc)
    return log_derivative(z, lattice, trunc, zero_radius) - c0 - c1 * complex(z)


def quasi_periods(lattice: ToyLattice, trunc: Truncation = DEFAULT_TRUNCATION, tol: float = 1e-10,
                  base_points=BASE_POINTS) -> QuasiPeriods:
    """Measure the increments of zeta_raw at several base points and average."""
    tau = lattice.tau.tau
    inc1, inc2 = [], []
    for a, b in base_points:
        z = lattice.point(a, b)
        zz = zeta_raw(z, lattice, trunc)
        inc1.append(zeta_raw(z + 1, lattice, trunc) - zz)
        inc2.append(zeta_raw(z + tau, lattice, trunc) - zz)
    inc1, inc2 = np.array(inc1), np.array(inc2)
    p1, p2 = complex(inc1.mean()), complex(inc2.mean())
    spread = float(max(np.abs(inc1 - p1).max(), np.abs(inc2 - p2).max()))
    if spread > tol:
        raise InconsistentIncrementError(f"increments vary by {spread:.3g} across base points (tol {tol:g})")
    return QuasiPeriods(p1, p2, spread)


def normalized_s(z: complex, lattice: ToyLattice, trunc: Truncation = DEFAULT_TRUNCATION,
                 qp: QuasiPeriods | None = None) -> complex:
    """s(z) = (zeta_raw(z) - p1 z) / (p2 - p1 tau); increments 0 under 1 and 1 under tau."""
    qp = qp or quasi_periods(lattice, trunc)
    denom = qp.p2 - qp.p1 * lattice.tau.tau
    if abs(denom) < 1e-300:
        raise EvaluationError("degenerate quasi-period normalization")
    return (zeta_raw(z, lattice, trunc) - qp.p1 * z) / denom


def toy_F(z: complex, lattice: ToyLattice) -> complex:
    """F(z) = (conj(z) - z) / (2 i Im tau) = -Im z / Im tau."""
    z = complex(z)
    return (z.conjugate() - z) / (2j * lattice.t)


def toy_lambda(lattice: ToyLattice) -> complex:
    """The dz-bar coefficient 1 / (2 i Im tau) of the Dolbeault representative."""
    return 1.0 / (2j * lattice.t)


def contour_residue(f, z0: complex, radius: float = 1e-3, n: int = 64) -> complex:
    """(1 / 2 pi i) of the integral of f around |z - z0| = radius, by the trapezoid rule."""
    w = radius * np.exp(2j * math.pi * np.arange(n) / n)
    return complex(np.mean([wk * f(z0 + wk) for wk in w]))


def invariance_check(points, lattice: ToyLattice, tol: float = 1e-9, trunc: Truncation = DEFAULT_TRUNCATION,
                     with_F: bool = True, s_scale: float = 1.0) -> CheckReport:
    """Residuals of (s + F)(z + 1) - (s + F)(z) and (s + F)(z + tau) - (s + F)(z).

    ``with_F=False`` drops F and ``s_scale`` rescales s; both are ablations.
    """
    qp = quasi_periods(lattice, trunc)
    tau = lattice.tau.tau

    def f(z):
        val = s_scale * normalized_s(z, lattice, trunc, qp)
        return val + toy_F(z, lattice) if with_F else val

    rows = []
    worst1 = worst2 = 0.0
    for z in points:
        try:
            fz = f(z)
            r1 = scaled(abs(f(z + 1) - fz), abs(fz))
            r2 = scaled(abs(f(z + tau) - fz), abs(fz))
            worst1, worst2 = max(worst1, r1), max(worst2, r2)
            rows.append((max(r1, r2), {"z": [complex(z).real, complex(z).imag], "shift_1": r1, "shift_tau": r2}))
        except EvaluationError as exc:
            rows.append((math.inf, {"z": [complex(z).real, complex(z).imag], "error": f"{exc.rule}: {exc}"}))
    extra = {"shift_1": worst1, "shift_tau": worst2, "p1": qp.p1, "p2": qp.p2,
             "legendre_orientation": qp.legendre(tau) / (2 * math.pi)}
    return report_from_residuals("toy invariance", rows, tol, extra)


def random_toy_points(rng, lattice: ToyLattice, n: int, margin: float = 0.05) -> list[complex]:
    """Points a + b tau with a, b uniform in [-1/2, 1/2), kept ``margin`` away from the lattice."""
    out = []
    while len(out) < n:
        a, b = rng.uniform(-0.5, 0.5, size=2)
        if math.hypot(a, b) > margin:
            out.append(lattice.point(a, b))
    return out


def shift_action(g, z: complex, lattice: ToyLattice) -> complex:
    """Z^2 acting on C by (m, n) . z = z + m + n tau."""
    m, n = g
    return complex(z) + m + n * lattice.tau.tau


__all__ = [
    "ToyLattice",
    "QuasiPeriods",
    "log_derivative",
    "laurent_gauge",
    "zeta_raw",
    "quasi_periods",
    "normalized_s",
    "toy_F",
    "toy_lambda",
    "contour_residue",
    "invariance_check",
    "random_toy_points",
    "shift_action",
]
