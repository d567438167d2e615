"""Theta q-series, the Appell-Lerch numerator and the Appell-Lerch sum kappa.

Conventions::

    theta(x; q)   = sum_n q^{n(n-1)/2} (-x)^n
    A(x, y; q)    = sum_n q^{n(n-1)/2} (-x)^n / (q^n - y)
    kappa(x, y)   = A(x, y) / theta(x)

with x = e^{2 pi i u}, y = e^{2 pi i v}, q = e^{2 pi i tau}, Im tau > 0.
The series are summed over |n| <= n_max; each value comes with an
a-posteriori bound on the omitted tail and a :class:`TruncationError` is
raised when that bound exceeds ``Truncation.tol``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from . import kernels
from .errors import (
    DomainError,
    NonFiniteInputError,
    PoleProximityError,
    ThetaZeroError,
    TruncationError,
)

TWO_PI_I = 2j * math.pi

#: default relative exclusion radii around poles (in y) and theta zeros (in x)
POLE_RADIUS = 1e-8
ZERO_RADIUS = 1e-8


def _check_finite(*values):
    for val in values:
        if not cmath.isfinite(val):
            raise NonFiniteInputError(f"nonfinite input {val!r}")


@dataclass(frozen=True)
class TauPoint:
    """Modular parameter tau in the upper half plane and its nome q."""

    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        _check_finite(tau)
        if tau.imag <= 0:
            raise DomainError(f"Im tau must be positive, got {tau!r}")
        object.__setattr__(self, "tau", tau)

    @property
    def q(self) -> complex:
        return cmath.exp(TWO_PI_I * self.tau)

    @classmethod
    def from_q(cls, q: complex) -> "TauPoint":
        q = complex(q)
        _check_finite(q)
        if not 0 < abs(q) < 1:
            raise DomainError(f"need 0 < |q| < 1, got {q!r}")
        return cls(cmath.log(q) / TWO_PI_I)


@dataclass(frozen=True)
class JacobiPoint:
    """A point (u, v; tau) with multiplicative coordinates x, y."""

    u: complex
    v: complex
    tau: TauPoint

    def __post_init__(self):
        u, v = complex(self.u), complex(self.v)
        _check_finite(u, v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if not isinstance(self.tau, TauPoint):
            object.__setattr__(self, "tau", TauPoint(self.tau))

    @property
    def x(self) -> complex:
        return cmath.exp(TWO_PI_I * self.u)

    @property
    def y(self) -> complex:
        return cmath.exp(TWO_PI_I * self.v)

    @classmethod
    def from_xy(cls, x: complex, y: complex, tau: TauPoint) -> "JacobiPoint":
        _check_finite(x, y)
        if x == 0 or y == 0:
            raise DomainError("x and y must be nonzero")
        return cls(cmath.log(x) / TWO_PI_I, cmath.log(y) / TWO_PI_I, tau)


@dataclass(frozen=True)
class Truncation:
    """Summation bound |n| <= n_max and the target absolute tail error."""

    n_max: int = 80
    tol: float = 1e-13

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")


DEFAULT_TRUNCATION = Truncation()


class Estimate(NamedTuple):
    value: complex
    error: float


def _as_tau(tau) -> TauPoint:
    return tau if isinstance(tau, TauPoint) else TauPoint(tau)


def _log_nonzero(x: complex) -> complex:
    x = complex(x)
    _check_finite(x)
    if x == 0:
        raise DomainError("argument must be nonzero")
    return cmath.log(x)


def lattice_distance(w: complex, tau: TauPoint) -> tuple[int, float]:
    """Nearest n and relative distance |e^{2 pi i w} - q^n| / |q^n|.

    ``w`` is an additive coordinate (x = e^{2 pi i w}); the distance is
    measured to the closest point of q^Z.
    """
    t = tau.tau
    n0 = round(w.imag / t.imag)
    best_n, best = n0, math.inf
    for n in (n0 - 1, n0, n0 + 1):
        d = w - n * t
        d -= round(d.real)
        rel = abs(cmath.exp(TWO_PI_I * d) - 1.0)
        if rel < best:
            best_n, best = n, rel
    return best_n, best


def _check_theta_zero(lx: complex, tau: TauPoint, radius: float, what: str = "x"):
    n, rel = lattice_distance(lx / TWO_PI_I, tau)
    if rel <= radius:
        raise ThetaZeroError(
            f"{what} lies within relative radius {radius:g} of the theta zero q^{n} "
            f"(relative distance {rel:.3g})"
        )


def _check_pole(y: complex, tau: TauPoint, radius: float):
    if y == 0:
        return
    n, rel = lattice_distance(cmath.log(y) / TWO_PI_I, tau)
    if rel <= radius:
        raise PoleProximityError(
            f"y lies within relative radius {radius:g} of the pole q^{n} "
            f"(relative distance {rel:.3g})"
        )


def _checked(est: Estimate, trunc: Truncation, what: str) -> Estimate:
    if not est.error <= trunc.tol:
        raise TruncationError(
            f"{what}: tail bound {est.error:.3g} exceeds tol {trunc.tol:g} at n_max={trunc.n_max}"
        )
    return est


def theta_log_estimate(lx: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION, deriv: int = 0) -> Estimate:
    """theta at x = e^{lx}; ``deriv`` > 0 weights the n-th term by n**deriv."""
    tau = _as_tau(tau)
    value, tail = kernels.theta_sum(tau.tau, complex(lx), int(trunc.n_max), int(deriv))
    return _checked(Estimate(value, tail), trunc, "theta")


def theta_estimate(x: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> Estimate:
    return theta_log_estimate(_log_nonzero(x), tau, trunc)


def theta(x: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Odd theta function sum_n q^{n(n-1)/2} (-x)^n.

    >>> round(theta(2, TauPoint.from_q(0.1)).real, 7)
    -0.6577342
    """
    return theta_estimate(x, tau, trunc).value


def theta_at(z: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """theta(e^{2 pi i z}; tau) from the additive coordinate z."""
    return theta_log_estimate(TWO_PI_I * complex(z), tau, trunc).value


def theta_coefficient(n: int, tau) -> complex:
    """Laurent coefficient (-1)^n q^{n(n-1)/2} of theta."""
    tau = _as_tau(tau)
    sign = -1.0 if n % 2 else 1.0
    return sign * cmath.exp(1j * math.pi * tau.tau * n * (n - 1))


def theta_product_oracle(x: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Triple-product evaluation of theta, independent of the series kernel.

    prod_{k>=1} (1 - q^k) * prod_{k>=0} (1 - x q^k) * prod_{k>=1} (1 - q^k / x),
    stopped once the remaining factors can change the value by less than tol.
    """
    tau = _as_tau(tau)
    x = complex(x)
    _check_finite(x)
    if x == 0:
        raise DomainError("x must be nonzero")
    q = tau.q
    aq = abs(q)
    spread = 1.0 + abs(x) + 1.0 / abs(x)
    prod = 1.0 - x
    qk = 1.0 + 0j
    for k in range(1, 10_000):
        qk *= q
        prod *= (1.0 - qk) * (1.0 - x * qk) * (1.0 - qk / x)
        rest = spread * aq ** (k + 1) / (1.0 - aq)
        if rest < 0.5 and abs(prod) * math.expm1(rest) < trunc.tol * 1e-3:
            return prod
        if prod == 0:
            return prod
    raise TruncationError("product oracle did not converge")


def appell_numerator_estimate(
    x: complex,
    y: complex,
    tau,
    trunc: Truncation = DEFAULT_TRUNCATION,
    pole_radius: float = POLE_RADIUS,
    *,
    lx: complex | None = None,
) -> Estimate:
    tau = _as_tau(tau)
    y = complex(y)
    _check_finite(y)
    if lx is None:
        lx = _log_nonzero(x)
    _check_pole(y, tau, pole_radius)
    value, tail = kernels.appell_sum(tau.tau, complex(lx), y, int(trunc.n_max), float(pole_radius))
    return _checked(Estimate(value, tail), trunc, "appell_numerator")


def appell_numerator(
    x: complex, y: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION, pole_radius: float = POLE_RADIUS
) -> complex:
    """A(x, y) = sum_n q^{n(n-1)/2} (-x)^n / (q^n - y).

    y = 0 is admitted (A(x, 0) = theta(x / q)).  Raises
    :class:`PoleProximityError` when y is within ``pole_radius`` (relative)
    of any q^n.
    """
    return appell_numerator_estimate(x, y, tau, trunc, pole_radius).value


def kappa_estimate(
    x: complex,
    y: complex,
    tau,
    trunc: Truncation = DEFAULT_TRUNCATION,
    pole_radius: float = POLE_RADIUS,
    zero_radius: float = ZERO_RADIUS,
    *,
    lx: complex | None = None,
) -> Estimate:
    tau = _as_tau(tau)
    if lx is None:
        lx = _log_nonzero(x)
    _check_theta_zero(lx, tau, zero_radius)
    th = theta_log_estimate(lx, tau, trunc)
    num = appell_numerator_estimate(None, y, tau, trunc, pole_radius, lx=lx)
    value = num.value / th.value
    error = (num.error + abs(value) * th.error) / abs(th.value)
    return Estimate(value, error)


def kappa(
    x: complex,
    y: complex,
    tau,
    trunc: Truncation = DEFAULT_TRUNCATION,
    pole_radius: float = POLE_RADIUS,
    zero_radius: float = ZERO_RADIUS,
) -> complex:
    """Appell-Lerch sum kappa(x, y; q) = A(x, y) / theta(x).

    >>> abs(kappa(2, 0, TauPoint.from_q(0.1)) + 20) < 1e-12   # closed form -x/q
    True
    """
    return kappa_estimate(x, y, tau, trunc, pole_radius, zero_radius).value


def kappa_point(p: JacobiPoint, trunc: Truncation = DEFAULT_TRUNCATION, **radii) -> complex:
    """kappa at a :class:`JacobiPoint`, using its additive coordinates."""
    return kappa_estimate(None, p.y, p.tau, trunc, lx=TWO_PI_I * p.u, **radii).value


def kappa_residue_y(
    n: int, x: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION, zero_radius: float = ZERO_RADIUS
) -> complex:
    """Residue of kappa(x, .) at the simple pole y = q^n."""
    tau = _as_tau(tau)
    lx = _log_nonzero(x)
    _check_theta_zero(lx, tau, zero_radius)
    th = theta_log_estimate(lx, tau, trunc).value
    return -theta_coefficient(n, tau) * cmath.exp(n * lx) / th
