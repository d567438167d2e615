"""Mordell integral, Zwegers' mu and R, the completion, and the splitting checks.

Adopted definitions (Zwegers' thesis)::

    h(z; tau)     = int_R exp(pi i tau t^2 - 2 pi z t) / cosh(pi t) dt
    mu(u, v; tau) = e^{pi i u} / theta_J(v) * sum_n (-1)^n q^{n(n+1)/2} e^{2 pi i n v} / (1 - e^{2 pi i u} q^n)
    R(u; tau)     = sum_{nu in Z+1/2} {sgn(nu) - E((nu + Im u / Im tau) sqrt(2 Im tau))}
                    (-1)^{nu-1/2} e^{-pi i nu^2 tau - 2 pi i nu u}
    mu~           = mu + (i/2) R(u - v)

theta_J is the odd Jacobi theta function; it is related to this package's
theta by theta(e^{2 pi i z}) = i q^{-1/8} e^{pi i z} theta_J(z)
(:func:`appell_lab.automorphy.jacobi_gauge`).

kappa and mu are related by an elementary gauge.  With
N(u, v; tau) = mu(v, -u; tau),

    N = g(p) kappa + b(p),   g = -i e^{pi i (u+v)} q^{-1/8} y,   b = -i e^{pi i (u+v)} q^{-1/8},

so (kappa, 1) and (N, 1) are sections of the same extension in two
trivializations related by the matrix G(p) = [[g, b], [0, 1]].  In the
N-trivialization the S entry of the cocycle is exactly
N - j_S^{-1} N(S p) = (1/2i) h(u+v; tau).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .automorphy import (
    GENERATORS,
    S,
    CheckReport,
    JacobiGroupElement,
    MatrixCocycle,
    act,
    eval_j_theta,
    eval_j_theta_jacobi,
    jacobi_gauge,
    pmap,
    report_from_residuals,
    scaled,
)
from .errors import EvaluationError, NonFiniteInputError, QuadratureError
from .qseries import (
    DEFAULT_TRUNCATION,
    POLE_RADIUS,
    ZERO_RADIUS,
    Estimate,
    JacobiPoint,
    TauPoint,
    Truncation,
    _as_tau,
    _check_pole,
    _check_theta_zero,
    _checked,
    kappa_point,
    theta_log_estimate,
)

PI = math.pi
TWO_PI_I = 2j * PI
#: distance of the trapezoid contour to the nearest pole of 1/cosh(pi t), used in the step rule
_STRIP = 0.4


@dataclass(frozen=True)
class QuadratureParams:
    """Trapezoid rule on [-W, W] for the Mordell integral.

    ``half_width`` and ``step`` default to ``None``, meaning they are chosen
    per (z, tau) from the Gaussian tail and the strip of analyticity so
    that both error sources stay below ``tol / 10``.  Each refinement level
    halves the step.
    """

    half_width: float | None = None
    step: float | None = None
    refinement_levels: int = 2
    tol: float = 1e-12

    def __post_init__(self):
        for name in ("half_width", "step"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive, got {val!r}")
        if int(self.refinement_levels) != self.refinement_levels or self.refinement_levels < 1:
            raise ValueError("refinement_levels must be a positive integer")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def resolve(self, z: complex, tau: TauPoint) -> tuple[float, float, float]:
        """(half_width, step, tail bound) for this integrand."""
        a = PI * tau.tau.imag
        b = 2 * PI * abs(z.real)
        L = math.log(10.0 / self.tol) + math.log(2.0)
        W = self.half_width
        if W is None:
            W = (b + math.sqrt(b * b + 4 * a * L)) / (2 * a)
            W = max(W, 1.0)
        slope = 2 * a * W - b
        tail = math.inf if slope <= 0 else 4.0 * math.exp(-a * W * W + b * W - PI * W) / slope
        h = self.step
        if h is None:
            # trapezoid error ~ M exp(-2 pi d / h) for an integrand analytic in |Im t| < d;
            # M accounts for the growth of the integrand off the real axis
            log_m = 2 * PI * _STRIP * (abs(tau.tau.real) * W + abs(z.imag)) + PI * _STRIP**2 * tau.tau.imag
            peak = max(0.0, b * b / (4 * a))
            h = 2 * PI * _STRIP / (log_m + peak + math.log(10.0 / self.tol) + 5.0)
            h = min(h, 0.1)
        return W, h, tail


DEFAULT_QUADRATURE = QuadratureParams()


def _h_shift_term(w: complex, tau: complex) -> complex:
    """h(w) + h(w + 1) = 2 / sqrt(-i tau) e^{pi i (w + 1/2)^2 / tau}."""
    return 2.0 / cmath.sqrt(-1j * tau) * cmath.exp(1j * PI * (w + 0.5) ** 2 / tau)


def mordell_h_estimate(z: complex, tau, quad: QuadratureParams = DEFAULT_QUADRATURE) -> Estimate:
    """Mordell integral with an error estimate from successive step halving.

    The integrand peaks near e^{pi (Re z)^2 / Im tau}, so for |Re z| > 1/2
    the value is obtained from the reduced argument z - round(Re z) by
    the shift law h(w) + h(w + 1) = 2 / sqrt(-i tau) e^{pi i (w + 1/2)^2 / tau}.
    """
    tau = _as_tau(tau)
    z = complex(z)
    if not cmath.isfinite(z):
        raise NonFiniteInputError(f"nonfinite input {z!r}")
    k = round(z.real)
    if k == 0:
        return _mordell_direct(z, tau, quad)
    w = z - k
    value, error = _mordell_direct(w, tau, quad)
    t = tau.tau
    for _ in range(abs(k)):
        if k > 0:
            value = _h_shift_term(w, t) - value
            w += 1
        else:
            w -= 1
            value = _h_shift_term(w, t) - value
        error += 64 * np.finfo(float).eps * abs(value)
    return Estimate(value, float(error))


def _mordell_direct(z: complex, tau: TauPoint, quad: QuadratureParams) -> Estimate:
    W, h, tail = quad.resolve(z, tau)
    if not tail <= quad.tol:
        raise QuadratureError(f"tail bound {tail:.3g} at half-width {W:g} exceeds tol {quad.tol:g}")
    values = []
    step = h
    for _ in range(quad.refinement_levels + 1):
        values.append(kernels.mordell_trap(tau.tau, z, W, step))
        step /= 2
    diff = abs(values[-1] - values[-2])
    # integrand scale: peak of |e^{-pi Im tau t^2 - 2 pi Re z t}| times the width
    scale = math.exp((PI * z.real) ** 2 / (PI * tau.tau.imag)) * 2.0 * W
    rounding = 64 * np.finfo(float).eps * scale
    error = 2.0 * diff + tail + rounding
    if not diff <= max(quad.tol, rounding) * 10:
        raise QuadratureError(
            f"refinement did not converge: successive values differ by {diff:.3g} (tol {quad.tol:g})"
        )
    return Estimate(values[-1], float(error))


def mordell_h(z: complex, tau, quad: QuadratureParams = DEFAULT_QUADRATURE) -> complex:
    """h(z; tau) = int_R exp(pi i tau t^2 - 2 pi z t) / cosh(pi t) dt."""
    return mordell_h_estimate(z, tau, quad).value


def mordell_levels(z: complex, tau, quad: QuadratureParams = DEFAULT_QUADRATURE) -> list[complex]:
    """Direct trapezoid values at every refinement level (coarsest first), no argument reduction."""
    tau = _as_tau(tau)
    W, h, _ = quad.resolve(complex(z), tau)
    return [kernels.mordell_trap(tau.tau, complex(z), W, h / 2**k) for k in range(quad.refinement_levels + 1)]


def theta_jacobi_estimate(z: complex, tau: TauPoint, trunc: Truncation, zero_radius: float = ZERO_RADIUS) -> Estimate:
    """Odd Jacobi theta theta_J(z; tau), via theta and the elementary gauge."""
    lz = TWO_PI_I * z
    _check_theta_zero(lz, tau, zero_radius, "e^{2 pi i v}")
    th = theta_log_estimate(lz, tau, trunc)
    gauge = jacobi_gauge(z, tau)
    return Estimate(th.value / gauge, th.error / abs(gauge))


def zwegers_mu_estimate(
    u: complex,
    v: complex,
    tau,
    trunc: Truncation = DEFAULT_TRUNCATION,
    pole_radius: float = POLE_RADIUS,
    zero_radius: float = ZERO_RADIUS,
) -> Estimate:
    tau = _as_tau(tau)
    u, v = complex(u), complex(v)
    a = cmath.exp(TWO_PI_I * u)
    _check_pole(a, tau, pole_radius)
    th = theta_jacobi_estimate(v, tau, trunc, zero_radius)
    # sum_n (-1)^n q^{n(n+1)/2} b^n / (1 - a q^n) is the Appell numerator at x = q/b, y = a
    val, tail = kernels.appell_sum(tau.tau, TWO_PI_I * (tau.tau - v), a, int(trunc.n_max), float(pole_radius))
    ser = _checked(Estimate(val, tail), trunc, "mu")
    pref = cmath.exp(1j * PI * u) / th.value
    value = pref * ser.value
    return Estimate(value, abs(pref) * ser.error + abs(value) * th.error / abs(th.value))


def zwegers_mu(u: complex, v: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION, **radii) -> complex:
    """Zwegers' mu(u, v; tau); symmetric in u and v, mu(u + 1, v) = -mu(u, v)."""
    return zwegers_mu_estimate(u, v, tau, trunc, **radii).value


def zwegers_R_estimate(u: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> Estimate:
    tau = _as_tau(tau)
    u = complex(u)
    if not cmath.isfinite(u):
        raise NonFiniteInputError(f"nonfinite input {u!r}")
    val, tail = kernels.r_sum(tau.tau, u, int(trunc.n_max))
    return _checked(Estimate(val, tail), trunc, "R")


def zwegers_R(u: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Zwegers' non-holomorphic correction R(u; tau)."""
    return zwegers_R_estimate(u, tau, trunc).value


def dbar_R(u: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Closed form of dR/d(conj u); the Dolbeault representative of the extension class."""
    tau = _as_tau(tau)
    val, tail = kernels.r_dbar_sum(tau.tau, complex(u), int(trunc.n_max))
    return _checked(Estimate(val, tail), trunc, "dbar R").value


def completed_mu(u: complex, v: complex, tau, trunc: Truncation = DEFAULT_TRUNCATION, ablate_R: bool = False,
                 **radii) -> complex:
    """mu~(u, v) = mu(u, v) + (i/2) R(u - v).  ``ablate_R`` drops the correction."""
    mu = zwegers_mu(u, v, tau, trunc, **radii)
    if ablate_R:
        return mu
    return mu + 0.5j * zwegers_R(complex(u) - complex(v), tau, trunc)


# -- finite-difference dbar -------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Rectangular grid of nodes center + (i + j sqrt(-1)) * step, |i|, |j| <= half_count."""

    center: complex
    step: float
    half_count: int = 3

    def nodes(self) -> list[complex]:
        k = range(-self.half_count, self.half_count + 1)
        return [self.center + (i + 1j * j) * self.step for j in k for i in k]

    def interior(self) -> list[complex]:
        k = range(-self.half_count + 1, self.half_count)
        return [self.center + (i + 1j * j) * self.step for j in k for i in k]


def dbar_fd(F: Callable[[complex], complex], z: complex, h: float) -> complex:
    """Central-difference (1/2)(d/dxi + i d/deta) F at z."""
    dx = (F(z + h) - F(z - h)) / (2 * h)
    dy = (F(z + 1j * h) - F(z - 1j * h)) / (2 * h)
    return 0.5 * (dx + 1j * dy)


def dolbeault_residual(F: Callable[[complex], complex], lam: Callable[[complex], complex], grid: Grid,
                       tol: float = 1e-10, name: str = "dbar") -> CheckReport:
    """max over interior nodes of |dbar F - lam| with central differences on ``grid``."""
    samples = {}
    for z in grid.nodes():
        val = complex(F(z))
        if not cmath.isfinite(val):
            raise NonFiniteInputError(f"F is not finite at {z!r}")
        samples[z] = val
    h = grid.step

    def f(z):
        return samples[z] if z in samples else complex(F(z))

    rows = []
    for z in grid.interior():
        res = abs(dbar_fd(f, z, h) - complex(lam(z)))
        rows.append((res, {"z": [z.real, z.imag], "residual": res}))
    return report_from_residuals(name, rows, tol, {"step": h})


def _shift_u(p, h: complex):
    if isinstance(p, JacobiPoint):
        return JacobiPoint(p.u + h, p.v, p.tau)
    return p + h


def cocycle_from_antiderivative(
    F: Callable,
    j: Callable,
    g,
    points,
    tol: float,
    reference: Callable | complex = 0.0,
    act_fn: Callable = act,
    fd_step: float = 1e-4,
    name: str = "antiderivative cocycle",
) -> CheckReport:
    """delta_g(p) = F(p) - j_g(p)^{-1} F(g p), compared to ``reference``.

    ``j`` is called as j(g, p); ``reference`` is a constant or a callable
    (g, p) -> complex.  The report's extra field ``dbar_max`` is the largest
    central-difference dbar of delta_g in the first coordinate, which
    should vanish: the cocycle of a dbar-antiderivative is holomorphic.
    """

    def delta(p):
        return complex(F(p)) - complex(F(act_fn(g, p))) / complex(j(g, p))

    def ref(p):
        return complex(reference(g, p)) if callable(reference) else complex(reference)

    dbar_max = 0.0
    rows = []
    for p in points:
        try:
            d = delta(p)
            r = ref(p)
            res = scaled(abs(d - r), abs(r))
            dd = abs(dbar_fd(lambda h: delta(_shift_u(p, h)), 0j, fd_step))
            dbar_max = max(dbar_max, dd)
            rows.append((res, {"residual": res, "delta": [d.real, d.imag]}))
        except EvaluationError as exc:
            rows.append((math.inf, {"error": f"{exc.rule}: {exc}"}))
    return report_from_residuals(name, rows, tol, {"dbar_max": dbar_max, "fd_step": fd_step})


# -- the Jacobi gauge between kappa and N = mu(v, -u) -------------------------


def gauge_matrix(p: JacobiPoint) -> np.ndarray:
    """G(p) with (N, 1) = G(p) (kappa, 1)."""
    b = -1j * cmath.exp(1j * PI * (p.u + p.v) - 0.25j * PI * p.tau.tau)
    return np.array([[b * p.y, b], [0.0, 1.0]], dtype=complex)


def n_section(p: JacobiPoint, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """N(u, v; tau) = mu(v, -u; tau), the section in the Jacobi trivialization."""
    return zwegers_mu(p.v, -p.u, p.tau, trunc)


def dual_theta_factor(g: JacobiGroupElement, p: JacobiPoint, trunc: Truncation = DEFAULT_TRUNCATION,
                      jacobi: bool = True) -> complex:
    """Inverse of the theta(u+v) cocycle (the dual bundle's factor)."""
    return 1.0 / (eval_j_theta_jacobi(g, p, trunc) if jacobi else eval_j_theta(g, p, trunc))


def delta_S(p: JacobiPoint, quad: QuadratureParams = DEFAULT_QUADRATURE) -> complex:
    """(1/2i) h(u + v; tau)."""
    return mordell_h(p.u + p.v, p.tau, quad) / 2j


@dataclass
class SCalibration:
    """Root of unity zeta in j_S = zeta (c tau + d)^w / theta_J-factor, fitted at one point."""

    zeta: complex
    weight: int
    eighth_root_index: int
    distance_to_root: float


def calibrate_s_section(section: Callable[[JacobiPoint], complex], p: JacobiPoint, weight: int = 1,
                        jacobi: bool = True, trunc: Truncation = DEFAULT_TRUNCATION,
                        quad: QuadratureParams = DEFAULT_QUADRATURE) -> SCalibration:
    """Fit zeta from s(p) - j_S(p)^{-1} s(S p) = (1/2i) h(u+v) at one point."""
    base = p.tau.tau**weight * dual_theta_factor(S, p, trunc, jacobi)
    zeta = section(act(S, p)) / (base * (section(p) - delta_S(p, quad)))
    k = round(cmath.phase(zeta) / (PI / 4)) % 8
    return SCalibration(zeta, weight, k, abs(zeta - cmath.exp(1j * PI * k / 4)))


def s_section_check(section: Callable[[JacobiPoint], complex], points, tol: float, weight: int = 1,
                    jacobi: bool = True, trunc: Truncation = DEFAULT_TRUNCATION,
                    quad: QuadratureParams = DEFAULT_QUADRATURE, name: str = "S section") -> CheckReport:
    """Calibrate zeta at points[0], then check s(S p) = j s(p) + delta at every point.

    j = zeta (tau)^weight / theta-factor(S, p) and delta = -j (1/2i) h(u+v), i.e.
    the slash form s - j^{-1} s(S p) = (1/2i) h(u + v; tau).
    """
    points = list(points)
    cal = calibrate_s_section(section, points[0], weight, jacobi, trunc, quad)

    def one(p):
        try:
            j = cal.zeta * p.tau.tau**weight * dual_theta_factor(S, p, trunc, jacobi)
            lhs = section(act(S, p))
            sp = section(p)
            rhs = j * (sp - delta_S(p, quad))
            res = scaled(abs(lhs - rhs), abs(lhs), abs(j * sp))
            return res, {"residual": res}
        except EvaluationError as exc:
            return math.inf, {"error": f"{exc.rule}: {exc}"}

    extra = {"zeta": cal.zeta, "eighth_root_index": cal.eighth_root_index,
             "distance_to_root": cal.distance_to_root, "weight": weight}
    return report_from_residuals(name, pmap(one, points), tol, extra)


def jacobi_s_entry(p: JacobiPoint, zeta: complex, trunc: Truncation, quad: QuadratureParams) -> np.ndarray:
    """[[j, delta], [0, 1]] for S on the section (N, 1)."""
    j = zeta * p.tau.tau * dual_theta_factor(S, p, trunc)
    return np.array([[j, -j * delta_S(p, quad)], [0.0, 1.0]], dtype=complex)


def kappa_generator_entries(zeta: complex, trunc: Truncation = DEFAULT_TRUNCATION,
                            quad: QuadratureParams = DEFAULT_QUADRATURE) -> dict:
    """Generator entries (j, delta) of the cocycle carried by (kappa, 1).

    The translations are the Appell-Lerch laws
    kappa(q x, y) = -x y kappa - x and kappa(x, q y) = -(x y / q) kappa - x / q;
    T and the integer shifts act trivially; S is transported from the
    N-trivialization by the gauge matrix.
    """

    def s_entry(p):
        m = np.linalg.solve(gauge_matrix(act(S, p)), jacobi_s_entry(p, zeta, trunc, quad) @ gauge_matrix(p))
        return m[0, 0], m[0, 1]

    def tx(p):
        return -p.x * p.y, -p.x

    def ty(p):
        q = p.tau.q
        return -p.x * p.y / q, -p.x / q

    def trivial(p):
        return 1.0, 0.0

    return {"S": s_entry, "T": trivial, "tx": tx, "ty": ty, "sx": trivial, "sy": trivial}


def kappa_cocycle(zeta: complex, trunc: Truncation = DEFAULT_TRUNCATION,
                  quad: QuadratureParams = DEFAULT_QUADRATURE) -> MatrixCocycle:
    return MatrixCocycle.from_generators(kappa_generator_entries(zeta, trunc, quad), "kappa")


def jacobi_generator_entries(zeta: complex, trunc: Truncation = DEFAULT_TRUNCATION,
                             quad: QuadratureParams = DEFAULT_QUADRATURE) -> dict:
    """Generator entries (j, delta) of the cocycle carried by (N, 1).

    With z = u + v the translations follow from Zwegers' elliptic law and
    mu(u + w, v + w) = mu(u, v) for lattice w:
    N(u + tau) = N(v + tau) = -e^{2 pi i z + pi i tau} N - i e^{pi i z + 3 pi i tau / 4};
    the integer shifts give -1, T gives e^{-pi i / 4}, and S carries the
    Mordell integral.
    """

    def translation(p):
        z, t = p.u + p.v, p.tau.tau
        return -cmath.exp(TWO_PI_I * z + 1j * PI * t), -1j * cmath.exp(1j * PI * z + 0.75j * PI * t)

    def s_entry(p):
        m = jacobi_s_entry(p, zeta, trunc, quad)
        return m[0, 0], m[0, 1]

    return {
        "S": s_entry,
        "T": lambda p: (cmath.exp(-0.25j * PI), 0.0),
        "tx": translation,
        "ty": translation,
        "sx": lambda p: (-1.0, 0.0),
        "sy": lambda p: (-1.0, 0.0),
    }


def jacobi_cocycle(zeta: complex, trunc: Truncation = DEFAULT_TRUNCATION,
                   quad: QuadratureParams = DEFAULT_QUADRATURE) -> MatrixCocycle:
    """The cocycle in the N-trivialization; equals G(g p) J^kappa_g(p) G(p)^{-1}.

    Its S entry is [[j_S, -j_S (1/2i) h], [0, 1]] and its T entry is
    diagonal, so delta_T = 0 in the slash form.
    """
    return MatrixCocycle.from_generators(jacobi_generator_entries(zeta, trunc, quad), "jacobi")


# -- completion checks ------------------------------------------------------


@dataclass
class CompletionReport:
    law: str
    max_residual: float
    passed: bool
    tol: float
    constants: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.law, "residual": self.max_residual if math.isfinite(self.max_residual) else "inf",
               "tolerance": self.tol, "pass": self.passed}
        out["extra"] = {k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in self.constants.items()}
        return out


def jacobi_form_multiplier(g: JacobiGroupElement, p: JacobiPoint) -> complex:
    """Shape of the multiplier of a weight-1/2, index -1/2 Jacobi form in z = u - v.

    (c tau + d)^{1/2} e^{-pi i c z^2 / (c tau + d)} (-1)^{l + m} e^{pi i (l^2 tau' + 2 l w)},
    w = z / (c tau + d), (l, m) the translation of z.  Principal square root;
    the overall root of unity is left to calibration.
    """
    tau = p.tau.tau
    j = g.c * tau + g.d
    z = p.u - p.v
    w = z / j
    tau2 = (g.a * tau + g.b) / j
    lam = g.lam[0] - g.lam[1]
    mu = g.mu[0] - g.mu[1]
    sign = -1.0 if (lam + mu) % 2 else 1.0
    return cmath.sqrt(j) * cmath.exp(-1j * PI * g.c * z * z / j) * sign * cmath.exp(1j * PI * (lam * lam * tau2 + 2 * lam * w))


def scalar_law_check(f: Callable[[JacobiPoint], complex], multiplier: Callable, g: JacobiGroupElement, points,
                     tol: float, law: str) -> CompletionReport:
    """Calibrate zeta at points[0] in f(g p) = zeta m(g, p) f(p), validate at the rest."""
    points = list(points)
    p0 = points[0]
    zeta = f(act(g, p0)) / (multiplier(g, p0) * f(p0))

    def one(p):
        try:
            lhs = f(act(g, p))
            rhs = zeta * multiplier(g, p) * f(p)
            return scaled(abs(lhs - rhs), abs(lhs), abs(rhs))
        except EvaluationError:
            return math.inf

    worst = max(pmap(one, points[1:]), default=0.0)
    k = round(cmath.phase(zeta) / (PI / 4)) % 8
    consts = {"zeta": zeta, "distance_to_eighth_root": abs(zeta - cmath.exp(1j * PI * k / 4))}
    return CompletionReport(law, worst, worst < tol, tol, consts)


SPLITTING_LAWS = {"sx": GENERATORS["sx"], "tx": GENERATORS["tx"], "T": GENERATORS["T"], "S": GENERATORS["S"]}


def smooth_splitting_check(points, g_list=None, trunc: Truncation = DEFAULT_TRUNCATION,
                           quad: QuadratureParams = DEFAULT_QUADRATURE, tol: float = 1e-6,
                           ablate_R: bool = False) -> list[CompletionReport]:
    """mu~ transforms by a pure scalar factor under each g (no additive term).

    ``g_list`` holds names from SPLITTING_LAWS or group elements.  With
    ``ablate_R`` the check runs on mu alone.  The S report also records the
    residual of mu's own law, which needs the additive (1/2i) h term.
    """
    g_list = list(SPLITTING_LAWS) if g_list is None else g_list
    points = list(points)

    def f(p):
        return completed_mu(p.u, p.v, p.tau, trunc, ablate_R=ablate_R)

    reports = []
    for g in g_list:
        name = g if isinstance(g, str) else str(g.to_json())
        elem = SPLITTING_LAWS[g] if isinstance(g, str) else g
        rep = scalar_law_check(f, jacobi_form_multiplier, elem, points, tol,
                               f"{'mu' if ablate_R else 'mu~'} scalar law under {name}")
        if elem == S:
            rep.constants["mu_with_h_residual"] = _mu_s_law_with_h(points, trunc, quad)
        reports.append(rep)
    return reports


def _mu_s_law_with_h(points, trunc, quad) -> float:
    """Residual of mu(S p) = -sqrt(-i tau) e^{-pi i z^2/tau} (mu - (1/2i) h(z)), z = u - v."""
    worst = 0.0
    for p in points:
        tau = p.tau.tau
        z = p.u - p.v
        m = -cmath.sqrt(-1j * tau) * cmath.exp(-1j * PI * z * z / tau)
        mu = zwegers_mu(p.u, p.v, p.tau, trunc)
        p2 = act(S, p)
        lhs = zwegers_mu(p2.u, p2.v, p2.tau, trunc)
        rhs = m * (mu - mordell_h(z, p.tau, quad) / 2j)
        worst = max(worst, scaled(abs(lhs - rhs), abs(lhs), abs(m * mu)))
    return worst


def kappa_completion(p: JacobiPoint, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """F_kappa = y^{-1} (1 - (1/2) e^{-pi i (u+v)} q^{1/8} R(u + v)).

    Pulled back from the completion of N through the gauge: kappa + F_kappa
    = (mu~(v, -u) - b) / g.  Its non-holomorphic part is a multiple of
    R(u + v) by a non-constant elementary factor.
    """
    r = zwegers_R(p.u + p.v, p.tau, trunc)
    return (1.0 - 0.5 * cmath.exp(-1j * PI * (p.u + p.v) + 0.25j * PI * p.tau.tau) * r) / p.y


def kappa_scalar_multiplier(zeta: complex, trunc: Truncation = DEFAULT_TRUNCATION,
                            quad: QuadratureParams = DEFAULT_QUADRATURE):
    """j^kappa_g(p) from the generator cocycle (the diagonal entry)."""
    cocycle = kappa_cocycle(zeta, trunc, quad)
    return lambda g, p: cocycle.j(g, p)


def calibrate_F(points, g: JacobiGroupElement = S, zeta: complex = 1.0, trunc: Truncation = DEFAULT_TRUNCATION,
                quad: QuadratureParams = DEFAULT_QUADRATURE, tol: float = 1e-6) -> CompletionReport:
    """Test the candidate family kappa + c R(u+v) for a pure scalar law under g.

    c is fitted at points[0] against the kappa-side multiplier and then
    validated at the remaining points.
    """
    points = list(points)
    jk = kappa_scalar_multiplier(zeta, trunc, quad)

    def r(p):
        return zwegers_R(p.u + p.v, p.tau, trunc)

    p0 = points[0]
    gp0 = act(g, p0)
    j0 = jk(g, p0)
    c = (j0 * kappa_point(p0, trunc) - kappa_point(gp0, trunc)) / (r(gp0) - j0 * r(p0))
    worst = 0.0
    for p in points[1:]:
        try:
            lhs = kappa_point(act(g, p), trunc) + c * r(act(g, p))
            rhs = jk(g, p) * (kappa_point(p, trunc) + c * r(p))
            worst = max(worst, scaled(abs(lhs - rhs), abs(lhs), abs(rhs)))
        except EvaluationError:
            worst = math.inf
    return CompletionReport("kappa + c R(u+v)", worst, worst < tol, tol, {"c": c})


def kappa_completion_check(points, g_list=("S", "T", "tx", "ty", "sx", "sy"), zeta: complex = 1.0,
                           trunc: Truncation = DEFAULT_TRUNCATION, quad: QuadratureParams = DEFAULT_QUADRATURE,
                           tol: float = 1e-6) -> list[CompletionReport]:
    """kappa + F_kappa transforms by the pure scalar j^kappa under each generator."""
    jk = kappa_scalar_multiplier(zeta, trunc, quad)

    def f(p):
        return kappa_point(p, trunc) + kappa_completion(p, trunc)

    reports = []
    for name in g_list:
        g = GENERATORS[name]
        worst = 0.0
        for p in points:
            try:
                lhs = f(act(g, p))
                rhs = jk(g, p) * f(p)
                worst = max(worst, scaled(abs(lhs - rhs), abs(lhs), abs(rhs)))
            except EvaluationError:
                worst = math.inf
        reports.append(CompletionReport(f"kappa + F_kappa scalar law under {name}", worst, worst < tol, tol))
    return reports


__all__ = [
    "QuadratureParams",
    "mordell_h",
    "mordell_h_estimate",
    "zwegers_mu",
    "zwegers_R",
    "dbar_R",
    "completed_mu",
    "Grid",
    "dolbeault_residual",
    "cocycle_from_antiderivative",
    "gauge_matrix",
    "n_section",
    "s_section_check",
    "kappa_cocycle",
    "jacobi_cocycle",
    "CompletionReport",
    "smooth_splitting_check",
    "kappa_completion",
    "calibrate_F",
    "kappa_completion_check",
]

