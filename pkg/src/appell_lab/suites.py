"""Seeded verification suites, one per module, behind ``appell-lab verify``.

Every suite draws its points from named Philox streams of the run seed
(see :mod:`appell_lab.sampling`) and returns a list of :class:`Check`
records in a fixed order, so identical configurations produce identical
reports.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__, automorphy as au, kernels, laurent as lr, mock, qseries as qs, toy
from .errors import EvaluationError
from .sampling import make_rng, random_jacobi_point, random_tau, random_x

SCHEMA = "appell-lab/1"

DEFAULT_TOLERANCES = {
    "qseries": 1e-10,
    "kappa": 1e-9,
    "solver": 1e-12,
    "cocycle": 1e-8,
    "quadrature": 1e-6,
    "completion": 1e-6,
    "toy": 1e-9,
}


@dataclass
class RunConfig:
    seed: int = 0
    trunc: qs.Truncation = qs.DEFAULT_TRUNCATION
    quad: mock.QuadratureParams = mock.DEFAULT_QUADRATURE
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str = "json"
    ablate_R: bool = False
    n_points: int = 200

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "nmax": self.trunc.n_max,
            "tol": self.trunc.tol,
            "quad_width": self.quad.half_width,
            "quad_step": self.quad.step,
            "quad_levels": self.quad.refinement_levels,
            "tolerances": dict(sorted(self.tolerances.items())),
            "ablate_R": self.ablate_R,
            "n_points": self.n_points,
        }


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    passed: bool
    extra: dict = field(default_factory=dict)

    @classmethod
    def below(cls, name: str, residual: float, tolerance: float, **extra) -> "Check":
        residual = float(residual)
        return cls(name, residual, tolerance, residual < tolerance, extra)

    @classmethod
    def from_report(cls, rep) -> "Check":
        if isinstance(rep, mock.CompletionReport):
            return cls(rep.law, rep.max_residual, rep.tol, rep.passed, dict(rep.constants))
        return cls(rep.name, rep.max_residual, rep.tol, rep.passed, dict(rep.extra))

    def to_json(self) -> dict:
        out = {"name": self.name, "residual": _num(self.residual), "tolerance": self.tolerance, "pass": self.passed}
        if self.extra:
            out["extra"] = {k: _num(v) for k, v in self.extra.items()}
        return out


def _num(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


@dataclass
class SuiteReport:
    suite: str
    checks: list
    config: RunConfig
    findings: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "version": __version__,
            "backend": kernels.BACKEND,
            "suite": self.suite,
            "pass": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "findings": [c.to_json() for c in self.findings],
            "config": self.config.to_json(),
        }
        if timing:
            out["seconds"] = self.seconds
        return out


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _safe(fn, *args):
    try:
        return fn(*args)
    except EvaluationError:
        return math.inf


# -- qseries ----------------------------------------------------------------


def suite_qseries(cfg: RunConfig) -> tuple[list, list]:
    rng = make_rng(cfg.seed, 1)
    tr = cfg.trunc
    n = cfg.n_points
    samples = [(random_tau(rng), random_x(rng), random_x(rng)) for _ in range(n)]
    tol = cfg.tol("qseries")
    ktol = cfg.tol("kappa")

    zero = max(abs(qs.theta(1.0, t, tr)) for t, _, _ in samples)
    qx = max(_rel(qs.theta(t.q * x, t, tr), -qs.theta(x, t, tr) / x) for t, x, _ in samples)
    oracle = max(
        abs(qs.theta(x, t, tr) - qs.theta_product_oracle(x, t, tr)) / max(1.0, abs(qs.theta(x, t, tr)))
        for t, x, _ in samples
    )
    xlaw, ylaw, closed = 0.0, 0.0, 0.0
    for t, x, y in samples:
        q = t.q
        k = qs.kappa(x, y, t, tr)
        xlaw = max(xlaw, _rel(qs.kappa(q * x, y, t, tr), -x * y * k - x))
        ylaw = max(ylaw, _rel(qs.kappa(x, q * y, t, tr), -(x * y / q) * k - x / q))
        closed = max(closed, _rel(qs.kappa(x, 0, t, tr), -x / q))

    residue = 0.0
    for t, x, _ in samples[:20]:
        for m in range(-2, 3):
            pole = t.q**m
            r = 1e-3 * abs(pole)
            w = r * np.exp(2j * math.pi * np.arange(32) / 32)
            avg = complex(np.mean([wk * qs.kappa(x, pole + wk, t, tr) for wk in w]))
            residue = max(residue, _rel(avg, qs.kappa_residue_y(m, x, t, tr)))

    checks = [
        Check.below("theta(1) = 0", zero, tol),
        Check.below("theta(q x) + theta(x) / x = 0", qx, tol),
        Check.below("theta series vs triple product", oracle, tol),
        Check.below("kappa x-translation law", xlaw, ktol),
        Check.below("kappa y-translation law", ylaw, ktol),
        Check.below("kappa(x, 0) = -x / q", closed, tol),
        Check.below("kappa residues at y = q^n (contour average)", residue, 1e-8),
    ]
    return checks, []


# -- solver -----------------------------------------------------------------


def suite_solver(cfg: RunConfig) -> tuple[list, list]:
    rng = make_rng(cfg.seed, 2)
    tol = cfg.tol("solver")
    coeff_err, recon_err, resid = 0.0, 0.0, 0.0
    n_range = (-40, 40)
    for _ in range(100):
        tau = random_tau(rng)
        y = random_x(rng)
        if qs.lattice_distance(cmath.log(y) / (2j * math.pi), tau)[1] < 1e-3:
            continue
        g = lr.theta_poly(tau, n_range)
        out = lr.solve_twist_eq(lr.MonomialFactor(y, 0), g, tau, n_range)
        sol = out.solution
        for k in range(-10, 11):
            exact = qs.theta_coefficient(k, tau) / (cmath.exp(2j * math.pi * tau.tau * k) - y)
            coeff_err = max(coeff_err, abs(sol[k] - exact) / max(1.0, abs(exact)))
        x = cmath.rect(math.exp(rng.uniform(-0.5, 0.5)), rng.uniform(-math.pi, math.pi))
        recon_err = max(recon_err, _rel(lr.eval_laurent(sol, x), qs.appell_numerator(x, y, tau, cfg.trunc)))
        resid = max(resid, lr.twist_residual(lr.MonomialFactor(y, 0), sol, g, tau))

    obstruction = 0.0
    for tau in [random_tau(rng) for _ in range(5)]:
        g = lr.theta_poly(tau, (-12, 12))
        for k in range(-3, 4):
            out = lr.solve_twist_eq(lr.MonomialFactor(tau.q**k, 0), g, tau, (-12, 12))
            ok = out.kind == "obstructed" and len(out.obstructions) == 1 and out.obstructions[0][0] == k
            err = abs(out.obstructions[0][1] - qs.theta_coefficient(k, tau)) if ok else math.inf
            obstruction = max(obstruction, err)

    dims_bad = 0
    tau0 = qs.TauPoint.from_q(0.1)
    for m in range(1, 6):
        dims_bad += lr.section_space_dim(lr.MonomialFactor(-1, m), tau0) != m
    for _ in range(100):
        tau = random_tau(rng)
        y = random_x(rng)
        if qs.lattice_distance(cmath.log(y) / (2j * math.pi), tau)[1] > 1e-3:
            dims_bad += lr.section_space_dim(lr.MonomialFactor(y, 0), tau) != 0
    for k in range(-3, 4):
        dims_bad += lr.section_space_dim(lr.MonomialFactor(tau0.q**k, 0), tau0) != 1

    checks = [
        Check.below("solved coefficients = theta_n / (q^n - y)", coeff_err, tol),
        Check.below("Laurent solution reconstructs theta * kappa", recon_err, cfg.tol("kappa")),
        Check.below("coefficientwise twist residual", resid, tol),
        Check.below("single obstruction at y = q^k with value theta_k", obstruction, tol),
        Check.below("section dimensions (mismatch count)", dims_bad, 0.5),
    ]
    return checks, []


# -- automorphy -------------------------------------------------------------


def _random_element(rng, length: int = 6) -> au.JacobiGroupElement:
    names = list(au.GENERATORS)
    word = [(names[rng.integers(len(names))], int(rng.choice([-1, 1]))) for _ in range(length)]
    return au.word_element(word)


def word_splits(max_len: int):
    """(g1, g2) for every split of every word of length <= max_len over the generators."""
    names = list(au.GENERATORS)
    for length in range(1, max_len + 1):
        for word in itertools.product(names, repeat=length):
            letters = [(w, 1) for w in word]
            if length == 1:
                yield au.IDENTITY, au.word_element(letters), word
            for i in range(1, length):
                yield au.word_element(letters[:i]), au.word_element(letters[i:]), word


def suite_automorphy(cfg: RunConfig) -> tuple[list, list]:
    rng = make_rng(cfg.seed, 3)
    tr = cfg.trunc
    assoc_bad = 0
    for _ in range(100):
        a, b, c = (_random_element(rng) for _ in range(3))
        assoc_bad += (a * b) * c != a * (b * c)
        assoc_bad += a * a.inverse() != au.IDENTITY or a.inverse() * a != au.IDENTITY
        assoc_bad += a * au.IDENTITY != a or au.IDENTITY * a != a
    action = 0.0
    for _ in range(100):
        a, b = _random_element(rng, 3), _random_element(rng, 3)
        p = random_jacobi_point(rng)
        lhs, rhs = au.act(a * b, p), au.act(a, au.act(b, p))
        action = max(action, abs(lhs.u - rhs.u), abs(lhs.v - rhs.v), abs(lhs.tau.tau - rhs.tau.tau))

    mono_bad = sum(au.theta_x_factor(k) * au.line_y_factor(k).inverse() != au.theta_xy_factor(k) for k in range(-5, 6))
    pts = [random_jacobi_point(rng) for _ in range(20)]
    factor_num = 0.0
    for p in pts:
        for k in (-2, -1, 1, 2):
            g = au.JacobiGroupElement(lam=(k, 0))
            expected = au.theta_xy_factor(k)(p.x, p.y, p.tau)
            factor_num = max(factor_num, _rel(au.eval_j_theta(g, p, tr), expected))

    J = au.theta_cocycle(tr)
    cocycle = 0.0
    for g1, g2, _ in word_splits(3):
        cocycle = max(cocycle, au.check_cocycle(J, g1, g2, pts, cfg.tol("cocycle")).max_residual)

    s_pts = [random_jacobi_point(rng) for _ in range(50)]
    cal = au.calibrate_s_root(s_pts, tr)
    t_dev = max(abs(au.eval_j_theta(au.T, p, tr) - 1) for p in pts)

    checks = [
        Check.below("group axioms (violation count)", assoc_bad + mono_bad, 0.5),
        Check.below("act is a left action", action, 1e-12),
        Check.below("x-translation factor of theta(xy) (numeric)", factor_num, 1e-10),
        Check.below("theta cocycle on words of length <= 3", cocycle, cfg.tol("cocycle")),
        Check.below("theta cocycle at T equals 1", t_dev, 1e-10),
        Check.below("S eighth root of unity is point-independent", cal["spread"], cfg.tol("cocycle"),
                    zeta=cal["zeta"], eighth_root_index=cal["eighth_root_index"]),
        Check.below("S calibration constant is an eighth root of unity", cal["distance_to_root"], cfg.tol("cocycle")),
    ]
    return checks, []


# -- mock -------------------------------------------------------------------


def suite_mock(cfg: RunConfig) -> tuple[list, list]:
    rng = make_rng(cfg.seed, 4)
    tr, quad = cfg.trunc, cfg.quad
    ctol = cfg.tol("completion")

    conv, even = 0.0, 0.0
    for _ in range(20):
        tau = qs.TauPoint(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 2.0)))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        est = mock.mordell_h_estimate(z, tau, quad)
        levels = mock.mordell_levels(z, tau, quad)
        conv = max(conv, abs(levels[-1] - levels[-2]) / est.error)
        even = max(even, abs(est.value - mock.mordell_h(-z, tau, quad)) / est.error)
    h0 = mock.mordell_h_estimate(0, qs.TauPoint(1j), quad)
    h0_ok = abs(h0.value.imag) < 1e-12 and 0 < h0.value.real < 1

    pts = [random_jacobi_point(rng) for _ in range(20)]
    sym = max(_rel(mock.zwegers_mu(p.u, p.v, p.tau, tr), mock.zwegers_mu(p.v, p.u, p.tau, tr)) for p in pts)
    sign = max(_rel(mock.zwegers_mu(p.u + 1, p.v, p.tau, tr), -mock.zwegers_mu(p.u, p.v, p.tau, tr)) for p in pts)
    sym_t = max(_rel(mock.completed_mu(p.u, p.v, p.tau, tr), mock.completed_mu(p.v, p.u, p.tau, tr)) for p in pts)

    # holomorphy by central differences in u, at two steps
    def dbar_at(f, p, h):
        return mock.dbar_fd(lambda du: f(p.u + du, p), 0j, h)

    def mu_u(u, p):
        return mock.zwegers_mu(u, p.v, p.tau, tr)

    def kappa_u(u, p):
        return qs.kappa_point(qs.JacobiPoint(u, p.v, p.tau), tr)

    def mut_u(u, p):
        return mock.completed_mu(u, p.v, p.tau, tr)

    # holomorphy: the central-difference dbar is O(step^2), so halving the step divides it by ~4
    def fd_ratio(residual_at):
        r1, r2 = residual_at(1e-2), residual_at(5e-3)
        return r2 / r1 if r1 > 1e-11 else 0.0

    holo_pts = [random_jacobi_point(rng, margin=0.1) for _ in range(10)]
    holo, mut_dbar = 0.0, 0.0
    for p in holo_pts:
        for f in (mu_u, kappa_u):
            holo = max(holo, fd_ratio(lambda h, f=f, p=p: abs(dbar_at(f, p, h))))
        target = 0.5j * mock.dbar_R(p.u - p.v, p.tau, tr)
        mut_dbar = max(mut_dbar, fd_ratio(lambda h, p=p: abs(dbar_at(mut_u, p, h) - target)))

    # Dolbeault representative of (i/2) R(u - v) at fixed v, under grid refinement
    p0 = pts[0]
    dres = []
    for step in (2e-3, 1e-3):
        grid = mock.Grid(p0.u, step, 2)
        rep = mock.dolbeault_residual(lambda u: 0.5j * mock.zwegers_R(u - p0.v, p0.tau, tr),
                                      lambda u: 0.5j * mock.dbar_R(u - p0.v, p0.tau, tr), grid, 1e-4)
        dres.append(rep.max_residual)

    # cocycle carrying (N, 1) with delta_S = (1/2i) h(u + v), delta_T = 0, and its kappa-side transport
    cal_pts = [random_jacobi_point(rng) for _ in range(10)]
    zeta = mock.calibrate_s_section(mock.n_section, cal_pts[0], 1, True, tr, quad).zeta
    closure, k_closure = 0.0, 0.0
    jc, kc = mock.jacobi_cocycle(zeta, tr, quad), mock.kappa_cocycle(zeta, tr, quad)
    for g1, g2, _ in word_splits(2):
        closure = max(closure, au.check_cocycle(jc, g1, g2, cal_pts, ctol).max_residual)
        k_closure = max(k_closure, au.check_cocycle(kc, g1, g2, cal_pts, ctol).max_residual)
    sec = 0.0
    for name in au.GENERATORS:
        sec = max(sec, au.check_section_transform(lambda p: qs.kappa_point(p, tr), kc, au.GENERATORS[name],
                                                   cal_pts, ctol).max_residual)
    n_s = mock.s_section_check(lambda p: mock.n_section(p, tr), [random_jacobi_point(rng) for _ in range(50)],
                               ctol, trunc=tr, quad=quad, name="(N, 1) under S with delta_S = (1/2i) h(u+v)")

    split_pts = [random_jacobi_point(rng) for _ in range(20)]
    splitting = mock.smooth_splitting_check(split_pts, trunc=tr, quad=quad, tol=ctol, ablate_R=cfg.ablate_R)
    checks = [
        Check.below("quadrature refinement within reported error", conv, 1.0),
        Check.below("h(z) = h(-z) within quadrature error", even, 1.0),
        Check.below("h(0; i) real, in (0, 1)", 0.0 if h0_ok else math.inf, 0.5, value=h0.value),
        Check.below("mu symmetric in (u, v)", sym, cfg.tol("kappa")),
        Check.below("mu(u + 1, v) = -mu(u, v)", sign, cfg.tol("kappa")),
        Check.below("mu~ symmetric in (u, v)", sym_t, cfg.tol("kappa")),
        Check.below("dbar of mu and kappa is O(step^2) (residual ratio at step/2)", holo, 0.3),
        Check.below("dbar mu~ - (i/2) dbar R is O(step^2) (residual ratio at step/2)", mut_dbar, 0.3),
        Check.below("Dolbeault residual of (i/2) R(u - v)", dres[-1], 1e-4,
                    coarse=dres[0], ratio=dres[0] / max(dres[1], 1e-300)),
        Check.below("delta cocycle closure (delta_S = (1/2i) h, delta_T = 0) on words of length <= 2", closure,
                    ctol, zeta=zeta),
        Check.below("kappa-side cocycle closure (translation matrices, S transported)", k_closure, ctol),
        Check.below("(kappa, 1) under every generator", sec, ctol),
        Check.from_report(n_s),
    ]
    if not cfg.ablate_R:
        ablated = mock.smooth_splitting_check(split_pts, trunc=tr, quad=quad, tol=ctol, ablate_R=True)
        worst = max(r.max_residual for r in ablated)
        checks.append(Check(f"R ablation breaks the scalar law (max residual {worst:.3g} > 1e-2)",
                            worst, 1e-2, worst > 1e-2))
    checks += [Check.from_report(r) for r in splitting]
    checks += [Check.from_report(r) for r in mock.kappa_completion_check(cal_pts, zeta=zeta, trunc=tr, quad=quad,
                                                                         tol=ctol)]
    findings = [
        Check.from_report(mock.calibrate_F(cal_pts, zeta=zeta, trunc=tr, quad=quad, tol=ctol)),
        Check.from_report(mock.s_section_check(lambda p: qs.kappa_point(p, tr), cal_pts, ctol, weight=0,
                                               jacobi=False, trunc=tr, quad=quad,
                                               name="(kappa, 1) under S with delta_S = (1/2i) h(u+v), no gauge")),
    ]
    return checks, findings


# -- toy --------------------------------------------------------------------


TOY_TAUS = (1j, 2j, 0.3 + 0.8j)


def suite_toy(cfg: RunConfig) -> tuple[list, list]:
    rng = make_rng(cfg.seed, 5)
    tol = cfg.tol("toy")
    tr = cfg.trunc
    inv, leg, dbar, coc, res, odd = 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    p1s = []
    for tau in TOY_TAUS:
        lat = toy.ToyLattice(tau)
        qp = toy.quasi_periods(lat, tr)
        p1s.append(qp.p1)
        pts = toy.random_toy_points(rng, lat, 20)
        inv = max(inv, toy.invariance_check(pts, lat, tol, tr).max_residual)
        leg = max(leg, qp.legendre_residual(lat.tau.tau))
        grid = mock.Grid(pts[0], 1e-3, 2)
        dbar = max(dbar, mock.dolbeault_residual(lambda z: toy.toy_F(z, lat), lambda z: toy.toy_lambda(lat),
                                                 grid, 1e-10).max_residual)

        def act(g, z, lat=lat):
            return toy.shift_action(g, z, lat)

        for g, ref in (((1, 0), 0.0), ((0, 1), 1.0)):
            rep = mock.cocycle_from_antiderivative(lambda z, lat=lat: toy.toy_F(z, lat), lambda g, z: 1.0, g, pts,
                                                   tol, ref, act)
            coc = max(coc, rep.max_residual, rep.extra["dbar_max"])
        denom = qp.p2 - qp.p1 * lat.tau.tau
        r = toy.contour_residue(lambda z, lat=lat: toy.normalized_s(z, lat, tr, qp), 0j)
        res = max(res, abs(r - 1 / denom), abs(toy.contour_residue(lambda z, lat=lat: toy.zeta_raw(z, lat, tr), 0j) - 1))
        odd = max(odd, max(abs(toy.zeta_raw(z, lat, tr) + toy.zeta_raw(-z, lat, tr)) for z in pts))
    checks = [
        Check.below("s + F doubly periodic", inv, tol),
        Check.below("Legendre relation |p1 tau - p2| = 2 pi", leg, tol),
        Check.below("dbar F = 1 / (2 i Im tau)", dbar, 1e-10),
        Check.below("antiderivative cocycle gives delta(1,0) = 0, delta(0,1) = 1", coc, 1e-12),
        Check.below("residues of zeta and s at 0", res, 1e-10),
        Check.below("zeta odd", odd, tol),
        Check.below("p1 depends on tau", 1.0 / max(abs(p1s[0] - p1s[1]), 1e-300), 1e3),
    ]
    return checks, []


SUITES = {
    "qseries": suite_qseries,
    "solver": suite_solver,
    "automorphy": suite_automorphy,
    "mock": suite_mock,
    "toy": suite_toy,
}


def run_suite(name: str, cfg: RunConfig) -> SuiteReport:
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise KeyError(name)
    checks, findings = [], []
    start = time.perf_counter()
    for n in names:
        c, f = SUITES[n](cfg)
        for item in c + f:
            item.name = f"{n}: {item.name}"
        checks += c
        findings += f
    return SuiteReport(name, checks, cfg, findings, time.perf_counter() - start)
