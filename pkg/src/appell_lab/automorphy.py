"""The group SL2(Z) x| (Z^2 x Z^2), its action on (u, v; tau), and cocycles.

Group elements are triples (M, lam, mu) acting by

    tau' = (a tau + b) / (c tau + d)
    u'   = u / (c tau + d) + lam[0] tau' + mu[0]
    v'   = v / (c tau + d) + lam[1] tau' + mu[1]

i.e. the Moebius part first, then the lattice translation in the new tau.
For this to be a left action, (M1, t1)(M2, t2) = (M1 M2, t1 + t2 M1^{-1})
where a translation t = (lam_i, mu_i) is a row vector per coordinate.

Cocycles are right cocycles, J_{g h}(p) = J_g(h p) J_h(p), so that a
section with s(g p) = J_g(p) s(p) is consistent.  Matrix cocycles are
upper triangular [[j, delta], [0, 1]].
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import EvaluationError
from .qseries import (
    DEFAULT_TRUNCATION,
    ZERO_RADIUS,
    JacobiPoint,
    TauPoint,
    Truncation,
    _check_theta_zero,
    theta_log_estimate,
)

INT64_MAX = 2**63 - 1
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class JacobiGroupElement:
    a: int = 1
    b: int = 0
    c: int = 0
    d: int = 1
    lam: tuple[int, int] = (0, 0)
    mu: tuple[int, int] = (0, 0)

    def __post_init__(self):
        ints = (self.a, self.b, self.c, self.d, *self.lam, *self.mu)
        if any(int(k) != k for k in ints):
            raise ValueError("group element entries must be integers")
        if any(abs(int(k)) > INT64_MAX for k in ints):
            raise OverflowError("group element entry exceeds the 64-bit integer range")
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"ad - bc must be 1, got {self.a * self.d - self.b * self.c}")
        object.__setattr__(self, "lam", tuple(int(k) for k in self.lam))
        object.__setattr__(self, "mu", tuple(int(k) for k in self.mu))

    @property
    def sl2(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def is_translation(self) -> bool:
        return self.sl2 == (1, 0, 0, 1)

    def __mul__(self, other: "JacobiGroupElement") -> "JacobiGroupElement":
        return group_mul(self, other)

    def inverse(self) -> "JacobiGroupElement":
        a, b, c, d = self.sl2
        # (M, t)^{-1} = (M^{-1}, -t M)
        lam = tuple(-(l * a + m * c) for l, m in zip(self.lam, self.mu))
        mu = tuple(-(l * b + m * d) for l, m in zip(self.lam, self.mu))
        return JacobiGroupElement(d, -b, -c, a, lam, mu)

    def to_json(self) -> dict:
        return {"sl2": list(self.sl2), "lam": list(self.lam), "mu": list(self.mu)}

    @classmethod
    def from_json(cls, obj: dict) -> "JacobiGroupElement":
        a, b, c, d = obj["sl2"]
        return cls(a, b, c, d, tuple(obj.get("lam", (0, 0))), tuple(obj.get("mu", (0, 0))))


IDENTITY = JacobiGroupElement()
S = JacobiGroupElement(0, -1, 1, 0)
T = JacobiGroupElement(1, 1, 0, 1)
TX = JacobiGroupElement(lam=(1, 0))  # u -> u + tau, i.e. x -> q x
TY = JacobiGroupElement(lam=(0, 1))  # v -> v + tau, i.e. y -> q y
SX = JacobiGroupElement(mu=(1, 0))  # u -> u + 1
SY = JacobiGroupElement(mu=(0, 1))  # v -> v + 1

GENERATORS: dict[str, JacobiGroupElement] = {"S": S, "T": T, "tx": TX, "ty": TY, "sx": SX, "sy": SY}


def translation(lam=(0, 0), mu=(0, 0)) -> JacobiGroupElement:
    return JacobiGroupElement(lam=tuple(lam), mu=tuple(mu))


def group_mul(g1: JacobiGroupElement, g2: JacobiGroupElement) -> JacobiGroupElement:
    a1, b1, c1, d1 = g1.sl2
    a2, b2, c2, d2 = g2.sl2
    a, b = a1 * a2 + b1 * c2, a1 * b2 + b1 * d2
    c, d = c1 * a2 + d1 * c2, c1 * b2 + d1 * d2
    # t2 M1^{-1}, M1^{-1} = [[d1, -b1], [-c1, a1]]
    lam = tuple(l1 + d1 * l2 - c1 * m2 for l1, l2, m2 in zip(g1.lam, g2.lam, g2.mu))
    mu = tuple(m1 - b1 * l2 + a1 * m2 for m1, l2, m2 in zip(g1.mu, g2.lam, g2.mu))
    return JacobiGroupElement(a, b, c, d, lam, mu)


def word_element(word) -> JacobiGroupElement:
    """Group element of a word [(generator name, +-1), ...] read left to right."""
    g = IDENTITY
    for name, e in word:
        h = GENERATORS[name]
        g = g * (h if e > 0 else h.inverse())
    return g


def act(g: JacobiGroupElement, p: JacobiPoint) -> JacobiPoint:
    a, b, c, d = g.sl2
    tau = p.tau.tau
    j = c * tau + d
    tau2 = (a * tau + b) / j
    u2 = p.u / j + g.lam[0] * tau2 + g.mu[0]
    v2 = p.v / j + g.lam[1] * tau2 + g.mu[1]
    return JacobiPoint(u2, v2, TauPoint(tau2))


def decompose(g: JacobiGroupElement) -> list[tuple[str, int]]:
    """A word over the generators whose product is ``g``.

    g = (translation) * M with the translation written as
    tx^lam0 ty^lam1 sx^mu0 sy^mu1, and M reduced by the Euclidean algorithm
    into T^k S ... ; -I is written as S^{-1} S^{-1}.
    """
    word: list[tuple[str, int]] = []
    for name, k in (("tx", g.lam[0]), ("ty", g.lam[1]), ("sx", g.mu[0]), ("sy", g.mu[1])):
        word += [(name, 1 if k > 0 else -1)] * abs(k)
    a, b, c, d = g.sl2
    while c != 0:
        k = a // c
        word += [("T", 1 if k > 0 else -1)] * abs(k)
        a, b = a - k * c, b - k * d
        word.append(("S", 1))
        # S^{-1} [[a, b], [c, d]] = [[c, d], [-a, -b]]
        a, b, c, d = c, d, -a, -b
    if a == -1:
        word += [("S", -1), ("S", -1)]
        b = -b
    word += [("T", 1 if b > 0 else -1)] * abs(b)
    return word


# -- cocycles -------------------------------------------------------------


class ScalarCocycle:
    """A map (g, p) -> j_g(p)."""

    def __init__(self, fn: Callable[[JacobiGroupElement, JacobiPoint], complex], name: str = ""):
        self._fn = fn
        self.name = name

    def __call__(self, g: JacobiGroupElement, p: JacobiPoint) -> complex:
        return complex(self._fn(g, p))

    def matrix(self, g, p) -> np.ndarray:
        return np.array([[self(g, p)]], dtype=complex)


class MatrixCocycle:
    """Upper-triangular matrix cocycle [[j, delta], [0, 1]].

    Build with :meth:`from_entries` (entries given for every element) or
    :meth:`from_generators` (entries given on generators, extended to all
    of the group through :func:`decompose` and the cocycle rule).
    """

    def __init__(self, matrix_fn, name: str = ""):
        self._matrix_fn = matrix_fn
        self.name = name

    @classmethod
    def from_entries(cls, j, delta, name: str = "") -> "MatrixCocycle":
        def matrix(g, p):
            return np.array([[j(g, p), delta(g, p)], [0.0, 1.0]], dtype=complex)

        return cls(matrix, name)

    @classmethod
    def from_generators(cls, generators: dict, name: str = "") -> "MatrixCocycle":
        """``generators`` maps names in GENERATORS to p -> (j, delta)."""
        missing = set(GENERATORS) - set(generators)
        if missing:
            raise ValueError(f"missing generator entries: {sorted(missing)}")
        inverses = {n: GENERATORS[n].inverse() for n in GENERATORS}

        def letter(name, e, p):
            if e > 0:
                j, dl = generators[name](p)
                return np.array([[j, dl], [0.0, 1.0]], dtype=complex)
            # J_{h^{-1}}(p) = J_h(h^{-1} p)^{-1}
            j, dl = generators[name](act(inverses[name], p))
            return np.array([[1.0 / j, -dl / j], [0.0, 1.0]], dtype=complex)

        self = cls(None, name)
        self._letter = letter
        self._matrix_fn = lambda g, p: self.word_matrix(decompose(g), p)
        return self

    def word_matrix(self, word, p: JacobiPoint) -> np.ndarray:
        """Cocycle of the product of ``word`` at p, by the cocycle rule."""
        out = np.eye(2, dtype=complex)
        cur = p
        for name, e in reversed(word):
            out = self._letter(name, e, cur) @ out
            h = GENERATORS[name]
            cur = act(h if e > 0 else h.inverse(), cur)
        return out

    def matrix(self, g: JacobiGroupElement, p: JacobiPoint) -> np.ndarray:
        return self._matrix_fn(g, p)

    def j(self, g, p) -> complex:
        return complex(self.matrix(g, p)[0, 0])

    def delta(self, g, p) -> complex:
        return complex(self.matrix(g, p)[0, 1])


def eval_j_theta(g: JacobiGroupElement, p: JacobiPoint, trunc: Truncation = DEFAULT_TRUNCATION,
                 zero_radius: float = ZERO_RADIUS) -> complex:
    """theta(e^{2 pi i (u'+v')}; tau') / theta(e^{2 pi i (u+v)}; tau) with (u', v', tau') = g p."""
    p2 = act(g, p)
    l1 = TWO_PI_I * (p.u + p.v)
    l2 = TWO_PI_I * (p2.u + p2.v)
    _check_theta_zero(l1, p.tau, zero_radius, "x*y")
    _check_theta_zero(l2, p2.tau, zero_radius, "x'*y'")
    return theta_log_estimate(l2, p2.tau, trunc).value / theta_log_estimate(l1, p.tau, trunc).value


def jacobi_gauge(z: complex, tau: TauPoint) -> complex:
    """Elementary factor theta(e^{2 pi i z}; tau) / theta_J(z; tau) = i q^{-1/8} e^{pi i z}.

    theta_J(z) = sum_{nu in Z+1/2} e^{pi i nu^2 tau + 2 pi i nu (z + 1/2)} is the
    odd Jacobi theta function in the normalization of Zwegers.
    """
    return 1j * cmath.exp(-0.25j * math.pi * tau.tau + 1j * math.pi * z)


def eval_j_theta_jacobi(g: JacobiGroupElement, p: JacobiPoint, trunc: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Theta cocycle in the Jacobi normalization, theta_J(g p) / theta_J(p)."""
    p2 = act(g, p)
    gauge = jacobi_gauge(p.u + p.v, p.tau) / jacobi_gauge(p2.u + p2.v, p2.tau)
    return eval_j_theta(g, p, trunc) * gauge


def theta_cocycle(trunc: Truncation = DEFAULT_TRUNCATION) -> ScalarCocycle:
    return ScalarCocycle(lambda g, p: eval_j_theta(g, p, trunc), "theta(u+v)")


def weight_factor(g: JacobiGroupElement, p: JacobiPoint) -> complex:
    """c tau + d, the weight-one automorphy factor."""
    return g.c * p.tau.tau + g.d


def s_shape(p: JacobiPoint) -> complex:
    """tau^{-1/2} exp(-pi i (u+v)^2 / tau), principal square root."""
    tau = p.tau.tau
    z = p.u + p.v
    return cmath.exp(-1j * math.pi * z * z / tau) / cmath.sqrt(tau)


def calibrate_s_root(points, trunc: Truncation = DEFAULT_TRUNCATION) -> dict:
    """Eighth root of unity relating the dual theta factor at S to tau^{-1/2} e^{-pi i z^2/tau}.

    Calibrated at the first point and compared at the rest.  The dual factor
    is taken in the Jacobi normalization (see :func:`jacobi_gauge`).
    """
    ratios = [1.0 / eval_j_theta_jacobi(S, p, trunc) / s_shape(p) for p in points]
    zeta = ratios[0]
    spread = max(abs(r - zeta) for r in ratios)
    k = round(cmath.phase(zeta) / (math.pi / 4)) % 8
    return {
        "zeta": zeta,
        "eighth_root_index": k,
        "distance_to_root": abs(zeta - cmath.exp(1j * math.pi * k / 4)),
        "spread": spread,
    }


# -- monomial automorphy factors (for comparing line bundles) -------------


@dataclass(frozen=True)
class Monomial:
    """coeff * x^ex * y^ey * q^eq (exact rational exponent of q)."""

    coeff: complex
    ex: int = 0
    ey: int = 0
    eq: Fraction = Fraction(0)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coeff * other.coeff, self.ex + other.ex, self.ey + other.ey, self.eq + other.eq)

    def inverse(self) -> "Monomial":
        return Monomial(1 / self.coeff, -self.ex, -self.ey, -self.eq)

    def __call__(self, x, y, tau: TauPoint) -> complex:
        return self.coeff * x**self.ex * y**self.ey * cmath.exp(TWO_PI_I * tau.tau * float(self.eq))


def theta_x_factor(n: int) -> Monomial:
    """Factor of Theta(x) at q^n: (-x)^{-n} q^{-n(n-1)/2}."""
    return Monomial((-1) ** n, -n, 0, Fraction(-n * (n - 1), 2))


def line_y_factor(n: int) -> Monomial:
    """Factor of L_y at q^n: y^n."""
    return Monomial(1, 0, n)


def theta_xy_factor(n: int) -> Monomial:
    """Factor of Theta(xy) restricted to E at q^n: (-xy)^{-n} q^{-n(n-1)/2}."""
    return Monomial((-1) ** n, -n, -n, Fraction(-n * (n - 1), 2))


# -- checks ---------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    max_residual: float
    points_tested: int
    passed: bool
    tol: float
    details: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "residual": _json_float(self.max_residual),
            "tolerance": self.tol,
            "pass": self.passed,
            "points_tested": self.points_tested,
            "extra": {k: _json_value(v) for k, v in self.extra.items()},
        }


def _json_float(x: float):
    return x if math.isfinite(x) else str(x)


def _json_value(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, float):
        return _json_float(v)
    return v


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("APPELL_LAB_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items) -> list:
    """Order-preserving map, fanned out over APPELL_LAB_THREADS threads."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def scaled(diff: float, *scales: float) -> float:
    """|difference| relative to max(1, |terms|)."""
    return diff / max(1.0, *scales)


def report_from_residuals(name: str, residuals: list, tol: float, extra: dict | None = None) -> CheckReport:
    """Collapse per-point (residual, detail) pairs; failed points count as inf."""
    details = []
    worst = 0.0
    for res, detail in residuals:
        details.append(detail)
        worst = max(worst, res) if not math.isnan(res) else math.inf
    return CheckReport(name, worst, len(residuals), worst < tol, tol, details, extra or {})


def _matrix_of(J, g, p) -> np.ndarray:
    return J.matrix(g, p)


def check_cocycle(J, g1: JacobiGroupElement, g2: JacobiGroupElement, points, tol: float,
                  name: str = "cocycle") -> CheckReport:
    """max over points of ||J_{g1 g2}(p) - J_{g1}(g2 p) J_{g2}(p)||.

    Norms are entrywise maxima; the difference is divided by
    max(1, ||J_{g1 g2}||, ||J_{g1}|| ||J_{g2}||).
    """
    g12 = g1 * g2

    def one(p):
        try:
            lhs = _matrix_of(J, g12, p)
            a, b = _matrix_of(J, g1, act(g2, p)), _matrix_of(J, g2, p)
            rhs = a @ b
            # rounding in a product scales with |a| |b|, not with |a b|
            size = float(np.max(np.abs(a)) * np.max(np.abs(b)))
            res = scaled(float(np.max(np.abs(lhs - rhs))), float(np.max(np.abs(lhs))), size)
            return res, {"point": _pt(p), "residual": res}
        except EvaluationError as exc:
            return math.inf, {"point": _pt(p), "error": f"{exc.rule}: {exc}"}

    return report_from_residuals(name, pmap(one, points), tol)


def check_section_transform(s: Callable[[JacobiPoint], complex], J, g: JacobiGroupElement, points, tol: float,
                            name: str = "section") -> CheckReport:
    """Residual of s(g p) - j_g(p) s(p) - delta_g(p), for the section (s, 1)."""

    def one(p):
        try:
            m = _matrix_of(J, g, p)
            lhs = s(act(g, p))
            sp = s(p)
            rhs = m[0, 0] * sp + m[0, 1]
            res = scaled(abs(lhs - rhs), abs(lhs), abs(m[0, 0] * sp), abs(m[0, 1]))
            return res, {"point": _pt(p), "residual": res}
        except EvaluationError as exc:
            return math.inf, {"point": _pt(p), "error": f"{exc.rule}: {exc}"}

    return report_from_residuals(name, pmap(one, points), tol)


def _pt(p: JacobiPoint) -> list:
    return [p.u.real, p.u.imag, p.v.real, p.v.imag, p.tau.tau.real, p.tau.tau.imag]
