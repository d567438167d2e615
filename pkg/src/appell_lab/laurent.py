"""Laurent-coefficient solver for twisted functional equations.

Solves f(q x) = J(x) f(x) + g(x) for a monomial factor J(x) = c x^{-m}
coefficientwise.  Writing f = sum a_n x^n and g = sum g_n x^n the equation
is the recurrence

    a_n q^n = c a_{n+m} + g_n .

For m = 0 this is a division a_n = g_n / (q^n - c), which is obstructed
exactly where q^n = c and g_n != 0.  Lifting the section 1 of an extension
of line bundles on E_q amounts to solving the m = 0 equation with
g = theta's coefficient sequence.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

from .errors import ConditioningError, DomainError, NonFiniteInputError, RangeError
from .qseries import TauPoint, _as_tau, theta_coefficient

#: |q^n - c| <= MATCH_RTOL * |c| counts as resonance
MATCH_RTOL = 1e-8
#: |g_n| above this at a resonance is reported as an obstruction
DETECTION_THRESHOLD = 1e-10


@dataclass
class LaurentPoly:
    """Finitely supported two-sided coefficient sequence."""

    coeffs: dict[int, complex]
    support: tuple[int, int] | None = None

    def __post_init__(self):
        self.coeffs = {int(n): complex(c) for n, c in self.coeffs.items()}
        for c in self.coeffs.values():
            if not cmath.isfinite(c):
                raise NonFiniteInputError(f"nonfinite coefficient {c!r}")
        nonzero = [n for n, c in self.coeffs.items() if c != 0]
        if self.support is None:
            self.support = (min(nonzero), max(nonzero)) if nonzero else (0, 0)
        lo, hi = (int(s) for s in self.support)
        if lo > hi:
            raise ValueError(f"empty support {self.support!r}")
        if any(n < lo or n > hi for n in nonzero):
            raise ValueError("nonzero coefficient outside the declared support")
        self.support = (lo, hi)

    def __getitem__(self, n: int) -> complex:
        return self.coeffs.get(n, 0j)

    def __call__(self, x: complex) -> complex:
        return eval_laurent(self, x)

    def to_json(self) -> dict:
        lo, hi = self.support
        return {
            "support": [lo, hi],
            "coeffs": [[n, self[n].real, self[n].imag] for n in range(lo, hi + 1) if n in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj) -> "LaurentPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        coeffs = {int(n): complex(re, im) for n, re, im in obj["coeffs"]}
        return cls(coeffs, tuple(obj["support"]))


def theta_poly(tau, n_range: tuple[int, int]) -> LaurentPoly:
    """Theta's coefficients (-1)^n q^{n(n-1)/2} on an index interval."""
    lo, hi = n_range
    return LaurentPoly({n: theta_coefficient(n, tau) for n in range(lo, hi + 1)}, (lo, hi))


def eval_laurent(f: LaurentPoly, x: complex) -> complex:
    x = complex(x)
    if not cmath.isfinite(x):
        raise NonFiniteInputError(f"nonfinite input {x!r}")
    if x == 0:
        raise DomainError("x must be nonzero")
    lo, hi = f.support
    total = 0j
    # Horner on x^lo * (c_lo + c_{lo+1} x + ...)
    for n in range(hi, lo - 1, -1):
        total = total * x + f[n]
    return total * x**lo


@dataclass(frozen=True)
class MonomialFactor:
    """Automorphy factor J(x) = c * x^{-m} for the generator x -> q x."""

    c: complex
    m: int

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if self.c == 0 or not cmath.isfinite(self.c):
            raise DomainError(f"c must be finite and nonzero, got {self.c!r}")
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")
        object.__setattr__(self, "m", int(self.m))


@dataclass
class SolveOutcome:
    kind: str  # "solved" | "obstructed"
    solution: LaurentPoly | None = None
    obstructions: list[tuple[int, complex]] = field(default_factory=list)
    note: str = ""

    @property
    def solved(self) -> bool:
        return self.kind == "solved"


def _resonant(qn: complex, c: complex, rtol: float) -> bool:
    return abs(qn - c) <= rtol * abs(c)


def _qpow(tau: TauPoint, n: int) -> complex:
    return cmath.exp(2j * math.pi * tau.tau * n)


def solve_twist_eq(
    factor: MonomialFactor,
    g: LaurentPoly,
    tau,
    n_range: tuple[int, int],
    match_rtol: float = MATCH_RTOL,
    threshold: float = DETECTION_THRESHOLD,
) -> SolveOutcome:
    """Solve f(qx) = c x^{-m} f(x) + g(x) for the coefficients of f on ``n_range``.

    For m != 0 the |m| seed coefficients a_0 .. a_{|m|-1} are set to zero
    (the particular solution); the homogeneous part is counted by
    :func:`section_space_dim`.
    """
    tau = _as_tau(tau)
    lo, hi = (int(n) for n in n_range)
    c, m = factor.c, factor.m
    glo, ghi = g.support
    if lo > glo - abs(m) or hi < ghi + abs(m):
        raise RangeError(
            f"range [{lo}, {hi}] must contain the support [{glo}, {ghi}] widened by |m|={abs(m)}"
        )

    if m == 0:
        coeffs, obstructions = {}, []
        for n in range(lo, hi + 1):
            qn = _qpow(tau, n)
            gn = g[n]
            if _resonant(qn, c, match_rtol):
                if abs(gn) > threshold:
                    obstructions.append((n, gn))
                    continue
                raise ConditioningError(
                    f"c matches q^{n} but |g_{n}| = {abs(gn):.3g} is below the detection threshold"
                )
            coeffs[n] = gn / (qn - c)
        if obstructions:
            return SolveOutcome("obstructed", obstructions=obstructions)
        return SolveOutcome("solved", solution=LaurentPoly(coeffs, (lo, hi)))

    k = abs(m)
    if lo > 0 or hi < k - 1:
        raise RangeError(f"range [{lo}, {hi}] must contain the seed block [0, {k - 1}]")
    a = {n: 0j for n in range(0, k)}
    if m > 0:
        # a_{n+m} = (a_n q^n - g_n) / c upward, a_n = (c a_{n+m} + g_n) / q^n downward
        for n in range(0, hi - m + 1):
            a[n + m] = (a[n] * _qpow(tau, n) - g[n]) / c
        for n in range(-1, lo - 1, -1):
            a[n] = (c * a[n + m] + g[n]) / _qpow(tau, n)
    else:
        # a_{n-k} = (a_n q^n - g_n) / c downward, a_n = (c a_{n-k} + g_n) / q^n upward
        for n in range(k - 1, lo + k - 1, -1):
            a[n - k] = (a[n] * _qpow(tau, n) - g[n]) / c
        for n in range(k, hi + 1):
            a[n] = (c * a[n - k] + g[n]) / _qpow(tau, n)
    note = f"particular solution: seed coefficients a_0..a_{k - 1} set to 0"
    return SolveOutcome("solved", solution=LaurentPoly(a, (lo, hi)), note=note)


def twist_residual(factor: MonomialFactor, f: LaurentPoly, g: LaurentPoly, tau) -> float:
    """Max coefficientwise |a_n q^n - c a_{n+m} - g_n| over indices where both a_n, a_{n+m} are in range."""
    tau = _as_tau(tau)
    lo, hi = f.support
    worst = 0.0
    for n in range(lo, hi + 1):
        if not lo <= n + factor.m <= hi:
            continue
        r = f[n] * _qpow(tau, n) - factor.c * f[n + factor.m] - g[n]
        worst = max(worst, abs(r))
    return worst


def section_space_dim(factor: MonomialFactor, tau, match_rtol: float = MATCH_RTOL) -> int:
    """Dimension of holomorphic f on C^* with f(qx) = c x^{-m} f(x).

    Degree m >= 1 gives m (one free seed per residue class, all series
    converge); m <= -1 gives 0; m = 0 gives 1 exactly when c is in q^Z.
    """
    tau = _as_tau(tau)
    m = factor.m
    if m >= 1:
        return m
    if m <= -1:
        return 0
    c = factor.c
    t = tau.tau
    n0 = round(math.log(abs(c)) / (-2 * math.pi * t.imag))
    return int(any(_resonant(_qpow(tau, n), c, match_rtol) for n in (n0 - 1, n0, n0 + 1)))
