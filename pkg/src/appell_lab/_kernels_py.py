"""Pure-Python (numpy) series and quadrature kernels.

These mirror ``_ckernels.pyx`` one for one.  Every series kernel returns a
pair ``(value, tail)`` where ``tail`` is an a-posteriori bound on the
modulus of the omitted terms (``inf`` if no decaying bound exists at the
requested truncation).

Arguments are passed in logarithmic form where that avoids overflow:
``tau`` is the modular parameter (so q^k = exp(2*pi*i*tau*k) exactly) and
``lx`` is any branch of log(x).
"""

import math

import numpy as np
from scipy.special import erfc, erfcx

PI = math.pi
# explicit bounded terms beyond n_max before switching to a geometric tail
EXTRA_TERMS = 40


def _geometric_tail(first_log, ratio_log):
    """Bound sum_{k>=0} exp(first_log + k*ratio_log) (ratio non-increasing)."""
    if ratio_log >= 0.0:
        return math.inf
    if first_log < -745.0:
        return 0.0
    return math.exp(first_log) / (-math.expm1(ratio_log))


def _pair_sum(n, terms):
    """Sum in ascending |n|, pairing n with -n."""
    nmax = int(n[-1])
    pos = terms[nmax:]
    neg = np.zeros_like(pos)
    neg[1:] = terms[:nmax][::-1]
    return complex(np.sum(pos + neg))


def theta_sum(tau, lx, nmax, deriv=0):
    """Sum_{|n|<=nmax} n**deriv * q^{n(n-1)/2} (-x)^n."""
    n = np.arange(-nmax, nmax + 1, dtype=np.float64)
    expo = 1j * PI * tau * n * (n - 1.0) + n * (lx + 1j * PI)
    terms = np.exp(expo)
    if deriv:
        terms = terms * n**deriv
    value = _pair_sum(n, terms)

    alpha = PI * tau.imag
    L = lx.real
    N = nmax
    grow = deriv * math.log((N + 2.0) / (N + 1.0))
    pre = deriv * math.log(N + 1.0)
    e_pos = -alpha * (N + 1) * N + (N + 1) * L
    e_neg = -alpha * (N + 1) * (N + 2) - (N + 1) * L
    tail = _geometric_tail(pre + e_pos, -2.0 * alpha * (N + 1) + L + grow)
    tail += _geometric_tail(pre + e_neg, -2.0 * alpha * (N + 2) - L + grow)
    return value, tail


def _appell_terms(tau, lx, y, n):
    expo = 1j * PI * tau * n * (n - 1.0) + n * (lx + 1j * PI)
    e = 2j * PI * tau * n
    # for n < 0, |q^n| > 1: divide through by q^n so nothing overflows
    neg = n < 0
    num = np.exp(np.where(neg, expo - e, expo))
    den = np.where(neg, 1.0 - y * np.exp(np.where(neg, -e, 0.0)), np.exp(np.where(neg, 0.0, e)) - y)
    return num / den


def appell_sum(tau, lx, y, nmax, rho=1e-8):
    """Sum_{|n|<=nmax} q^{n(n-1)/2} (-x)^n / (q^n - y).

    ``rho`` is the relative pole-exclusion radius the caller enforced; it
    gives |q^n - y| >= min(rho, 1/2) |q^n| for every n, which is what the
    geometric part of the tail bound uses.
    """
    n = np.arange(-nmax, nmax + 1, dtype=np.float64)
    value = _pair_sum(n, _appell_terms(tau, lx, y, n))

    alpha = PI * tau.imag
    L = lx.real
    N = nmax
    k = np.arange(N + 1, N + 1 + EXTRA_TERMS, dtype=np.float64)
    tail = float(np.abs(_appell_terms(tau, lx, y, k)).sum())
    tail += float(np.abs(_appell_terms(tau, lx, y, -k)).sum())
    M = N + 1 + EXTRA_TERMS
    lrho = math.log(min(rho, 0.5))
    e_pos = -alpha * M * (M - 1) + M * L + 2.0 * alpha * M - lrho
    e_neg = -alpha * M * (M + 1) - M * L - 2.0 * alpha * M - lrho
    tail += _geometric_tail(e_pos, -2.0 * alpha * (M - 1) + L)
    tail += _geometric_tail(e_neg, -2.0 * alpha * (M + 2) - L)
    return value, tail


def _r_bracket(nu, a, t):
    """sgn(nu) - E((nu + a) sqrt(2t)) split as (sign, log-modulus, extra)."""
    sgn = np.where(nu > 0, 1.0, -1.0)
    s = sgn * math.sqrt(PI) * (nu + a) * math.sqrt(2.0 * t)
    pos = s > 0
    mag = np.empty_like(s)
    shift = np.zeros_like(s)
    mag[pos] = erfcx(s[pos])
    shift[pos] = -s[pos] ** 2
    mag[~pos] = erfc(s[~pos])
    return sgn, mag, shift


def _r_tail(nmax, a, t, prefactor_log=0.0):
    def gauss(w):
        if w <= 0:
            return math.inf
        return _geometric_tail(-PI * t * w * w, -2.0 * PI * t * w)

    nu0 = nmax + 1.5
    return math.exp(prefactor_log - PI * t * a * a) * (gauss(nu0 + a) + gauss(nu0 - a))


def r_sum(tau, u, nmax):
    """Zwegers' R(u; tau) summed over nu in Z + 1/2, |nu| <= nmax + 1/2."""
    t = tau.imag
    a = u.imag / t
    k = np.arange(-nmax - 1, nmax + 1, dtype=np.float64)
    nu = k + 0.5
    sgn, mag, shift = _r_bracket(nu, a, t)
    expo = -1j * PI * nu * nu * tau - 2j * PI * nu * u + shift
    parity = np.where(k % 2 == 0, 1.0, -1.0)
    terms = sgn * parity * mag * np.exp(expo)
    value = complex(np.sum(terms[np.argsort(np.abs(nu), kind="stable")]))
    return value, _r_tail(nmax, a, t)


def r_dbar_sum(tau, u, nmax):
    """Closed-form d/d(conj u) of R(u; tau), same truncation as r_sum."""
    t = tau.imag
    a = u.imag / t
    k = np.arange(-nmax - 1, nmax + 1, dtype=np.float64)
    nu = k + 0.5
    parity = np.where(k % 2 == 0, 1.0, -1.0)
    expo = -2.0 * PI * t * (nu + a) ** 2 - 1j * PI * nu * nu * tau - 2j * PI * nu * u
    pref = -1j * math.sqrt(2.0 / t)
    value = complex(pref * np.sum(parity * np.exp(expo)))
    return value, _r_tail(nmax, a, t, 0.5 * math.log(2.0 / t))


def mordell_trap(tau, z, half_width, step):
    """Trapezoid sum for int_{-W}^{W} exp(pi i tau t^2 - 2 pi z t) / cosh(pi t) dt."""
    m = int(round(half_width / step))
    t = np.arange(-m, m + 1, dtype=np.float64) * step
    at = np.abs(t)
    f = 2.0 * np.exp(1j * PI * tau * t * t - 2.0 * PI * z * t - PI * at) / (1.0 + np.exp(-2.0 * PI * at))
    f[0] *= 0.5
    f[-1] *= 0.5
    return complex(np.sum(f) * step)
