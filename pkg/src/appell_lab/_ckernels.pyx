# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled series and quadrature kernels; see ``_kernels_py`` for the contract."""

from libc.math cimport exp, log, sqrt, fabs, expm1, erfc, INFINITY
from scipy.special.cython_special cimport erfcx

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cdef double PI = 3.141592653589793
cdef int EXTRA_TERMS = 40


cdef inline double _geometric_tail(double first_log, double ratio_log) nogil:
    if ratio_log >= 0.0:
        return INFINITY
    if first_log < -745.0:
        return 0.0
    return exp(first_log) / (-expm1(ratio_log))


def theta_sum(double complex tau, double complex lx, int nmax, int deriv=0):
    cdef double complex acc = 0, tp, tn, a
    cdef double complex shift = lx + 1j * PI
    cdef double n, w
    cdef int k
    cdef double alpha, L, grow, pre, e_pos, e_neg, tail
    with nogil:
        acc = 1.0 if deriv == 0 else 0.0
        for k in range(1, nmax + 1):
            n = k
            tp = cexp(1j * PI * tau * n * (n - 1.0) + n * shift)
            tn = cexp(1j * PI * tau * n * (n + 1.0) - n * shift)
            if deriv == 0:
                acc = acc + (tp + tn)
            else:
                w = n ** deriv
                if deriv % 2 == 1:
                    acc = acc + w * (tp - tn)
                else:
                    acc = acc + w * (tp + tn)
        alpha = PI * cimag(tau)
        L = creal(lx)
        grow = deriv * log((nmax + 2.0) / (nmax + 1.0))
        pre = deriv * log(nmax + 1.0)
        e_pos = -alpha * (nmax + 1.0) * nmax + (nmax + 1.0) * L
        e_neg = -alpha * (nmax + 1.0) * (nmax + 2.0) - (nmax + 1.0) * L
        tail = _geometric_tail(pre + e_pos, -2.0 * alpha * (nmax + 1.0) + L + grow)
        tail = tail + _geometric_tail(pre + e_neg, -2.0 * alpha * (nmax + 2.0) - L + grow)
    return complex(acc), tail


cdef inline double complex _appell_term(double complex tau, double complex shift,
                                        double complex y, double n) nogil:
    cdef double complex expo = 1j * PI * tau * n * (n - 1.0) + n * shift
    cdef double complex e = 2j * PI * tau * n
    if n < 0:
        # |q^n| > 1: divide through by q^n so nothing overflows
        return cexp(expo - e) / (1.0 - y * cexp(-e))
    return cexp(expo) / (cexp(e) - y)


def appell_sum(double complex tau, double complex lx, double complex y, int nmax, double rho=1e-8):
    cdef double complex acc, shift = lx + 1j * PI
    cdef int k, M
    cdef double n, alpha, L, tail = 0.0, lrho, e_pos, e_neg
    with nogil:
        acc = _appell_term(tau, shift, y, 0.0)
        for k in range(1, nmax + 1):
            n = k
            acc = acc + (_appell_term(tau, shift, y, n) + _appell_term(tau, shift, y, -n))
        for k in range(nmax + 1, nmax + 1 + EXTRA_TERMS):
            n = k
            tail = tail + cabs(_appell_term(tau, shift, y, n)) + cabs(_appell_term(tau, shift, y, -n))
        alpha = PI * cimag(tau)
        L = creal(lx)
        M = nmax + 1 + EXTRA_TERMS
        lrho = log(rho if rho < 0.5 else 0.5)
        e_pos = -alpha * M * (M - 1.0) + M * L + 2.0 * alpha * M - lrho
        e_neg = -alpha * M * (M + 1.0) - M * L - 2.0 * alpha * M - lrho
        tail = tail + _geometric_tail(e_pos, -2.0 * alpha * (M - 1.0) + L)
        tail = tail + _geometric_tail(e_neg, -2.0 * alpha * (M + 2.0) - L)
    return complex(acc), tail


cdef inline double _gauss_tail(double t, double w) nogil:
    if w <= 0:
        return INFINITY
    return _geometric_tail(-PI * t * w * w, -2.0 * PI * t * w)


cdef inline double complex _r_term(double complex tau, double complex u, double t,
                                   double a, int k) nogil:
    cdef double nu = k + 0.5
    cdef double sgn = 1.0 if nu > 0 else -1.0
    cdef double s = sgn * sqrt(PI) * (nu + a) * sqrt(2.0 * t)
    cdef double parity = 1.0 if k % 2 == 0 else -1.0
    cdef double complex expo = -1j * PI * nu * nu * tau - 2j * PI * nu * u
    if s > 0:
        return sgn * parity * erfcx(s) * cexp(expo - s * s)
    return sgn * parity * erfc(s) * cexp(expo)


def r_sum(double complex tau, double complex u, int nmax):
    cdef double t = cimag(tau)
    cdef double a = cimag(u) / t
    cdef double complex acc = 0
    cdef int k
    cdef double tail
    with nogil:
        # ascending |nu|: nu = k + 1/2 and -(k + 1/2) = (-k - 1) + 1/2
        for k in range(0, nmax + 1):
            acc = acc + (_r_term(tau, u, t, a, k) + _r_term(tau, u, t, a, -k - 1))
        tail = exp(-PI * t * a * a) * (_gauss_tail(t, nmax + 1.5 + a) + _gauss_tail(t, nmax + 1.5 - a))
    return complex(acc), tail


def r_dbar_sum(double complex tau, double complex u, int nmax):
    cdef double t = cimag(tau)
    cdef double a = cimag(u) / t
    cdef double complex acc = 0
    cdef double nu, parity, tail
    cdef int k
    with nogil:
        for k in range(-nmax - 1, nmax + 1):
            nu = k + 0.5
            parity = 1.0 if k % 2 == 0 else -1.0
            acc = acc + parity * cexp(-2.0 * PI * t * (nu + a) * (nu + a)
                                      - 1j * PI * nu * nu * tau - 2j * PI * nu * u)
        acc = -1j * sqrt(2.0 / t) * acc
        tail = sqrt(2.0 / t) * exp(-PI * t * a * a) * (
            _gauss_tail(t, nmax + 1.5 + a) + _gauss_tail(t, nmax + 1.5 - a))
    return complex(acc), tail


def mordell_trap(double complex tau, double complex z, double half_width, double step):
    cdef int m = <int>(half_width / step + 0.5)
    cdef int k
    cdef double t, at, w
    cdef double complex acc = 0
    with nogil:
        for k in range(-m, m + 1):
            t = k * step
            at = fabs(t)
            w = 0.5 if (k == -m or k == m) else 1.0
            acc = acc + w * 2.0 * cexp(1j * PI * tau * t * t - 2.0 * PI * z * t - PI * at) / (1.0 + exp(-2.0 * PI * at))
    return complex(acc * step)
