# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel core. Same contract as ``ulamc._pykernels``."""
import numpy as np

from libc.math cimport cos, exp, fabs, sin, sqrt
from libc.stdlib cimport free, malloc

from ._gk import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

NAME = "cython"

MODE_ABS = 0
MODE_REGULARIZED = 1

cdef double _NODES[15]
cdef double _WK[15]
cdef double _WG[15]
for _q in range(15):
    _NODES[_q] = NODES[_q]
    _WK[_q] = KRONROD_WEIGHTS[_q]
    _WG[_q] = GAUSS_WEIGHTS[_q]


cdef struct ExpSum:
    int n
    const double* wre
    const double* wim
    const double* rre
    const double* rim
    int nt
    const double* tre
    const double* tim
    int offset
    double radius
    double dmax
    double cre
    double cim
    double* sre
    double* sim
    double* smag
    int* idx


cdef void _eval(ExpSum* s, double x, double* out_re, double* out_im) noexcept nogil:
    cdef int j, k, key, pos
    cdef double e, c, sn, tr, ti, sr, si, cr, ci, t, v, xp, keymag
    if s.nt > 0 and fabs(x) * s.dmax <= s.radius:
        sr = s.tre[s.nt - 1]
        si = s.tim[s.nt - 1]
        for j in range(s.nt - 2, -1, -1):
            tr = sr * x + s.tre[j]
            si = si * x + s.tim[j]
            sr = tr
        xp = 1.0
        for j in range(s.offset):
            xp *= x
        e = exp(s.cre * x) * xp
        c = e * cos(s.cim * x)
        sn = e * sin(s.cim * x)
        out_re[0] = sr * c - si * sn
        out_im[0] = sr * sn + si * c
        return

    for k in range(s.n):
        e = exp(s.rre[k] * x)
        c = e * cos(s.rim[k] * x)
        sn = e * sin(s.rim[k] * x)
        tr = s.wre[k] * c - s.wim[k] * sn
        ti = s.wre[k] * sn + s.wim[k] * c
        s.sre[k] = tr
        s.sim[k] = ti
        s.smag[k] = sqrt(tr * tr + ti * ti)
        s.idx[k] = k

    # stable insertion sort, descending magnitude
    for k in range(1, s.n):
        key = s.idx[k]
        keymag = s.smag[key]
        pos = k - 1
        while pos >= 0 and s.smag[s.idx[pos]] < keymag:
            s.idx[pos + 1] = s.idx[pos]
            pos -= 1
        s.idx[pos + 1] = key

    # Neumaier summation, real and imaginary parts separately
    sr = s.sre[s.idx[0]]
    si = s.sim[s.idx[0]]
    cr = 0.0
    ci = 0.0
    for j in range(1, s.n):
        v = s.sre[s.idx[j]]
        t = sr + v
        if fabs(sr) >= fabs(v):
            cr += (sr - t) + v
        else:
            cr += (v - t) + sr
        sr = t
        v = s.sim[s.idx[j]]
        t = si + v
        if fabs(si) >= fabs(v):
            ci += (si - t) + v
        else:
            ci += (v - t) + si
        si = t
    out_re[0] = sr + cr
    out_im[0] = si + ci


cdef class _Prepared:
    cdef ExpSum s
    cdef object keep

    def __cinit__(self, weights, rates, taylor, int offset, double radius, double complex center):
        weights = np.asarray(weights, dtype=complex)
        rates = np.asarray(rates, dtype=complex)
        taylor = np.asarray(taylor, dtype=complex)
        cdef double[::1] wre = np.ascontiguousarray(weights.real, dtype=float)
        cdef double[::1] wim = np.ascontiguousarray(weights.imag, dtype=float)
        cdef double[::1] rre = np.ascontiguousarray(rates.real, dtype=float)
        cdef double[::1] rim = np.ascontiguousarray(rates.imag, dtype=float)
        cdef double[::1] tre = np.ascontiguousarray(taylor.real, dtype=float)
        cdef double[::1] tim = np.ascontiguousarray(taylor.imag, dtype=float)
        cdef int n = wre.shape[0]
        if n < 1 or rre.shape[0] != n:
            raise ValueError("weights and rates must be non-empty and equally long")
        self.keep = (wre, wim, rre, rim, tre, tim)
        self.s.n = n
        self.s.wre = &wre[0]
        self.s.wim = &wim[0]
        self.s.rre = &rre[0]
        self.s.rim = &rim[0]
        self.s.nt = tre.shape[0]
        self.s.tre = &tre[0] if self.s.nt > 0 else NULL
        self.s.tim = &tim[0] if self.s.nt > 0 else NULL
        self.s.offset = offset
        self.s.radius = radius
        self.s.dmax = float(np.abs(rates - center).max())
        self.s.cre = center.real
        self.s.cim = center.imag
        self.s.sre = <double*> malloc(n * sizeof(double))
        self.s.sim = <double*> malloc(n * sizeof(double))
        self.s.smag = <double*> malloc(n * sizeof(double))
        self.s.idx = <int*> malloc(n * sizeof(int))
        if not (self.s.sre and self.s.sim and self.s.smag and self.s.idx):
            raise MemoryError()

    def __dealloc__(self):
        free(self.s.sre)
        free(self.s.sim)
        free(self.s.smag)
        free(self.s.idx)


def expsum_eval(x, weights, rates, taylor, int offset, double radius, double complex center=0):
    cdef _Prepared prep = _Prepared(weights, rates, taylor, offset, radius, center)
    xa = np.asarray(x, dtype=float)
    cdef double[::1] flat = np.ascontiguousarray(xa.ravel())
    cdef Py_ssize_t m = flat.shape[0]
    out = np.empty(m, dtype=complex)
    cdef double[::1] ore = np.empty(m)
    cdef double[::1] oim = np.empty(m)
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            _eval(&prep.s, flat[i], &ore[i], &oim[i])
    out.real = ore
    out.imag = oim
    return out.reshape(xa.shape)


def gk15_expsum(a, b, weights, rates, taylor, int offset, double radius,
                double complex center, int mode, double reg):
    cdef _Prepared prep = _Prepared(weights, rates, taylor, offset, radius, center)
    cdef double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef Py_ssize_t m = av.shape[0]
    kron_arr = np.empty(m)
    gauss_arr = np.empty(m)
    abs_arr = np.empty(m)
    cdef double[::1] kron = kron_arr
    cdef double[::1] gauss = gauss_arr
    cdef double[::1] resabs = abs_arr
    cdef Py_ssize_t i
    cdef int q
    cdef double c, h, x, fr, fi, mag, f, denom, sk, sg, sa
    with nogil:
        for i in range(m):
            c = 0.5 * (av[i] + bv[i])
            h = 0.5 * (bv[i] - av[i])
            sk = 0.0
            sg = 0.0
            sa = 0.0
            for q in range(15):
                x = c + h * _NODES[q]
                _eval(&prep.s, x, &fr, &fi)
                mag = sqrt(fr * fr + fi * fi)
                if mode == 0:
                    f = mag
                else:
                    denom = mag + reg * exp(-x)
                    f = mag * mag / denom if denom > 0 else 0.0
                sk += _WK[q] * f
                sg += _WG[q] * f
                sa += _WK[q] * fabs(f)
            kron[i] = h * sk
            gauss[i] = h * sg
            resabs[i] = fabs(h) * sa
    return kron_arr, gauss_arr, abs_arr


cdef double _GOLDEN = 0.6180339887498949
cdef double _EPS = 2.220446049250313e-16


def golden_minima(lo, hi, weights, rates, taylor, int offset, double radius,
                  double complex center, int iterations):
    cdef _Prepared prep = _Prepared(weights, rates, taylor, offset, radius, center)
    out_arr = np.array(lo, dtype=float)
    cdef double[::1] out = out_arr
    cdef double[::1] hv = np.ascontiguousarray(hi, dtype=float)
    cdef Py_ssize_t i, m = out.shape[0]
    cdef int it
    cdef double a, b, c, d, fc, fd, re, im
    with nogil:
        for i in range(m):
            a = out[i]
            b = hv[i]
            c = b - _GOLDEN * (b - a)
            d = a + _GOLDEN * (b - a)
            _eval(&prep.s, c, &re, &im)
            fc = sqrt(re * re + im * im)
            _eval(&prep.s, d, &re, &im)
            fd = sqrt(re * re + im * im)
            for it in range(iterations):
                if b - a <= 4 * _EPS * (fabs(b) if fabs(b) > 1.0 else 1.0):
                    break
                if fc <= fd:
                    b = d
                    d = c
                    fd = fc
                    c = b - _GOLDEN * (b - a)
                    _eval(&prep.s, c, &re, &im)
                    fc = sqrt(re * re + im * im)
                else:
                    a = c
                    c = d
                    fc = fd
                    d = a + _GOLDEN * (b - a)
                    _eval(&prep.s, d, &re, &im)
                    fd = sqrt(re * re + im * im)
            out[i] = 0.5 * (a + b)
    return out_arr
