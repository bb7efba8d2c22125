"""Pure numpy implementation of the kernel core.

Mirrors ``_ckernels.pyx`` function for function; ``_backend`` picks one.

The exponential sum is ``phi(x) = sum_k w_k exp(rate_k x)``. When ``taylor``
is non-empty and ``|x| * max|rate_k - center| <= radius`` it is replaced by
the power series ``exp(center x) x^offset sum_j taylor[j] x^j`` in the
shifted rates; the shift keeps clustered rates inside the series region.
"""
import numpy as np

from ._gk import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

NAME = "numpy"

MODE_ABS = 0
MODE_REGULARIZED = 1


def _neumaier(cols):
    # cols: (m, n) real, summed along axis 1 in column order
    s = cols[:, 0].copy()
    c = np.zeros_like(s)
    for j in range(1, cols.shape[1]):
        v = cols[:, j]
        t = s + v
        big = np.abs(s) >= np.abs(v)
        c += np.where(big, (s - t) + v, (v - t) + s)
        s = t
    return s + c


def expsum_eval(x, weights, rates, taylor, offset, radius, center=0j):
    x = np.asarray(x, dtype=float)
    weights = np.asarray(weights, dtype=complex)
    rates = np.asarray(rates, dtype=complex)
    taylor = np.asarray(taylor, dtype=complex)
    flat = x.ravel()
    out = np.empty(flat.shape, dtype=complex)
    dmax = np.abs(rates - center).max() if rates.size else 0.0
    near = (np.abs(flat) * dmax <= radius) if taylor.size else np.zeros(flat.shape, bool)
    far = ~near
    if far.any():
        xf = flat[far]
        terms = weights[None, :] * np.exp(np.outer(xf, rates))
        order = np.argsort(-np.abs(terms), axis=1, kind="stable")
        terms = np.take_along_axis(terms, order, axis=1)
        out[far] = _neumaier(terms.real) + 1j * _neumaier(terms.imag)
    if near.any():
        xn = flat[near]
        acc = np.full(xn.shape, taylor[-1], dtype=complex)
        for t in taylor[-2::-1]:
            acc = acc * xn + t
        out[near] = acc * xn ** offset * np.exp(center * xn)
    return out.reshape(x.shape)


def _integrand(x, weights, rates, taylor, offset, radius, center, mode, reg):
    mag = np.abs(expsum_eval(x, weights, rates, taylor, offset, radius, center))
    if mode == MODE_ABS:
        return mag
    denom = mag + reg * np.exp(-x)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = np.where(denom > 0, mag * mag / denom, 0.0)
    return val


def gk15_expsum(a, b, weights, rates, taylor, offset, radius, center, mode, reg):
    """GK15 on each ``[a_i, b_i]``; returns Kronrod, Gauss and |f| integrals."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    x = 0.5 * (a + b)[:, None] + half[:, None] * NODES[None, :]
    f = _integrand(x, weights, rates, taylor, offset, radius, center, mode, reg)
    kron = half * (f @ KRONROD_WEIGHTS)
    gauss = half * (f @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(f) @ KRONROD_WEIGHTS)
    return kron, gauss, resabs


_GOLDEN = 0.6180339887498949


def golden_minima(lo, hi, weights, rates, taylor, offset, radius, center, iterations):
    """Golden-section search for a minimum of ``|phi|`` in each ``[lo_i, hi_i]``."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    args = (weights, rates, taylor, offset, radius, center)
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc = np.abs(expsum_eval(c, *args))
    fd = np.abs(expsum_eval(d, *args))
    eps = np.finfo(float).eps
    for _ in range(iterations):
        left = fc <= fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        c_next = np.where(left, hi - _GOLDEN * (hi - lo), d)
        d_next = np.where(left, c, lo + _GOLDEN * (hi - lo))
        fresh = np.abs(expsum_eval(np.where(left, c_next, d_next), *args))
        fc, fd = np.where(left, fresh, fd), np.where(left, fc, fresh)
        c, d = c_next, d_next
        if np.all(hi - lo <= 4 * eps * np.maximum(np.abs(hi), 1.0)):
            break
    return 0.5 * (lo + hi)
