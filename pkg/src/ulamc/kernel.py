"""Exponential kernels behind the best constant and the deviation formula.

For a root set ordered with the ``p`` positive-real-part roots first, and
``w_k = (-1)^(n+k) V_k / V``::

    h_pos(x) = sum_{k<=p} (-1)^k V_k exp(-r_k x) = (-1)^n V G_plus(x)
    h_neg(x) = sum_{k>p}  (-1)^k V_k exp(+r_k x) = (-1)^n V G_minus(x)

with ``G_plus(u) = sum_{k<=p} w_k exp(-r_k u)`` and
``G_minus(u) = sum_{k>p} w_k exp(r_k u)``. A bounded solution of
``D(y) = f`` is ``int_0^inf G_minus(u) f(x-u) - G_plus(u) f(x+u) du``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _backend
from .poly import ALL_NEGATIVE, ALL_POSITIVE, MIXED, Classification, RootSet
from .vandermonde import VandermondeData, kernel_weights

TAYLOR_RADIUS = 0.5
TAYLOR_TERMS = 18


@dataclass(frozen=True)
class KernelGroup:
    """``phi(x) = sum_k w_k exp(rate_k x)`` over one sign group, ``x >= 0``.

    ``rates`` are ``-r_k`` for the positive group and ``r_k`` for the
    negative group, so every rate has negative real part.
    """

    indices: tuple[int, ...]
    weights: np.ndarray
    rates: np.ndarray
    taylor: np.ndarray
    offset: int
    center: complex = 0j

    @property
    def coeff_sum(self) -> float:
        return float(np.abs(self.weights).sum())

    @property
    def decay(self) -> float:
        return float(-self.rates.real.max())

    @property
    def oscillation(self) -> float:
        return float(np.abs(self.rates.imag).max())

    def __call__(self, x):
        return _backend.core.expsum_eval(x, *self.core_args())

    def core_args(self):
        return self.weights, self.rates, self.taylor, self.offset, TAYLOR_RADIUS, self.center


@dataclass(frozen=True)
class KernelFunction:
    case: Classification
    roots: tuple[complex, ...]
    vdata: VandermondeData
    pos: KernelGroup | None
    neg: KernelGroup | None

    @property
    def V(self) -> complex:
        return self.vdata.V

    @property
    def n(self) -> int:
        return len(self.roots)

    @property
    def decay_rate(self) -> float:
        return min(g.decay for g in self.groups())

    @property
    def pos_terms(self) -> list[tuple[complex, complex]]:
        """``((-1)^k V_k, r_k)`` for the positive group."""
        signed = self.vdata.signed_reduced()
        return [(signed[k], self.roots[k]) for k in (self.pos.indices if self.pos else ())]

    @property
    def neg_terms(self) -> list[tuple[complex, complex]]:
        signed = self.vdata.signed_reduced()
        return [(signed[k], self.roots[k]) for k in (self.neg.indices if self.neg else ())]

    def groups(self) -> list[KernelGroup]:
        return [g for g in (self.pos, self.neg) if g is not None]

    @property
    def _h_scale(self) -> complex:
        return (-1) ** self.n * self.V


def complete_homogeneous(values, degree: int) -> np.ndarray:
    """``h_0..h_degree`` of the given values (complete homogeneous symmetric)."""
    h = np.zeros(degree + 1, dtype=complex)
    h[0] = 1.0
    for v in values:
        for j in range(1, degree + 1):
            h[j] += v * h[j - 1]
    return h


def _group(kf_weights, roots, indices, sign, full):
    idx = tuple(indices)
    weights = np.array([kf_weights[k] for k in idx], dtype=complex)
    rates = np.array([sign * roots[k] for k in idx], dtype=complex)
    center = 0j
    if full:
        # sum_k w_k d_k^m vanishes for m < n-1 and equals sign^(n-1) h_{m-n+1}(d)
        # beyond, for d = rates - center; no cancellation while |x| max|d| is small.
        n = len(idx)
        center = complex(rates.mean())
        hs = complete_homogeneous(rates - center, TAYLOR_TERMS - 1)
        fact = np.array([math.factorial(n - 1 + j) for j in range(TAYLOR_TERMS)], dtype=float)
        taylor = sign ** (n - 1) * hs / fact
        offset = n - 1
    else:
        taylor = np.zeros(0, dtype=complex)
        offset = 0
    return KernelGroup(idx, weights, rates, taylor, offset, center)


def build_kernel(rootset: RootSet) -> KernelFunction:
    roots = rootset.roots
    vdata = kernel_weights(roots)
    case = rootset.classification
    full = case.tag != MIXED
    pos = _group(vdata.weights, roots, rootset.pos_indices, -1, full) if rootset.pos_indices else None
    neg = _group(vdata.weights, roots, rootset.neg_indices, 1, full) if rootset.neg_indices else None
    return KernelFunction(case=case, roots=roots, vdata=vdata, pos=pos, neg=neg)


def _zero(u):
    return np.zeros(np.shape(u), dtype=complex)


def eval_h_pos(kf: KernelFunction, x):
    """``sum_{k<=p} (-1)^k V_k exp(-r_k x)`` for ``x >= 0``."""
    if kf.pos is None:
        raise ValueError(f"no roots with positive real part ({kf.case})")
    return kf._h_scale * kf.pos(x)


def eval_h_neg(kf: KernelFunction, x):
    """``sum_{k>p} (-1)^k V_k exp(r_k x)`` for ``x >= 0``."""
    if kf.neg is None:
        raise ValueError(f"no roots with negative real part ({kf.case})")
    return kf._h_scale * kf.neg(x)


def deviation_kernel(kf: KernelFunction) -> tuple[Callable, Callable]:
    """``(G_plus, G_minus)``; the missing side is identically zero."""
    g_plus = kf.pos if kf.pos is not None else _zero
    g_minus = kf.neg if kf.neg is not None else _zero
    return g_plus, g_minus


def kernel_table(kf: KernelFunction, samples: int, xmax: float) -> str:
    """CSV of ``|h|`` on ``[0, xmax]``: ``x,|h(x)|`` or ``x,|h1|,|h2|`` when mixed."""
    if samples < 2:
        raise ValueError("need at least two samples")
    x = np.linspace(0.0, xmax, samples)
    buf = io.StringIO()
    if kf.case.tag == MIXED:
        cols = [np.abs(eval_h_pos(kf, x)), np.abs(eval_h_neg(kf, x))]
        buf.write("x,|h1|,|h2|\n")
    elif kf.case.tag == ALL_POSITIVE:
        cols = [np.abs(eval_h_pos(kf, x))]
        buf.write("x,|h(x)|\n")
    else:
        assert kf.case.tag == ALL_NEGATIVE
        cols = [np.abs(eval_h_neg(kf, x))]
        buf.write("x,|h(x)|\n")
    for i, xi in enumerate(x):
        buf.write(",".join(repr(float(v)) for v in (xi, *(c[i] for c in cols))) + "\n")
    return buf.getvalue()
