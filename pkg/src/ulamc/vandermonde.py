"""Vandermonde determinants and the variation-of-constants weights.

``V(r_1..r_m) = prod_{i<j} (r_j - r_i)``. The weights
``w_k = (-1)^(n+k) V_k / V`` solve the Wronskian system with right-hand
side ``(0, ..., 0, 1)`` and equal ``1 / prod_{j != k} (r_k - r_j)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import RepeatedRootsError

# beyond this many factors the plain product risks overflow
_LOG_PRODUCT_THRESHOLD = 12


@dataclass(frozen=True)
class VandermondeData:
    V: complex
    reduced: tuple[complex, ...]
    weights: tuple[complex, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    def signed_reduced(self) -> tuple[complex, ...]:
        """``(-1)^k V_k`` with 1-based ``k``: the coefficients of the kernel ``h``."""
        return tuple((-1) ** (k + 1) * vk for k, vk in enumerate(self.reduced))


def _product(factors: Sequence[complex]) -> complex:
    if len(factors) <= _LOG_PRODUCT_THRESHOLD:
        out = 1.0 + 0j
        for f in factors:
            out *= f
        return out
    if any(f == 0 for f in factors):
        return 0j
    log_mag = math.fsum(math.log(abs(f)) for f in factors)
    phase = math.fsum(cmath.phase(f) for f in factors)
    return cmath.rect(math.exp(log_mag), phase)


def vandermonde_full(roots: Sequence[complex]) -> complex:
    """``prod_{i<j} (r_j - r_i)`` in the given order; 1 for fewer than two roots."""
    roots = [complex(r) for r in roots]
    factors = [roots[j] - roots[i] for i in range(len(roots)) for j in range(i + 1, len(roots))]
    return _product(factors)


def vandermonde_reduced(roots: Sequence[complex], k: int) -> complex:
    """Vandermonde determinant with the ``k``-th root (1-based) removed."""
    if not 1 <= k <= len(roots):
        raise IndexError(f"k={k} out of range 1..{len(roots)}")
    return vandermonde_full([r for i, r in enumerate(roots, start=1) if i != k])


def kernel_weights(roots: Sequence[complex]) -> VandermondeData:
    """Full and reduced determinants plus the weights ``(-1)^(n+k) V_k / V``.

    The weights are formed directly as reciprocal products of differences,
    so they stay finite even when ``V`` and ``V_k`` overflow separately.
    """
    roots = [complex(r) for r in roots]
    n = len(roots)
    weights = []
    for k in range(n):
        diffs = [roots[k] - roots[j] for j in range(n) if j != k]
        if any(d == 0 for d in diffs):
            raise RepeatedRootsError("degenerate Vandermonde: repeated roots", detail=k)
        denom = _product(diffs)
        w = 1.0 / denom if denom != 0 else complex(math.inf, 0)
        if not cmath.isfinite(w):
            raise RepeatedRootsError(
                "degenerate Vandermonde: weight overflow, roots nearly repeated", detail=k)
        weights.append(w)
    reduced = tuple(vandermonde_reduced(roots, k) for k in range(1, n + 1))
    return VandermondeData(V=vandermonde_full(roots), reduced=reduced, weights=tuple(weights))


def cramer_residuals(roots: Sequence[complex], data: VandermondeData | None = None) -> np.ndarray:
    """Relative residuals of ``sum_k (-1)^(n+k) V_k r_k^j`` against ``0`` / ``V``.

    Entry ``j`` (``0 <= j < n``) is the absolute deviation divided by the
    largest term magnitude in that sum.
    """
    roots = np.asarray(roots, dtype=complex)
    if data is None:
        data = kernel_weights(roots)
    n = len(roots)
    coef = np.array([(-1) ** (n + k + 1) * vk for k, vk in enumerate(data.reduced)])
    out = np.empty(n)
    for j in range(n):
        terms = coef * roots ** j
        target = data.V if j == n - 1 else 0.0
        scale = max(np.abs(terms).max(), abs(target))
        out[j] = abs(terms.sum() - target) / scale if scale > 0 else 0.0
    return out
