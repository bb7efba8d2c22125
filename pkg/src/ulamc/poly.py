"""Operator representation, characteristic roots and root classification.

The operator ``D(y) = y^(n) + a_1 y^(n-1) + ... + a_n y`` is stored by its
coefficients ``a_1..a_n``; its characteristic polynomial is
``P(z) = z^n + a_1 z^(n-1) + ... + a_n``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ImaginaryAxisError, NumericalError, RepeatedRootsError

DEFAULT_SEP_TOL = 1e-8
DEFAULT_AXIS_TOL = 1e-10

ALL_POSITIVE = "AllPositive"
ALL_NEGATIVE = "AllNegative"
MIXED = "Mixed"
IMAGINARY_AXIS = "ImaginaryAxis"
REPEATED = "Repeated"


@dataclass(frozen=True)
class OperatorSpec:
    order: int
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"order must be a positive integer, got {self.order!r}")
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) != self.order:
            raise ValueError(
                f"expected {self.order} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex]) -> "OperatorSpec":
        coeffs = tuple(complex(c) for c in coeffs)
        return cls(len(coeffs), coeffs)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0.0 for c in self.coeffs)

    def monic(self) -> np.ndarray:
        """Coefficients of P in descending powers, leading 1 included."""
        return np.concatenate(([1.0 + 0j], np.asarray(self.coeffs, dtype=complex)))

    def __call__(self, z):
        """Evaluate the characteristic polynomial at ``z`` (Horner)."""
        z = np.asarray(z, dtype=complex)
        acc = np.ones_like(z)
        for c in self.coeffs:
            acc = acc * z + c
        return acc


@dataclass(frozen=True)
class Classification:
    tag: str
    p: int | None = None
    detail: int | None = None

    def __post_init__(self):
        if self.tag == MIXED and self.p is None:
            raise ValueError("Mixed classification needs p")

    def __str__(self):
        if self.tag == MIXED:
            return f"Mixed(p={self.p})"
        return self.tag


@dataclass(frozen=True)
class RootSet:
    """Validated, canonically ordered characteristic roots.

    Roots with positive real part come first, then the negative ones; each
    group is sorted by ``(Re, Im)``. Indices are 0-based.
    """

    roots: tuple[complex, ...]
    pos_indices: tuple[int, ...]
    neg_indices: tuple[int, ...]
    rho_min: float
    sep_tol: float = DEFAULT_SEP_TOL
    axis_tol: float = DEFAULT_AXIS_TOL
    classification: Classification = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "classification", _classify_counts(
            len(self.pos_indices), len(self.roots)))

    @classmethod
    def from_roots(
        cls,
        roots: Iterable[complex],
        sep_tol: float = DEFAULT_SEP_TOL,
        axis_tol: float = DEFAULT_AXIS_TOL,
    ) -> "RootSet":
        roots = [complex(r) for r in roots]
        if not roots:
            raise ValueError("root list is empty")
        validate_roots(roots, sep_tol, axis_tol)
        pos = sorted((r for r in roots if r.real > 0), key=lambda r: (r.real, r.imag))
        neg = sorted((r for r in roots if r.real < 0), key=lambda r: (r.real, r.imag))
        ordered = tuple(pos + neg)
        return cls(
            roots=ordered,
            pos_indices=tuple(range(len(pos))),
            neg_indices=tuple(range(len(pos), len(ordered))),
            rho_min=min(abs(r.real) for r in ordered),
            sep_tol=sep_tol,
            axis_tol=axis_tol,
        )

    @property
    def n(self) -> int:
        return len(self.roots)

    @property
    def p(self) -> int:
        return len(self.pos_indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=complex)

    def scale(self) -> float:
        return max(1.0, max(abs(r) for r in self.roots))


def validate_roots(roots: Sequence[complex], sep_tol: float, axis_tol: float) -> None:
    """Raise if a root lies on the imaginary axis or two roots coincide."""
    for k, r in enumerate(roots):
        if abs(r.real) <= axis_tol:
            raise ImaginaryAxisError(
                f"root {r} lies on the imaginary axis (|Re| <= {axis_tol:g}); "
                "the operator is not Ulam stable",
                detail=k,
            )
    scale = max(1.0, max(abs(r) for r in roots))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= sep_tol * scale:
                raise RepeatedRootsError(
                    f"roots {roots[i]} and {roots[j]} coincide within "
                    f"{sep_tol:g} (relative); distinct roots are required",
                    detail=j,
                )


def _classify_counts(p: int, n: int) -> Classification:
    if p == n:
        return Classification(ALL_POSITIVE)
    if p == 0:
        return Classification(ALL_NEGATIVE)
    return Classification(MIXED, p=p)


def classify(rootset: RootSet) -> Classification:
    return _classify_counts(rootset.p, rootset.n)


def _horner_with_derivative(monic: np.ndarray, z: complex) -> tuple[complex, complex]:
    p = monic[0]
    dp = 0j
    for c in monic[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _polish(monic: np.ndarray, z: complex, steps: int = 8) -> complex:
    p, dp = _horner_with_derivative(monic, z)
    for _ in range(steps):
        if p == 0 or dp == 0:
            break
        cand = z - p / dp
        p_new, dp_new = _horner_with_derivative(monic, cand)
        if not abs(p_new) < abs(p):
            break
        z, p, dp = cand, p_new, dp_new
    return z


def roots_from_coeffs(
    spec: OperatorSpec,
    sep_tol: float = DEFAULT_SEP_TOL,
    axis_tol: float = DEFAULT_AXIS_TOL,
) -> RootSet:
    """Roots of the characteristic polynomial, validated and ordered.

    Companion-matrix eigenvalues are refined by Newton steps on ``P``.

    Raises
    ------
    ImaginaryAxisError
        Some root has ``|Re r| <= axis_tol``.
    RepeatedRootsError
        Two roots are closer than ``sep_tol`` relative to the root scale.
    NumericalError
        A refined root still violates the residual bound.
    """
    monic = spec.monic()
    n = spec.order
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -monic[1:]
    if n > 1:
        companion[1:, :-1] = np.eye(n - 1)
    raw = np.linalg.eigvals(companion)
    amax = max(abs(c) for c in spec.coeffs)
    roots = []
    for z in raw:
        z = _polish(monic, complex(z))
        if spec.is_real and abs(z.imag) <= 1e-14 * max(1.0, abs(z)):
            z = _polish(monic, complex(z.real, 0.0))
            z = complex(z.real, 0.0)
        resid = abs(_horner_with_derivative(monic, z)[0])
        if resid > 1e-12 * (1.0 + amax) * (1.0 + abs(z)) ** n:
            raise NumericalError(f"root {z} not refined: |P(r)| = {resid:.3e}")
        roots.append(z)
    _check_resolvable(monic, roots)
    return RootSet.from_roots(roots, sep_tol=sep_tol, axis_tol=axis_tol)


def _check_resolvable(monic: np.ndarray, roots: list[complex]) -> None:
    """Reject root pairs closer than their forward-error estimates.

    A root ``r`` computed from rounded coefficients carries an error of
    about ``eps * sum |a_j| |r|^(n-j) / |P'(r)|``. A double root splits into
    two simple ones about ``sqrt(eps)`` apart, which ``sep_tol`` alone misses.
    """
    eps = np.finfo(float).eps
    n = len(roots)
    err = []
    for z in roots:
        size = sum(abs(c) * abs(z) ** (n - j) for j, c in enumerate(monic))
        dp = abs(_horner_with_derivative(monic, z)[1])
        err.append(eps * size / dp if dp > 0 else math.inf)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= 10.0 * (err[i] + err[j]):
                raise RepeatedRootsError(
                    f"roots {roots[i]} and {roots[j]} are not resolvable from the "
                    "coefficients (numerically repeated)",
                    detail=j,
                )


def coeffs_from_roots(roots: Iterable[complex]) -> OperatorSpec:
    """Coefficients ``a_1..a_n`` of the monic polynomial with the given roots."""
    roots = [complex(r) for r in roots]
    if not roots:
        raise ValueError("root list is empty")
    poly = [1.0 + 0j]
    for r in roots:
        nxt = poly + [0j]
        for i in range(1, len(nxt)):
            nxt[i] -= r * poly[i - 1]
        poly = nxt
    return OperatorSpec(len(roots), tuple(poly[1:]))


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_LITERAL = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?i)?|(?P<imonly>[+-]?(?:{_NUM})?i))$"
)


def _imag_part(token: str) -> float:
    body = token[:-1]
    if body in ("", "+"):
        return 1.0
    if body == "-":
        return -1.0
    return float(body)


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style literals: ``3``, ``-0.5-1i``, ``2i``, ``-i``."""
    s = "".join(text.split())
    m = _LITERAL.match(s)
    if m is None:
        raise ValueError(f"not a complex literal: {text!r}")
    if m.group("imonly") is not None:
        return complex(0.0, _imag_part(m.group("imonly")))
    imag = _imag_part(m.group("im")) if m.group("im") else 0.0
    return complex(float(m.group("re")), imag)


def parse_complex_list(text: str) -> list[complex]:
    parts = "".join(text.split()).split(",")
    if any(not p for p in parts):
        raise ValueError(f"empty entry in list: {text!r}")
    return [parse_complex(p) for p in parts]


def format_complex(z: complex) -> str:
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"
