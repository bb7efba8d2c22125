"""Best Ulam constant of ``D(y) = y^(n) + a_1 y^(n-1) + ... + a_n y``.

``K_D`` is the L1 norm of the deviation kernel: ``int_0^inf |G_plus|``
plus ``int_0^inf |G_minus|``. For real roots, for roots sharing one
imaginary part, and for second-order operators with real coefficients it
has closed forms, used as fast paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exceptions import NotApplicable, NumericalError, RepeatedRootsError
from .kernel import KernelFunction, build_kernel
from .poly import Classification, RootSet, coeffs_from_roots
from .quadrature import DEFAULT_TOL, integrate_kernel_group

QUADRATURE_POSITIVE = "QuadraturePositive"
QUADRATURE_NEGATIVE = "QuadratureNegative"
QUADRATURE_MIXED = "QuadratureMixed"
CLOSED_FORM_REAL = "ClosedFormRealRoots"
CLOSED_FORM_COMMON_IMAG = "ClosedFormCommonImag"
CLOSED_FORM_SECOND_ORDER = "ClosedFormSecondOrder"

# imaginary parts below this (times the root scale) count as equal / zero
SHAPE_TOL = 1e-12
DEFAULT_RTOL = 1e-10


@dataclass(frozen=True)
class UlamConstantResult:
    value: float
    route: str
    abs_error_bound: float
    upper_bound_miura: float
    classification: Classification
    roots: tuple[complex, ...]
    truncation_T: float | None = None
    evaluations: int = 0
    cross_check: dict | None = field(default=None)


@dataclass(frozen=True)
class ClosedFormCase:
    delta: float
    alpha: float
    beta: float
    common_imag: float | None = None


def upper_bound_miura(rootset: RootSet) -> float:
    """``1 / prod |Re r_k|``: an Ulam constant, not necessarily the best."""
    return 1.0 / math.prod(abs(r.real) for r in rootset.roots)


def _lower_scale(rootset: RootSet) -> float:
    # |int G| = 1 / |P(0)| bounds K_D from below
    return 1.0 / math.prod(abs(r) for r in rootset.roots)


def closed_form_real(rootset: RootSet) -> float:
    """``1 / |prod r_k|`` for real, distinct, nonzero roots."""
    scale = rootset.scale()
    if any(abs(r.imag) > SHAPE_TOL * scale for r in rootset.roots):
        raise NotApplicable("closed form needs all roots real")
    return 1.0 / abs(math.prod(r.real for r in rootset.roots))


def closed_form_common_imag(rootset: RootSet) -> float:
    """``1 / prod |Re r_k|`` when all roots share one imaginary part."""
    scale = rootset.scale()
    ims = [r.imag for r in rootset.roots]
    if max(ims) - min(ims) > SHAPE_TOL * scale:
        raise NotApplicable("closed form needs a common imaginary part")
    return upper_bound_miura(rootset)


def second_order_case(a1: float, a2: float) -> ClosedFormCase:
    delta = a1 * a1 - 4.0 * a2
    alpha = -a1 / 2.0
    beta = math.sqrt(-delta) / 2.0 if delta < 0 else 0.0
    return ClosedFormCase(delta=delta, alpha=alpha, beta=beta)


def closed_form_second_order(a1: float, a2: float, tol: float = 1e-12) -> float:
    """Best constant of ``y'' + a1 y' + a2 y`` for real nonzero ``a1, a2``.

    ``1/|a2|`` for real roots (``a1^2 - 4 a2 > 0``), otherwise
    ``coth(|a1| pi / (2 sqrt(4 a2 - a1^2))) / a2``, which is
    ``coth(alpha pi / (2 |beta|)) / (alpha^2 + beta^2)`` for roots
    ``alpha +- i beta`` (from ``int_0^inf e^(-px)|sin x| dx = coth(p pi/2)/(1+p^2)``).
    """
    a1 = float(a1)
    a2 = float(a2)
    if a1 == 0 or a2 == 0:
        raise NotApplicable("second-order closed form needs nonzero real a1, a2")
    case = second_order_case(a1, a2)
    if abs(case.delta) <= tol * max(1.0, a1 * a1, abs(a2)):
        raise RepeatedRootsError("a1^2 - 4 a2 = 0: repeated root")
    if case.delta > 0:
        return 1.0 / abs(a2)
    return 1.0 / (a2 * math.tanh(abs(a1) * math.pi / (2.0 * math.sqrt(4.0 * a2 - a1 * a1))))


def _second_order_coeffs(rootset: RootSet) -> tuple[float, float] | None:
    if rootset.n != 2:
        return None
    spec = coeffs_from_roots(rootset.roots)
    a1, a2 = spec.coeffs
    scale = max(1.0, abs(a1), abs(a2))
    if abs(a1.imag) > SHAPE_TOL * scale or abs(a2.imag) > SHAPE_TOL * scale:
        return None
    if a1.real == 0 or a2.real == 0:
        return None
    return a1.real, a2.real


def closed_form(rootset: RootSet) -> tuple[float, str]:
    """First applicable closed form and its route name."""
    for fn, route in ((closed_form_real, CLOSED_FORM_REAL),
                      (closed_form_common_imag, CLOSED_FORM_COMMON_IMAG)):
        try:
            return fn(rootset), route
        except NotApplicable:
            pass
    coeffs = _second_order_coeffs(rootset)
    if coeffs is not None:
        return closed_form_second_order(*coeffs), CLOSED_FORM_SECOND_ORDER
    raise NotApplicable("no closed form covers this root set")


def quadrature_constant(rootset: RootSet, tol: float = DEFAULT_TOL,
                        rtol: float = DEFAULT_RTOL,
                        kernel: KernelFunction | None = None) -> UlamConstantResult:
    """``K_D`` from the kernel integrals, whatever the root configuration.

    The effective absolute tolerance is ``min(tol, rtol * 1/prod|r_k|)``;
    the second term is a lower bound for ``K_D`` so ``rtol`` acts as a
    relative tolerance under root rescaling.
    """
    kf = kernel or build_kernel(rootset)
    eff = min(tol, rtol * _lower_scale(rootset))
    groups = kf.groups()
    results = [integrate_kernel_group(g, eff / len(groups)) for g in groups]
    value = math.fsum(r.value for r in results)
    route = {"AllPositive": QUADRATURE_POSITIVE,
             "AllNegative": QUADRATURE_NEGATIVE}.get(kf.case.tag, QUADRATURE_MIXED)
    return UlamConstantResult(
        value=value,
        route=route,
        abs_error_bound=math.fsum(r.abs_error_bound for r in results),
        upper_bound_miura=upper_bound_miura(rootset),
        classification=kf.case,
        roots=rootset.roots,
        truncation_T=max(r.truncation_T for r in results),
        evaluations=sum(r.evaluations for r in results),
    )


def best_constant(rootset: RootSet, tol: float = DEFAULT_TOL, *,
                  rtol: float = DEFAULT_RTOL, method: str = "auto",
                  cross_check: bool = False) -> UlamConstantResult:
    """Best Ulam constant of the operator with the given roots.

    Parameters
    ----------
    method : {"auto", "quadrature", "closed-form"}
        ``auto`` uses a closed form when one applies, quadrature otherwise.
    cross_check : bool
        Also run quadrature when a closed form was used; the two must agree
        within ``tol + error bound`` or :class:`NumericalError` is raised.
    """
    if method not in ("auto", "quadrature", "closed-form"):
        raise ValueError(f"unknown method {method!r}")
    if method == "quadrature":
        return quadrature_constant(rootset, tol, rtol)
    try:
        value, route = closed_form(rootset)
    except NotApplicable:
        if method == "closed-form":
            raise
        return quadrature_constant(rootset, tol, rtol)
    check = None
    if cross_check:
        quad = quadrature_constant(rootset, tol, rtol)
        diff = abs(quad.value - value)
        allowed = tol + quad.abs_error_bound
        check = {
            "quadrature_value": quad.value,
            "quadrature_abs_error_bound": quad.abs_error_bound,
            "difference": diff,
            "agrees": diff <= allowed,
        }
        if diff > allowed:
            raise NumericalError(
                f"closed form {value!r} and quadrature {quad.value!r} differ by "
                f"{diff:.3e} > {allowed:.3e}")
    return UlamConstantResult(
        value=value,
        route=route,
        abs_error_bound=0.0,
        upper_bound_miura=upper_bound_miura(rootset),
        classification=rootset.classification,
        roots=rootset.roots,
        cross_check=check,
    )
