"""Numerical counterparts of the stability and sharpness arguments.

* :func:`extremal_f` builds the regularized perturbation whose bounded
  response at ``x = 0`` approaches ``K_D`` as ``theta -> 0``.
* :func:`sharpness_lower_bound` evaluates that response in closed integral
  form and reports the gap to ``K_D``.
* :func:`stability_trial` forces the operator with random bounded inputs
  and checks ``sup |y - y_H| <= K_D * eps``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constant import best_constant
from .kernel import KernelFunction, KernelGroup, build_kernel, deviation_kernel
from .poly import ALL_NEGATIVE, ALL_POSITIVE, MIXED, Classification, RootSet
from .quadrature import DEFAULT_TOL, integrate_interval, integrate_kernel_group, integrate_semi_infinite

DEFAULT_POINTS = 2001
DECAY_LENGTHS = 10.0


@dataclass(frozen=True)
class PerturbationSpec:
    theta: float
    case: Classification
    unit_scalar: complex = 1.0

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError("theta must be positive")
        if abs(abs(self.unit_scalar) - 1.0) > 1e-12:
            raise ValueError("unit_scalar must have modulus 1")


@dataclass(frozen=True)
class SharpnessReport:
    theta: float
    lower_bound: float
    K_D: float
    gap: float
    gap_bound: float
    patch_contribution_bound: float
    abs_error_bound: float
    case: str
    V_abs: float


@dataclass(frozen=True)
class GridSpec:
    half_width: float | None = None
    points: int = DEFAULT_POINTS

    def resolve(self, rootset: RootSet) -> np.ndarray:
        L = self.half_width if self.half_width else DECAY_LENGTHS / rootset.rho_min
        return np.linspace(-L, L, self.points)


@dataclass(frozen=True)
class StabilityTrial:
    epsilon: float
    f_description: dict
    deviation_sup: float
    bound: float
    grid: dict
    tilde_constants: tuple[complex, ...]
    passed: bool = field(default=True)


def _regularized_conj(group: KernelGroup, u, c: float):
    """``conj(phi(u)) / (|phi(u)| + c e^-u)`` for any real ``u``."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape, dtype=complex)
    ahead = u >= 0
    if ahead.any():
        phi = group(u[ahead])
        den = np.abs(phi) + c * np.exp(-u[ahead])
        out[ahead] = np.where(den > 0, np.conj(phi) / np.where(den > 0, den, 1.0), 0)
    back = ~ahead
    if back.any():
        # growing terms: rescale every term by the largest log-magnitude
        ub = u[back]
        expo = np.outer(ub, group.rates)
        logs = np.log(np.abs(group.weights))[None, :] + expo.real
        reg_log = (math.log(c) if c > 0 else -np.inf) - ub
        shift = np.maximum(logs.max(axis=1), reg_log)
        phi = (group.weights[None, :] * np.exp(expo - shift[:, None])).sum(axis=1)
        den = np.abs(phi) + np.exp(reg_log - shift)
        out[back] = np.where(den > 0, np.conj(phi) / np.where(den > 0, den, 1.0), 0)
    return out


def extremal_f(rootset: RootSet, spec: PerturbationSpec,
               kernel: KernelFunction | None = None) -> Callable:
    """Continuous forcing with ``sup |f| <= 1`` that nearly attains ``K_D``.

    ``AllPositive``: ``conj(h(x)) / (|h(x)| + theta e^-x)``.
    ``AllNegative``: ``conj(h(-x)) / (|h(-x)| + theta e^x)``.
    ``Mixed``: the negative-group form on ``x <= -theta``, minus the
    positive-group form on ``x >= theta``, linear in between.
    """
    kf = kernel or build_kernel(rootset)
    V = kf.V
    c = spec.theta / abs(V)
    # h = (-1)^n V phi, so conj(h)/(|h| + theta e^-u) = conj(sigma) * conj(phi)/(|phi| + c e^-u)
    phase = np.conj((-1) ** kf.n * V / abs(V)) * spec.unit_scalar
    tag = kf.case.tag

    if tag == ALL_POSITIVE:
        def f(x):
            return phase * _regularized_conj(kf.pos, x, c)
    elif tag == ALL_NEGATIVE:
        def f(x):
            return phase * _regularized_conj(kf.neg, -np.asarray(x, dtype=float), c)
    else:
        theta = spec.theta
        left = phase * _regularized_conj(kf.neg, np.array([theta]), c)[0]
        right = -phase * _regularized_conj(kf.pos, np.array([theta]), c)[0]
        if max(abs(left), abs(right)) > 1.0 + 1e-12:
            raise AssertionError("patch endpoints leave the unit ball")

        def f(x):
            x = np.asarray(x, dtype=float)
            out = np.empty(x.shape, dtype=complex)
            lo = x <= -theta
            hi = x >= theta
            mid = ~(lo | hi)
            out[lo] = phase * _regularized_conj(kf.neg, -x[lo], c)
            out[hi] = -phase * _regularized_conj(kf.pos, x[hi], c)
            s = (x[mid] + theta) / (2 * theta)
            out[mid] = (1 - s) * left + s * right
            return out
    return f


def _max_on_patch(group: KernelGroup, theta: float, samples: int = 257) -> float:
    """Upper bound for ``max_[0, theta] |phi|``: grid max plus Lipschitz slack."""
    u = np.linspace(0.0, theta, samples)
    lip = float(np.abs(group.weights * group.rates).sum())
    return float(np.abs(group(u)).max()) + lip * theta / (samples - 1) / 2


def sharpness_lower_bound(rootset: RootSet, theta: float, tol: float = DEFAULT_TOL,
                          kernel: KernelFunction | None = None) -> SharpnessReport:
    """Response of the extremal perturbation at ``x = 0``, against ``K_D``.

    For one-signed root sets this is ``I(theta)/|V|`` with
    ``I(theta) = int_0^inf |h|^2 / (|h| + theta e^-u) du``, and
    ``K_D - I(theta)/|V|`` lies in ``[0, theta/|V|]``. For mixed sets both
    group integrals start at ``theta``; the ``[0, theta]`` patch is only
    bounded, in ``patch_contribution_bound``, and the gap bound becomes
    ``patch_contribution_bound + 2 theta/|V|``.
    """
    kf = kernel or build_kernel(rootset)
    V_abs = abs(kf.V)
    c = theta / V_abs
    K = best_constant(rootset, tol)
    groups = kf.groups()
    if kf.case.tag == MIXED:
        parts = [integrate_kernel_group(g, tol / 2, mode=1, reg=c, start=theta) for g in groups]
        patch = theta * sum(_max_on_patch(g, theta) for g in groups)
        # each regularized integral loses at most int_theta^inf c e^-u <= c
        gap_bound = patch + len(groups) * c
    else:
        parts = [integrate_kernel_group(groups[0], tol, mode=1, reg=c)]
        patch = 0.0
        gap_bound = c
    lower = math.fsum(p.value for p in parts)
    return SharpnessReport(
        theta=theta,
        lower_bound=lower,
        K_D=K.value,
        gap=K.value - lower,
        gap_bound=gap_bound,
        patch_contribution_bound=patch,
        abs_error_bound=math.fsum(p.abs_error_bound for p in parts) + K.abs_error_bound,
        case=str(kf.case),
        V_abs=V_abs,
    )


def ytilde_eval(rootset: RootSet, f: Callable, x: float, tol: float = DEFAULT_TOL,
                kernel: KernelFunction | None = None, breakpoints: Sequence[float] = ()) -> complex:
    """Bounded solution of ``D(y) = f`` at ``x``, for ``sup |f| <= 1``.

    ``y(x) = int_0^inf G_minus(u) f(x-u) du - int_0^inf G_plus(u) f(x+u) du``.
    ``breakpoints`` are kinks of ``f`` (in its own variable).
    """
    kf = kernel or build_kernel(rootset)
    g_plus, g_minus = deviation_kernel(kf)
    total = 0j
    share = tol / len(kf.groups())
    if kf.pos is not None:
        res = integrate_semi_infinite(
            lambda u: g_plus(u) * f(x + u), kf.pos.coeff_sum, kf.pos.decay, share,
            breakpoints=[b - x for b in breakpoints])
        total -= res.value
    if kf.neg is not None:
        res = integrate_semi_infinite(
            lambda u: g_minus(u) * f(x - u), kf.neg.coeff_sum, kf.neg.decay, share,
            breakpoints=[x - b for b in breakpoints])
        total += res.value
    return complex(total)


def particular_solution(rootset: RootSet, f: Callable, x: float, tol: float = DEFAULT_TOL,
                        kernel: KernelFunction | None = None) -> complex:
    """Variation-of-constants solution ``sum_k w_k e^(r_k x) int_0^x f(t) e^(-r_k t) dt``."""
    kf = kernel or build_kernel(rootset)
    total = 0j
    for w, r in zip(kf.vdata.weights, kf.roots):
        lo, hi = (0.0, x) if x >= 0 else (x, 0.0)
        res = integrate_interval(lambda t: f(t) * np.exp(-r * t), lo, hi, tol)
        total += w * np.exp(r * x) * (res.value if x >= 0 else -res.value)
    return complex(total)


def homogeneous(rootset: RootSet, constants: Sequence[complex], x):
    """``sum_k C_k e^(r_k x)``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = np.exp(np.multiply.outer(x, np.asarray(rootset.roots)))
        return terms @ np.asarray(constants, dtype=complex)


def fourier_forcing(seed, modes: int = 8, omega_max: float = 5.0):
    """Random ``(coefficients, frequencies)`` of ``sum_j c_j exp(i w_j x)``."""
    rng = np.random.default_rng(seed)
    coeffs = rng.normal(size=modes) + 1j * rng.normal(size=modes)
    omegas = rng.uniform(-omega_max, omega_max, size=modes)
    return coeffs, omegas


def eval_fourier(coeffs, omegas, x):
    x = np.asarray(x, dtype=float)
    return np.exp(1j * np.multiply.outer(x, omegas)) @ coeffs


def fourier_response(kf: KernelFunction, coeffs, omegas, x):
    """Deviation-kernel integrals for a trigonometric forcing, term by term.

    ``int_0^inf w e^(-r u) e^(i w (x+u)) du = w e^(i w x) / (r - i w)`` for
    the positive group; ``int_0^inf w e^(r u) e^(i w (x-u)) du`` equals
    ``-w e^(i w x) / (r - i w)`` for the negative group.
    """
    roots = np.asarray(kf.roots)
    weights = np.asarray(kf.vdata.weights)
    gain = np.zeros(len(omegas), dtype=complex)
    for group, sign in ((kf.pos, -1.0), (kf.neg, -1.0)):
        if group is None:
            continue
        idx = list(group.indices)
        denom = roots[idx][None, :] - 1j * np.asarray(omegas)[:, None]
        gain += sign * (weights[idx][None, :] / denom).sum(axis=1)
    return eval_fourier(np.asarray(coeffs) * gain, omegas, x)


def tilde_constants(kf: KernelFunction, coeffs, omegas) -> tuple[complex, ...]:
    """Constants ``C~_k`` with ``y_P - y_H`` equal to the bounded deviation.

    ``w_k int_0^inf f e^(-r_k t)`` for the positive group and
    ``-w_k int_-inf^0 f e^(-r_k t)`` for the negative group; both reduce to
    ``w_k sum_j c_j / (r_k - i w_j)`` for a trigonometric forcing.
    """
    roots = np.asarray(kf.roots)
    weights = np.asarray(kf.vdata.weights)
    denom = roots[:, None] - 1j * np.asarray(omegas)[None, :]
    return tuple(complex(v) for v in weights * (np.asarray(coeffs)[None, :] / denom).sum(axis=1))


def stability_trial(rootset: RootSet, epsilon: float, seed=0, grid: GridSpec = GridSpec(), *,
                    family: str = "fourier", modes: int = 8, omega_max: float = 5.0,
                    K_D: float | None = None, kernel: KernelFunction | None = None) -> StabilityTrial:
    """One forcing ``f`` with ``sup |f| = epsilon``; compare ``sup |y - y_H|`` to ``K_D eps``.

    ``family="fourier"`` draws ``modes`` random frequencies in
    ``[-omega_max, omega_max]`` and scales to ``sum |c_j| = epsilon``, the
    sup of ``|f|`` over the real line;
    ``family="constant"`` uses ``f = epsilon``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    kf = kernel or build_kernel(rootset)
    if K_D is None:
        K_D = best_constant(rootset).value
    x = grid.resolve(rootset)
    if family == "fourier":
        coeffs, omegas = fourier_forcing(seed, modes, omega_max)
        # with rationally independent frequencies sup over the real line is
        # sum |c_j| (Kronecker); the sup over a finite grid can fall short of it
        coeffs = coeffs * (epsilon / np.abs(coeffs).sum())
    elif family == "constant":
        coeffs, omegas = np.array([epsilon + 0j]), np.array([0.0])
    else:
        raise ValueError(f"unknown forcing family {family!r}")
    deviation = fourier_response(kf, coeffs, omegas, x)
    dev_sup = float(np.abs(deviation).max())
    bound = K_D * epsilon
    description = {
        "family": family,
        "seed": seed if not isinstance(seed, np.random.SeedSequence) else list(seed.entropy),
        "coefficients": [[float(c.real), float(c.imag)] for c in coeffs],
        "frequencies": [float(w) for w in omegas],
        "sup_norm": float(np.abs(coeffs).sum()),
        "sup_on_grid": float(np.abs(eval_fourier(coeffs, omegas, x)).max()),
    }
    return StabilityTrial(
        epsilon=epsilon,
        f_description=description,
        deviation_sup=dev_sup,
        bound=bound,
        grid={"start": float(x[0]), "stop": float(x[-1]), "points": int(len(x)),
              "spacing": float(x[1] - x[0]) if len(x) > 1 else 0.0},
        tilde_constants=tilde_constants(kf, coeffs, omegas),
        passed=dev_sup <= bound * (1 + 1e-6),
    )


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ULAMC_THREADS", "1")))
    except ValueError:
        return 1


def run_stability_trials(rootset: RootSet, epsilon: float, trials: int, seed: int = 0,
                         grid: GridSpec = GridSpec(), **kwargs) -> list[StabilityTrial]:
    """Independent trials seeded by ``(seed, trial index)``; order is preserved."""
    kf = kwargs.pop("kernel", None) or build_kernel(rootset)
    K_D = kwargs.pop("K_D", None)
    if K_D is None:
        K_D = best_constant(rootset).value

    def one(i):
        return stability_trial(rootset, epsilon, [seed, i], grid, K_D=K_D, kernel=kf, **kwargs)

    workers = min(_threads(), max(1, trials))
    if workers == 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials)))


def kernel_unboundedness_check(rootset: RootSet, constants: Sequence[complex], L: float,
                               points: int = 4001) -> float:
    """``max_[-L, L] |sum_k C_k e^(r_k x)|`` on a uniform grid (endpoints included)."""
    x = np.linspace(-L, L, points)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.abs(homogeneous(rootset, constants, x))
    vals = np.where(np.isnan(vals), np.inf, vals)
    return float(vals.max())
