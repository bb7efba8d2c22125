import numpy as np
import pytest

from _matrix import NEGATIVE_REAL, TEST_MATRIX
from ulamc.constant import best_constant
from ulamc.kernel import build_kernel
from ulamc.poly import RootSet, coeffs_from_roots
from ulamc.verify import (GridSpec, PerturbationSpec, eval_fourier, extremal_f, fourier_forcing,
                          fourier_response, homogeneous, kernel_unboundedness_check,
                          particular_solution, run_stability_trials, sharpness_lower_bound,
                          stability_trial, tilde_constants, ytilde_eval)

SHARP_SETS = [[-1, -2], [1, 2], [-1 + 1j, -1 - 1j]]
MIXED_SETS = [[1, -2], [1 + 1j, 1 - 1j, -2], [0.5 + 1j, -1 - 0.5j, 2]]


@pytest.mark.parametrize("roots", SHARP_SETS)
def test_sharpness_gap_within_theta_over_V(roots):
    rs = RootSet.from_roots(roots)
    previous = -np.inf
    for theta in (1e-2, 1e-3, 1e-4):
        rep = sharpness_lower_bound(rs, theta)
        assert rep.gap_bound == pytest.approx(theta / rep.V_abs)
        assert -2e-10 <= rep.gap <= rep.gap_bound + 2e-10
        assert rep.lower_bound > previous
        previous = rep.lower_bound


@pytest.mark.parametrize("roots", MIXED_SETS)
def test_mixed_sharpness_gap_bound(roots):
    rs = RootSet.from_roots(roots)
    for theta in (1e-2, 1e-3, 1e-4):
        rep = sharpness_lower_bound(rs, theta)
        assert 0 <= rep.gap <= rep.gap_bound + 2e-10
        assert rep.patch_contribution_bound > 0


@pytest.mark.parametrize("roots", SHARP_SETS + MIXED_SETS)
def test_extremal_forcing_attains_lower_bound(roots):
    rs = RootSet.from_roots(roots)
    theta = 1e-2
    f = extremal_f(rs, PerturbationSpec(theta, rs.classification))
    x = np.linspace(-30, 30, 6001)
    assert np.abs(f(x)).max() <= 1 + 1e-12
    rep = sharpness_lower_bound(rs, theta)
    kinks = (-theta, theta) if rs.classification.tag == "Mixed" else ()
    y0 = abs(ytilde_eval(rs, f, 0.0, 1e-11, breakpoints=kinks))
    # the patch on [-theta, theta] only enters the mixed response
    assert y0 == pytest.approx(rep.lower_bound, abs=rep.patch_contribution_bound + 1e-9)


def test_perturbation_spec_validation():
    case = RootSet.from_roots([-1]).classification
    with pytest.raises(ValueError):
        PerturbationSpec(0.0, case)
    with pytest.raises(ValueError):
        PerturbationSpec(0.1, case, unit_scalar=2)


@pytest.mark.parametrize("roots", [[1 + 1j, 1 - 1j, -2], [-1, -2], [3], [-0.3 + 4j, -0.3 - 4j, -1]])
def test_fourier_response_matches_transfer_function(roots):
    rs = RootSet.from_roots(roots)
    kf = build_kernel(rs)
    P = coeffs_from_roots(rs.roots)
    c, w = fourier_forcing(11, 5)
    x = np.linspace(-4, 4, 33)
    want = eval_fourier(c / np.array([P(1j * o) for o in w]), w, x)
    assert np.allclose(fourier_response(kf, c, w, x), want, rtol=1e-12, atol=1e-14)


def test_deviation_is_particular_minus_homogeneous():
    rs = RootSet.from_roots([1 + 1j, 1 - 1j, -2])
    kf = build_kernel(rs)
    c, w = fourier_forcing(7, 3)
    f = lambda t: eval_fourier(c, w, t)  # noqa: E731
    C = tilde_constants(kf, c, w)
    for x in (-1.0, 0.0, 0.7, 2.0):
        dev = fourier_response(kf, c, w, np.array([x]))[0]
        yp = particular_solution(rs, f, x, 1e-12)
        assert yp - homogeneous(rs, C, np.array([x]))[0] == pytest.approx(dev, abs=1e-11)
        assert ytilde_eval(rs, f, x, 1e-11) == pytest.approx(dev, abs=1e-9)


def test_homogeneous_part_is_unbounded():
    rs = RootSet.from_roots([1 + 1j, 1 - 1j, -2])
    kf = build_kernel(rs)
    C = tilde_constants(kf, *fourier_forcing(3, 4))
    sizes = [kernel_unboundedness_check(rs, C, L) for L in (5, 10, 20)]
    assert sizes[0] < sizes[1] < sizes[2]
    assert sizes[2] > 1e6 * sizes[0]


@pytest.mark.parametrize("name", sorted(TEST_MATRIX))
def test_stability_trials_respect_bound(name):
    rs = RootSet.from_roots(TEST_MATRIX[name])
    trials = run_stability_trials(rs, 0.1, 20, seed=1)
    assert all(t.passed for t in trials)
    assert all(t.deviation_sup <= t.bound * (1 + 1e-6) for t in trials)


@pytest.mark.parametrize("name", NEGATIVE_REAL)
def test_constant_forcing_is_extremal(name):
    rs = RootSet.from_roots(TEST_MATRIX[name])
    t = stability_trial(rs, 0.25, family="constant")
    assert t.deviation_sup == pytest.approx(best_constant(rs).value * 0.25, rel=1e-12)


def test_trials_are_deterministic_and_thread_independent(monkeypatch):
    rs = RootSet.from_roots([0.5 + 1j, -1 - 0.5j, 2])
    grid = GridSpec(points=501)
    monkeypatch.setenv("ULAMC_THREADS", "1")
    serial = run_stability_trials(rs, 1.0, 12, seed=9, grid=grid)
    monkeypatch.setenv("ULAMC_THREADS", "4")
    parallel = run_stability_trials(rs, 1.0, 12, seed=9, grid=grid)
    assert serial == parallel
    assert run_stability_trials(rs, 1.0, 12, seed=10, grid=grid) != serial


def test_grid_spec_defaults():
    rs = RootSet.from_roots([-0.5, 2])
    x = GridSpec().resolve(rs)
    assert x[0] == -20 and x[-1] == 20 and len(x) == 2001
    with pytest.raises(ValueError):
        stability_trial(rs, 0.0)
    with pytest.raises(ValueError):
        stability_trial(rs, 1.0, family="noise")
