import math

import numpy as np
import pytest

from kwire.observables import correlation_integrand
from kwire.quadrature import (
    ConvergenceError,
    Integrand,
    integrate_line,
    midpoint_reference,
    panel_edges,
    richardson_table,
    romberg_panel,
    tail_bound,
    window,
)


@pytest.mark.parametrize(
    "func, lo, hi, exact, tol",
    [
        (lambda x: x ** 2, 0.0, 1.0, 1.0 / 3.0, 1e-12),
        (np.sin, 0.0, math.pi, 2.0, 1e-10),
        (lambda x: np.exp(-x), 0.0, 1.0, 1.0 - math.exp(-1.0), 1e-10),
    ],
)
def test_romberg_panel_analytic(func, lo, hi, exact, tol):
    result = romberg_panel(Integrand(func), lo, hi, 1e-10)
    assert abs(result.value - exact) < tol
    assert result.panels == 1
    assert result.levels_used[0] >= 5


def test_richardson_table_is_exact_for_quadratics():
    diagonal = richardson_table(lambda x: x ** 2, 0.0, 1.0, 3)
    assert len(diagonal) == 3
    assert diagonal[-1] == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_non_convergence_carries_best_estimate():
    with pytest.raises(ConvergenceError) as excinfo:
        romberg_panel(Integrand(np.sin), 0.0, math.pi, 1e-10, max_level=2)
    error = excinfo.value
    assert error.best is not None
    assert error.est_error > 0
    assert error.panel == (0.0, math.pi)


def test_empty_panel_rejected():
    with pytest.raises(ValueError):
        romberg_panel(Integrand(np.sin), 1.0, 1.0)


def test_jump_points_must_increase():
    with pytest.raises(ValueError):
        Integrand(np.exp, jump_points=(1.0, 0.0))


def test_real_integrand_drops_imaginary_part():
    f = Integrand(lambda w: w + 1j, real=True)
    np.testing.assert_array_equal(f(np.array([1.0, 2.0])), [1.0, 2.0])


def test_panel_edges(params):
    f = Integrand(np.exp, jump_points=(-0.5, 0.0, 0.5))
    edges = panel_edges(f, params, splits=(1e6, 2.0))
    omega_max = window(params)
    assert edges == [-omega_max, -0.5, 0.0, 0.5, 2.0, omega_max]


def test_odd_integrand_with_jump_cancels(params):
    f = Integrand(lambda w: np.sign(w) * np.exp(-np.abs(w)), jump_points=(0.0,))
    result = integrate_line(f, 1e-10, params)
    assert abs(result.value) < 1e-12


def test_two_sided_exponential(params):
    f = Integrand(lambda w: np.exp(-np.abs(w)), jump_points=(0.0,))
    result = integrate_line(f, 1e-10, params)
    assert abs(result.value - 2.0) < 1e-10
    assert result.panels == 2
    assert len(result.levels_used) == 2
    assert result.est_error >= tail_bound(f, params)


def test_artificial_split_does_not_change_result(params):
    f = Integrand(lambda w: np.exp(-np.abs(w)) * np.cos(3 * w), jump_points=(0.0,))
    plain = integrate_line(f, 1e-10, params).value
    split = integrate_line(f, 1e-10, params, splits=(1.3,)).value
    assert split == pytest.approx(plain, rel=1e-9)


def test_midpoint_reference_agrees(params):
    f = Integrand(lambda w: np.exp(-np.abs(w)), jump_points=(0.0,))
    assert midpoint_reference(f, params, n=2 ** 16, chunk=2 ** 12) == pytest.approx(2.0, abs=1e-6)


def test_split_invariance_on_correlation_integrand(biased):
    f = correlation_integrand(4, 8, biased)
    plain = integrate_line(f, 1e-10, biased).value
    split = integrate_line(f, 1e-10, biased, splits=(1.3,)).value
    assert split == pytest.approx(plain, rel=1e-12, abs=1e-15)


def test_tighter_tolerance_stays_within_error_estimate(biased):
    f = correlation_integrand(4, 8, biased)
    loose = integrate_line(f, 1e-8, biased)
    tight = integrate_line(f, 1e-10, biased)
    assert abs(tight.value - loose.value) <= loose.est_error
