import math

import numpy as np
import pytest

from kwire import observables
from kwire.analysis import is_nondecreasing, mirror_correlation, sign_changes
from kwire.observables import (
    CorrelationPoint,
    correlation,
    correlation_integrand,
    crossing_scan,
    current,
    current_integrand,
    sweep_bias,
    sweep_distance,
    sweep_iv,
    sweep_position,
)
from kwire.quadrature import ConvergenceError, integrate_line, midpoint_reference


def fake_correlation(i, j, p, rel_tol=1e-10):
    """Linear in eV with its zero at eV = 20 / L."""
    return CorrelationPoint(i, j, p.eV, 1.0 - p.eV * p.L / 20.0, 1e-14)


# ─────────────────────────────────────────────
# Point observables
# ─────────────────────────────────────────────

@pytest.mark.parametrize("i, j", [(4, 8), (1, 20), (10, 10)])
def test_correlation_vanishes_without_coupling(params, i, j):
    p = params.replace(t_prime=0.0, eV=1.0)
    assert abs(correlation(i, j, p).value) < 1e-12


def test_correlation_is_symmetric_in_sites(biased):
    assert correlation(8, 4, biased).value == correlation(4, 8, biased).value


@pytest.mark.parametrize("eV", [0.2, 1.0, 1.6])
def test_correlation_mirror_bias_symmetry(params, eV):
    here = correlation(4, 8, params.with_bias(eV)).value
    there = correlation(17, 13, params.with_bias(-eV)).value
    assert here == pytest.approx(there, abs=1e-8)


def test_correlation_integrand_is_real(biased):
    values = correlation_integrand(4, 8, biased)(np.linspace(-5, 5, 101))
    assert np.isrealobj(values)


def test_current_vanishes_at_zero_bias(params):
    assert abs(current(params).value) < 1e-10


def test_current_vanishes_without_coupling(params):
    assert current(params.replace(t_prime=0.0, eV=1.0)).value == 0


@pytest.mark.parametrize("eV", [0.5, 1.0, 2.0])
def test_current_is_odd_in_bias(params, eV):
    forward = current(params.with_bias(eV)).value
    backward = current(params.with_bias(-eV)).value
    assert forward > 0
    assert forward + backward == pytest.approx(0.0, abs=1e-10)


def test_current_integrand_supported_inside_bias_window(biased):
    omegas = np.array([-3.0, -0.6, -0.2, 0.0, 0.3, 0.6, 3.0])
    values = current_integrand(biased)(omegas)
    inside = np.abs(omegas) < biased.eV / 2
    assert np.all(values[inside] > 0)
    np.testing.assert_array_equal(values[~inside], 0)


# ─────────────────────────────────────────────
# Sweeps (cheap stand-in observable)
# ─────────────────────────────────────────────

def test_sweep_bias_rows_in_grid_order(monkeypatch, params):
    monkeypatch.setattr(observables, "correlation", fake_correlation)
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    serial = sweep_bias(4, 8, grid, params)
    threaded = sweep_bias(4, 8, grid, params, workers=3)
    assert serial.kind == "bias"
    assert (serial.x_name, serial.y_name) == ("eV", "C")
    np.testing.assert_array_equal(serial.xs, grid)
    np.testing.assert_array_equal(threaded.values, serial.values)
    assert serial.params["i"] == 4


def test_sweep_records_failed_rows(monkeypatch, params):
    def flaky(i, j, p, rel_tol=1e-10):
        if p.eV == 0.5:
            raise ConvergenceError("did not converge", best=0.1, est_error=1.0)
        return fake_correlation(i, j, p)

    monkeypatch.setattr(observables, "correlation", flaky)
    result = sweep_bias(4, 8, [0.0, 0.5, 1.0], params, workers=2)
    assert len(result.rows) == 3
    assert [r.ok for r in result.rows] == [True, False, True]
    assert math.isnan(result.rows[1].value)
    assert "did not converge" in result.failed[0].error


def test_sweep_bias_rejects_unsorted_grid(params):
    with pytest.raises(ValueError):
        sweep_bias(4, 8, [1.0, 0.0], params)


def test_sweep_distance_and_position_shapes(monkeypatch, params):
    monkeypatch.setattr(observables, "correlation", fake_correlation)
    distance = sweep_distance(4, params, 1.6)
    assert distance.kind == "distance"
    np.testing.assert_array_equal(distance.xs, np.arange(1, 21))
    position = sweep_position(4, params, 1.0)
    assert position.kind == "position"
    np.testing.assert_array_equal(position.xs, np.arange(1, 17))
    with pytest.raises(ValueError):
        sweep_position(20, params, 1.0)


def test_crossing_scan_tracks_wire_length(monkeypatch, params):
    monkeypatch.setattr(observables, "correlation", fake_correlation)
    grid = [0.05 * k for k in range(41)]
    result = crossing_scan("L", [20, 40], 4, 8, grid, params)
    assert result.kind == "crossing"
    assert (result.x_name, result.y_name) == ("L", "eV_star")
    assert result.values[0] == pytest.approx(1.0, abs=1e-12)
    assert result.values[1] == pytest.approx(0.5, abs=1e-12)
    assert result.errors[0] == pytest.approx(0.025)


def test_crossing_scan_ignores_equilibrium_roundoff(monkeypatch, params):
    def noisy_start(i, j, p, rel_tol=1e-10):
        value = -1.3e-17 if p.eV == 0.0 else 0.6 * 20.0 / p.L - p.eV
        return CorrelationPoint(i, j, p.eV, value, 6e-13)

    monkeypatch.setattr(observables, "correlation", noisy_start)
    grid = [0.05 * k for k in range(41)]
    result = crossing_scan("L", [20, 40], 4, 8, grid, params)
    assert list(result.values) == pytest.approx([0.6, 0.3], abs=1e-12)


def test_crossing_scan_without_crossing(monkeypatch, params):
    monkeypatch.setattr(observables, "correlation", fake_correlation)
    result = crossing_scan("W", [1.0], 4, 8, [0.0, 0.1, 0.2], params)
    assert not result.rows[0].ok
    assert "no zero crossing" in result.rows[0].error


def test_crossing_scan_rejects_unknown_parameter(params):
    with pytest.raises(ValueError):
        crossing_scan("v_F", [1.0], 4, 8, [0.0, 0.1], params)


# ─────────────────────────────────────────────
# Full-accuracy runs
# ─────────────────────────────────────────────

@pytest.mark.slow
def test_correlation_matches_fine_grid_reference(biased):
    f = correlation_integrand(4, 8, biased)
    romberg = integrate_line(f, 1e-10, biased).value
    assert romberg == pytest.approx(midpoint_reference(f, biased), abs=1e-8)


@pytest.mark.slow
def test_current_matches_fine_grid_reference(biased):
    f = current_integrand(biased)
    value = current(biased).value
    assert value > 0
    assert value == pytest.approx(midpoint_reference(f, biased), abs=1e-8)


@pytest.mark.slow
def test_bias_sweep_oscillates(params):
    grid = [0.05 * k for k in range(41)]
    result = sweep_bias(4, 8, grid, params, workers=4)
    assert not result.failed
    assert result.values[0] == correlation(4, 8, params).value
    assert sign_changes(result.values, result.errors) >= 1


@pytest.mark.slow
def test_current_voltage_curve_is_nondecreasing(params):
    result = sweep_iv([0.1 * k for k in range(21)], params, workers=4)
    assert not result.failed
    assert is_nondecreasing(result.values, result.errors)
    assert result.values[-1] > 0


@pytest.mark.slow
def test_distance_profile_alternates_faster_at_higher_bias(params):
    low = sweep_distance(4, params, 0.2, workers=4)
    high = sweep_distance(4, params, 1.6, workers=4)
    assert not low.failed and not high.failed
    high_changes = sign_changes(high.values, high.errors)
    assert high_changes >= 1
    assert high_changes > sign_changes(low.values, low.errors)


@pytest.mark.slow
def test_position_profile_is_antisymmetric_about_the_center(params):
    result = sweep_position(4, params, 1.0, workers=4)
    assert not result.failed
    assert mirror_correlation(result.values) < 0
    for row in result.rows[:3]:
        i = int(row.x)
        mirrored = correlation(params.mirror_site(i), params.mirror_site(i + 4), params.with_bias(-1.0)).value
        assert row.value == pytest.approx(mirrored, abs=1e-8)
