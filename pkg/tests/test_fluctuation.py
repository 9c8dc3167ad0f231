"""
Tests for the fluctuation operator, the Gaussian factor and the instanton density.
"""

import math

import numpy as np
import pytest

from src.errors import GridTooCoarse, InvalidParameters, OverflowRisk
from src.models.data_models import InstantonSolution, PotentialParams
from src.physics import fluctuation, instanton


HALF = PotentialParams(alpha=0.5, beta=1.0)


def test_curvature_profile_limits():
    params = PotentialParams(alpha=1.0, beta=1.3)
    assert fluctuation.curvature_profile(params, -40.0) == pytest.approx(4.0 * 1.3 ** 4, rel=1e-12)
    assert fluctuation.curvature_profile(params, 40.0) == pytest.approx(1.3 ** 4, rel=1e-12)


def test_operator_on_constant_is_potential_term():
    grid = np.linspace(-8.0, 8.0, 801)
    f = np.full_like(grid, 2.5)
    result = fluctuation.apply_fluctuation_operator(HALF, f, grid, tolerance=None)
    expected = 2.5 * HALF.alpha * fluctuation.curvature_profile(HALF, grid)
    np.testing.assert_allclose(result[1:-1], expected[1:-1], rtol=1e-12)


def test_operator_on_plane_wave_in_flat_region():
    grid = np.linspace(20.0, 30.0, 1001)
    h = grid[1] - grid[0]
    k = 3.0
    f = np.sin(k * grid)
    result = fluctuation.apply_fluctuation_operator(HALF, f, grid, tolerance=None)
    eigenvalue = (1.0 - math.cos(k * h)) / (h * h) + HALF.alpha * HALF.beta ** 4
    np.testing.assert_allclose(result[1:-1], eigenvalue * f[1:-1], rtol=0, atol=1e-9)


def test_zero_mode_residual_is_second_order():
    residuals = [
        fluctuation.zero_mode_residual(HALF, np.linspace(-8.0, 8.0, n))
        for n in (401, 801, 1601)
    ]
    orders = [math.log2(residuals[i] / residuals[i + 1]) for i in range(2)]
    for order in orders:
        assert order == pytest.approx(2.0, abs=0.2)


def test_coarse_grid_rejected():
    grid = np.linspace(-8.0, 8.0, 401)
    with pytest.raises(GridTooCoarse):
        fluctuation.apply_fluctuation_operator(HALF, np.zeros_like(grid), grid)


def test_fine_grid_accepted():
    grid = np.linspace(-8.0, 8.0, 32001)
    zero_mode = instanton.zero_mode(InstantonSolution(params=HALF), grid)
    result = fluctuation.apply_fluctuation_operator(HALF, zero_mode, grid)
    assert np.max(np.abs(result[1:-1])) < 1e-6 * np.max(zero_mode)


def test_non_uniform_grid_rejected():
    grid = np.array([0.0, 0.1, 0.3, 0.4])
    with pytest.raises(InvalidParameters):
        fluctuation.zero_mode_residual(HALF, grid)


def test_gaussian_factor_matches_asymptotic_form():
    params = PotentialParams(alpha=1.0, beta=1.2)
    T = 12.0 / params.kink_rate
    exact = fluctuation.gaussian_factor(params, T)
    assert exact == pytest.approx(fluctuation.gaussian_factor_asymptotic(params, T), rel=1e-2)


def test_gaussian_factor_known_values():
    assert fluctuation.gaussian_factor_asymptotic(HALF, 12.0) == pytest.approx(0.00197776, rel=1e-5)
    assert fluctuation.gaussian_factor(HALF, 12.0) == pytest.approx(0.00197776, rel=1e-2)


def test_gaussian_factor_decay_rate():
    params = PotentialParams(alpha=0.8, beta=1.1)
    a = params.kink_rate
    lo, hi = 8.0 / a, 16.0 / a
    slope = (fluctuation.log_gaussian_factor(params, hi) - fluctuation.log_gaussian_factor(params, lo)) / (hi - lo)
    assert slope == pytest.approx(-0.5 * a, rel=1e-2)


def test_tanh_sinh_agrees_with_adaptive():
    adaptive = fluctuation.log_gaussian_factor(HALF, 6.0)
    tanh_sinh = fluctuation.log_gaussian_factor(HALF, 6.0, method="tanh-sinh")
    assert tanh_sinh == pytest.approx(adaptive, rel=1e-7)


def test_unknown_quadrature_method():
    with pytest.raises(ValueError):
        fluctuation.gaussian_factor(HALF, 6.0, method="simpson")


def test_overflow_window():
    with pytest.raises(OverflowRisk):
        fluctuation.gaussian_factor(HALF, 301.0)
    with pytest.raises(InvalidParameters):
        fluctuation.gaussian_factor(HALF, 0.0)


def test_boundary_eigenvalue_known_values():
    assert fluctuation.boundary_eigenvalue(PotentialParams(alpha=1.0, beta=1.0), 0.0) == pytest.approx(8.0, rel=1e-15)
    assert fluctuation.boundary_eigenvalue(HALF, 5.0) == pytest.approx(4.0 * math.exp(-10.0), rel=1e-12)
    log_eps = fluctuation.log_boundary_eigenvalue(PotentialParams(alpha=1.0, beta=2.0), 3.0)
    assert log_eps == pytest.approx(math.log(128.0) - 24.0 * math.sqrt(2.0), rel=1e-14)


def test_boundary_eigenvalue_rejects_negative_interval():
    with pytest.raises(InvalidParameters):
        fluctuation.boundary_eigenvalue(HALF, -1.0)


def test_stripped_factor_known_values():
    assert fluctuation.stripped_factor(HALF, 1.0) == pytest.approx(0.200889, rel=1e-5)


@pytest.mark.parametrize("alpha, beta, T", [(0.5, 1.0, 1.0), (1.0, 2.0, 0.3), (2.5, 0.9, 4.0)])
def test_stripped_factor_forms_agree(alpha, beta, T):
    params = PotentialParams(alpha=alpha, beta=beta)
    assert fluctuation.stripped_factor_via_eigenvalue(params, T) == pytest.approx(
        fluctuation.stripped_factor(params, T), rel=1e-12
    )


def test_instanton_density_known_values():
    assert fluctuation.instanton_density(HALF) == pytest.approx(4.0 / math.sqrt(3.0 * math.pi), rel=1e-12)
    unit = fluctuation.instanton_density(PotentialParams(alpha=1.0, beta=1.0))
    assert unit == pytest.approx(4.0 * math.sqrt(2.0 / (3.0 * math.pi)), rel=1e-12)
    assert unit == pytest.approx(1.8426354, rel=1e-7)


def test_instanton_density_scales_with_beta_squared():
    base = fluctuation.instanton_density(PotentialParams(alpha=0.7, beta=1.1))
    doubled = fluctuation.instanton_density(PotentialParams(alpha=0.7, beta=2.2))
    assert doubled == pytest.approx(4.0 * base, rel=1e-14)


def test_collective_factor_matches_gaussian_factor():
    params = PotentialParams(alpha=1.0, beta=1.2)
    T = 12.0 / params.kink_rate
    action = instanton.classical_action_analytic(params).value
    via_eigenvalue = (
        2.0 * T * math.sqrt(action)
        * fluctuation.gaussian_factor(params, T)
        * math.sqrt(fluctuation.boundary_eigenvalue(params, T) / math.pi)
    )
    assert fluctuation.collective_factor(params, T) == pytest.approx(via_eigenvalue, rel=1e-2)


def test_one_instanton_amplitude_is_weighted_collective_factor():
    params = PotentialParams(alpha=1.0, beta=1.5)
    action = instanton.classical_action_analytic(params).value
    expected = math.exp(-action) * fluctuation.collective_factor(params, 0.7)
    assert fluctuation.one_instanton_amplitude(params, 0.7) == pytest.approx(expected, rel=1e-12)


def test_report_is_positive():
    report = fluctuation.fluctuation_report(HALF, 10.0)
    for value in (report.I_T, report.I0, report.gaussian_factor, report.epsilon0, report.kappa):
        assert value > 0.0
    assert report.omega_avg == pytest.approx(1.5, rel=1e-15)
    assert report.S_E == 0.25


def test_discrete_lowest_eigenvalue_decays_at_boundary_rate():
    a = HALF.kink_rate
    intervals = np.array([3.0, 4.0, 5.0]) / a
    h = 1e-3
    logs = [
        math.log(fluctuation.discrete_fluctuation_spectrum(HALF, T, n_points=int(round(2 * T / h)) + 1)[0])
        for T in intervals
    ]
    slope = np.polyfit(intervals, logs, 1)[0]
    assert slope == pytest.approx(-2.0 * a, rel=5e-2)


if __name__ == "__main__":
    pytest.main([__file__])
