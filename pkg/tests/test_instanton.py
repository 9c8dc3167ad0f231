"""
Tests for the classical kink, its zero mode and action.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from src.errors import TooShortInterval
from src.models.data_models import InstantonSolution, Orientation, PotentialParams
from src.physics import instanton, potential


UNIT = PotentialParams(alpha=1.0, beta=1.0)


def kink(alpha=1.0, beta=1.0, **kwargs):
    return InstantonSolution(params=PotentialParams(alpha=alpha, beta=beta), **kwargs)


def test_kink_center_value():
    assert instanton.phi_cl(kink(), 0.0) == pytest.approx(-1.0 / math.sqrt(2.0), rel=1e-15)


def test_kink_asymptotics():
    assert abs(instanton.phi_cl(kink(), -50.0) + 1.0) < 1e-20
    assert abs(instanton.phi_cl(kink(), 50.0)) < 1e-20


def test_kink_is_monotone():
    tau = np.linspace(-5.0, 5.0, 2001)
    assert np.all(np.diff(instanton.phi_cl(kink(), tau)) > 0.0)
    anti = kink(orientation=Orientation.ANTI_INSTANTON)
    assert np.all(np.diff(instanton.phi_cl(anti, tau)) < 0.0)


def test_anti_instanton_is_time_reflection():
    tau = np.linspace(-3.0, 3.0, 101)
    sol = kink(alpha=0.7, beta=1.3, tau0=0.4)
    anti = kink(alpha=0.7, beta=1.3, tau0=0.4, orientation=Orientation.ANTI_INSTANTON)
    np.testing.assert_allclose(instanton.phi_cl(anti, 0.4 + tau), instanton.phi_cl(sol, 0.4 - tau), rtol=0, atol=1e-15)
    np.testing.assert_allclose(instanton.velocity(anti, 0.4 + tau), -instanton.velocity(sol, 0.4 - tau), rtol=0, atol=1e-15)


def test_translation_covariance():
    tau = np.linspace(-4.0, 4.0, 81)
    shifted = kink(alpha=1.5, beta=1.2, tau0=0.75)
    centred = kink(alpha=1.5, beta=1.2)
    np.testing.assert_allclose(instanton.phi_cl(shifted, tau + 0.75), instanton.phi_cl(centred, tau), rtol=1e-14)


def test_zero_mode_value_at_center():
    assert instanton.zero_mode(kink(alpha=0.5), 0.0) == pytest.approx(2 ** -1.5, rel=1e-14)


def test_zero_mode_vanishes_in_vacua():
    assert instanton.zero_mode(kink(), -60.0) < 1e-50
    assert instanton.zero_mode(kink(), 60.0) < 1e-30


def test_zero_mode_matches_finite_difference():
    sol = kink(alpha=0.5)
    h = 1e-5
    for tau in (-1.3, -0.2, 0.0, 0.6, 2.1):
        fd = (instanton.phi_cl(sol, tau + h) - instanton.phi_cl(sol, tau - h)) / (2 * h)
        assert fd == pytest.approx(instanton.zero_mode(sol, tau), rel=1e-6)


def test_acceleration_matches_finite_difference():
    sol = kink(alpha=1.2, beta=0.9)
    h = 1e-5
    for tau in (-0.8, -0.1, 0.3):
        fd = (instanton.velocity(sol, tau + h) - instanton.velocity(sol, tau - h)) / (2 * h)
        assert fd == pytest.approx(instanton.acceleration(sol, tau), rel=1e-6)


def test_first_integral_vanishes():
    params = PotentialParams(alpha=1.4, beta=1.7)
    sol = InstantonSolution(params=params)
    a = params.kink_rate
    tau = np.linspace(-3.0 / a, 3.0 / a, 1000)
    scale = np.max(potential.evaluate(params, instanton.phi_cl(sol, tau)))
    assert np.max(np.abs(instanton.first_integral(sol, tau))) / scale < 1e-10


def test_eom_residual_known_values():
    assert abs(instanton.eom_residual(kink(), 0.0)) < 1e-12
    assert abs(instanton.eom_residual(kink(alpha=3.0, beta=2.0), 1.7)) < 1e-10 * 3.0 * 2.0 ** 5


def test_perturbed_path_fails_equation_of_motion():
    sol = kink()
    h = 1e-4
    tau = np.linspace(-2.0, 2.0, 41)

    def path(t):
        return instanton.phi_cl(sol, t) + 0.01 / np.cosh(t)

    second = (path(tau + h) - 2 * path(tau) + path(tau - h)) / h ** 2
    residual = second - potential.gradient(UNIT, path(tau))
    assert np.max(np.abs(residual)) > 1e-3


def test_action_analytic_known_values():
    assert instanton.classical_action_analytic(PotentialParams(alpha=2.0, beta=1.0)).value == 0.5
    assert instanton.classical_action_analytic(PotentialParams(alpha=1.0, beta=2.0)).value == pytest.approx(4 * math.sqrt(2), rel=1e-15)
    assert instanton.classical_action_analytic(PotentialParams(alpha=0.5, beta=1.0)).value == 0.25


def test_action_quadrature_known_values():
    numeric = instanton.classical_action_quadrature(kink(alpha=2.0), 30.0)
    assert numeric.value == pytest.approx(0.5, abs=1e-8)
    numeric = instanton.classical_action_quadrature(kink(beta=2.0), 10.0)
    assert numeric.value == pytest.approx(5.656854, abs=1e-6)


def test_action_independent_of_center():
    params = PotentialParams(alpha=1.0, beta=1.5)
    T = 30.0 / params.kink_rate
    a = instanton.classical_action_quadrature(InstantonSolution(params=params), T).value
    b = instanton.classical_action_quadrature(InstantonSolution(params=params, tau0=0.2), T).value
    assert b == pytest.approx(a, rel=1e-10)


def test_action_quadrature_rejects_short_interval():
    with pytest.raises(TooShortInterval):
        instanton.classical_action_quadrature(kink(), 0.1)


def test_zero_mode_norm_equals_action():
    params = PotentialParams(alpha=0.8, beta=1.6)
    sol = InstantonSolution(params=params)
    a = params.kink_rate
    norm, _ = quad(lambda t: instanton.zero_mode(sol, t) ** 2, -30.0 / a, 30.0 / a, points=[0.0], epsabs=0.0, epsrel=1e-12, limit=400)
    assert norm == pytest.approx(instanton.classical_action_analytic(params).value, rel=1e-8)


def test_kink_center_of_sampled_path():
    sol = kink(alpha=0.9, beta=1.1, tau0=0.37)
    tau = np.linspace(-5.0, 5.0, 20001)
    assert instanton.kink_center(sol.params, tau, instanton.phi_cl(sol, tau)) == pytest.approx(0.37, abs=1e-6)


@pytest.mark.parametrize("guess", ["kink", "linear"])
@pytest.mark.parametrize("alpha, beta, T", [(1.0, 1.0, 15.0), (1.0, 2.0, 8.0)])
def test_bvp_relaxation_reproduces_kink(alpha, beta, T, guess):
    bvp = instanton.solve_bvp_numeric(PotentialParams(alpha=alpha, beta=beta), T, initial_guess=guess)
    assert bvp.max_deviation < 1e-6
    assert bvp.phi[0] == pytest.approx(-beta, abs=1e-8 * beta)
    assert np.all(np.diff(bvp.phi) > -1e-6 * beta)


def test_bvp_guesses_find_the_same_center():
    params = PotentialParams(alpha=1.0, beta=1.0)
    from_kink = instanton.solve_bvp_numeric(params, 15.0)
    from_line = instanton.solve_bvp_numeric(params, 15.0, initial_guess="linear")
    assert from_line.tau0 == pytest.approx(from_kink.tau0, abs=1e-4 / params.kink_rate)


def test_bvp_unknown_guess():
    with pytest.raises(ValueError):
        instanton.solve_bvp_numeric(UNIT, 15.0, initial_guess="parabola")


def test_bvp_rejects_short_interval():
    with pytest.raises(TooShortInterval):
        instanton.solve_bvp_numeric(UNIT, 1.0)


if __name__ == "__main__":
    pytest.main([__file__])
