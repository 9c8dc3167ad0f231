"""
Tests for the triple-well potential and its geometry.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.models.data_models import PotentialParams
from src.physics import potential


UNIT = PotentialParams(alpha=1.0, beta=1.0)


def test_vacua_are_exact_zeros():
    params = PotentialParams(alpha=1.7, beta=2.3)
    for x in potential.vacua(params):
        assert potential.evaluate(params, x) == 0.0
    assert potential.vacua(params) == (-2.3, 0.0, 2.3)


def test_barrier_value():
    assert potential.evaluate(UNIT, 1.0 / math.sqrt(3.0)) == pytest.approx(4.0 / 27.0, rel=1e-14)


def test_potential_is_even_and_non_negative():
    params = PotentialParams(alpha=0.8, beta=1.9)
    rng = np.random.default_rng(7)
    x = rng.uniform(-3 * params.beta, 3 * params.beta, 100_000)
    v = potential.evaluate(params, x)
    assert np.array_equal(v, potential.evaluate(params, -x))
    assert np.all(v >= 0.0)


def test_no_overflow_far_out():
    params = PotentialParams(alpha=1.0, beta=2.0)
    assert math.isfinite(potential.evaluate(params, 1e3 * params.beta))


def test_gradient_known_values():
    assert potential.gradient(UNIT, 0.0) == 0.0
    assert potential.gradient(UNIT, 1.0) == pytest.approx(0.0, abs=1e-14)
    assert potential.gradient(UNIT, -1.0) == pytest.approx(0.0, abs=1e-14)
    assert potential.gradient(PotentialParams(alpha=2.0, beta=1.0), 0.5) == pytest.approx(0.375, rel=1e-14)


def test_gradient_matches_finite_difference():
    params = PotentialParams(alpha=1.3, beta=1.6)
    h = 1e-5 * params.beta
    rng = np.random.default_rng(11)
    x = rng.uniform(-2.5 * params.beta, 2.5 * params.beta, 500)
    # stay clear of the five critical points
    critical = np.array([-params.beta, -params.beta / math.sqrt(3.0), 0.0, params.beta / math.sqrt(3.0), params.beta])
    x = x[np.min(np.abs(x[:, None] - critical[None, :]), axis=1) > 0.05]
    fd = (potential.evaluate(params, x + h) - potential.evaluate(params, x - h)) / (2 * h)
    np.testing.assert_allclose(potential.gradient(params, x), fd, rtol=1e-6)


def test_second_derivative_known_values():
    assert potential.second_derivative(UNIT, -1.0) == pytest.approx(8.0, rel=1e-14)
    assert potential.second_derivative(UNIT, 0.0) == 2.0
    assert potential.second_derivative(PotentialParams(alpha=3.0, beta=2.0), 0.0) == 96.0


def test_outer_curvature_is_four_times_central():
    params = PotentialParams(alpha=0.7, beta=1.4)
    ratio = potential.second_derivative(params, params.beta) / potential.second_derivative(params, 0.0)
    assert ratio == pytest.approx(4.0, rel=1e-13)


def test_geometry_unit():
    geo = potential.geometry(UNIT)
    assert geo.omega1 == pytest.approx(2 * math.sqrt(2), rel=1e-15)
    assert geo.omega2 == pytest.approx(math.sqrt(2), rel=1e-15)
    assert geo.omega_avg == pytest.approx(2.12132, rel=1e-5)
    assert geo.barrier_height == pytest.approx(4.0 / 27.0, rel=1e-15)
    assert geo.omega1 == 2 * geo.omega2
    assert geo.omega_avg == 0.5 * (geo.omega1 + geo.omega2)


def test_geometry_half_alpha():
    assert potential.geometry(PotentialParams(alpha=0.5, beta=1.0)).omega_avg == pytest.approx(1.5, rel=1e-15)


def test_barrier_positions_are_maxima_between_wells():
    params = PotentialParams(alpha=1.2, beta=1.8)
    geo = potential.geometry(params)
    left, right = geo.barrier_positions
    assert -params.beta < left < 0.0 < right < params.beta
    assert potential.gradient(params, right) == pytest.approx(0.0, abs=1e-12)
    assert potential.evaluate(params, right) == pytest.approx(geo.barrier_height, rel=1e-13)
    assert potential.second_derivative(params, right) < 0.0


def test_potential_samples():
    x, v = potential.potential_samples(UNIT, -1.5, 1.5, 1001)
    assert x.shape == v.shape == (1001,)
    assert x[0] == -1.5 and x[-1] == 1.5


@pytest.mark.parametrize("field, kwargs", [
    ("alpha", {"alpha": 0.0, "beta": 1.0}),
    ("alpha", {"alpha": -1.0, "beta": 1.0}),
    ("beta", {"alpha": 1.0, "beta": 0.0}),
])
def test_non_positive_parameters_rejected(field, kwargs):
    with pytest.raises(ValidationError, match=f"{field} must be positive"):
        PotentialParams(**kwargs)


def test_nan_rejected():
    with pytest.raises(ValidationError):
        PotentialParams(alpha=float("nan"), beta=1.0)


if __name__ == "__main__":
    pytest.main([__file__])
