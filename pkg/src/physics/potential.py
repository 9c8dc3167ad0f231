"""
Symmetric triple-well potential V(x) = alpha x^2 (x^2 - beta^2)^2.

All functions accept scalars or numpy arrays.
"""

import math
from typing import Tuple

import numpy as np

from ..models.data_models import PotentialParams, WellGeometry


def evaluate(params: PotentialParams, x):
    """V(x) in factored form, so the three vacua are exact zeros."""
    x2 = x * x
    d = x2 - params.beta * params.beta
    return params.alpha * x2 * d * d


def gradient(params: PotentialParams, x):
    """dV/dx = 2 alpha x (3x^4 - 4 beta^2 x^2 + beta^4)."""
    b2 = params.beta * params.beta
    x2 = x * x
    return 2.0 * params.alpha * x * (3.0 * x2 * x2 - 4.0 * b2 * x2 + b2 * b2)


def second_derivative(params: PotentialParams, x):
    """d2V/dx2 = 2 alpha (15x^4 - 12 beta^2 x^2 + beta^4)."""
    b2 = params.beta * params.beta
    x2 = x * x
    return 2.0 * params.alpha * (15.0 * x2 * x2 - 12.0 * b2 * x2 + b2 * b2)


def vacua(params: PotentialParams) -> Tuple[float, float, float]:
    return (-params.beta, 0.0, params.beta)


def geometry(params: PotentialParams) -> WellGeometry:
    """Well frequencies and barrier geometry."""
    a = params.kink_rate
    omega2 = a
    omega1 = 2.0 * a
    x_barrier = params.beta / math.sqrt(3.0)
    return WellGeometry(
        omega1=omega1,
        omega2=omega2,
        omega_avg=0.5 * (omega1 + omega2),
        barrier_height=4.0 * params.alpha * params.beta ** 6 / 27.0,
        barrier_positions=(-x_barrier, x_barrier),
    )


def potential_samples(params: PotentialParams, x_min: float, x_max: float, n: int):
    """(x, V(x)) on a uniform grid of n points."""
    x = np.linspace(x_min, x_max, n)
    return x, evaluate(params, x)
