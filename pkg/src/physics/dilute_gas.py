"""
Dilute instanton gas: multi-kink configurations summed to a sinh.

All propagators are <0|exp(-2HT)|-β>, i.e. T is the half-interval.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..config import get_settings
from ..errors import InsufficientPoints, InvalidParameters
from ..models.data_models import BlockPrediction, PotentialParams, PropagatorValue
from . import fluctuation, instanton, potential

logger = logging.getLogger(__name__)

# below this the sinh argument is expanded as z(1 + z²/6)
SMALL_ARGUMENT = 1e-4
# above this sinh is evaluated as e^z (1 - e^{-2z}) / 2
LARGE_ARGUMENT = 20.0


def _log_kink_weight(params: PotentialParams, T: float, kappa: float) -> float:
    """log of 2κT√S_E, the weight of one kink integrated over its center."""
    action = instanton.classical_action_analytic(params).value
    return math.log(2.0 * kappa * T * math.sqrt(action))


def configuration_weight(
    params: PotentialParams,
    T: float,
    n1: int,
    n2: int,
    kappa: Optional[float] = None,
) -> float:
    """Contribution of n1 instantons and n2 anti-instantons.

    Only n1 = n2 + 1 connects -β to 0; every other pair weighs zero. The
    anti-instantons can each return to either outer vacuum, hence 2^{n2}.
    """
    if n1 < 0 or n2 < 0:
        raise InvalidParameters("kink counts must be non-negative", field="n1" if n1 < 0 else "n2")
    if n1 - n2 != 1:
        return 0.0
    fluctuation.check_window(params, T)
    kappa = fluctuation.instanton_density(params) if kappa is None else kappa
    action = instanton.classical_action_analytic(params).value
    omega = potential.geometry(params).omega_avg
    n = n1 + n2
    log_weight = (
        n2 * math.log(2.0)
        - math.lgamma(n + 1)
        - n * action
        + n * _log_kink_weight(params, T, kappa)
        + 0.5 * math.log(omega / math.pi)
        - omega * T
    )
    return math.exp(log_weight)


def truncated_configuration_sum(
    params: PotentialParams,
    T: float,
    n_max: Optional[int] = None,
    kappa: Optional[float] = None,
) -> float:
    """Partial sum over n = 0..n_max of the n+1 instanton / n anti-instanton terms.

    ``kappa`` overrides the instanton density; the verification suite uses
    it to inject a deliberate fault.
    """
    n_max = get_settings().series_terms if n_max is None else n_max
    if n_max < 0:
        raise InvalidParameters("n_max must be non-negative", field="n_max")
    fluctuation.check_window(params, T)
    kappa = fluctuation.instanton_density(params) if kappa is None else kappa

    action = instanton.classical_action_analytic(params).value
    log_prefactor = fluctuation.log_one_instanton_amplitude(params, T, kappa=kappa)
    x = math.exp(math.log(2.0) - 2.0 * action + 2.0 * _log_kink_weight(params, T, kappa))

    term = 1.0
    total = 1.0
    for n in range(n_max):
        term *= x / ((2 * n + 2) * (2 * n + 3))
        total += term
    logger.debug(f"Configuration sum at T={T}: x={x!r}, {n_max + 1} terms, last term {term!r}")
    return math.exp(log_prefactor + math.log(total))


def _log_sinh(z: float) -> float:
    if z < SMALL_ARGUMENT:
        return math.log(z) + math.log1p(z * z / 6.0)
    if z > LARGE_ARGUMENT:
        return z + math.log1p(-math.exp(-2.0 * z)) - math.log(2.0)
    return math.log(math.sinh(z))


def log_closed_form_propagator(params: PotentialParams, T: float, kappa: Optional[float] = None) -> float:
    fluctuation.check_window(params, T)
    kappa = fluctuation.instanton_density(params) if kappa is None else kappa
    action = instanton.classical_action_analytic(params).value
    omega = potential.geometry(params).omega_avg
    z = math.exp(0.5 * math.log(2.0) + _log_kink_weight(params, T, kappa) - action)
    return 0.5 * math.log(omega / (2.0 * math.pi)) - omega * T + _log_sinh(z)


def closed_form_propagator(params: PotentialParams, T: float) -> PropagatorValue:
    """√(ω/2π) e^{-ωT} sinh(2√2 κT√S_E e^{-S_E})."""
    log_value = log_closed_form_propagator(params, T)
    return PropagatorValue(T=T, value=math.exp(log_value), log_value=log_value)


def block_prediction(params: PotentialParams) -> BlockPrediction:
    """Center, half-splitting and vacuum amplitude product of the lowest block."""
    alpha, beta = params.alpha, params.beta
    action = instanton.classical_action_analytic(params).value
    half_splitting = math.exp(
        0.5 * math.log(8.0 / (3.0 * math.pi))
        + 0.75 * math.log(2.0 * alpha)
        + 4.0 * math.log(beta)
        - action
    )
    return BlockPrediction(
        center_E=0.75 * beta ** 2 * math.sqrt(2.0 * alpha),
        half_splitting=half_splitting,
        amplitude_product=0.25 * beta * math.sqrt(3.0 * math.sqrt(2.0 * alpha) / math.pi),
        action=action,
    )


def kernel_from_block(block: BlockPrediction, T: float) -> float:
    """Spectral form of the propagator, 2·c·e^{-2ET} sinh(2ΔE·T), with c the amplitude product.

    The j=0 and j=2 terms share the coefficient c, so their difference
    c(e^{-2E'₀T} - e^{-2E'₂T}) is this expression.
    """
    if not T > 0.0:
        raise InvalidParameters("T must be positive", field="T")
    z = 2.0 * block.half_splitting * T
    return math.exp(math.log(2.0 * block.amplitude_product) - 2.0 * block.center_E * T + _log_sinh(z))


def splitting_scaling_exponent(
    params_list: Sequence[PotentialParams],
    splittings: Optional[Sequence[float]] = None,
) -> float:
    """Slope of log(ΔE) - 4 log β against β⁴ at fixed α.

    For the closed-form ΔE the slope is -√(2α)/4. Pass ``splittings`` to fit
    measured values (e.g. oracle half-widths) instead of the closed form.
    """
    params_list = list(params_list)
    alphas = {p.alpha for p in params_list}
    if len(alphas) > 1:
        raise InvalidParameters("scaling fit requires a single alpha", field="alpha")
    betas = np.array([p.beta for p in params_list])
    if np.unique(betas).size < 3:
        raise InsufficientPoints(
            f"scaling fit needs at least 3 distinct beta values, got {np.unique(betas).size}",
            field="beta",
        )

    if splittings is None:
        splittings = [block_prediction(p).half_splitting for p in params_list]
    splittings = np.asarray(splittings, dtype=float)
    if splittings.shape != betas.shape:
        raise InvalidParameters("one splitting is required per parameter point", field="splittings")
    if np.any(splittings <= 0.0):
        raise InvalidParameters("splittings must be positive", field="splittings")

    for p in params_list:
        action = instanton.classical_action_analytic(p).value
        if action <= 3.0:
            logger.warning(f"beta={p.beta} has S_E={action:.4g}, outside the semiclassical regime")

    slope, _ = np.polyfit(betas ** 4, np.log(splittings) - 4.0 * np.log(betas), 1)
    return float(slope)
