"""
Analysis service for the triple-well toolkit.
Runs single-point analyses, parameter sweeps and plot-data extraction.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..config import get_settings
from ..errors import RegimeError
from ..models.data_models import GridSpec, InstantonSolution, PotentialParams
from ..models.report_models import (
    ActionSection,
    AnalysisReport,
    ComparisonSection,
    GeometrySection,
    OracleSection,
    RunConfig,
    SweepRow,
)
from ..physics import dilute_gas, fluctuation, instanton, potential, spectrum_oracle

logger = logging.getLogger(__name__)

PLOT_ROWS = 1001

# (column names, rows) for one plot-data file
Table = Tuple[Tuple[str, ...], List[Tuple[float, ...]]]


class AnalysisService:
    """Orchestrates the physics modules for one run configuration."""

    def __init__(self):
        self.settings = get_settings()

    def grid_for(self, config: RunConfig, params: PotentialParams) -> GridSpec:
        """Default grid with any configured x_max or n_points override applied."""
        default = spectrum_oracle.default_grid(params)
        if config.x_max is None and config.n_points is None:
            return default
        return GridSpec(
            x_max=config.x_max if config.x_max is not None else default.x_max,
            n_points=config.n_points if config.n_points is not None else default.n_points,
        )

    def _require_regime(self, params: PotentialParams) -> float:
        action = instanton.classical_action_analytic(params).value
        if action < spectrum_oracle.MIN_ACTION:
            raise RegimeError(
                f"S_E={action:.6g} is below {spectrum_oracle.MIN_ACTION:g}; outside the semiclassical regime",
                field="beta",
                S_E=action,
            )
        return action

    def analyze(self, config: RunConfig) -> AnalysisReport:
        """Closed forms, fluctuation factors, oracle and comparison at one point."""
        params = config.point_params()
        action = self._require_regime(params)
        T = config.half_interval(params)
        logger.info(f"Analyzing alpha={params.alpha}, beta={params.beta}, T={T}")

        geo = potential.geometry(params)
        quadrature_T = max(T, instanton.MIN_INTERVAL / params.kink_rate)
        quadrature = instanton.classical_action_quadrature(InstantonSolution(params=params), quadrature_T)

        grid = self.grid_for(config, params)
        spectrum = spectrum_oracle.lowest_levels(params, grid)
        comparison = spectrum_oracle.compare_with_instanton(params, grid, spectrum=spectrum)
        elements = comparison.elements

        return AnalysisReport(
            alpha=params.alpha,
            beta=params.beta,
            T=T,
            geometry=GeometrySection(
                omega1=geo.omega1,
                omega2=geo.omega2,
                omega_avg=geo.omega_avg,
                barrier_height=geo.barrier_height,
            ),
            action=ActionSection(
                analytic=action,
                quadrature=quadrature.value,
                quadrature_abserr=quadrature.abserr,
                quadrature_T=quadrature_T,
            ),
            fluctuation=fluctuation.fluctuation_report(params, T),
            prediction=dilute_gas.block_prediction(params),
            oracle=OracleSection(
                energies=spectrum.energies[:3],
                parities=spectrum.parities[:3],
                block_center=spectrum.block_center,
                block_half_width=spectrum.block_half_width,
                gap_to_next_block=spectrum.gap_to_next_block,
                block_resolved=spectrum.block_resolved,
                central_weight=spectrum.central_weight,
                x_max=grid.x_max,
                n_points=grid.n_points,
            ),
            comparison=ComparisonSection(
                center_ratio=comparison.center_ratio,
                splitting_ratio=comparison.splitting_ratio,
                H_LL=elements.H_LL,
                H_CC=elements.H_CC,
                H_LC=elements.H_LC,
                overlap_LC=elements.overlap_LC,
                a_plus=comparison.model.a_plus,
                a_minus=comparison.model.a_minus,
                kernel_weight=comparison.kernel_weight,
                variational_amplitude_product=comparison.variational_amplitude_product,
                instanton_amplitude_product=comparison.instanton_amplitude_product,
                prefactor_ratio=comparison.prefactor_ratio,
            ),
        )

    def sweep_row(self, config: RunConfig, params: PotentialParams) -> SweepRow:
        block = dilute_gas.block_prediction(params)
        row = SweepRow(
            alpha=params.alpha,
            beta=params.beta,
            S_E=block.action,
            E_instanton=block.center_E,
            dE_instanton=block.half_splitting,
        )
        if block.action < spectrum_oracle.MIN_ACTION:
            logger.info(f"beta={params.beta}, alpha={params.alpha}: S_E={block.action:.4g}, oracle skipped")
            return row

        spectrum = spectrum_oracle.lowest_levels(params, self.grid_for(config, params))
        return row.model_copy(
            update={
                "E_oracle": spectrum.block_center,
                "dE_oracle": spectrum.block_half_width,
                "ratio_dE": block.half_splitting / spectrum.block_half_width,
                "gap_ratio": spectrum.gap_to_next_block / spectrum.block_width,
            }
        )

    def sweep(self, config: RunConfig, workers: Optional[int] = None) -> Iterator[SweepRow]:
        """Rows in sweep order; points may run concurrently.

        Rows are yielded as soon as they and all earlier rows are done, so a
        consumer has written every row before the first failing point.
        """
        points = config.sweep_params()
        workers = workers or config.workers or self.settings.sweep_workers
        logger.info(f"Sweeping {len(points)} points with {workers} worker(s)")
        if workers == 1:
            for params in points:
                yield self.sweep_row(config, params)
            return
        executor = ThreadPoolExecutor(max_workers=workers)
        try:
            yield from executor.map(lambda p: self.sweep_row(config, p), points)
        except BaseException:
            logger.info("Sweep aborted; cancelling pending points")
            executor.shutdown(wait=False, cancel_futures=True)
            raise
        executor.shutdown(wait=True)

    def plot_data(self, config: RunConfig) -> Dict[str, Table]:
        """Columns for external plotting; a sweep yields the splitting curve only."""
        if config.is_sweep:
            swept = "alpha" if config.alpha_range is not None else "beta"
            rows = [
                (getattr(p, swept), dilute_gas.block_prediction(p).half_splitting)
                for p in config.sweep_params()
            ]
            return {"splitting": ((swept, "dE"), rows)}

        params = config.point_params()
        T = config.half_interval(params)
        sol = InstantonSolution(params=params)

        # symmetric samples so that x = 0 and τ = 0 are exact rows
        x = GridSpec(x_max=1.5 * params.beta, n_points=PLOT_ROWS).points()
        tau = GridSpec(x_max=T, n_points=PLOT_ROWS).points()
        v = potential.evaluate(params, x)
        phi = instanton.phi_cl(sol, tau)
        n = instanton.zero_mode(sol, tau)

        return {
            "potential": (("x", "V"), _rows(x, v)),
            "kink": (("tau", "phi"), _rows(tau, phi)),
            "zero_mode": (("tau", "N"), _rows(tau, n)),
        }


def _rows(*columns: np.ndarray) -> List[Tuple[float, ...]]:
    return [tuple(float(value) for value in row) for row in zip(*columns)]
