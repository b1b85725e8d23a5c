"""Closed-form rate and utility sweeps over N, with Monte Carlo spot checks"""

from functools import partial
from typing import Any, Dict, List

import numpy as np

from ..analysis.closed_form import (
    hwi_curve,
    rate_gap,
    rate_ideal,
    rate_limit_inf,
    utility_gap,
    utility_ideal,
)
from ..analysis.monte_carlo import TrialSeeds, compensated_average, monte_carlo_curve
from ..models.enums import ExperimentId
from ..models.results import TrialAverage
from ..models.scenario import ScenarioParams
from ..models.state import ExperimentState
from ..physics.scenario import link_budget
from .base import BaseExperiment


def compensated_point(N: int, params: ScenarioParams, trials: int, seed: int) -> TrialAverage:
    """Monte Carlo of the compensated-phase rate at one N; runs in a worker."""
    return compensated_average(N, params, link_budget(params), trials, TrialSeeds(seed, (N,)))


def monte_carlo_points(grid: List[int], mc_step: int) -> List[int]:
    """First grid point plus every multiple of ``mc_step``."""
    return [N for i, N in enumerate(grid) if i == 0 or N % mc_step == 0]


class RateSweepExperiment(BaseExperiment):
    columns = ("N", "rate_hwi", "rate_ideal", "rate_gap", "rate_limit", "mc_mean", "mc_std_error")

    def __init__(self):
        super().__init__(ExperimentId.FIG3A)

    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        spec, params = state["spec"], state["params"]
        budget = link_budget(params)
        grid = [int(N) for N in spec.grid]
        N = np.asarray(grid, dtype=np.float64)
        curve = hwi_curve(N, params, budget)
        ideal = np.atleast_1d(rate_ideal(N, params, budget))
        gap = np.atleast_1d(rate_gap(N, params, budget))
        limit = rate_limit_inf(params)

        mc_grid = monte_carlo_points(grid, state["settings"].experiments.mc_step)
        self.log_event(state, f"Monte Carlo at {len(mc_grid)} points", points=mc_grid)
        worker = partial(compensated_point, params=params, trials=spec.trials, seed=spec.seed)
        averages = self.map_points(worker, mc_grid, spec.workers)
        mc_curve = monte_carlo_curve(mc_grid, averages)
        by_point = dict(zip(mc_grid, averages))
        closed = dict(zip(grid, curve.rate))
        deviation = max(abs(mean - closed[n]) for n, mean in zip(mc_grid, mc_curve.rate))
        self.log_event(state, "Monte Carlo done", largest_deviation=float(deviation))

        rows = []
        for i, n in enumerate(grid):
            average = by_point.get(n)
            rows.append(
                {
                    "N": n,
                    "rate_hwi": curve.rate[i],
                    "rate_ideal": ideal[i],
                    "rate_gap": gap[i],
                    "rate_limit": limit,
                    "mc_mean": average.mean if average else None,
                    "mc_std_error": average.std_error if average else None,
                }
            )
        return rows


class UtilitySweepExperiment(BaseExperiment):
    columns = ("N", "utility_hwi", "utility_ideal", "utility_gap")

    def __init__(self):
        super().__init__(ExperimentId.FIG3B)

    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        spec, params = state["spec"], state["params"]
        budget = link_budget(params)
        grid = [int(N) for N in spec.grid]
        N = np.asarray(grid, dtype=np.float64)
        hwi = hwi_curve(N, params, budget).utility
        ideal = np.atleast_1d(utility_ideal(N, params, budget))
        gap = np.atleast_1d(utility_gap(N, params, budget))
        return [
            {"N": n, "utility_hwi": hwi[i], "utility_ideal": ideal[i], "utility_gap": gap[i]}
            for i, n in enumerate(grid)
        ]
