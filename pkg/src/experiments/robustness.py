"""Clean, imperfect-CSI and residual-phase-noise variants of the optimizer"""

from functools import partial
from typing import Any, Dict, List, Optional

from ..analysis.monte_carlo import TrialSeeds
from ..analysis.robustness import (
    CsiErrorModel,
    evaluate_with_residual_phase_noise,
    optimize_with_imperfect_csi,
)
from ..models.enums import ExperimentId, RobustnessVariant
from ..models.scenario import ScenarioParams
from ..models.sdp import SdpTolerances
from ..models.state import ExperimentState
from ..solvers.optimizer import optimize_and_evaluate
from .base import BaseExperiment
from .optimization import channel_for


def robustness_point(
    N: int,
    params: ScenarioParams,
    trials: int,
    seed: int,
    tolerances: SdpTolerances,
    rank_tol: float,
    error_variance: Optional[float],
    residual_support: float,
) -> List[Dict[str, Any]]:
    seeds = TrialSeeds(seed, (N,))
    ch = channel_for(params, N, seeds)
    clean = optimize_and_evaluate(ch, params, trials, seeds, tolerances, rank_tol)
    model = CsiErrorModel.from_params(params, error_variance)
    variants = {
        RobustnessVariant.CLEAN: clean.monte_carlo,
        RobustnessVariant.IMPERFECT_CSI: optimize_with_imperfect_csi(
            ch, model, params, trials, seeds, tolerances, rank_tol
        ),
        RobustnessVariant.RESIDUAL_PHASE_NOISE: evaluate_with_residual_phase_noise(
            clean.theta, ch, params, trials, seeds, residual_support
        ),
    }
    return [
        {"N": N, "variant": variant.value, "mean": average.mean, "std_error": average.std_error}
        for variant, average in variants.items()
    ]


class RobustnessExperiment(BaseExperiment):
    columns = ("N", "variant", "mean", "std_error")

    def __init__(self):
        super().__init__(ExperimentId.FIG5)

    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        spec, params = state["spec"], state["params"]
        settings = state["settings"].experiments
        worker = partial(
            robustness_point,
            params=params,
            trials=spec.trials,
            seed=spec.seed,
            tolerances=settings.solver.to_tolerances(),
            rank_tol=settings.rank_tol,
            error_variance=settings.csi_error_variance,
            residual_support=settings.residual_phase_support,
        )
        per_point = self.map_points(worker, [int(N) for N in spec.grid], spec.workers)
        return [row for rows in per_point for row in rows]
