"""Experiment registry, default sweep grids and the resolve node"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from ..config import AppConfig
from ..errors import ArgumentError
from ..models.enums import ExperimentId, SweepAxis, WorkflowStatus
from ..models.experiment import ExperimentSpec
from ..models.state import ExperimentState
from .base import BaseExperiment
from .custom_sweep import CustomSweepExperiment
from .optimization import OptimizationExperiment
from .rate_sweep import RateSweepExperiment, UtilitySweepExperiment
from .relay_comparison import RelayElementSweep, RelayPowerSweep
from .robustness import RobustnessExperiment

logger = logging.getLogger(__name__)


def create_experiments() -> Dict[ExperimentId, BaseExperiment]:
    experiments = [
        RateSweepExperiment(),
        UtilitySweepExperiment(),
        OptimizationExperiment(),
        RobustnessExperiment(),
        RelayElementSweep(),
        RelayPowerSweep(),
        CustomSweepExperiment(),
    ]
    return {experiment.experiment_id: experiment for experiment in experiments}


def parse_grid(text: str) -> List[float]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if step <= 0:
                raise ArgumentError(f"grid step must be positive, got {step!r}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            if count < 1:
                raise ArgumentError(f"grid {text!r} is empty")
            return [start + i * step for i in range(count)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ArgumentError(f"cannot parse grid {text!r}: {exc}") from exc


def default_grid(experiment: ExperimentId, settings: AppConfig) -> List[float]:
    cfg = settings.experiments
    if experiment in (ExperimentId.FIG3A, ExperimentId.FIG3B, ExperimentId.FIG6A):
        return list(range(1, cfg.n_max + 1))
    if experiment in (ExperimentId.FIG4, ExperimentId.FIG5):
        return list(cfg.optimizer_elements)
    if experiment is ExperimentId.FIG6B:
        return parse_grid(f"{cfg.power_dbm_start}:{cfg.power_dbm_stop}:{cfg.power_dbm_step}")
    raise ArgumentError("custom-sweep needs an explicit --grid")


def build_spec(
    experiment: ExperimentId,
    settings: AppConfig,
    output: Optional[Path] = None,
    axis: Optional[SweepAxis] = None,
    grid: Optional[List[float]] = None,
    elements: Optional[int] = None,
) -> ExperimentSpec:
    cfg = settings.experiments
    if axis is None:
        axis = SweepAxis.P_DBM if experiment is ExperimentId.FIG6B else SweepAxis.N
    grid = grid if grid is not None else default_grid(experiment, settings)
    if axis is SweepAxis.N and any(n != int(n) or n < 1 for n in grid):
        raise ArgumentError("element counts on the N axis must be positive integers")
    try:
        return ExperimentSpec(
            experiment=experiment,
            axis=axis,
            grid=grid,
            trials=cfg.trials,
            seed=cfg.seed,
            workers=cfg.workers,
            output=output or Path(f"{experiment.value}.csv"),
            elements=elements,
        )
    except ValueError as exc:
        raise ArgumentError(f"invalid experiment: {exc}") from exc


def resolve(state: ExperimentState) -> ExperimentState:
    """Resolve the scenario and pick the experiment node to run."""
    spec, settings = state["spec"], state["settings"]
    params = settings.scenario.to_params()
    state["params"] = params
    state["current_experiment"] = spec.experiment.value
    state["metadata"] = {
        "experiment": spec.experiment.value,
        "axis": spec.axis.value,
        "seed": spec.seed,
        "trials": spec.trials,
        "scenario": params.to_dict(),
        "settings": settings.experiments.model_dump(mode="json", exclude={"workers"}),
    }
    state["workflow_status"] = WorkflowStatus.RESOLVED.value
    state.setdefault("run_log", []).append(
        {"experiment": spec.experiment.value, "message": "resolved", "detail": {}}
    )
    logger.info("running %s over %d grid points", spec.experiment.value, len(spec.grid))
    return state
