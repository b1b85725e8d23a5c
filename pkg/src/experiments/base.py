"""Base class for all experiment nodes"""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Sequence

from ..models.enums import ExperimentId, WorkflowStatus
from ..models.state import ExperimentState

logger = logging.getLogger(__name__)


class BaseExperiment(ABC):
    columns: Sequence[str] = ()

    def __init__(self, experiment_id: ExperimentId):
        self.experiment_id = experiment_id

    @property
    def node_name(self) -> str:
        return self.experiment_id.value

    @abstractmethod
    def compute(self, state: ExperimentState) -> List[Dict[str, Any]]:
        """Rows of the experiment, in grid order"""

    def execute(self, state: ExperimentState) -> ExperimentState:
        spec = state["spec"]
        self.log_event(
            state,
            f"Starting {self.node_name}",
            points=len(spec.grid),
            trials=spec.trials,
            workers=spec.workers,
        )
        rows = self.compute(state)
        state["rows"] = rows
        state["columns"] = list(self.columns)
        state["workflow_status"] = WorkflowStatus.COMPUTED.value
        self.log_event(state, f"{self.node_name} produced {len(rows)} rows")
        return state

    def log_event(self, state: ExperimentState, message: str, **detail: Any) -> None:
        """Append to the run log; no timestamps so runs stay reproducible."""
        entry = {"experiment": self.node_name, "message": message, "detail": detail}
        if "run_log" not in state:
            state["run_log"] = []
        state["run_log"].append(entry)
        logger.info("[%s] %s", self.node_name, message)

    def map_points(
        self, func: Callable[[Any], Any], points: Iterable[Any], workers: int
    ) -> List[Any]:
        """Apply ``func`` to every point; results come back in input order."""
        points = list(points)
        total = len(points)
        results = []
        if workers > 1 and total > 1:
            with ProcessPoolExecutor(max_workers=min(workers, total)) as pool:
                for i, result in enumerate(pool.map(func, points), start=1):
                    results.append(result)
                    logger.info("[%s] point %d/%d", self.node_name, i, total)
        else:
            for i, point in enumerate(points, start=1):
                results.append(func(point))
                logger.info("[%s] point %d/%d", self.node_name, i, total)
        return results
