from typing import Any, Dict, List, TypedDict

from ..config import AppConfig
from .experiment import ExperimentSpec
from .scenario import ScenarioParams


class ExperimentState(TypedDict, total=False):
    """Workflow state for one experiment run - LangGraph compatible"""
    # Inputs
    spec: ExperimentSpec
    settings: AppConfig

    # Resolved scenario and routing
    params: ScenarioParams
    current_experiment: str

    # Results, in grid order
    columns: List[str]
    rows: List[Dict[str, Any]]
    metadata: Dict[str, Any]

    # Run log and workflow control
    run_log: List[Dict[str, Any]]
    workflow_status: str
    output_path: str
