"""Main workflow graph construction"""

import logging

from langgraph.graph import END, START, StateGraph

from ..config import AppConfig
from ..experiments.dispatcher import create_experiments, resolve
from ..experiments.output import write_csv
from ..models.enums import WorkflowStatus
from ..models.experiment import ExperimentSpec
from ..models.state import ExperimentState

logger = logging.getLogger(__name__)


def write_results(state: ExperimentState) -> ExperimentState:
    path = write_csv(state["spec"].output, state["metadata"], state["columns"], state["rows"])
    state["output_path"] = str(path)
    state["workflow_status"] = WorkflowStatus.COMPLETED.value
    return state


def create_experiment_workflow():
    """resolve -> experiment node (routed on current_experiment) -> write-csv"""
    experiments = create_experiments()
    workflow = StateGraph(ExperimentState)

    workflow.add_node("resolve", resolve)
    workflow.add_node("write-csv", write_results)
    for experiment in experiments.values():
        workflow.add_node(experiment.node_name, experiment.execute)
        workflow.add_edge(experiment.node_name, "write-csv")

    def route_from_resolve(state: ExperimentState) -> str:
        next_node = state["current_experiment"]
        logger.debug("routing to %s", next_node)
        return next_node

    workflow.add_edge(START, "resolve")
    workflow.add_conditional_edges(
        "resolve",
        route_from_resolve,
        {experiment.node_name: experiment.node_name for experiment in experiments.values()},
    )
    workflow.add_edge("write-csv", END)
    return workflow.compile()


def run_experiment(
    spec: ExperimentSpec, settings: AppConfig, app=None
) -> ExperimentState:
    """Run one experiment end to end; exceptions propagate to the caller."""
    app = app or create_experiment_workflow()
    initial: ExperimentState = {
        "spec": spec,
        "settings": settings,
        "run_log": [],
        "workflow_status": WorkflowStatus.INITIALIZED.value,
    }
    return app.invoke(initial)
