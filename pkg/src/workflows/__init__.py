"""Workflow definitions and graph construction"""

from .graph import create_experiment_workflow, run_experiment

__all__ = ["create_experiment_workflow", "run_experiment"]
