"""Data models for the IRS analysis toolkit"""

from .channel import ChannelRealization, DistortionVariances, PhaseDriftState, PhaseErrorVector
from .enums import (
    DfBranch,
    ExperimentId,
    Provenance,
    RandomStream,
    RobustnessVariant,
    SolverStatus,
    SweepAxis,
    WorkflowStatus,
)
from .experiment import ExperimentSpec
from .results import LiftedSolution, OptimizationOutcome, RateCoefficients, RateCurve, TrialAverage
from .scenario import Geometry, LinkBudget, ScenarioParams
from .sdp import IterateRecord, SdpProblem, SdpSolution, SdpTolerances

__all__ = [
    "ChannelRealization",
    "DistortionVariances",
    "PhaseDriftState",
    "PhaseErrorVector",
    "DfBranch",
    "ExperimentId",
    "Provenance",
    "RandomStream",
    "RobustnessVariant",
    "SolverStatus",
    "SweepAxis",
    "WorkflowStatus",
    "ExperimentSpec",
    "LiftedSolution",
    "OptimizationOutcome",
    "RateCoefficients",
    "RateCurve",
    "TrialAverage",
    "Geometry",
    "LinkBudget",
    "ScenarioParams",
    "IterateRecord",
    "SdpProblem",
    "SdpSolution",
    "SdpTolerances",
]
