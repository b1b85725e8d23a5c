"""Core enumerations for the IRS analysis toolkit"""
from enum import Enum, IntEnum


class Provenance(Enum):
    CLOSED_FORM = "closed-form"
    MONTE_CARLO = "monte-carlo"
    DF_BOUND = "df-bound"


class SolverStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical-failure"


class ExperimentId(Enum):
    FIG3A = "fig3a"
    FIG3B = "fig3b"
    FIG4 = "fig4"
    FIG5 = "fig5"
    FIG6A = "fig6a"
    FIG6B = "fig6b"
    CUSTOM_SWEEP = "custom-sweep"


class SweepAxis(Enum):
    N = "N"
    P_DBM = "P_dbm"


class DfBranch(Enum):
    # A: source to relay hop; B: relay plus direct link to user
    SOURCE_RELAY = "A"
    RELAY_USER = "B"


class RobustnessVariant(Enum):
    CLEAN = "clean"
    IMPERFECT_CSI = "imperfect_csi"
    RESIDUAL_PHASE_NOISE = "residual_phase_noise"


class WorkflowStatus(Enum):
    INITIALIZED = "initialized"
    RESOLVED = "resolved"
    COMPUTED = "computed"
    COMPLETED = "completed"
    FAILED = "failed"


class RandomStream(IntEnum):
    """Independent random streams of one trial key."""

    CHANNEL = 0
    EVALUATION = 1
    CSI_ERROR = 2
