"""Semidefinite program records"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import ArgumentError
from .enums import SolverStatus

Matrix = np.ndarray

HERMITIAN_ATOL = 1e-12


def is_hermitian(H: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(H), initial=0.0)))
    return bool(np.max(np.abs(H - H.conj().T), initial=0.0) <= atol * scale)


@dataclass(frozen=True)
class SdpProblem:
    """maximize tr(C Y) s.t. tr(A_k Y) = b_k, Y PSD.

    ``gain_scale`` records a substitution Y_solver = gain_scale * Y made
    while building the problem; callers that know about it divide it back
    out of the solution.
    """

    objective: Matrix
    constraints: Tuple[Tuple[Matrix, float], ...]
    gain_scale: float = 1.0
    sense: str = field(default="maximize")

    def __post_init__(self):
        C = np.asarray(self.objective)
        if not is_hermitian(C):
            raise ArgumentError("objective matrix is not Hermitian")
        n = C.shape[0]
        checked = []
        for k, (A, b) in enumerate(self.constraints):
            A = np.asarray(A)
            if A.shape != (n, n):
                raise ArgumentError(f"constraint {k} has shape {A.shape}, expected {(n, n)}")
            if not is_hermitian(A):
                raise ArgumentError(f"constraint {k} is not Hermitian")
            if not np.isfinite(b):
                raise ArgumentError(f"constraint {k} has a non-finite right-hand side")
            checked.append((A, float(b)))
        if self.sense != "maximize":
            raise ArgumentError("only maximization problems are supported")
        object.__setattr__(self, "objective", C)
        object.__setattr__(self, "constraints", tuple(checked))

    @property
    def dimension(self) -> int:
        return int(self.objective.shape[0])

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    @property
    def is_complex(self) -> bool:
        matrices: Sequence[np.ndarray] = [self.objective, *(A for A, _ in self.constraints)]
        return any(np.iscomplexobj(M) and np.any(M.imag != 0) for M in matrices)

    @property
    def rhs(self) -> np.ndarray:
        return np.array([b for _, b in self.constraints], dtype=np.float64)


@dataclass(frozen=True)
class SdpTolerances:
    """Stopping rules of the interior-point iteration.

    The targets are relative measures on the equilibrated problem; a run
    that stalls is still reported optimal if it meets the accept levels.
    ``complementarity`` bounds |tr(Y S)| per unit of matrix dimension in the
    caller's units.
    """

    gap: float = 1e-10
    feasibility: float = 1e-10
    accept_gap: float = 1e-8
    accept_feasibility: float = 1e-9
    complementarity: float = 1e-8
    accept_complementarity: float = 1e-7
    max_iterations: int = 200
    step_fraction: float = 0.98
    infeasibility: float = 1e-8

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ArgumentError("max_iterations must be at least 1")
        if not 0 < self.step_fraction < 1:
            raise ArgumentError("step_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class IterateRecord:
    """One interior-point iterate in the caller's maximization units.

    Iterates may be infeasible, so dual_objective - primal_objective equals
    complementarity + residual_correction rather than complementarity alone.
    """

    iteration: int
    primal_objective: float
    dual_objective: float
    complementarity: float
    residual_correction: float
    primal_infeasibility: float
    dual_infeasibility: float


@dataclass(frozen=True)
class SdpSolution:
    Y: np.ndarray
    objective_value: float
    dual_values: np.ndarray
    primal_residual: float
    dual_residual: float
    duality_gap: float
    status: SolverStatus
    iterations: int = 0
    slack: Optional[np.ndarray] = field(default=None, repr=False)
    dual_objective: float = float("nan")
    certificate_residual: Optional[float] = None
    history: Tuple[IterateRecord, ...] = field(default=(), repr=False)

    @property
    def is_optimal(self) -> bool:
        return self.status is SolverStatus.OPTIMAL
