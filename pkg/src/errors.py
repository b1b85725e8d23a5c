"""Exception hierarchy shared by every module"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .models.sdp import SdpSolution


class IrsHwiError(Exception):
    """Base class for all errors raised by the toolkit."""


class ArgumentError(IrsHwiError, ValueError):
    """Invalid input: bad parameter, shape mismatch, malformed config."""


class DivergenceError(IrsHwiError, ArithmeticError):
    """A limit requested does not exist (for example zero total distortion)."""


class DomainError(IrsHwiError, ArithmeticError):
    """A closed form is undefined for the given parameters."""


class SolverFailure(IrsHwiError):
    """The SDP solver did not return an optimal solution."""

    def __init__(self, message: str, solution: "SdpSolution | None" = None):
        super().__init__(message)
        self.solution = solution


class PropagationError(SolverFailure):
    """A downstream step received a non-optimal solver result."""


class InvariantViolation(IrsHwiError):
    """A run-time contract failed during an experiment."""

    def __init__(self, message: str, detail: dict[str, Any] | None = None):
        super().__init__(message)
        self.detail = detail or {}
