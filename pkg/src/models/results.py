"""Result records produced by the analysis modules"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import numpy.typing as npt

from ..errors import ArgumentError
from .enums import Provenance

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class TrialAverage:
    mean: float
    std_error: float
    trials: int

    def __post_init__(self):
        if self.trials < 1:
            raise ArgumentError("an average needs at least one trial")
        if not self.std_error >= 0:
            raise ArgumentError("std_error must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": self.mean, "std_error": self.std_error, "trials": self.trials}


@dataclass(frozen=True)
class RateCoefficients:
    """Polynomial coefficients of the average composite gain in N.

    chi(N) is the mean gain with phase errors, varpi(N) the gain of the
    ideal (error free) surface. ``ideal_quadratic`` is alpha^2 mu_IU mu_SI,
    the N^2 coefficient of varpi.
    """

    beta: float
    lambda_: float
    rho: float
    mu_SU: float
    ideal_quadratic: float
    c1: float
    c2: float

    def chi(self, N):
        return self.beta * N**2 + self.lambda_ * N + self.mu_SU

    def dchi(self, N):
        return 2 * self.beta * N + self.lambda_

    def varpi(self, N):
        return self.ideal_quadratic * N**2 + self.rho * N + self.mu_SU

    def dvarpi(self, N):
        return 2 * self.ideal_quadratic * N + self.rho

    def to_dict(self) -> Dict[str, float]:
        return {
            "beta": self.beta,
            "lambda": self.lambda_,
            "rho": self.rho,
            "mu_SU": self.mu_SU,
            "ideal_quadratic": self.ideal_quadratic,
            "c1": self.c1,
            "c2": self.c2,
        }


@dataclass(frozen=True)
class RateCurve:
    """Sampled rate and utility against N or P with its provenance."""

    axis: str
    points: FloatArray
    rate: FloatArray
    utility: Optional[FloatArray]
    provenance: Provenance

    def __post_init__(self):
        if np.shape(self.points) != np.shape(self.rate):
            raise ArgumentError("points and rate must have the same shape")
        if self.utility is not None and np.shape(self.utility) != np.shape(self.rate):
            raise ArgumentError("utility must match the rate samples")


@dataclass(frozen=True)
class LiftedSolution:
    """Phase vector recovered from the lifted SDP variable.

    Y is the (N+1)-square block of the solver variable, mu_tilde the
    normalization scalar, X = Y / mu_tilde. ``Y_r`` is the rank-one matrix
    rebuilt from theta.
    """

    Y: ComplexArray
    mu_tilde: float
    X: ComplexArray
    theta: FloatArray
    rank1_certified: bool
    eigen_ratio: float
    reconstruction_error: float
    Y_r: ComplexArray = field(repr=False)

    @property
    def N(self) -> int:
        return int(self.theta.size)


@dataclass(frozen=True)
class OptimizationOutcome:
    """One pass of lift, solve, extract and evaluate."""

    N: int
    theta: FloatArray
    objective_value: float
    objective_rate: float
    monte_carlo: TrialAverage
    lifted: LiftedSolution
    iterations: int

    def to_row(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "objective_value": self.objective_value,
            "objective_rate": self.objective_rate,
            "optimized_mc_mean": self.monte_carlo.mean,
            "optimized_mc_std_error": self.monte_carlo.std_error,
            "eigen_ratio": self.lifted.eigen_ratio,
            "rank1_certified": self.lifted.rank1_certified,
            "theta": " ".join(f"{t:.12g}" for t in self.theta),
        }
