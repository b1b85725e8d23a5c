"""Optimized phases under imperfect CSI and residual phase noise.

All three variants share the per-trial EVALUATION streams, so with zero
CSI error or zero residual support they reproduce the clean result
exactly, and their differences are paired comparisons.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ArgumentError
from ..models.channel import ChannelRealization, FloatArray
from ..models.enums import RandomStream
from ..models.results import OptimizationOutcome, TrialAverage
from ..models.scenario import ScenarioParams
from ..models.sdp import SdpTolerances
from ..physics.hwi import DEFAULT_SUPPORT, sample_phase_errors
from ..solvers.optimizer import optimize_and_evaluate
from .monte_carlo import RandomSource, TrialSeeds, average_rate, instantaneous_rate_with_phi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CsiErrorModel:
    """Zero-mean circular complex Gaussian estimation error per coefficient."""

    error_variance: float

    def __post_init__(self):
        if not (self.error_variance >= 0 and math.isfinite(self.error_variance)):
            raise ArgumentError(f"error variance must be non-negative, got {self.error_variance!r}")

    @classmethod
    def from_params(cls, params: ScenarioParams, error_variance: Optional[float] = None) -> "CsiErrorModel":
        return cls(params.sigma_w2 if error_variance is None else float(error_variance))


@dataclass(frozen=True)
class ResidualPhaseNoise:
    theta_p: FloatArray
    support: float = DEFAULT_SUPPORT

    def __post_init__(self):
        theta = np.asarray(self.theta_p, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(theta)) or np.any(np.abs(theta) > self.support):
            raise ArgumentError(f"residual phase noise must lie within +/-{self.support}")
        object.__setattr__(self, "theta_p", theta)

    @property
    def N(self) -> int:
        return int(self.theta_p.size)


def sample_residual_phase_noise(
    N: int, rng: np.random.Generator, support: float = DEFAULT_SUPPORT
) -> ResidualPhaseNoise:
    draw = sample_phase_errors(N, rng, support)
    return ResidualPhaseNoise(draw.theta_E, support)


def _complex_noise(rng: np.random.Generator, variance: float, size) -> np.ndarray:
    scale = math.sqrt(variance / 2)
    return rng.normal(0.0, scale, size) + 1j * rng.normal(0.0, scale, size)


def perturb_csi(
    ch: ChannelRealization, model: CsiErrorModel, rng: np.random.Generator
) -> ChannelRealization:
    """Estimated channel: every complex coefficient plus CN(0, error_variance)."""
    if model.error_variance == 0:
        return ch
    v = model.error_variance
    h_IU = ch.h_IU + _complex_noise(rng, v, ch.N)
    h_SI = ch.h_SI + _complex_noise(rng, v, ch.N)
    h_SU = ch.h_SU + complex(_complex_noise(rng, v, None))
    return ChannelRealization.from_coefficients(h_IU, h_SI, h_SU)


def imperfect_csi_phases(
    ch_true: ChannelRealization,
    model: CsiErrorModel,
    params: ScenarioParams,
    trials: int,
    rng: RandomSource,
    tolerances: Optional[SdpTolerances] = None,
    rank_tol: float = 1e-6,
) -> OptimizationOutcome:
    """Optimize on a perturbed estimate, evaluate on the true channel."""
    if isinstance(rng, TrialSeeds):
        estimate = perturb_csi(ch_true, model, rng.generator(RandomStream.CSI_ERROR, 0))
    else:
        estimate = perturb_csi(ch_true, model, rng)
    return optimize_and_evaluate(
        ch_true, params, trials, rng, tolerances=tolerances, rank_tol=rank_tol, design=estimate
    )


def optimize_with_imperfect_csi(
    ch_true: ChannelRealization,
    model: CsiErrorModel,
    params: ScenarioParams,
    trials: int,
    rng: RandomSource,
    tolerances: Optional[SdpTolerances] = None,
    rank_tol: float = 1e-6,
) -> TrialAverage:
    outcome = imperfect_csi_phases(ch_true, model, params, trials, rng, tolerances, rank_tol)
    return outcome.monte_carlo


def evaluate_with_residual_phase_noise(
    theta_opt: FloatArray,
    ch: ChannelRealization,
    params: ScenarioParams,
    trials: int,
    rng: RandomSource,
    support: float = DEFAULT_SUPPORT,
) -> TrialAverage:
    """Per trial: phase errors, then theta_p; Phi = alpha e^{j(theta + theta_p)}."""
    theta_opt = np.asarray(theta_opt, dtype=np.float64).reshape(-1)
    if theta_opt.size != ch.N:
        raise ArgumentError(f"theta ({theta_opt.size}) and channel ({ch.N}) disagree in length")
    error_support = params.phase_error_support

    def sampler(generator: np.random.Generator) -> float:
        errors = sample_phase_errors(ch.N, generator, error_support)
        noise = sample_residual_phase_noise(ch.N, generator, support)
        Phi = params.alpha * np.exp(1j * (theta_opt + noise.theta_p))
        return instantaneous_rate_with_phi(Phi, ch, errors, params)

    return average_rate(sampler, trials, rng)
