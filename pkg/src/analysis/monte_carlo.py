"""Monte Carlo evaluation of instantaneous achievable rates.

Trials are seeded counter-style: the generator of trial ``i`` in stream
``s`` under key ``k`` depends only on (seed, k, s, i), never on how many
draws other trials made or on which worker ran them.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from ..errors import ArgumentError
from ..models.channel import ChannelRealization, ComplexArray, PhaseErrorVector
from ..models.enums import Provenance, RandomStream
from ..models.results import RateCurve, TrialAverage
from ..models.scenario import LinkBudget, ScenarioParams
from ..physics.hwi import sample_phase_errors
from .closed_form import LN2

logger = logging.getLogger(__name__)

MODULUS_RTOL = 1e-9


@dataclass(frozen=True)
class TrialSeeds:
    """Master seed plus a key identifying one experiment point."""

    seed: int
    key: Tuple[int, ...] = ()

    def generator(self, stream: RandomStream, index: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(
            self.seed, spawn_key=(*self.key, int(stream), int(index))
        )
        return np.random.Generator(np.random.Philox(sequence))

    def child(self, *key: int) -> "TrialSeeds":
        return TrialSeeds(self.seed, (*self.key, *(int(k) for k in key)))


RandomSource = Union[TrialSeeds, np.random.Generator]


def rate_from_gain(gain, params: ScenarioParams):
    """log2(1 + P g / (P kappa g + sigma_w2)) for composite gain g = |.|^2."""
    snir = params.P * gain / (params.P * params.kappa * gain + params.sigma_w2)
    return np.log1p(snir) / LN2


def instantaneous_rate_compensated(
    N: int,
    params: ScenarioParams,
    budget: LinkBudget,
    errors: PhaseErrorVector,
    drift_phase: float = 0.0,
) -> float:
    """Rate with theta_i = -(phi_IU,i + phi_SI,i): only the phase errors remain."""
    if errors.N != N:
        raise ArgumentError(f"expected {N} phase errors, got {errors.N}")
    cascade = params.alpha * math.sqrt(budget.mu_IU * budget.mu_SI) * np.sum(errors.diagonal)
    composite = cascade + math.sqrt(budget.mu_SU) * np.exp(1j * params.phi_SU)
    if drift_phase:
        composite = composite * np.exp(1j * drift_phase)
    return float(rate_from_gain(abs(composite) ** 2, params))


def instantaneous_rate_with_phi(
    Phi: ComplexArray,
    ch: ChannelRealization,
    errors: PhaseErrorVector,
    params: ScenarioParams,
    drift_phase: float = 0.0,
    allow_zero: bool = False,
) -> float:
    """Rate for an arbitrary reflection diagonal Phi against true channel phases.

    ``allow_zero`` admits Phi = 0 (surface switched off) for direct-link checks.
    """
    Phi = np.asarray(Phi, dtype=np.complex128).reshape(-1)
    if Phi.size != ch.N or errors.N != ch.N:
        raise ArgumentError(
            f"Phi ({Phi.size}), phase errors ({errors.N}) and channel ({ch.N}) disagree in length"
        )
    modulus = np.abs(Phi)
    is_off = allow_zero and not np.any(modulus)
    if not is_off and not np.allclose(modulus, params.alpha, rtol=MODULUS_RTOL, atol=0.0):
        raise ArgumentError("every reflection coefficient must have modulus alpha")
    composite = np.sum(ch.h_IU * Phi * errors.diagonal * ch.h_SI) + ch.h_SU
    if drift_phase:
        composite = composite * np.exp(1j * drift_phase)
    return float(rate_from_gain(abs(composite) ** 2, params))


def summarize(samples: np.ndarray) -> TrialAverage:
    samples = np.asarray(samples, dtype=np.float64)
    trials = int(samples.size)
    mean = float(np.mean(samples))
    if trials == 1 or np.all(samples == samples[0]):
        std_error = 0.0
    else:
        std_error = float(np.std(samples, ddof=1) / math.sqrt(trials))
    return TrialAverage(mean=mean, std_error=std_error, trials=trials)


def draw_samples(
    sampler: Callable[[np.random.Generator], float],
    trials: int,
    rng: RandomSource,
    stream: RandomStream = RandomStream.EVALUATION,
) -> np.ndarray:
    if isinstance(trials, bool) or int(trials) != trials or trials < 1:
        raise ArgumentError(f"trials must be a positive integer, got {trials!r}")
    trials = int(trials)
    if isinstance(rng, TrialSeeds):
        generators = (rng.generator(stream, i) for i in range(trials))
    else:
        generators = (rng for _ in range(trials))
    return np.fromiter((sampler(g) for g in generators), dtype=np.float64, count=trials)


def average_rate(
    sampler: Callable[[np.random.Generator], float],
    trials: int,
    rng: RandomSource,
    stream: RandomStream = RandomStream.EVALUATION,
) -> TrialAverage:
    """Sample mean and standard error of ``sampler`` over independent draws.

    With TrialSeeds each trial gets its own generator; with a plain
    Generator the draws are sequential.
    """
    return summarize(draw_samples(sampler, trials, rng, stream))


def compensated_average(
    N: int,
    params: ScenarioParams,
    budget: LinkBudget,
    trials: int,
    rng: RandomSource,
) -> TrialAverage:
    """Average of the compensated-phase rate over fresh phase-error draws."""
    support = params.phase_error_support

    def sampler(generator: np.random.Generator) -> float:
        errors = sample_phase_errors(N, generator, support)
        return instantaneous_rate_compensated(N, params, budget, errors)

    return average_rate(sampler, trials, rng)


def monte_carlo_curve(points: Sequence[int], averages: Sequence[TrialAverage]) -> RateCurve:
    """Sample means at ``points``; Monte Carlo carries no utility."""
    if len(points) != len(averages):
        raise ArgumentError("one average per point is required")
    return RateCurve(
        axis="N",
        points=np.asarray(points, dtype=np.float64),
        rate=np.array([average.mean for average in averages], dtype=np.float64),
        utility=None,
        provenance=Provenance.MONTE_CARLO,
    )
