"""Hardware impairments: IRS phase errors, oscillator drift and distortion noise"""

import math
from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..errors import ArgumentError
from ..models.channel import DistortionVariances, PhaseDriftState, PhaseErrorVector
from ..models.scenario import ScenarioParams

DEFAULT_SUPPORT = math.pi / 2


def sample_phase_errors(
    N: int, rng: np.random.Generator, support: float = DEFAULT_SUPPORT
) -> PhaseErrorVector:
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ArgumentError(f"element count must be a positive integer, got {N!r}")
    if not 0 <= support <= math.pi:
        raise ArgumentError(f"support must lie in [0, pi], got {support!r}")
    return PhaseErrorVector(rng.uniform(-support, support, int(N)), support)


def error_moments(support: float = DEFAULT_SUPPORT) -> Tuple[float, float]:
    """First moments of a uniform phase error on [-s, s].

    Returns (c1, c2) with c1 = E[cos theta] = sin(s)/s and
    c2 = E[exp(j(theta_i - theta_k))] = c1**2 for i != k.
    At s = pi/2 these are 2/pi and 4/pi^2.
    """
    if not 0 <= support <= math.pi:
        raise ArgumentError(f"support must lie in [0, pi], got {support!r}")
    c1 = 1.0 if support == 0 else math.sin(support) / support
    return c1, c1 * c1


def triangular_pdf(x: npt.ArrayLike, support: float = DEFAULT_SUPPORT) -> np.ndarray:
    """Density of theta_i - theta_k for two independent uniform errors."""
    if not support > 0:
        raise ArgumentError("the difference density needs a positive support")
    x = np.abs(np.asarray(x, dtype=np.float64))
    return np.where(x <= 2 * support, (2 * support - x) / (4 * support**2), 0.0)


def triangular_cdf(x: npt.ArrayLike, support: float = DEFAULT_SUPPORT) -> np.ndarray:
    if not support > 0:
        raise ArgumentError("the difference density needs a positive support")
    w = 2 * support
    x = np.clip(np.asarray(x, dtype=np.float64), -w, w)
    left = (x + w) ** 2 / (2 * w**2)
    right = 1.0 - (w - x) ** 2 / (2 * w**2)
    return np.where(x <= 0, left, right)


def initial_phase_drift(delta_osc: float) -> PhaseDriftState:
    return PhaseDriftState(psi=0.0, delta_osc=delta_osc)


def advance_phase_drift(state: PhaseDriftState, rng: np.random.Generator) -> PhaseDriftState:
    """One Wiener step: psi(t) ~ N(psi(t-1), delta_osc)."""
    if state.delta_osc == 0:
        return state
    psi = float(rng.normal(state.psi, math.sqrt(state.delta_osc)))
    return PhaseDriftState(psi=psi, delta_osc=state.delta_osc)


def expected_drift_factor(t: float, delta_osc: float) -> float:
    """E[exp(j psi(t))] after t steps from psi(0) = 0."""
    return math.exp(-0.5 * t * delta_osc)


def distortion_variances(params: ScenarioParams, composite_gain: float) -> DistortionVariances:
    if not composite_gain >= 0:
        raise ArgumentError(f"composite gain must be non-negative, got {composite_gain!r}")
    return DistortionVariances(
        upsilon_t=params.kappa_t * params.P,
        v_r=params.kappa_r * params.P * composite_gain,
    )
