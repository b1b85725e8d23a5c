"""Channel and hardware-impairment state records"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import numpy.typing as npt

from ..errors import ArgumentError

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]


def _frozen_array(values: Any, name: str) -> FloatArray:
    array = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    if not np.all(np.isfinite(array)):
        raise ArgumentError(f"{name} must contain only finite values")
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of h_SI, h_IU and h_SU.

    The nominal model has constant magnitudes sqrt(mu) on every element.
    An estimated channel (imperfect CSI) carries explicit per-element
    amplitudes in ``amp_IU``/``amp_SI``/``amp_SU`` instead.
    """

    mu_IU: float
    mu_SI: float
    mu_SU: float
    phi_IU: FloatArray
    phi_SI: FloatArray
    phi_SU: float
    amp_IU: Optional[FloatArray] = field(default=None, repr=False)
    amp_SI: Optional[FloatArray] = field(default=None, repr=False)
    amp_SU: Optional[float] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "phi_IU", _frozen_array(self.phi_IU, "phi_IU"))
        object.__setattr__(self, "phi_SI", _frozen_array(self.phi_SI, "phi_SI"))
        if self.phi_IU.size == 0:
            raise ArgumentError("a realization needs at least one element")
        if self.phi_IU.shape != self.phi_SI.shape:
            raise ArgumentError(
                f"phase arrays differ in length: {self.phi_IU.size} vs {self.phi_SI.size}"
            )
        if not math.isfinite(self.phi_SU):
            raise ArgumentError("phi_SU must be finite")
        for name in ("amp_IU", "amp_SI"):
            amp = getattr(self, name)
            if amp is not None:
                amp = _frozen_array(amp, name)
                if amp.shape != self.phi_IU.shape:
                    raise ArgumentError(f"{name} must have one entry per element")
                object.__setattr__(self, name, amp)

    @property
    def N(self) -> int:
        return int(self.phi_IU.size)

    @property
    def h_IU(self) -> ComplexArray:
        amplitude = self.amp_IU if self.amp_IU is not None else math.sqrt(self.mu_IU)
        return amplitude * np.exp(1j * self.phi_IU)

    @property
    def h_SI(self) -> ComplexArray:
        amplitude = self.amp_SI if self.amp_SI is not None else math.sqrt(self.mu_SI)
        return amplitude * np.exp(1j * self.phi_SI)

    @property
    def h_SU(self) -> complex:
        amplitude = self.amp_SU if self.amp_SU is not None else math.sqrt(self.mu_SU)
        return complex(amplitude * np.exp(1j * self.phi_SU))

    @classmethod
    def from_coefficients(
        cls, h_IU: ComplexArray, h_SI: ComplexArray, h_SU: complex
    ) -> "ChannelRealization":
        """Build a realization from arbitrary complex coefficients."""
        h_IU = np.asarray(h_IU, dtype=np.complex128)
        h_SI = np.asarray(h_SI, dtype=np.complex128)
        return cls(
            mu_IU=float(np.mean(np.abs(h_IU) ** 2)),
            mu_SI=float(np.mean(np.abs(h_SI) ** 2)),
            mu_SU=float(abs(h_SU) ** 2),
            phi_IU=np.angle(h_IU),
            phi_SI=np.angle(h_SI),
            phi_SU=float(np.angle(h_SU)),
            amp_IU=np.abs(h_IU),
            amp_SI=np.abs(h_SI),
            amp_SU=float(abs(h_SU)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "mu_IU": self.mu_IU,
            "mu_SI": self.mu_SI,
            "mu_SU": self.mu_SU,
            "phi_IU": self.phi_IU.tolist(),
            "phi_SI": self.phi_SI.tolist(),
            "phi_SU": self.phi_SU,
        }


@dataclass(frozen=True)
class PhaseErrorVector:
    """IRS phase errors, i.i.d. uniform on [-support, support]."""

    theta_E: FloatArray
    support: float = math.pi / 2

    def __post_init__(self):
        theta = _frozen_array(self.theta_E, "theta_E")
        if np.any(np.abs(theta) > self.support):
            raise ArgumentError(f"phase errors must lie within +/-{self.support}")
        object.__setattr__(self, "theta_E", theta)

    @property
    def N(self) -> int:
        return int(self.theta_E.size)

    @property
    def diagonal(self) -> ComplexArray:
        return np.exp(1j * self.theta_E)


@dataclass(frozen=True)
class PhaseDriftState:
    """Receiver oscillator phase following a Wiener process."""

    psi: float
    delta_osc: float

    def __post_init__(self):
        if not math.isfinite(self.psi):
            raise ArgumentError("psi must be finite")
        if self.delta_osc < 0:
            raise ArgumentError("delta_osc must be non-negative")

    @property
    def factor(self) -> complex:
        return complex(np.exp(1j * self.psi))


@dataclass(frozen=True)
class DistortionVariances:
    """Transmitter and receiver distortion-noise powers in watts."""

    upsilon_t: float
    v_r: float

    def __post_init__(self):
        if self.upsilon_t < 0 or self.v_r < 0:
            raise ArgumentError("distortion variances must be non-negative")
