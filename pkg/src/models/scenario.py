"""Scenario data models: geometry, physical parameters and link budget"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict

from ..errors import ArgumentError


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ArgumentError(message)


@dataclass(frozen=True)
class Geometry:
    """Source, IRS and user on a right triangle with the IRS at the corner."""

    d_SI: float
    d_IU: float
    d_SU: float

    def __post_init__(self):
        for name in ("d_SI", "d_IU", "d_SU"):
            value = getattr(self, name)
            _require(
                math.isfinite(value) and value > 0,
                f"{name} must be a positive distance, got {value!r}",
            )

    @classmethod
    def right_triangle(cls, d_SI: float, d_IU: float) -> "Geometry":
        return cls(d_SI=d_SI, d_IU=d_IU, d_SU=math.hypot(d_SI, d_IU))

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class ScenarioParams:
    """All link constants in linear SI units.

    Powers are in watts, distances in meters, angles in radians. Decibel
    quantities exist only at the configuration boundary.
    """

    alpha: float
    P: float
    sigma_w2: float
    zeta0: float
    d0: float
    exp_IU: float
    exp_SI: float
    exp_SU: float
    phi_SU: float
    kappa_t: float
    kappa_r: float
    delta_osc: float
    geometry: Geometry
    phase_error_support: float = field(default=math.pi / 2)

    def __post_init__(self):
        _require(0 < self.alpha <= 1, f"alpha must lie in (0, 1], got {self.alpha!r}")
        _require(self.P > 0 and math.isfinite(self.P), f"P must be positive, got {self.P!r}")
        _require(
            self.sigma_w2 > 0 and math.isfinite(self.sigma_w2),
            f"sigma_w2 must be positive, got {self.sigma_w2!r}",
        )
        _require(self.zeta0 > 0, f"zeta0 must be positive, got {self.zeta0!r}")
        _require(self.d0 > 0, f"d0 must be positive, got {self.d0!r}")
        _require(self.kappa_t >= 0, f"kappa_t must be non-negative, got {self.kappa_t!r}")
        _require(self.kappa_r >= 0, f"kappa_r must be non-negative, got {self.kappa_r!r}")
        _require(self.delta_osc >= 0, f"delta_osc must be non-negative, got {self.delta_osc!r}")
        _require(math.isfinite(self.phi_SU), "phi_SU must be finite")
        _require(
            0 <= self.phase_error_support <= math.pi,
            f"phase_error_support must lie in [0, pi], got {self.phase_error_support!r}",
        )

    @property
    def kappa(self) -> float:
        """Total transceiver distortion kappa_t + kappa_r."""
        return self.kappa_t + self.kappa_r

    @property
    def noise_to_power(self) -> float:
        return self.sigma_w2 / self.P

    def with_changes(self, **changes: Any) -> "ScenarioParams":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["geometry"] = self.geometry.to_dict()
        return data


@dataclass(frozen=True)
class LinkBudget:
    """Linear power attenuation of the three links."""

    mu_IU: float
    mu_SI: float
    mu_SU: float

    def __post_init__(self):
        for name in ("mu_IU", "mu_SI", "mu_SU"):
            value = getattr(self, name)
            _require(value > 0 and math.isfinite(value), f"{name} must be positive, got {value!r}")

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)
