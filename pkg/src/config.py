"""Configuration loading: YAML file, ``--set`` overrides and validation.

Decibel quantities live only here; ``ScenarioSettings.to_params`` hands
linear SI units to the rest of the package.
"""

import copy
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ArgumentError
from .models.scenario import Geometry, ScenarioParams
from .models.sdp import SdpTolerances
from .physics.scenario import db_to_linear, dbm_to_watts

logger = logging.getLogger(__name__)

CONFIG_ENV = "IRS_HWI_CONFIG"
LOG_LEVEL_ENV = "IRS_HWI_LOG_LEVEL"


class ScenarioSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(1.0, gt=0, le=1)
    P_dbm: float = 20.0
    sigma_w2_dbm: float = -80.0
    zeta0_db: float = -20.0
    d0: float = Field(1.0, gt=0)
    exp_IU: float = 3.0
    exp_SI: float = 3.0
    exp_SU: float = 3.0
    phi_SU: float = math.pi / 4
    kappa_t: float = Field(0.05**2, ge=0)
    kappa_r: float = Field(0.05**2, ge=0)
    delta_osc: float = Field(1.58e-4, ge=0)
    d_SI: float = Field(50.0, gt=0)
    d_IU: float = Field(15.0, gt=0)
    d_SU: Optional[float] = Field(None, gt=0)
    phase_error_support: float = Field(math.pi / 2, ge=0, le=math.pi)

    @field_validator("P_dbm", "sigma_w2_dbm", "zeta0_db", "phi_SU", "exp_IU", "exp_SI", "exp_SU")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    def geometry(self) -> Geometry:
        if self.d_SU is None:
            return Geometry.right_triangle(self.d_SI, self.d_IU)
        return Geometry(d_SI=self.d_SI, d_IU=self.d_IU, d_SU=self.d_SU)

    def to_params(self) -> ScenarioParams:
        return ScenarioParams(
            alpha=self.alpha,
            P=dbm_to_watts(self.P_dbm),
            sigma_w2=dbm_to_watts(self.sigma_w2_dbm),
            zeta0=db_to_linear(self.zeta0_db),
            d0=self.d0,
            exp_IU=self.exp_IU,
            exp_SI=self.exp_SI,
            exp_SU=self.exp_SU,
            phi_SU=self.phi_SU,
            kappa_t=self.kappa_t,
            kappa_r=self.kappa_r,
            delta_osc=self.delta_osc,
            geometry=self.geometry(),
            phase_error_support=self.phase_error_support,
        )


class SolverSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gap: float = Field(1e-10, gt=0)
    feasibility: float = Field(1e-10, gt=0)
    accept_gap: float = Field(1e-8, gt=0)
    accept_feasibility: float = Field(1e-9, gt=0)
    complementarity: float = Field(1e-8, gt=0)
    accept_complementarity: float = Field(1e-7, gt=0)
    max_iterations: int = Field(200, ge=1)
    step_fraction: float = Field(0.98, gt=0, lt=1)
    infeasibility: float = Field(1e-8, gt=0)

    def to_tolerances(self) -> SdpTolerances:
        return SdpTolerances(**self.model_dump())


class ExperimentSettings(BaseModel):
    """Sweep grids, trial counts and seeds shared by every experiment."""

    model_config = ConfigDict(extra="forbid")

    trials: int = Field(1000, ge=1)
    seed: int = Field(42, ge=0)
    workers: int = Field(1, ge=1)
    n_max: int = Field(5000, ge=1)
    mc_step: int = Field(500, ge=1)
    optimizer_elements: List[int] = Field(default_factory=lambda: [1, 13, 25, 37])
    rank_tol: float = Field(1e-6, gt=0)
    csi_error_variance: Optional[float] = Field(None, ge=0)
    residual_phase_support: float = Field(math.pi / 2, ge=0, le=math.pi)
    relay_kappas: List[float] = Field(default_factory=lambda: [0.05**2, 0.07**2, 0.09**2])
    relay_elements: int = Field(256, ge=1)
    power_dbm_start: float = 1.0
    power_dbm_stop: float = 50.0
    power_dbm_step: float = Field(1.0, gt=0)
    solver: SolverSettings = Field(default_factory=SolverSettings)

    @field_validator("optimizer_elements")
    @classmethod
    def _positive_elements(cls, value: List[int]) -> List[int]:
        if not value or any(n < 1 for n in value):
            raise ValueError("needs at least one positive element count")
        return value

    @field_validator("relay_kappas")
    @classmethod
    def _kappas(cls, value: List[float]) -> List[float]:
        if not value or any(not k > 0 for k in value):
            raise ValueError("needs at least one positive kappa")
        return value


class AppConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioSettings = Field(default_factory=ScenarioSettings)
    experiments: ExperimentSettings = Field(default_factory=ExperimentSettings)


def parse_override(item: str) -> tuple:
    """``section.key=value`` -> (["section", "key"], parsed YAML scalar)."""
    key, sep, raw = item.partition("=")
    if not sep or not key.strip():
        raise ArgumentError(f"override {item!r} is not of the form section.key=value")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ArgumentError(f"override {item!r}: {exc}") from exc
    return [part for part in key.strip().split(".") if part], value


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    data = copy.deepcopy(data)
    for item in overrides:
        path, value = parse_override(item)
        node = data
        for part in path[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ArgumentError(f"override {item!r}: {part!r} is not a section")
            node = child
        node[path[-1]] = value
    return data


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        with path.open() as handle:
            data = yaml.safe_load(handle)
    except OSError as exc:
        raise ArgumentError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ArgumentError(f"malformed YAML in {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ArgumentError(f"{path}: top level must be a mapping")
    return data


def load_config(
    path: Optional[Union[str, Path]] = None, overrides: Sequence[str] = ()
) -> AppConfig:
    """File (explicit path, else $IRS_HWI_CONFIG, else none) plus overrides."""
    path = path or os.getenv(CONFIG_ENV) or None
    data = read_config_file(path) if path else {}
    if path:
        logger.debug("loaded configuration from %s", path)
    data = apply_overrides(data, overrides)
    try:
        return AppConfig.model_validate(data)
    except ValidationError as exc:
        raise ArgumentError(f"invalid configuration: {exc}") from exc
