"""Unit conversions, the reference scenario and the link budget"""

import math

from ..errors import ArgumentError
from ..models.scenario import Geometry, LinkBudget, ScenarioParams


def _finite(x: float, name: str) -> float:
    value = float(x)
    if not math.isfinite(value):
        raise ArgumentError(f"{name} must be finite, got {x!r}")
    return value


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((_finite(x_dbm, "x_dbm") - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    value = _finite(watts, "watts")
    if value <= 0:
        raise ArgumentError(f"power must be positive to express in dBm, got {watts!r}")
    return 10.0 * math.log10(value) + 30.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (_finite(x_db, "x_db") / 10.0)


def linear_to_db(value: float) -> float:
    value = _finite(value, "value")
    if value <= 0:
        raise ArgumentError(f"value must be positive to express in dB, got {value!r}")
    return 10.0 * math.log10(value)


def default_scenario() -> ScenarioParams:
    """Reference scenario: 20 dBm transmit power, -80 dBm noise, kappa 0.05^2 per side."""
    return ScenarioParams(
        alpha=1.0,
        P=dbm_to_watts(20.0),
        sigma_w2=dbm_to_watts(-80.0),
        zeta0=db_to_linear(-20.0),
        d0=1.0,
        exp_IU=3.0,
        exp_SI=3.0,
        exp_SU=3.0,
        phi_SU=math.pi / 4,
        kappa_t=0.05**2,
        kappa_r=0.05**2,
        delta_osc=1.58e-4,
        geometry=Geometry.right_triangle(50.0, 15.0),
    )


def path_gain(params: ScenarioParams, distance: float, exponent: float) -> float:
    if not distance > 0:
        raise ArgumentError(f"distance must be positive, got {distance!r}")
    if distance < params.d0:
        raise ArgumentError(
            f"distance {distance} m lies inside the reference distance {params.d0} m"
        )
    return params.zeta0 * (params.d0 / distance) ** exponent


def link_budget(params: ScenarioParams) -> LinkBudget:
    g = params.geometry
    return LinkBudget(
        mu_IU=path_gain(params, g.d_IU, params.exp_IU),
        mu_SI=path_gain(params, g.d_SI, params.exp_SI),
        mu_SU=path_gain(params, g.d_SU, params.exp_SU),
    )
