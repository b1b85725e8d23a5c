"""Multiple-antenna decode-and-forward relay benchmark.

The relay sits where the surface would, with h_SR = h_SI and h_RU = h_IU,
and its transceiver distortion splits evenly: kappa_t = kappa_r = kappa/2.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..errors import ArgumentError, DomainError
from ..models.enums import DfBranch, Provenance
from ..models.results import RateCurve
from ..models.scenario import LinkBudget, ScenarioParams
from .closed_form import LN2, coefficients, element_counts, shaped, utility_limit_power_inf

BRANCH_RTOL = 1e-12


@dataclass(frozen=True)
class DfParams:
    """Relay powers and distortion; P1 + P2 = 2P."""

    P1: float
    P2: float
    kappa: float
    mu_SI: float
    mu_IU: float
    mu_SU: float

    def __post_init__(self):
        if not (self.P1 > 0 and self.P2 > 0):
            raise ArgumentError(f"relay powers must be positive, got P1={self.P1!r}, P2={self.P2!r}")
        if self.kappa < 0:
            raise ArgumentError(f"kappa must be non-negative, got {self.kappa!r}")

    @property
    def kappa_t(self) -> float:
        return self.kappa / 2

    @property
    def kappa_r(self) -> float:
        return self.kappa / 2

    @classmethod
    def from_scenario(
        cls, params: ScenarioParams, budget: LinkBudget, P1: Optional[float] = None
    ) -> "DfParams":
        P1 = params.P if P1 is None else float(P1)
        if not 0 < P1 < 2 * params.P:
            raise ArgumentError(f"P1 must lie in (0, 2P), got {P1!r}")
        return cls(
            P1=P1,
            P2=2 * params.P - P1,
            kappa=params.kappa,
            mu_SI=budget.mu_SI,
            mu_IU=budget.mu_IU,
            mu_SU=budget.mu_SU,
        )

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class DfUtility:
    value: float
    branch: DfBranch
    at_branch_point: bool = False


def _first_hop_denominator(N, df: DfParams, params: ScenarioParams):
    return df.kappa_r * df.mu_SI + N * df.kappa_t * df.mu_SI + params.sigma_w2 / df.P1


def _second_hop_denominator(N, df: DfParams, params: ScenarioParams):
    return df.kappa_t * df.mu_IU + N * df.kappa_r * df.mu_IU + params.sigma_w2 / df.P2


def _direct_snir(df: DfParams, params: ScenarioParams) -> float:
    return df.mu_SU / (df.kappa * df.mu_SU + params.sigma_w2 / df.P1)


def df_branches(N, df: DfParams, params: ScenarioParams):
    """(A, B): source-to-relay and relay-plus-direct capacities in bits/s/Hz."""
    N = element_counts(N)
    first = np.log1p(N * df.mu_SI / _first_hop_denominator(N, df, params)) / LN2
    second_snir = _direct_snir(df, params) + N * df.mu_IU / _second_hop_denominator(N, df, params)
    second = np.log1p(second_snir) / LN2
    return shaped(first), shaped(second)


def df_rate_upper_bound(N, df: DfParams, params: ScenarioParams):
    """Half-duplex bound (1/2) min(A, B)."""
    first, second = df_branches(N, df, params)
    return shaped(0.5 * np.minimum(first, second))


def df_utility(N: float, df: DfParams, params: ScenarioParams) -> DfUtility:
    """N-derivative of the bound on whichever branch is active.

    At A = B the bound has a kink; the A-branch derivative is returned and
    flagged.
    """
    first, second = df_branches(N, df, params)
    N = float(N)
    tie = math.isclose(first, second, rel_tol=BRANCH_RTOL)
    if tie or first < second:
        D = _first_hop_denominator(N, df, params)
        s1 = params.sigma_w2 / df.P1
        value = (df.kappa_r * df.mu_SI**2 + s1 * df.mu_SI) / (2 * D * (D + N * df.mu_SI) * LN2)
        return DfUtility(value=float(value), branch=DfBranch.SOURCE_RELAY, at_branch_point=tie)
    E = _second_hop_denominator(N, df, params)
    s2 = params.sigma_w2 / df.P2
    total = 1 + _direct_snir(df, params) + N * df.mu_IU / E
    value = (df.kappa_t * df.mu_IU**2 + s2 * df.mu_IU) / (2 * total * E**2 * LN2)
    return DfUtility(value=float(value), branch=DfBranch.RELAY_USER)


def df_curve(N, df: DfParams, params: ScenarioParams) -> RateCurve:
    """DF bound and its active-branch utility sampled on N."""
    points = np.atleast_1d(element_counts(N))
    return RateCurve(
        axis="N",
        points=points,
        rate=np.atleast_1d(df_rate_upper_bound(points, df, params)),
        utility=np.array([df_utility(n, df, params).value for n in points]),
        provenance=Provenance.DF_BOUND,
    )


@dataclass(frozen=True)
class RelayAsymptotics:
    """Limits of the IRS and DF curves as N or P grows.

    Power limits are taken at the fixed element count ``N``.
    """

    kappa: float
    N: int
    irs_rate_limit: float
    irs_utility_limit_power: float
    df_rate_limit_elements: float
    df_rate_limit_power: float
    df_utility_limit_power: float
    gap_elements: float
    gap_power: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def asymptotics(params: ScenarioParams, df: Optional[DfParams] = None, N: int = 256) -> RelayAsymptotics:
    """IRS and DF limits at one distortion level; a given ``df`` supplies kappa for both."""
    if df is not None:
        params = params.with_changes(kappa_t=df.kappa_t, kappa_r=df.kappa_r)
    kappa = params.kappa
    if kappa <= 0:
        raise ArgumentError("asymptotic limits need kappa_t + kappa_r > 0")
    if N < 1:
        raise ArgumentError(f"element count must be positive, got {N!r}")
    irs_limit = math.log1p(1.0 / kappa) / LN2
    df_elements = 0.5 * math.log1p(2.0 / kappa) / LN2
    df_power = 0.5 * math.log1p(2.0 * N / (kappa + kappa * N)) / LN2
    df_utility_power = kappa / ((kappa + N * kappa + 2 * N) * (kappa + N * kappa) * LN2)
    gap_elements = 0.5 * math.log1p(1.0 / (kappa**2 + 2 * kappa)) / LN2
    gap_power = 0.5 * math.log1p((2 * kappa + N + 1) / ((N + 1) * kappa**2 + 2 * N * kappa)) / LN2
    return RelayAsymptotics(
        kappa=kappa,
        N=int(N),
        irs_rate_limit=irs_limit,
        irs_utility_limit_power=utility_limit_power_inf(params),
        df_rate_limit_elements=df_elements,
        df_rate_limit_power=df_power,
        df_utility_limit_power=df_utility_power,
        gap_elements=gap_elements,
        gap_power=gap_power,
    )


def kappa_threshold(params: ScenarioParams, budget: LinkBudget) -> float:
    """Total distortion above which a single-element IRS beats the relay at any N."""
    coef = coefficients(params, budget)
    g = coef.beta + coef.lambda_ + coef.mu_SU
    P, sw2 = params.P, params.sigma_w2
    denominator = P**2 * g**2 - 2 * sw2 * P * g
    if denominator <= 0:
        raise DomainError(
            f"kappa threshold undefined: P (beta + lambda + mu_SU) = {P * g:.3e} "
            f"does not exceed 2 sigma_w2 = {2 * sw2:.3e}"
        )
    return 2 * sw2**2 / denominator
