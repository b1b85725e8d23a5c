"""Closed-form average rate, utility and gap expressions.

Every function accepts N as a scalar or array of real element counts and
returns the same shape. Rates are in bits/s/Hz, utilities in bits/s/Hz per
element. Let kappa = kappa_t + kappa_r and s = sigma_w2 / P; then

    chi(N)   = beta N^2 + lambda N + mu_SU
    varpi(N) = alpha^2 mu_IU mu_SI N^2 + rho N + mu_SU
    R_HWI(N) = log2(1 + chi / (kappa chi + s))
    R(N)     = log2(1 + varpi / s)
"""

import math
from typing import Tuple

import numpy as np
import numpy.typing as npt

from ..errors import ArgumentError, DivergenceError
from ..models.enums import Provenance
from ..models.results import RateCoefficients, RateCurve
from ..models.scenario import LinkBudget, ScenarioParams
from ..physics.hwi import error_moments

LN2 = math.log(2.0)


def element_counts(N: npt.ArrayLike) -> np.ndarray:
    N = np.asarray(N, dtype=np.float64)
    if not np.all(np.isfinite(N)) or np.any(N <= 0):
        raise ArgumentError("element count N must be positive and finite")
    return N


def shaped(value: np.ndarray):
    return float(value) if np.ndim(value) == 0 else value


def coefficients(params: ScenarioParams, budget: LinkBudget) -> RateCoefficients:
    c1, c2 = error_moments(params.phase_error_support)
    cascade = params.alpha**2 * budget.mu_IU * budget.mu_SI
    cross = 2 * params.alpha * math.sqrt(budget.mu_IU * budget.mu_SI * budget.mu_SU)
    cross *= math.cos(params.phi_SU)
    return RateCoefficients(
        beta=c2 * cascade,
        lambda_=(1.0 - c2) * cascade + c1 * cross,
        rho=cross,
        mu_SU=budget.mu_SU,
        ideal_quadratic=cascade,
        c1=c1,
        c2=c2,
    )


def avg_rate_hwi(N, params: ScenarioParams, budget: LinkBudget):
    N = element_counts(N)
    chi = coefficients(params, budget).chi(N)
    s = params.noise_to_power
    return shaped(np.log1p(chi / (params.kappa * chi + s)) / LN2)


def utility_hwi(N, params: ScenarioParams, budget: LinkBudget):
    N = element_counts(N)
    coef = coefficients(params, budget)
    chi, dchi = coef.chi(N), coef.dchi(N)
    s, k = params.noise_to_power, params.kappa
    return shaped(s * dchi / ((k * chi + s) * ((k + 1) * chi + s) * LN2))


def rate_ideal(N, params: ScenarioParams, budget: LinkBudget):
    N = element_counts(N)
    varpi = coefficients(params, budget).varpi(N)
    return shaped(np.log1p(varpi / params.noise_to_power) / LN2)


def utility_ideal(N, params: ScenarioParams, budget: LinkBudget):
    N = element_counts(N)
    coef = coefficients(params, budget)
    snr_scale = params.P / params.sigma_w2
    varpi, dvarpi = coef.varpi(N), coef.dvarpi(N)
    return shaped(snr_scale * dvarpi / ((1 + snr_scale * varpi) * LN2))


def _gap_terms(N, params: ScenarioParams, budget: LinkBudget):
    coef = coefficients(params, budget)
    P, sw2, k = params.P, params.sigma_w2, params.kappa
    chi, varpi = coef.chi(N), coef.varpi(N)
    numerator = P * k * chi + sw2 + P**2 * chi * varpi * k / sw2 + P * varpi
    denominator = P * (k + 1) * chi + sw2
    return coef, chi, varpi, numerator, denominator


def rate_gap(N, params: ScenarioParams, budget: LinkBudget):
    """R(N) - R_HWI(N) as a single logarithm."""
    N = element_counts(N)
    _, _, _, numerator, denominator = _gap_terms(N, params, budget)
    return shaped(np.log(numerator / denominator) / LN2)


def utility_gap(N, params: ScenarioParams, budget: LinkBudget):
    """gamma(N) - gamma_HWI(N), the N-derivative of the rate gap."""
    N = element_counts(N)
    coef, chi, varpi, numerator, denominator = _gap_terms(N, params, budget)
    P, sw2, k = params.P, params.sigma_w2, params.kappa
    dchi, dvarpi = coef.dchi(N), coef.dvarpi(N)
    top = (
        P**3 * chi**2 * (k + 1) * (k / sw2) * dvarpi
        + P**2 * (k + 1) * (dvarpi * chi - dchi * varpi)
        + P**2 * k * (dvarpi * chi + dchi * varpi)
        + P * sw2 * (dvarpi - dchi)
    )
    return shaped(top / (numerator * denominator * LN2))


def expansion_brackets(N, params: ScenarioParams, budget: LinkBudget) -> Tuple[object, object]:
    """(varpi' chi - chi' varpi, varpi' - chi'); both positive whenever the
    utility gap is."""
    N = element_counts(N)
    coef = coefficients(params, budget)
    chi, varpi = coef.chi(N), coef.varpi(N)
    dchi, dvarpi = coef.dchi(N), coef.dvarpi(N)
    return shaped(dvarpi * chi - dchi * varpi), shaped(dvarpi - dchi)


def rate_limit_inf(params: ScenarioParams) -> float:
    """Ceiling of R_HWI as N (or P) grows without bound."""
    if params.kappa <= 0:
        raise DivergenceError("the rate grows without bound when kappa_t + kappa_r = 0")
    return math.log1p(1.0 / params.kappa) / LN2


def utility_limit_power_inf(params: ScenarioParams) -> float:
    """gamma_HWI as P grows at fixed N: the numerator carries sigma_w2 / P."""
    if params.kappa <= 0:
        raise DivergenceError("the utility has no power limit when kappa_t + kappa_r = 0")
    return 0.0


def hwi_curve(N, params: ScenarioParams, budget: LinkBudget) -> RateCurve:
    """R_HWI and gamma_HWI sampled on the element counts N."""
    points = np.atleast_1d(element_counts(N))
    return RateCurve(
        axis="N",
        points=points,
        rate=np.atleast_1d(avg_rate_hwi(points, params, budget)),
        utility=np.atleast_1d(utility_hwi(points, params, budget)),
        provenance=Provenance.CLOSED_FORM,
    )
