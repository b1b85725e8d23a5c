"""Phase optimization through a Charnes-Cooper lifted SDP.

Pipeline: expected_xi -> build_p6 -> sdp.solve -> extract_and_certify,
then a Monte Carlo evaluation of the optimized phases against the true
channel. The lifted variable is a = (alpha e^{-j theta}; 1), X = a a^H,
so the surface gain over the direct link is a^H Xi a.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from ..analysis.closed_form import LN2
from ..analysis.monte_carlo import (
    RandomSource,
    average_rate,
    instantaneous_rate_with_phi,
)
from ..errors import ArgumentError, InvariantViolation, PropagationError, SolverFailure
from ..models.channel import ChannelRealization, ComplexArray, FloatArray, PhaseErrorVector
from ..models.results import LiftedSolution, OptimizationOutcome, TrialAverage
from ..models.scenario import ScenarioParams
from ..models.sdp import SdpProblem, SdpSolution, SdpTolerances
from ..physics.channels import TWO_PI, cascaded_channel
from ..physics.hwi import error_moments, sample_phase_errors
from ..physics.scenario import link_budget
from .sdp import solve

logger = logging.getLogger(__name__)

RECONSTRUCTION_TOL = 1e-5
LIFT_TOL = 1e-6


def _xi_from_blocks(top_left: ComplexArray, border: ComplexArray) -> ComplexArray:
    N = border.size
    xi = np.zeros((N + 1, N + 1), dtype=np.complex128)
    # exact Hermitian symmetry, real diagonal
    xi[:N, :N] = 0.5 * (top_left + top_left.conj().T)
    xi[np.arange(N), np.arange(N)] = np.real(np.diagonal(top_left))
    xi[:N, N] = border
    xi[N, :N] = border.conj()
    return xi


def build_xi(ch: ChannelRealization, errors: PhaseErrorVector) -> ComplexArray:
    """Xi for one phase-error draw; Xi[N, N] is exactly zero."""
    if errors.N != ch.N:
        raise ArgumentError(f"phase errors ({errors.N}) and channel ({ch.N}) disagree in length")
    u = ch.h_IU * errors.diagonal * ch.h_SI
    return _xi_from_blocks(np.outer(u, u.conj()), u * np.conj(ch.h_SU))


def expected_xi(ch: ChannelRealization, support: float = math.pi / 2) -> ComplexArray:
    """E[Xi] over uniform phase errors on [-support, support].

    Off-diagonal entries of the top-left block shrink by c2, the border by
    c1; the diagonal is untouched.
    """
    c1, c2 = error_moments(support)
    w = cascaded_channel(ch)
    top_left = c2 * np.outer(w, w.conj()) + (1.0 - c2) * np.diag(np.abs(w) ** 2)
    return _xi_from_blocks(top_left, c1 * w * np.conj(ch.h_SU))


def lifted_vector(theta: FloatArray, alpha: float) -> ComplexArray:
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    return np.append(alpha * np.exp(-1j * theta), 1.0)


def quadratic_form(xi: ComplexArray, theta: FloatArray, alpha: float) -> float:
    """a^H Xi a, the surface part of the composite gain."""
    a = lifted_vector(theta, alpha)
    if xi.shape != (a.size, a.size):
        raise ArgumentError(f"Xi has shape {xi.shape}, expected {(a.size, a.size)}")
    return float(np.real(np.vdot(a, xi @ a)))


def coherent_phases(ch: ChannelRealization) -> FloatArray:
    """theta_i = phi_SU - (phi_IU,i + phi_SI,i), aligning every path with h_SU."""
    return np.mod(ch.phi_SU - (ch.phi_IU + ch.phi_SI), TWO_PI)


def snir(gain: float, params: ScenarioParams) -> float:
    return gain / (params.kappa * gain + params.noise_to_power)


def build_p6(
    xi_bar: ComplexArray,
    params: ScenarioParams,
    N: int,
    direct_gain: Optional[float] = None,
) -> SdpProblem:
    """Charnes-Cooper lift of the SNIR maximization into one SDP.

    The variable is Z = c0 [Y (+) mu_tilde] of dimension N+2, with
    c0 = direct_gain + sigma_w2/(P kappa) so that the entries of Z are of
    order one. The objective value equals the SNIR of the lifted point.
    ``direct_gain`` defaults to mu_SU; pipelines pass |h_SU|^2 of the
    channel they optimize for.
    """
    xi_bar = np.asarray(xi_bar, dtype=np.complex128)
    if xi_bar.shape != (N + 1, N + 1):
        raise ArgumentError(f"Xi has shape {xi_bar.shape}, expected {(N + 1, N + 1)}")
    kappa = params.kappa
    if kappa <= 0:
        raise ArgumentError("the lift needs kappa_t + kappa_r > 0")
    if direct_gain is None:
        direct_gain = link_budget(params).mu_SU
    c0 = direct_gain + params.noise_to_power / kappa
    xi_scaled = xi_bar / c0
    dim = N + 2
    slot = N + 1

    objective = np.zeros((dim, dim), dtype=np.complex128)
    objective[: N + 1, : N + 1] = xi_scaled
    objective[slot, slot] = direct_gain / c0
    objective /= kappa

    constraints = []
    for i in range(N):
        A = np.zeros((dim, dim))
        A[i, i] = 1.0
        A[slot, slot] = -params.alpha**2
        constraints.append((A, 0.0))
    A = np.zeros((dim, dim))
    A[N, N] = 1.0
    A[slot, slot] = -1.0
    constraints.append((A, 0.0))
    normalization = np.zeros((dim, dim), dtype=np.complex128)
    normalization[: N + 1, : N + 1] = xi_scaled
    normalization[slot, slot] = 1.0
    constraints.append((normalization, 1.0))
    return SdpProblem(objective=objective, constraints=tuple(constraints), gain_scale=c0)


def _dominant_phases(Y: ComplexArray) -> FloatArray:
    _, vectors = np.linalg.eigh(Y)
    v = vectors[:, -1]
    anchor = v[-1]
    if abs(anchor) > 1e-8 * np.max(np.abs(v)):
        v = v * np.exp(-1j * np.angle(anchor))
    return np.mod(-np.angle(v[:-1]), TWO_PI)


def extract_and_certify(
    sol: SdpSolution,
    alpha: float,
    mu_tilde: Optional[float] = None,
    rank_tol: float = 1e-6,
    gain_scale: float = 1.0,
) -> LiftedSolution:
    """Read theta off row N of X = Y / mu_tilde and check that Y is rank one.

    ``sol.Y`` may be the full (N+2) lifted variable, in which case
    mu_tilde is its last diagonal entry, or the (N+1) block alone with
    ``mu_tilde`` given. Both are divided by ``gain_scale`` first.
    """
    if not sol.is_optimal:
        raise PropagationError(
            f"cannot extract phases from a {sol.status.value} solution", solution=sol
        )
    Z = np.asarray(sol.Y) / gain_scale
    if mu_tilde is None:
        Y = Z[:-1, :-1]
        mu_tilde = float(np.real(Z[-1, -1]))
    else:
        Y = Z
        mu_tilde = float(mu_tilde) / gain_scale
    if not mu_tilde > 0:
        raise PropagationError(f"mu_tilde must be positive, got {mu_tilde!r}", solution=sol)
    N = Y.shape[0] - 1
    X = Y / mu_tilde
    theta = np.mod(np.angle(X[N, :N]), TWO_PI)

    eigenvalues = np.linalg.eigvalsh(Y)
    top = float(eigenvalues[-1])
    second = float(eigenvalues[-2])
    eigen_ratio = max(second, 0.0) / top if top > 0 else math.inf

    a = lifted_vector(theta, alpha)
    Y_r = mu_tilde * np.outer(a, a.conj())
    scale = float(np.max(np.abs(Y)))
    reconstruction_error = float(np.max(np.abs(Y_r - Y))) / scale if scale > 0 else math.inf
    certified = eigen_ratio <= rank_tol and reconstruction_error <= RECONSTRUCTION_TOL

    if not certified:
        logger.warning(
            "lifted solution is not rank one (eigen ratio %.2e, reconstruction %.2e); "
            "using the dominant eigenvector",
            eigen_ratio, reconstruction_error,
        )
        theta = _dominant_phases(Y)
        a = lifted_vector(theta, alpha)
        Y_r = mu_tilde * np.outer(a, a.conj())

    return LiftedSolution(
        Y=Y,
        mu_tilde=mu_tilde,
        X=X,
        theta=theta,
        rank1_certified=bool(certified),
        eigen_ratio=eigen_ratio,
        reconstruction_error=reconstruction_error,
        Y_r=Y_r,
    )


def reconstructed_rate(
    lifted: LiftedSolution,
    xi_bar: ComplexArray,
    params: ScenarioParams,
    direct_gain: Optional[float] = None,
) -> float:
    """Rate of the E[Xi] SNIR at the rank-one point built from ``lifted.theta``."""
    if direct_gain is None:
        direct_gain = link_budget(params).mu_SU
    gain = quadratic_form(xi_bar, lifted.theta, params.alpha) + direct_gain
    return math.log1p(snir(gain, params)) / LN2


def lift_consistency(
    lifted: LiftedSolution,
    xi_bar: ComplexArray,
    params: ScenarioParams,
    direct_gain: float,
) -> float:
    """Relative miss of 1/mu_tilde = tr(E[Xi] X) + |h_SU|^2 + sigma_w2/(P kappa)."""
    lifted_gain = float(np.real(np.vdot(xi_bar, lifted.X))) + direct_gain
    return abs(1.0 - lifted.mu_tilde * (lifted_gain + params.noise_to_power / params.kappa))


def evaluate_phases(
    theta: FloatArray,
    ch: ChannelRealization,
    params: ScenarioParams,
    trials: int,
    rng: RandomSource,
) -> TrialAverage:
    """Average rate of Phi = alpha e^{j theta} over fresh phase-error draws."""
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != ch.N:
        raise ArgumentError(f"theta ({theta.size}) and channel ({ch.N}) disagree in length")
    Phi = params.alpha * np.exp(1j * theta)
    support = params.phase_error_support

    def sampler(generator: np.random.Generator) -> float:
        errors = sample_phase_errors(ch.N, generator, support)
        return instantaneous_rate_with_phi(Phi, ch, errors, params)

    return average_rate(sampler, trials, rng)


def optimize_phases(
    design: ChannelRealization,
    params: ScenarioParams,
    tolerances: Optional[SdpTolerances] = None,
    rank_tol: float = 1e-6,
) -> Tuple[LiftedSolution, ComplexArray, SdpSolution]:
    """Solve the lifted problem for the channel ``design`` believes in.

    Returns (lifted solution, E[Xi], SDP solution).
    """
    N = design.N
    direct_gain = abs(design.h_SU) ** 2
    xi_bar = expected_xi(design, params.phase_error_support)
    problem = build_p6(xi_bar, params, N, direct_gain=direct_gain)
    sol = solve(problem, tolerances)
    if not sol.is_optimal:
        raise SolverFailure(
            f"SDP for N={N} ended with status {sol.status.value} after {sol.iterations} iterations",
            solution=sol,
        )
    lifted = extract_and_certify(
        sol, params.alpha, rank_tol=rank_tol, gain_scale=problem.gain_scale
    )
    lift_gap = lift_consistency(lifted, xi_bar, params, direct_gain)
    logger.debug("N=%d lift consistency %.2e", N, lift_gap)
    if lift_gap > LIFT_TOL:
        raise InvariantViolation(
            f"lifted solution for N={N} breaks the normalization (gap {lift_gap:.2e})",
            detail={"N": N, "lift_gap": lift_gap, "mu_tilde": lifted.mu_tilde},
        )
    return lifted, xi_bar, sol


def optimize_and_evaluate(
    ch: ChannelRealization,
    params: ScenarioParams,
    trials: int,
    rng: RandomSource,
    tolerances: Optional[SdpTolerances] = None,
    rank_tol: float = 1e-6,
    design: Optional[ChannelRealization] = None,
) -> OptimizationOutcome:
    """Optimize against ``design`` (default ``ch``), evaluate against ``ch``."""
    design = ch if design is None else design
    if design.N != ch.N:
        raise ArgumentError("design and evaluation channels differ in length")
    lifted, _, sol = optimize_phases(design, params, tolerances, rank_tol)
    monte_carlo = evaluate_phases(lifted.theta, ch, params, trials, rng)
    objective_rate = math.log1p(max(sol.objective_value, 0.0)) / LN2
    logger.info(
        "N=%d optimized: objective rate %.6f, Monte Carlo %.6f +/- %.1e, certified %s",
        ch.N, objective_rate, monte_carlo.mean, monte_carlo.std_error, lifted.rank1_certified,
    )
    return OptimizationOutcome(
        N=ch.N,
        theta=lifted.theta,
        objective_value=sol.objective_value,
        objective_rate=objective_rate,
        monte_carlo=monte_carlo,
        lifted=lifted,
        iterations=sol.iterations,
    )
