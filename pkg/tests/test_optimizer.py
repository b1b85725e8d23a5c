"""
Tests for the lifted phase optimization.

Groups:
- Xi construction and its expectation
- the lifted problem: shape, objective at a lifted point
- extraction and rank-one certification
- end-to-end optimization against grids, random phases and compensation
"""

import dataclasses
import math

import numpy as np
import pytest

from src.analysis.closed_form import LN2
from src.analysis.monte_carlo import TrialSeeds
from src.errors import ArgumentError, InvariantViolation, PropagationError, SolverFailure
from src.models.channel import ChannelRealization, PhaseErrorVector
from src.models.enums import SolverStatus
from src.models.sdp import SdpSolution, SdpTolerances
from src.physics.channels import compensated_phases
from src.physics.hwi import sample_phase_errors
from src.solvers.optimizer import (
    build_p6,
    build_xi,
    coherent_phases,
    evaluate_phases,
    expected_xi,
    extract_and_certify,
    lift_consistency,
    lifted_vector,
    optimize_and_evaluate,
    optimize_phases,
    quadratic_form,
    reconstructed_rate,
    snir,
)
from src.solvers.sdp import solve


def unit_channel(N):
    return ChannelRealization(1.0, 1.0, 1.0, np.zeros(N), np.zeros(N), 0.0)


def lifted_point(theta, alpha, c0, mu_tilde):
    """Z = c0 [mu_tilde a a^H (+) mu_tilde] for the phases theta."""
    a = lifted_vector(theta, alpha)
    N = a.size - 1
    Z = np.zeros((N + 2, N + 2), dtype=np.complex128)
    Z[: N + 1, : N + 1] = mu_tilde * np.outer(a, a.conj())
    Z[N + 1, N + 1] = mu_tilde
    return c0 * Z


def fake_solution(Y, status=SolverStatus.OPTIMAL):
    return SdpSolution(
        Y=Y,
        objective_value=0.0,
        dual_values=np.zeros(0),
        primal_residual=0.0,
        dual_residual=0.0,
        duality_gap=0.0,
        status=status,
    )


class TestXi:
    def test_error_free_unit_channel(self):
        xi = build_xi(unit_channel(3), PhaseErrorVector(np.zeros(3)))
        assert np.allclose(xi[:3, :3], np.ones((3, 3)))
        assert np.allclose(xi[:3, 3], 1.0)
        assert xi[3, 3] == 0

    def test_exactly_hermitian(self, channel_factory, rng):
        ch = channel_factory(6)
        xi = build_xi(ch, sample_phase_errors(6, rng))
        assert np.max(np.abs(xi - xi.conj().T)) == 0.0
        assert np.all(np.diag(xi).imag == 0.0)

    def test_expectation_exactly_hermitian(self, channel_factory):
        xi_bar = expected_xi(channel_factory(9))
        assert np.max(np.abs(xi_bar - xi_bar.conj().T)) == 0.0

    def test_quadratic_form_is_composite_gain(self, params, channel_factory, rng):
        ch = channel_factory(5)
        errors = sample_phase_errors(5, rng)
        xi = build_xi(ch, errors)
        for _ in range(50):
            theta = rng.uniform(0, 2 * math.pi, 5)
            Phi = params.alpha * np.exp(1j * theta)
            composite = np.sum(ch.h_IU * Phi * errors.diagonal * ch.h_SI) + ch.h_SU
            gain = quadratic_form(xi, theta, params.alpha) + abs(ch.h_SU) ** 2
            assert gain == pytest.approx(abs(composite) ** 2, rel=1e-10)

    def test_expectation_by_sampling(self, rng):
        ch = ChannelRealization(1.0, 1.0, 1.0, rng.uniform(0, 6, 3), rng.uniform(0, 6, 3), 0.4)
        draws = 100_000
        total = np.zeros((4, 4), dtype=np.complex128)
        for _ in range(draws):
            total += build_xi(ch, sample_phase_errors(3, rng))
        assert np.allclose(total / draws, expected_xi(ch), atol=0.01, rtol=0)

    def test_single_element_expectation(self, channel_factory):
        ch = channel_factory(1)
        xi = expected_xi(ch)
        assert xi[0, 0].real == pytest.approx(ch.mu_IU * ch.mu_SI, rel=1e-12)
        border = 2 / math.pi * ch.h_IU[0] * ch.h_SI[0] * np.conj(ch.h_SU)
        assert xi[0, 1] == pytest.approx(border, rel=1e-12)

    def test_coherent_phases_maximize_expected_gain(self, params, channel_factory, rng):
        ch = channel_factory(8)
        xi = expected_xi(ch)
        best = quadratic_form(xi, coherent_phases(ch), params.alpha)
        for _ in range(100):
            assert quadratic_form(xi, rng.uniform(0, 2 * math.pi, 8), params.alpha) <= best + 1e-25

    def test_length_mismatch(self, channel_factory):
        with pytest.raises(ArgumentError):
            build_xi(channel_factory(3), PhaseErrorVector(np.zeros(2)))


class TestLift:
    def test_dimensions(self, params, channel_factory):
        ch = channel_factory(7)
        problem = build_p6(expected_xi(ch), params, 7)
        assert problem.dimension == 9
        assert problem.num_constraints == 9
        assert problem.rhs[-1] == 1.0

    def test_objective_is_snir_at_lifted_point(self, params, budget, channel_factory, rng):
        ch = channel_factory(4)
        xi = expected_xi(ch)
        problem = build_p6(xi, params, 4)
        theta = rng.uniform(0, 2 * math.pi, 4)
        gain = quadratic_form(xi, theta, params.alpha) + budget.mu_SU
        mu_tilde = 1.0 / (gain + params.noise_to_power / params.kappa)
        Z = lifted_point(theta, params.alpha, problem.gain_scale, mu_tilde)
        for A, b in problem.constraints:
            assert np.real(np.vdot(A, Z)) == pytest.approx(b, abs=1e-12)
        value = np.real(np.vdot(problem.objective, Z))
        assert value == pytest.approx(snir(gain, params), rel=1e-10)

    def test_needs_distortion(self, params, channel_factory):
        ideal = params.with_changes(kappa_t=0.0, kappa_r=0.0)
        with pytest.raises(ArgumentError):
            build_p6(expected_xi(channel_factory(2)), ideal, 2)

    def test_shape_mismatch(self, params, channel_factory):
        with pytest.raises(ArgumentError):
            build_p6(expected_xi(channel_factory(2)), params, 3)


class TestExtraction:
    def test_recovers_rank_one_phases(self, params, rng):
        theta = rng.uniform(0, 2 * math.pi, 6)
        Z = lifted_point(theta, params.alpha, 3.0, 0.25)
        lifted = extract_and_certify(fake_solution(Z), params.alpha, gain_scale=3.0)
        assert lifted.rank1_certified
        assert lifted.mu_tilde == pytest.approx(0.25)
        assert np.allclose(np.exp(1j * lifted.theta), np.exp(1j * theta), atol=1e-8)
        assert np.allclose(lifted.Y_r, lifted.Y, atol=1e-12)

    def test_block_with_explicit_scalar(self, params, rng):
        theta = rng.uniform(0, 2 * math.pi, 3)
        a = lifted_vector(theta, params.alpha)
        Y = 0.5 * np.outer(a, a.conj())
        lifted = extract_and_certify(fake_solution(Y), params.alpha, mu_tilde=0.5)
        assert np.allclose(np.exp(1j * lifted.theta), np.exp(1j * theta), atol=1e-8)

    def test_full_rank_falls_back(self, params):
        Z = np.eye(5, dtype=np.complex128)
        lifted = extract_and_certify(fake_solution(Z), params.alpha)
        assert not lifted.rank1_certified
        assert lifted.eigen_ratio == pytest.approx(1.0)
        assert lifted.theta.shape == (3,)

    @pytest.mark.parametrize("status", [SolverStatus.INFEASIBLE, SolverStatus.NUMERICAL_FAILURE])
    def test_non_optimal_input(self, params, status):
        with pytest.raises(PropagationError):
            extract_and_certify(fake_solution(np.eye(4), status), params.alpha)


class TestOptimization:
    def test_single_element_against_grid(self, params, channel_factory):
        ch = channel_factory(1)
        lifted, xi, sol = optimize_phases(ch, params)
        grid = np.linspace(0, 2 * math.pi, 10_000, endpoint=False)
        best = max(
            snir(quadratic_form(xi, np.array([t]), params.alpha) + ch.mu_SU, params) for t in grid
        )
        assert sol.objective_value == pytest.approx(best, rel=1e-4)
        assert lifted.rank1_certified

    def test_certified_at_thirteen_elements(self, params, channel_factory):
        ch = channel_factory(13)
        lifted, xi, sol = optimize_phases(ch, params)
        assert lifted.rank1_certified
        assert lifted.eigen_ratio <= 1e-6
        assert np.allclose(np.diag(lifted.X)[:13].real, params.alpha**2, rtol=1e-6)
        assert lifted.X[13, 13].real == pytest.approx(1.0, rel=1e-6)
        assert np.max(np.abs(lifted.Y_r - lifted.Y)) <= 1e-5 * np.max(np.abs(lifted.Y))
        # the SNIR of the rebuilt point reaches the relaxation value
        rate = reconstructed_rate(lifted, xi, params, ch.mu_SU)
        assert rate == pytest.approx(math.log1p(sol.objective_value) / LN2, abs=1e-6)

    def test_relaxation_bounds_random_phases(self, params, channel_factory, rng):
        ch = channel_factory(6)
        _, xi, sol = optimize_phases(ch, params)
        for _ in range(100):
            theta = rng.uniform(0, 2 * math.pi, 6)
            value = snir(quadratic_form(xi, theta, params.alpha) + ch.mu_SU, params)
            assert value <= sol.objective_value * (1 + 1e-9)

    def test_common_phase_offset_is_irrelevant(self, params, channel_factory):
        ch = channel_factory(5)
        shifted = ChannelRealization(
            ch.mu_IU, ch.mu_SI, ch.mu_SU, ch.phi_IU + 0.7, ch.phi_SI, ch.phi_SU
        )
        first = optimize_phases(ch, params)[2].objective_value
        second = optimize_phases(shifted, params)[2].objective_value
        assert second == pytest.approx(first, rel=1e-6)

    @pytest.mark.parametrize("N", [2, 4])
    def test_without_direct_link_compensation_is_optimal(self, params, channel_factory, N):
        ch = channel_factory(N)
        blocked = ChannelRealization.from_coefficients(ch.h_IU, ch.h_SI, 0.0)
        lifted, _, _ = optimize_phases(blocked, params)
        offset = lifted.theta - compensated_phases(blocked)
        assert np.allclose(np.angle(np.exp(1j * (offset - offset[0]))), 0.0, atol=1e-3)

    def test_solver_failure_is_raised(self, params, channel_factory):
        with pytest.raises(SolverFailure):
            optimize_phases(channel_factory(3), params, SdpTolerances(max_iterations=1))

    def test_evaluate_phases_length(self, params, channel_factory, seeds):
        with pytest.raises(ArgumentError):
            evaluate_phases(np.zeros(2), channel_factory(3), params, 5, seeds)



class TestLiftConsistency:
    @pytest.mark.parametrize("N", [1, 13, pytest.param(37, marks=pytest.mark.slow)])
    def test_normalization_holds_at_optimum(self, params, channel_factory, N):
        ch = channel_factory(N, seed=N)
        lifted, xi, _ = optimize_phases(ch, params)
        assert lift_consistency(lifted, xi, params, ch.mu_SU) <= 1e-6

    def test_broken_normalization_is_an_invariant_violation(
        self, params, channel_factory, monkeypatch
    ):
        import src.solvers.optimizer as optimizer

        def skewed(*args, **kwargs):
            lifted = extract_and_certify(*args, **kwargs)
            return dataclasses.replace(lifted, mu_tilde=2.0 * lifted.mu_tilde)

        monkeypatch.setattr(optimizer, "extract_and_certify", skewed)
        with pytest.raises(InvariantViolation) as info:
            optimize_phases(channel_factory(3), params)
        assert info.value.detail["lift_gap"] == pytest.approx(1.0, rel=1e-4)


@pytest.mark.slow
class TestAgainstCompensation:
    @pytest.mark.parametrize("N", [1, 13, 25, 37])
    def test_optimized_beats_compensated(self, params, channel_factory, N):
        ch = channel_factory(N, seed=N)
        seeds = TrialSeeds(42, (N,))
        outcome = optimize_and_evaluate(ch, params, 1000, seeds)
        compensated = evaluate_phases(compensated_phases(ch), ch, params, 1000, seeds)
        assert outcome.lifted.rank1_certified
        assert outcome.monte_carlo.mean > compensated.mean
        assert abs(outcome.objective_rate - outcome.monte_carlo.mean) <= 3 * outcome.monte_carlo.std_error

    def test_row_layout(self, params, channel_factory):
        ch = channel_factory(4)
        row = optimize_and_evaluate(ch, params, 20, TrialSeeds(1, (4,))).to_row()
        assert row["N"] == 4
        assert len(row["theta"].split()) == 4
        assert isinstance(row["rank1_certified"], bool)
