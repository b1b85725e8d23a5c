"""
Tests for the interior-point SDP solver.

Groups:
- real embedding of Hermitian matrices
- small problems with known optima (trivial, trace, grid oracle)
- random feasible instances: residual, gap and PSD checks
- infeasibility and malformed input
- sparse-triplet dump/load
- differential check against cvxpy when it is installed
"""

import math

import numpy as np
import pytest

from src.errors import ArgumentError
from src.models.enums import SolverStatus
from src.models.sdp import SdpProblem, SdpTolerances
from src.solvers.sdp import (
    complex_from_embedding,
    dump_problem,
    load_problem,
    real_embedding,
    solve,
)


def random_hermitian(rng, n, complex_=True):
    M = rng.normal(size=(n, n))
    if complex_:
        M = M + 1j * rng.normal(size=(n, n))
    return 0.5 * (M + M.conj().T)


def random_feasible_problem(rng, n=4, m=3, complex_=False):
    """Strictly feasible primal and dual: b = A(X0), C = sum lambda0_k A_k - S0."""
    constraints = [random_hermitian(rng, n, complex_) for _ in range(m)]
    B = rng.normal(size=(n, n)) + (1j * rng.normal(size=(n, n)) if complex_ else 0)
    X0 = B @ B.conj().T + np.eye(n)
    B = rng.normal(size=(n, n)) + (1j * rng.normal(size=(n, n)) if complex_ else 0)
    S0 = B @ B.conj().T + np.eye(n)
    lam0 = rng.normal(size=m)
    C = sum(l * A for l, A in zip(lam0, constraints)) - S0
    C = 0.5 * (C + C.conj().T)
    b = [float(np.real(np.trace(A @ X0))) for A in constraints]
    return SdpProblem(objective=C, constraints=tuple(zip(constraints, b)))


def assert_certified(problem, sol):
    assert sol.status is SolverStatus.OPTIMAL
    assert sol.primal_residual <= 1e-8
    assert sol.dual_residual <= 1e-8
    assert abs(sol.duality_gap) <= 1e-7 * (1 + abs(sol.objective_value))
    assert np.min(np.linalg.eigvalsh(sol.Y)) >= -1e-8 * max(1.0, np.max(np.abs(sol.Y)))
    assert np.min(np.linalg.eigvalsh(sol.slack)) >= -1e-7 * max(1.0, np.max(np.abs(sol.slack)))
    n = sol.Y.shape[0]
    assert abs(np.real(np.trace(sol.Y @ sol.slack))) <= 1e-7 * n


def assert_weak_duality_along_path(sol):
    """dual - primal never drops below the residual terms of an infeasible iterate."""
    assert sol.history
    assert sol.history[-1].iteration == sol.iterations
    for record in sol.history:
        scale = 1 + abs(record.primal_objective) + abs(record.dual_objective)
        corrected = record.dual_objective - record.primal_objective - record.residual_correction
        assert corrected >= -1e-9 * scale
        assert record.complementarity >= 0
        assert corrected == pytest.approx(record.complementarity, abs=1e-9 * scale)


class TestEmbedding:
    def test_identity(self):
        assert np.array_equal(real_embedding(np.eye(3)), np.eye(6))

    def test_spectrum_is_doubled(self):
        H = np.array([[0, 1j], [-1j, 0]])
        assert np.allclose(np.sort(np.linalg.eigvalsh(real_embedding(H))), [-1, -1, 1, 1])

    def test_rejects_non_hermitian(self):
        with pytest.raises(ArgumentError):
            real_embedding(np.array([[0, 1], [0, 0]]))

    def test_inner_product(self, rng):
        A, B = random_hermitian(rng, 4), random_hermitian(rng, 4)
        lhs = np.trace(real_embedding(A) @ real_embedding(B))
        assert lhs == pytest.approx(2 * np.real(np.trace(A @ B)), rel=1e-12)

    def test_psd_equivalence(self, rng):
        for k in range(100):
            B = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
            H = B @ B.conj().T if k % 2 else random_hermitian(rng, 5)
            H = 0.5 * (H + H.conj().T)
            assert np.min(np.linalg.eigvalsh(real_embedding(H))) == pytest.approx(
                np.min(np.linalg.eigvalsh(H)), abs=1e-10
            )

    def test_round_trip(self, rng):
        H = random_hermitian(rng, 3)
        assert np.allclose(complex_from_embedding(real_embedding(H)), H, atol=1e-15)

    def test_odd_dimension(self):
        with pytest.raises(ArgumentError):
            complex_from_embedding(np.eye(3))


class TestKnownOptima:
    def test_scalar_problem(self):
        problem = SdpProblem(objective=np.array([[3.0]]), constraints=((np.array([[1.0]]), 2.0),))
        sol = solve(problem)
        assert sol.is_optimal
        assert sol.objective_value == pytest.approx(6.0, rel=1e-8)
        assert sol.dual_values[0] == pytest.approx(3.0, rel=1e-6)

    def test_constant_objective_on_simplex(self):
        n = 4
        problem = SdpProblem(objective=-np.eye(n), constraints=((np.eye(n), 1.0),))
        sol = solve(problem)
        assert sol.objective_value == pytest.approx(-1.0, rel=1e-8)
        assert np.allclose(sol.Y, np.eye(n) / n, atol=1e-6)

    def test_trace_constraint_gives_largest_eigenvalue(self, rng):
        for complex_ in (False, True):
            C = random_hermitian(rng, 5, complex_)
            sol = solve(SdpProblem(objective=C, constraints=((np.eye(5), 1.0),)))
            assert_certified(None, sol)
            assert sol.objective_value == pytest.approx(np.max(np.linalg.eigvalsh(C)), rel=1e-7)

    def test_grid_oracle_with_fixed_entry(self, rng):
        C = random_hermitian(rng, 3, complex_=False)
        E11 = np.zeros((3, 3))
        E11[0, 0] = 1.0
        problem = SdpProblem(objective=C, constraints=((np.eye(3), 1.0), (E11, 0.2)))
        sol = solve(problem)
        assert_certified(problem, sol)
        t = np.linspace(0, 2 * math.pi, 10_000, endpoint=False)
        v = np.stack(
            [np.full_like(t, math.sqrt(0.2)), math.sqrt(0.8) * np.cos(t), math.sqrt(0.8) * np.sin(t)]
        )
        grid_best = float(np.max(np.einsum("it,ij,jt->t", v, C, v)))
        assert sol.objective_value >= grid_best - 1e-9
        assert sol.objective_value == pytest.approx(grid_best, abs=1e-3)

    def test_objective_scales_with_cost(self, rng):
        problem = random_feasible_problem(rng)
        scaled = SdpProblem(
            objective=2.5 * problem.objective, constraints=problem.constraints
        )
        assert solve(scaled).objective_value == pytest.approx(
            2.5 * solve(problem).objective_value, rel=1e-7
        )

    def test_deterministic(self, rng):
        problem = random_feasible_problem(rng, complex_=True)
        first, second = solve(problem), solve(problem)
        assert np.array_equal(first.Y, second.Y)
        assert first.iterations == second.iterations


class TestRandomInstances:
    @pytest.mark.slow
    @pytest.mark.parametrize("complex_", [False, True], ids=["real", "complex"])
    @pytest.mark.parametrize("n", range(2, 13))
    def test_random_instances(self, n, complex_):
        rng = np.random.default_rng(1000 * n + complex_)
        for k in range(10):
            m = 1 + k % min(n, 4)
            problem = random_feasible_problem(rng, n=n, m=m, complex_=complex_)
            sol = solve(problem)
            assert_certified(problem, sol)
            assert_weak_duality_along_path(sol)

    def test_complex_instances(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            problem = random_feasible_problem(rng, n=5, m=4, complex_=True)
            sol = solve(problem)
            assert_certified(problem, sol)
            assert_weak_duality_along_path(sol)
            assert sol.dual_objective >= sol.objective_value - 1e-7 * (1 + abs(sol.objective_value))

    def test_history_matches_final_point(self, rng):
        problem = random_feasible_problem(rng, n=6, m=3, complex_=True)
        sol = solve(problem)
        last = sol.history[-1]
        tol = 1e-9 * (1 + abs(sol.objective_value))
        assert last.primal_objective == pytest.approx(sol.objective_value, abs=tol)
        assert last.dual_objective == pytest.approx(sol.dual_objective, abs=tol)
        assert last.complementarity == pytest.approx(
            np.real(np.trace(sol.Y @ sol.slack)), rel=1e-6, abs=1e-12
        )

    def test_unconverged_run_keeps_its_path(self, rng):
        sol = solve(random_feasible_problem(rng), SdpTolerances(max_iterations=3))
        assert len(sol.history) == 3
        assert_weak_duality_along_path(sol)


class TestFailures:
    def test_negative_trace_is_infeasible(self):
        problem = SdpProblem(objective=np.eye(3), constraints=((np.eye(3), -1.0),))
        sol = solve(problem)
        assert sol.status is SolverStatus.INFEASIBLE
        assert not sol.is_optimal

    def test_iteration_cap_without_convergence(self, rng):
        problem = random_feasible_problem(rng)
        sol = solve(problem, SdpTolerances(max_iterations=1))
        assert sol.status is SolverStatus.NUMERICAL_FAILURE

    def test_dependent_constraints(self):
        A = np.diag([1.0, 0.0])
        problem = SdpProblem(objective=np.eye(2), constraints=((A, 1.0), (2 * A, 2.0)))
        with pytest.raises(ArgumentError):
            solve(problem)

    def test_non_hermitian_objective(self):
        with pytest.raises(ArgumentError):
            SdpProblem(objective=np.array([[0.0, 1.0], [0.0, 0.0]]), constraints=())

    def test_wrong_constraint_shape(self):
        with pytest.raises(ArgumentError):
            SdpProblem(objective=np.eye(2), constraints=((np.eye(3), 1.0),))

    @pytest.mark.parametrize("changes", [{"max_iterations": 0}, {"step_fraction": 1.0}])
    def test_invalid_tolerances(self, changes):
        with pytest.raises(ArgumentError):
            SdpTolerances(**changes)


class TestDumpLoad:
    def test_round_trip(self, rng, tmp_path):
        problem = random_feasible_problem(rng, complex_=True)
        path = dump_problem(problem, tmp_path / "problem.sdp")
        loaded = load_problem(path)
        assert loaded.num_constraints == problem.num_constraints
        assert np.allclose(loaded.objective, problem.objective, rtol=0, atol=0)
        for (A, b), (A2, b2) in zip(problem.constraints, loaded.constraints):
            assert np.array_equal(A, A2)
            assert b == b2
        assert solve(loaded).objective_value == pytest.approx(
            solve(problem).objective_value, rel=1e-12
        )

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.sdp"
        path.write_text("# header\n2 1\n1.0\n1 1 x 1.0 0.0\n")
        with pytest.raises(ArgumentError):
            load_problem(path)

    def test_missing_rhs(self, tmp_path):
        path = tmp_path / "short.sdp"
        path.write_text("# header\n2 2\n1.0\n0 1 1 1.0 0.0\n")
        with pytest.raises(ArgumentError):
            load_problem(path)


class TestAgainstCvxpy:
    def test_random_instances_agree(self):
        cp = pytest.importorskip("cvxpy")
        rng = np.random.default_rng(21)
        for _ in range(5):
            problem = random_feasible_problem(rng, n=4, m=3)
            Y = cp.Variable((4, 4), symmetric=True)
            constraints = [Y >> 0] + [cp.trace(A @ Y) == b for A, b in problem.constraints]
            reference = cp.Problem(cp.Maximize(cp.trace(problem.objective @ Y)), constraints)
            reference.solve()
            ours = solve(problem).objective_value
            assert ours == pytest.approx(reference.value, abs=1e-3 * (1 + abs(ours)))
