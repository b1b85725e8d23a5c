"""Dense primal-dual interior-point solver for small semidefinite programs.

Solves

    maximize tr(C Y)  s.t.  tr(A_k Y) = b_k,  Y PSD

over real symmetric or complex Hermitian matrices. Complex problems are
mapped to real symmetric ones of twice the size. Internally the problem is
kept in the minimization form min <Cm, X> with Cm = -C, whose dual is

    max b'y  s.t.  sum_k y_k A_k + S = Cm,  S PSD,

so the multipliers of the maximization are lambda = -y. Directions use
Nesterov-Todd scaling with a Mehrotra predictor-corrector step.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import linalg

from ..errors import ArgumentError
from ..models.enums import SolverStatus
from ..models.sdp import IterateRecord, SdpProblem, SdpSolution, SdpTolerances, is_hermitian

logger = logging.getLogger(__name__)

DUMP_HEADER = "# sdp sparse-triplet v1: maximize tr(C Y) s.t. tr(A_k Y) = b_k, Y PSD"


def real_embedding(H: np.ndarray) -> np.ndarray:
    """[[Re H, -Im H], [Im H, Re H]]; tr(emb(A) emb(B)) = 2 Re tr(A B)."""
    H = np.asarray(H)
    if not is_hermitian(H):
        raise ArgumentError("real_embedding needs a Hermitian matrix")
    re, im = H.real, H.imag
    return np.block([[re, -im], [im, re]]).astype(np.float64)


def complex_from_embedding(Z: np.ndarray) -> np.ndarray:
    """Hermitian matrix whose embedding is the symmetric part closest to Z."""
    Z = np.asarray(Z, dtype=np.float64)
    n2 = Z.shape[0]
    if Z.ndim != 2 or n2 != Z.shape[1] or n2 % 2:
        raise ArgumentError("an embedded matrix must be square with even dimension")
    n = n2 // 2
    z11, z12, z21, z22 = Z[:n, :n], Z[:n, n:], Z[n:, :n], Z[n:, n:]
    H = 0.5 * (z11 + z22) + 0.5j * (z21 - z12)
    return 0.5 * (H + H.conj().T)


@dataclass
class _Iterate:
    X: np.ndarray
    y: np.ndarray
    S: np.ndarray
    score: float = math.inf
    complementarity: float = math.inf


@dataclass
class _RealResult:
    X: np.ndarray
    y: np.ndarray
    S: np.ndarray
    status: SolverStatus
    iterations: int
    certificate: Optional[float] = None
    history: List[IterateRecord] = field(default_factory=list)


def _sym(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def _inner(A: np.ndarray, B: np.ndarray) -> float:
    """Re tr(A^H B), equal to Re tr(A B) for Hermitian A."""
    return float(np.real(np.vdot(A, B)))


def _max_step(L: np.ndarray, dM: np.ndarray) -> float:
    """Largest t with diag(L) + t dM PSD, for the scaled diagonal L."""
    inv_sqrt = 1.0 / np.sqrt(L)
    scaled = _sym(inv_sqrt[:, None] * dM * inv_sqrt[None, :])
    smallest = linalg.eigvalsh(scaled, subset_by_index=[0, 0])[0]
    return math.inf if smallest >= 0 else -1.0 / smallest


def _check_independent(A: np.ndarray) -> None:
    rank = np.linalg.matrix_rank(A)
    if rank < A.shape[0]:
        raise ArgumentError(
            f"constraint matrices are linearly dependent (rank {rank} < {A.shape[0]})"
        )


def _solve_real(
    C: np.ndarray, A_list: List[np.ndarray], b: np.ndarray, tol: SdpTolerances
) -> _RealResult:
    """Interior-point iteration on the real symmetric minimization form."""
    n = C.shape[0]
    m = len(A_list)
    A = np.stack([M.reshape(-1) for M in A_list]) if m else np.zeros((0, n * n))
    if m:
        _check_independent(A)

    # equilibrate rows, right-hand side and objective
    row_norms = np.linalg.norm(A, axis=1) if m else np.zeros(0)
    A = A / row_norms[:, None] if m else A
    b = b / row_norms if m else b
    b_scale = float(np.max(np.abs(b))) if m and np.any(b) else 1.0
    c_scale = float(np.linalg.norm(C)) or 1.0
    b = b / b_scale
    C = C / c_scale
    b_norm = float(np.linalg.norm(b))
    c_norm = float(np.linalg.norm(C))
    # objectives and <X, S> back in the units of the unequilibrated problem
    unit = b_scale * c_scale

    def A_op(M: np.ndarray) -> np.ndarray:
        return A @ M.reshape(-1)

    def A_adj(v: np.ndarray) -> np.ndarray:
        return (A.T @ v).reshape(n, n)

    # scaled identity start, sized to fit the constraints in the least-squares sense
    A_eye = A_op(np.eye(n))
    fit = float(A_eye @ b / (A_eye @ A_eye)) if m and A_eye @ A_eye > 0 else 1.0
    xi = max(1.0, math.sqrt(n), fit)
    eta = max(1.0, math.sqrt(n), c_norm)
    X = xi * np.eye(n)
    S = eta * np.eye(n)
    y = np.zeros(m)

    best = _Iterate(X.copy(), y.copy(), S.copy())
    status = SolverStatus.NUMERICAL_FAILURE
    certificate = None
    iteration = 0
    history: List[IterateRecord] = []

    for iteration in range(1, tol.max_iterations + 1):
        rp = b - A_op(X)
        Rd = _sym(C - A_adj(y) - S)
        pobj = float(np.vdot(C, X))
        dobj = float(b @ y)
        gap = float(np.vdot(X, S))
        rel_gap = abs(gap) / (1.0 + abs(pobj) + abs(dobj))
        pinf = float(np.linalg.norm(rp)) / (1.0 + b_norm)
        dinf = float(np.linalg.norm(Rd)) / (1.0 + c_norm)
        score = max(rel_gap, pinf, dinf)
        per_dimension = abs(gap) * unit / n
        if score < best.score:
            best = _Iterate(X.copy(), y.copy(), S.copy(), score, per_dimension)
        # pobj - dobj = <X, S> + <Rd, X> - y'rp; signs flip for the maximization form
        history.append(
            IterateRecord(
                iteration=iteration,
                primal_objective=-pobj * unit,
                dual_objective=-dobj * unit,
                complementarity=gap * unit,
                residual_correction=(float(np.vdot(Rd, X)) - float(y @ rp)) * unit,
                primal_infeasibility=pinf,
                dual_infeasibility=dinf,
            )
        )
        logger.debug(
            "iter %3d  pobj %+.10e  dobj %+.10e  gap %.2e  pinf %.2e  dinf %.2e",
            iteration, pobj, dobj, rel_gap, pinf, dinf,
        )

        if (
            rel_gap <= tol.gap
            and pinf <= tol.feasibility
            and dinf <= tol.feasibility
            and per_dimension <= tol.complementarity
        ):
            status = SolverStatus.OPTIMAL
            break

        # certificates of primal / dual infeasibility
        if dobj > 0:
            ray = float(np.linalg.norm(A_adj(y) + S)) / dobj
            if dobj > 1.0 / tol.infeasibility and ray < tol.infeasibility:
                status, certificate = SolverStatus.INFEASIBLE, ray
                logger.info("primal infeasibility certificate, residual %.2e", ray)
                break
        if pobj < 0:
            ray = float(np.linalg.norm(A_op(X))) / -pobj
            if -pobj > 1.0 / tol.infeasibility and ray < tol.infeasibility:
                status, certificate = SolverStatus.INFEASIBLE, ray
                logger.info("dual infeasibility certificate, residual %.2e", ray)
                break

        mu = gap / n
        try:
            L1 = linalg.cholesky(X, lower=True)
            L2 = linalg.cholesky(S, lower=True)
            U, lam, Vt = linalg.svd(L2.T @ L1)
        except (linalg.LinAlgError, ValueError):
            logger.debug("factorization failed at iteration %d", iteration)
            break
        if np.min(lam) <= 0:
            break
        # NT scaling: G^T S G = G^{-1} X G^{-T} = diag(lam)
        G = L1 @ Vt.T / np.sqrt(lam)[None, :]
        G_inv_T = L2 @ U / np.sqrt(lam)[None, :]
        A_tilde = np.stack([(G.T @ M.reshape(n, n) @ G).reshape(-1) for M in A]) if m else A
        M_schur = A_tilde @ A_tilde.T
        try:
            factor = linalg.cho_factor(M_schur) if m else None
        except linalg.LinAlgError:
            logger.debug("Schur complement not positive definite at iteration %d", iteration)
            break

        Rd_tilde = _sym(G.T @ Rd @ G)
        pair = lam[:, None] + lam[None, :]

        def direction(Rc: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
            K = 2.0 * Rc / pair
            if m:
                rhs = rp - A_tilde @ K.reshape(-1) + A_tilde @ Rd_tilde.reshape(-1)
                dy = linalg.cho_solve(factor, rhs)
                dS_t = Rd_tilde - (A_tilde.T @ dy).reshape(n, n)
            else:
                dy = np.zeros(0)
                dS_t = Rd_tilde
            dX_t = _sym(K - dS_t)
            return dX_t, _sym(dS_t), dy

        Lam2 = np.diag(lam**2)
        dXa, dSa, _ = direction(-Lam2)
        ap = min(1.0, _max_step(lam, dXa))
        ad = min(1.0, _max_step(lam, dSa))
        mu_aff = float(np.vdot(np.diag(lam) + ap * dXa, np.diag(lam) + ad * dSa)) / n
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3 if mu > 0 else 0.0

        Rc = sigma * mu * np.eye(n) - Lam2 - _sym(dXa @ dSa)
        dX_t, dS_t, dy = direction(Rc)
        ap = min(1.0, tol.step_fraction * _max_step(lam, dX_t))
        ad = min(1.0, tol.step_fraction * _max_step(lam, dS_t))
        if ap < 1e-12 and ad < 1e-12:
            logger.debug("step lengths collapsed at iteration %d", iteration)
            break

        X = _sym(X + ap * (G @ dX_t @ G.T))
        y = y + ad * dy
        S = _sym(S + ad * (G_inv_T @ dS_t @ G_inv_T.T))
    else:
        iteration = tol.max_iterations

    if status is SolverStatus.NUMERICAL_FAILURE:
        X, y, S = best.X, best.y, best.S
        if (
            best.score <= min(tol.accept_gap, tol.accept_feasibility)
            and best.complementarity <= tol.accept_complementarity
        ):
            status = SolverStatus.OPTIMAL
        else:
            logger.warning(
                "interior point stopped after %d iterations, best residual %.2e",
                iteration, best.score,
            )

    # undo the equilibration
    X = X * b_scale
    S = S * c_scale
    y = y * c_scale / row_norms if m else y
    return _RealResult(X, y, S, status, iteration, certificate, history)


def solve(problem: SdpProblem, tolerances: Optional[SdpTolerances] = None) -> SdpSolution:
    """Solve ``problem`` to the given tolerances; deterministic for equal inputs."""
    tol = tolerances or SdpTolerances()
    complex_problem = problem.is_complex
    b = problem.rhs
    if complex_problem:
        C_real = real_embedding(problem.objective)
        A_real = [real_embedding(A) for A, _ in problem.constraints]
        b_real = 2.0 * b
    else:
        C_real = _sym(np.asarray(problem.objective.real, dtype=np.float64))
        A_real = [_sym(np.asarray(A.real, dtype=np.float64)) for A, _ in problem.constraints]
        b_real = b.copy()

    result = _solve_real(-C_real, A_real, b_real, tol)

    if complex_problem:
        Y = complex_from_embedding(result.X)
        S = complex_from_embedding(result.S)
    else:
        Y, S = result.X, result.S
    # the embedding doubles every trace
    halve = 0.5 if complex_problem else 1.0
    history = tuple(
        replace(
            record,
            primal_objective=halve * record.primal_objective,
            dual_objective=halve * record.dual_objective,
            complementarity=halve * record.complementarity,
            residual_correction=halve * record.residual_correction,
        )
        for record in result.history
    )
    dual_values = -result.y

    C = problem.objective
    objective_value = _inner(C, Y)
    dual_objective = float(b @ dual_values) if b.size else 0.0
    residuals = [
        abs(_inner(A, Y) - b_k) / (1.0 + abs(b_k))
        for A, b_k in problem.constraints
    ]
    primal_residual = max(residuals, default=0.0)
    dual_matrix = sum(
        (lam * A for lam, (A, _) in zip(dual_values, problem.constraints)),
        np.zeros_like(C),
    )
    dual_residual = float(np.linalg.norm(dual_matrix - C - S)) / (1.0 + float(np.linalg.norm(C)))

    solution = SdpSolution(
        Y=Y,
        objective_value=objective_value,
        dual_values=dual_values,
        primal_residual=primal_residual,
        dual_residual=dual_residual,
        duality_gap=dual_objective - objective_value,
        status=result.status,
        iterations=result.iterations,
        slack=S,
        dual_objective=dual_objective,
        certificate_residual=result.certificate,
        history=history,
    )
    logger.info(
        "sdp n=%d m=%d: %s after %d iterations, objective %.10g",
        problem.dimension, problem.num_constraints, result.status.value,
        result.iterations, objective_value,
    )
    return solution


def dump_problem(problem: SdpProblem, path: Union[str, Path]) -> Path:
    """Write the sparse-triplet text format.

    Line 1 is a comment, line 2 "n m", line 3 the m right-hand sides,
    then one "k i j re im" line per nonzero upper-triangle entry with
    1-based i <= j and k = 0 for the objective.
    """
    path = Path(path)
    lines = [DUMP_HEADER, f"{problem.dimension} {problem.num_constraints}"]
    lines.append(" ".join(repr(float(b)) for b in problem.rhs))
    matrices = [problem.objective, *(A for A, _ in problem.constraints)]
    for k, M in enumerate(matrices):
        M = np.asarray(M, dtype=np.complex128)
        rows, cols = np.nonzero(np.triu(M))
        for i, j in zip(rows, cols):
            v = M[i, j]
            lines.append(f"{k} {i + 1} {j + 1} {float(v.real)!r} {float(v.imag)!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_problem(path: Union[str, Path]) -> SdpProblem:
    path = Path(path)
    try:
        raw = [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")]
        n, m = (int(tok) for tok in raw[0].split())
        b = [float(tok) for tok in raw[1].split()] if m else []
        matrices = [np.zeros((n, n), dtype=np.complex128) for _ in range(m + 1)]
        for line in raw[2 if m else 1:]:
            k, i, j, re, im = line.split()
            k, i, j = int(k), int(i) - 1, int(j) - 1
            value = complex(float(re), float(im))
            matrices[k][i, j] = value
            matrices[k][j, i] = value.conjugate() if i != j else value.real
    except (OSError, ValueError, IndexError) as exc:
        raise ArgumentError(f"cannot parse SDP problem from {path}: {exc}") from exc
    if len(b) != m:
        raise ArgumentError(f"{path}: expected {m} right-hand sides, found {len(b)}")
    return SdpProblem(
        objective=matrices[0],
        constraints=tuple(zip(matrices[1:], b)),
    )
