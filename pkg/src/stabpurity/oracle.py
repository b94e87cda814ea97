"""Brute-force numeric verifiers for the closed-form estimators.

Everything here trades efficiency for independence: the quadratic program is
solved by alternating projections in the full 2^n eigenvalue space, the
maximum-entropy problem by one-dimensional root finding, and the dephasing
channel by direct Runge-Kutta integration of a dense density matrix.  None of
these paths share formulas with the estimator module they are used to check.

The purity QP is run in the eigenvalue basis, where positivity is the
nonnegative orthant and each measured expectation is a single-bit parity sum:

    minimize sum_j lambda_j^2
    s.t.     sum_j lambda_j = 1,
             sum_j (-1)^{j_k} lambda_j = a_k   (k = 1..n),
             lambda >= 0.

Minimizing the sum of squares over that set is exactly the Euclidean
projection of the origin onto it, so Dykstra's alternating projections
(affine set <-> orthant, with correction terms) converge to the optimum, and
the correction vectors are the KKT multipliers: the affine correction p stays
in the row space of the constraint matrix and the orthant correction q is
nonpositive with exact complementarity, so

    kkt_residual = max(||B lambda - b||_inf, 2 ||lambda + p + q||_inf)

bounds the full KKT system violation.  The affine projection is closed-form
because the constraint rows are orthogonal (Walsh characters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DenseCapExceeded, Infeasible, NotConverged
from .estimator import MeasurementRecord
from .stabilizer import DENSE_CAP, GraphSpec

#: Largest n the numeric solvers accept (2^n-dimensional iterates).
ORACLE_CAP = 8
#: Iterations between convergence checks; also the infeasibility stall window.
_CHECK_EVERY = 100


@dataclass(frozen=True)
class QpSolution:
    lambda_star: np.ndarray
    objective: float
    iterations: int
    kkt_residual: float
    converged: bool


def _sign_matrix(n: int) -> np.ndarray:
    """Rows: the all-ones vector, then (-1)^{bit k of j} for each k."""
    idx = np.arange(1 << n)
    rows = np.empty((n + 1, 1 << n))
    rows[0] = 1.0
    for k in range(n):
        rows[k + 1] = 1.0 - 2.0 * ((idx >> k) & 1)
    return rows


def _solve_simplex_qp(
    n: int, a: np.ndarray, tol: float = 1e-9, max_iter: int = 10**6
) -> QpSolution:
    dim = 1 << n
    rows = _sign_matrix(n)
    b = np.concatenate(([1.0], a))
    x = np.zeros(dim)
    p = np.zeros(dim)
    q = np.zeros(dim)
    iterations = 0
    prev_gap = None
    residual = math.inf
    while iterations < max_iter:
        for _ in range(_CHECK_EVERY):
            u = x + p
            y = u - rows.T @ (rows @ u - b) / dim  # rows are orthogonal, norm^2 = dim
            p = u - y
            v = y + q
            x = np.maximum(v, 0.0)
            q = v - x
            iterations += 1
        gap = float(np.abs(rows @ x - b).max())
        residual = max(gap, 2.0 * float(np.abs(x + p + q).max()))
        if residual <= tol:
            # exact unit mass; shifts the other constraints by O(residual) only
            x /= x.sum()
            return QpSolution(x, float(np.dot(x, x)), iterations, residual, True)
        if gap > 1e-6 and prev_gap is not None and abs(prev_gap - gap) < 1e-12:
            raise Infeasible(
                f"affine projection distance stalled at {gap:.3g}: empty constraint set"
            )
        prev_gap = gap
    raise NotConverged(iterations, residual)


def qp_min_purity(
    record: MeasurementRecord, tol: float = 1e-9, max_iter: int = 10**6
) -> QpSolution:
    """Numeric minimum purity over the eigenvalue simplex; see module docstring.

    Deterministic (no randomized restarts): identical inputs give identical
    iterates.  The returned spectrum is normalized to exact unit mass after
    the stopping test; ``kkt_residual`` is the solver's stopping residual.
    Raises Infeasible for an empty constraint set and NotConverged past
    ``max_iter`` iterations.
    """
    if record.n > ORACLE_CAP:
        raise DenseCapExceeded(record.n, ORACLE_CAP, "numeric quadratic program")
    _require_unit_interval(record.a)
    return _solve_simplex_qp(record.n, record.a, tol, max_iter)


def _require_unit_interval(a: np.ndarray) -> None:
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ValueError("expectations must be sign-normalized into [0, 1]")


def _solve_tanh(target: float, tol: float = 1e-15) -> float:
    """Monotone bisection for tanh(theta) = target, target in [0, 1)."""
    lo, hi = 0.0, 1.0
    while math.tanh(hi) < target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.tanh(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    theta = 0.5 * (lo + hi)
    if abs(math.tanh(theta) - target) > 1e-12:
        raise NotConverged(200, abs(math.tanh(theta) - target))
    return theta


def max_entropy_numeric(record: MeasurementRecord) -> tuple[np.ndarray, float]:
    """Maximize -sum lambda ln lambda under the same constraint set as the QP.

    The entropy maximizer has the Gibbs form lambda_j proportional to
    exp(sum_k theta_k (-1)^{j_k}); the constraints decouple into one monotone
    equation tanh(theta_k) = a_k per generator, solved by bisection.  The
    entropy is then evaluated directly from the assembled 2^n spectrum.
    Returns (lambda_star, s_max).
    """
    if record.n > ORACLE_CAP:
        raise DenseCapExceeded(record.n, ORACLE_CAP, "numeric entropy maximization")
    _require_unit_interval(record.a)
    lam = np.array([1.0])
    for ak in record.a:
        if ak >= 1.0:
            p_zero = 1.0  # expectation pinned: that bit is deterministically 0
        else:
            p_zero = 1.0 / (1.0 + math.exp(-2.0 * _solve_tanh(float(ak))))
        # bit k of the eigenvector index must vary fastest for lower k
        lam = np.kron(np.array([p_zero, 1.0 - p_zero]), lam)
    pos = lam[lam > 0.0]
    return lam, float(-np.dot(pos, np.log(pos)))


def graph_state_vector(graph: GraphSpec) -> np.ndarray:
    """The graph state as a dense vector, built by the CZ-circuit definition.

    Plus states on every vertex, then a controlled-Z per edge; independent of
    the stabilizer machinery on purpose (this module verifies it).
    """
    k = np.arange(1 << graph.n)
    psi = np.ones(1 << graph.n) / math.sqrt(1 << graph.n)
    for u, v in graph.edges:
        psi = psi * (1 - 2 * (((k >> u) & 1) & ((k >> v) & 1)))
    return psi.astype(complex)


def _dephasing_rhs(rho: np.ndarray, z_ops: list[np.ndarray], gamma: float) -> np.ndarray:
    acc = -len(z_ops) * rho
    for z in z_ops:
        acc += z @ rho @ z
    return (gamma / 2.0) * acc


def _rk4_step(rho: np.ndarray, z_ops: list[np.ndarray], gamma: float, dt: float) -> np.ndarray:
    k1 = _dephasing_rhs(rho, z_ops, gamma)
    k2 = _dephasing_rhs(rho + 0.5 * dt * k1, z_ops, gamma)
    k3 = _dephasing_rhs(rho + 0.5 * dt * k2, z_ops, gamma)
    k4 = _dephasing_rhs(rho + dt * k3, z_ops, gamma)
    rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return 0.5 * (rho + rho.conj().T)  # enforce Hermiticity each step


def master_equation_evolve(
    graph: GraphSpec,
    gamma: float,
    t: float,
    steps: int | None = None,
    cap: int = DENSE_CAP,
) -> np.ndarray:
    """Integrate drho/dt = (gamma/2) sum_i (Z_i rho Z_i - rho) from the pure graph state.

    Classic fourth-order Runge-Kutta with fixed step, at least 1000 steps per
    unit of gamma*t (the default honors that floor).  The right-hand side is
    trace-free, so the trace is preserved to rounding; Hermiticity is enforced
    by symmetrization every step.
    """
    if graph.n > cap:
        raise DenseCapExceeded(graph.n, cap, "master-equation integration")
    if gamma < 0.0 or t < 0.0:
        raise ValueError("gamma and t must be nonnegative")
    gt = gamma * t
    floor = max(1, math.ceil(1000.0 * gt))
    if steps is None:
        steps = max(100, floor)
    elif steps < floor:
        raise ValueError(f"steps = {steps} below accuracy floor {floor} (1000 per unit gamma*t)")
    psi = graph_state_vector(graph)
    rho = np.outer(psi, psi.conj())
    if gt == 0.0:
        return rho
    dim = 1 << graph.n
    k = np.arange(dim)
    z_ops = [np.diag((1 - 2 * ((k >> i) & 1)).astype(complex)) for i in range(graph.n)]
    dt = t / steps
    for _ in range(steps):
        rho = _rk4_step(rho, z_ops, gamma, dt)
    return rho
