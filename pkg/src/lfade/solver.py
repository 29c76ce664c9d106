"""Jacobi collocation in space, trapezoidal rule in time.

The unknown is expanded as ``u(x, t) = sum_j u_j(t) J_{L,j}(x)``.  The PDE

    u_t = d D^alpha_theta u - e u_x + s(x, t),   u(0, t) = u(L, t) = 0,

is collocated at the ``m - 1`` interior Gauss-Lobatto nodes, and the two
boundary conditions supply rows ``0`` and ``m``.  One trapezoidal step reads

    (J1 - A) U^n = (J0 + A) U^{n-1} + dt/2 (S^n + S^{n-1})

with ``A[q, j] = dt/2 (d D^alpha_theta J_{L,j}(x_q) - e J_{L,j}'(x_q))`` on
interior rows.  The advection term enters with a minus sign, as in the PDE.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import ConfigError, DomainError, NumericError, ParameterError
from .jacobi import (
    ArrayLike,
    JacobiParams,
    endpoint_left,
    endpoint_right,
    gauss_lobatto_nodes,
    shifted_deriv_matrix,
    shifted_series,
    shifted_vandermonde,
)
from .riesz_feller import RieszFellerParams, riesz_feller_matrix

log = logging.getLogger(__name__)

SpaceFunction = Callable[[np.ndarray], np.ndarray]
SpaceTimeFunction = Callable[[np.ndarray, float], np.ndarray]

_BOUNDARY_TOL = 1e-10
_COND_LIMIT = 1e14


def zero_source(x: np.ndarray, t: float) -> np.ndarray:
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ProblemSpec:
    """One initial-boundary value problem with homogeneous Dirichlet data."""

    d: float
    e: float
    rf: RieszFellerParams
    basis: JacobiParams
    initial: SpaceFunction
    t_final: float
    dt: float
    source: SpaceTimeFunction = zero_source
    exact: SpaceTimeFunction | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.d > 0:
            raise ParameterError(f"d must be > 0, got {self.d}")
        if not self.e >= 0:
            raise ParameterError(f"e must be >= 0, got {self.e}")
        if not self.dt > 0:
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if not self.t_final >= self.dt:
            raise ParameterError(f"t_final must be >= dt, got t_final={self.t_final}, dt={self.dt}")
        L = self.basis.length
        f0, fL = np.asarray(self.initial(np.array([0.0, L])), dtype=float)
        if abs(f0) > _BOUNDARY_TOL or abs(fL) > _BOUNDARY_TOL:
            raise ParameterError(f"initial profile must vanish at 0 and L, got f(0)={f0:g}, f(L)={fL:g}")

    @property
    def length(self) -> float:
        return self.basis.length

    @property
    def n_steps(self) -> int:
        """Number of steps ``N = round(t_final / dt)``; ``N dt`` must equal ``t_final``."""
        n = round(self.t_final / self.dt)
        if abs(n * self.dt - self.t_final) > 1e-12 * self.t_final:
            raise ConfigError(
                f"t_final={self.t_final} is not an integer multiple of dt={self.dt}", field="dt"
            )
        return n


@dataclass(frozen=True, eq=False)
class CollocationSystem:
    """Assembled matrices for one problem and truncation order ``m``."""

    m: int
    nodes: np.ndarray
    A: np.ndarray
    J0: np.ndarray
    J1: np.ndarray
    lhs_factorization: tuple[np.ndarray, np.ndarray]

    @property
    def interior_nodes(self) -> np.ndarray:
        return self.nodes[1:-1]

    @property
    def rhs_matrix(self) -> np.ndarray:
        return self.J0 + self.A


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    """Coefficient history ``U^0..U^N`` on the time grid ``t_n = n dt``."""

    history: np.ndarray
    basis: JacobiParams
    times: np.ndarray
    nodes: np.ndarray

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    def time_index(self, t: float) -> int:
        """Index ``n`` with ``t_n == t`` (to round-off); raises if ``t`` is off the grid."""
        n = int(np.argmin(np.abs(self.times - t)))
        scale = max(1.0, abs(t))
        if abs(self.times[n] - t) > 1e-9 * scale:
            raise DomainError(f"t={t} is not on the solution's time grid")
        return n

    def evaluate(self, n: int, x: ArrayLike) -> ArrayLike:
        return evaluate_solution(self, n, x)


def omega_entry(problem: ProblemSpec, nodes: np.ndarray, j: int, q: int) -> float:
    """Entry ``A[q, j]`` of the collocated operator for interior node ``q``."""
    m = len(nodes) - 1
    if not 1 <= q <= m - 1:
        raise ParameterError(f"q must be an interior node index in [1, {m - 1}], got {q}")
    if not 0 <= j <= m:
        raise ParameterError(f"j must lie in [0, {m}], got {j}")
    xq = nodes[q : q + 1]
    frac = riesz_feller_matrix(j, problem.rf, problem.basis, xq)[0, j]
    adv = shifted_deriv_matrix(j, problem.basis, xq)[0, j]
    return 0.5 * problem.dt * (problem.d * frac - problem.e * adv)


def operator_matrix(problem: ProblemSpec, m: int, x: np.ndarray) -> np.ndarray:
    """``K[q, j] = d D^alpha_theta J_{L,j}(x_q) - e J_{L,j}'(x_q)`` at interior points."""
    frac = riesz_feller_matrix(m, problem.rf, problem.basis, x)
    adv = shifted_deriv_matrix(m, problem.basis, x)
    return problem.d * frac - problem.e * adv


def assemble(problem: ProblemSpec, m: int) -> CollocationSystem:
    """Build ``J0``, ``J1``, ``A`` and factor ``J1 - A`` once."""
    if m < 2:
        raise ParameterError(f"m must be >= 2, got {m}")
    p = problem.basis
    nodes = gauss_lobatto_nodes(m, p)
    inner = nodes[1:-1]
    V = shifted_vandermonde(m, p, inner)

    A = np.zeros((m + 1, m + 1))
    A[1:-1] = 0.5 * problem.dt * operator_matrix(problem, m, inner)
    J0 = np.zeros((m + 1, m + 1))
    J0[1:-1] = V
    J1 = J0.copy()
    J1[0] = [endpoint_left(j, p) for j in range(m + 1)]
    J1[-1] = [endpoint_right(j, p) for j in range(m + 1)]

    lhs = J1 - A
    cond = np.linalg.cond(lhs)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise NumericError(f"J1 - A is singular to working precision (condition number {cond:.3e})")
    log.debug("assembled m=%d, cond(J1 - A)=%.3e", m, cond)
    for a in (nodes, A, J0, J1):
        a.setflags(write=False)
    return CollocationSystem(m, nodes, A, J0, J1, scipy.linalg.lu_factor(lhs))


def initial_coeffs(problem: ProblemSpec, m: int, nodes: np.ndarray | None = None) -> np.ndarray:
    """Interpolate the initial profile at all ``m + 1`` Gauss-Lobatto nodes."""
    if nodes is None:
        nodes = gauss_lobatto_nodes(m, problem.basis)
    V = shifted_vandermonde(m, problem.basis, nodes)
    f = np.asarray(problem.initial(nodes), dtype=float) * np.ones(len(nodes))
    if np.linalg.cond(V) > _COND_LIMIT:
        raise NumericError("interpolation matrix is singular")
    return np.linalg.solve(V, f)


def source_vector(problem: ProblemSpec, sys: CollocationSystem, t: float) -> np.ndarray:
    """``S = (0, s(x_1, t), ..., s(x_{m-1}, t), 0)``."""
    S = np.zeros(sys.m + 1)
    S[1:-1] = problem.source(sys.interior_nodes, t)
    return S


def step(sys: CollocationSystem, U_prev: np.ndarray, t_prev: float, problem: ProblemSpec) -> np.ndarray:
    """Advance ``U^{n-1}`` at ``t_prev`` to ``U^n`` at ``t_prev + dt``."""
    U_prev = np.asarray(U_prev, dtype=float)
    if not np.all(np.isfinite(U_prev)):
        raise NumericError("previous coefficient vector is not finite")
    dt = problem.dt
    rhs = sys.rhs_matrix @ U_prev
    rhs += 0.5 * dt * (source_vector(problem, sys, t_prev + dt) + source_vector(problem, sys, t_prev))
    U = scipy.linalg.lu_solve(sys.lhs_factorization, rhs)
    if not np.all(np.isfinite(U)):
        raise NumericError("linear solve produced non-finite coefficients")
    return U


def solve(problem: ProblemSpec, m: int, sys: CollocationSystem | None = None) -> SpectralSolution:
    """Run the full time integration from ``t = 0`` to ``t_final``."""
    N = problem.n_steps
    if sys is None:
        sys = assemble(problem, m)
    elif sys.m != m:
        raise ParameterError(f"system was assembled for m={sys.m}, not m={m}")
    hist = np.empty((N + 1, m + 1))
    hist[0] = initial_coeffs(problem, m, sys.nodes)
    dt = problem.dt
    for n in range(1, N + 1):
        hist[n] = step(sys, hist[n - 1], (n - 1) * dt, problem)
    if not np.all(np.isfinite(hist)):
        raise NumericError("time integration produced non-finite coefficients")
    times = dt * np.arange(N + 1, dtype=float)
    return SpectralSolution(hist, problem.basis, times, np.asarray(sys.nodes))


def evaluate_solution(sol: SpectralSolution, n: int, x: ArrayLike) -> ArrayLike:
    """``u_m(x, t_n) = sum_j u_j^n J_{L,j}(x)``."""
    if not 0 <= n <= sol.n_steps:
        raise DomainError(f"time index must lie in [0, {sol.n_steps}], got {n}")
    return shifted_series(sol.history[n], sol.basis, x)


def evaluate_history(sol: SpectralSolution, x: ArrayLike) -> np.ndarray:
    """All time levels at once: ``out[n, i] = u_m(x_i, t_n)``."""
    V = shifted_vandermonde(sol.history.shape[1] - 1, sol.basis, x)
    return sol.history @ V.T


def boundary_residuals(sol: SpectralSolution) -> np.ndarray:
    """``|u_m(0, t_n)|`` and ``|u_m(L, t_n)|`` per time level, shape ``(N+1, 2)``."""
    return np.abs(evaluate_history(sol, np.array([0.0, sol.basis.length])))

