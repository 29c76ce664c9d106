"""Benchmark problems, error metrics and convergence studies.

Two benchmarks are encoded:

* ``example1``: zero source on ``[0, pi]`` with ``u(x, 0) = sin(x)``.  For
  ``alpha = 2, d = 1, e = 0`` the exact solution is ``sin(x) exp(-t)``.
* ``example2``: on ``[0, 1]`` with ``d = Gamma(3 - alpha)``, ``e = 1`` and a
  source chosen so that ``u(x, t) = x (1 - x) exp(-3t/2)`` is exact.

Reference values for both benchmarks are kept in ``EXAMPLE1_TABLE``,
``EXAMPLE2_MAX_ERRORS`` and ``EXAMPLE2_POINTWISE``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ParameterError
from .jacobi import JacobiParams, gauss_lobatto_nodes, shifted_vandermonde
from .riesz_feller import RieszFellerParams
from .solver import (
    ProblemSpec,
    SpectralSolution,
    evaluate_history,
    operator_matrix,
    solve,
    zero_source,
)
from .special import gamma

# x -> JSC value at t = 0.3, m = 5, beta = gamma = 0, alpha = 1.7, theta = 0.3, d = 1.5, e = 1
EXAMPLE1_TABLE: dict[float, float] = {
    0.3142: 0.21208,
    0.6283: 0.38590,
    0.9425: 0.51814,
    1.2566: 0.60546,
    1.5708: 0.64455,
    1.8850: 0.63208,
    2.1991: 0.56471,
    2.5133: 0.43913,
    2.8274: 0.25200,
}

# (alpha, theta) -> M1 for T = 1, dt = 0.005, m = 3, beta = gamma = 0
EXAMPLE2_MAX_ERRORS: dict[tuple[float, float], float] = {
    (1.8, 0.1): 1.0995e-05,
    (1.6, 0.1): 4.5779e-05,
    (1.6, 0.3): 8.9812e-05,
    (1.4, 0.3): 7.6254e-05,
    (1.4, 0.5): 6.4506e-05,
    (1.2, 0.5): 5.2149e-05,
    (1.2, -0.5): 1.3202e-05,
    (1.1, -0.5): 4.1385e-05,
}

# m -> E1(x, 0.5) on x = 0, 0.1, ..., 1 for alpha = 1.4, theta = -0.5, dt = 0.01, beta = gamma = 0.5
EXAMPLE2_GRID = tuple(round(0.1 * i, 1) for i in range(11))
EXAMPLE2_POINTWISE: dict[int, tuple[float, ...]] = {
    3: (0.0, 1.9827e-05, 2.9278e-05, 3.0590e-05, 2.6003e-05, 1.7757e-05,
        8.0902e-06, 7.5812e-06, 6.5487e-06, 7.0424e-06, 0.0),
    6: (0.0, 1.5831e-06, 6.1593e-06, 9.4183e-06, 1.0927e-05, 1.1467e-05,
        3.1435e-06, 9.0309e-07, 2.1818e-06, 2.3546e-06, 0.0),
    12: (0.0, 1.2334e-06, 1.5369e-06, 9.5057e-07, 6.1780e-06, 8.1340e-06,
         1.2858e-06, 9.0856e-07, 8.6676e-07, 1.7558e-06, 0.0),
}


def example1_exact(x: np.ndarray, t: float) -> np.ndarray:
    """``sin(x) exp(-t)``; exact only for ``alpha = 2, d = 1, e = 0``."""
    return np.sin(x) * math.exp(-t)


def example1_problem(
    alpha: float,
    theta: float,
    d: float,
    e: float,
    t_final: float,
    dt: float,
    beta: float = 0.0,
    gamma_: float = 0.0,
) -> ProblemSpec:
    """Zero-source problem on ``[0, pi]`` started from ``sin(x)``."""
    rf = RieszFellerParams(alpha, theta)
    exact = example1_exact if (alpha == 2 and d == 1 and e == 0) else None
    return ProblemSpec(
        d=d,
        e=e,
        rf=rf,
        basis=JacobiParams(beta, gamma_, math.pi),
        initial=np.sin,
        t_final=t_final,
        dt=dt,
        source=zero_source,
        exact=exact,
    )


def example2_exact(x: np.ndarray, t: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x * (1 - x) * math.exp(-1.5 * t)


def example2_source(alpha: float, theta: float) -> Callable[[np.ndarray, float], np.ndarray]:
    """Source term that makes :func:`example2_exact` solve the problem."""
    if not 1 < alpha < 2:
        raise ParameterError(f"example 2 requires 1 < alpha < 2, got {alpha}")
    s = math.sin(alpha * math.pi)
    sp = math.sin((alpha - theta) * math.pi / 2)
    sm = math.sin((alpha + theta) * math.pi / 2)

    def source(x: np.ndarray, t: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = 1 - x
        val = (
            (2 - alpha) / s * (sp * x ** (1 - alpha) + sm * y ** (1 - alpha))
            - 2 / s * (sp * x ** (2 - alpha) + sm * y ** (2 - alpha))
            + 1.5 * x**2
            - 3.5 * x
            + 1
        )
        return val * math.exp(-1.5 * t)

    return source


def example2_problem(
    alpha: float,
    theta: float,
    t_final: float,
    dt: float,
    beta: float = 0.0,
    gamma_: float = 0.0,
) -> ProblemSpec:
    """Manufactured-solution problem on ``[0, 1]`` with ``d = Gamma(3 - alpha)``, ``e = 1``."""
    rf = RieszFellerParams(alpha, theta)
    return ProblemSpec(
        d=gamma(3 - alpha),
        e=1.0,
        rf=rf,
        basis=JacobiParams(beta, gamma_, 1.0),
        initial=lambda x: example2_exact(x, 0.0),
        t_final=t_final,
        dt=dt,
        source=example2_source(alpha, theta),
        exact=example2_exact,
    )


@dataclass(frozen=True)
class ErrorReport:
    """Pointwise absolute errors ``(x, t, |u_exact - u_num|)`` and their maximum."""

    pointwise: list[tuple[float, float, float]]
    max_error: float
    config: dict[str, Any] = field(default_factory=dict)

    def errors(self) -> np.ndarray:
        return np.array([e for _, _, e in self.pointwise])


def _config_echo(sol: SpectralSolution) -> dict[str, Any]:
    b = sol.basis
    return {
        "beta": b.beta,
        "gamma": b.gamma,
        "length": b.length,
        "m": sol.history.shape[1] - 1,
        "n_steps": sol.n_steps,
        "dt": float(sol.times[1] - sol.times[0]) if sol.n_steps else math.nan,
    }


def error_report(
    sol: SpectralSolution,
    exact: Callable[[np.ndarray, float], np.ndarray],
    grid: Sequence[float],
    t: float | Sequence[float],
    config: dict[str, Any] | None = None,
) -> ErrorReport:
    """Absolute errors on ``grid`` at one time or at several times.

    Every requested time must lie on the solution's time grid.
    """
    x = np.asarray(grid, dtype=float)
    ts = [float(t)] if np.ndim(t) == 0 else [float(v) for v in t]
    idx = [sol.time_index(v) for v in ts]
    U = evaluate_history(sol, x)
    rows: list[tuple[float, float, float]] = []
    for n in idx:
        tn = float(sol.times[n])
        err = np.abs(np.asarray(exact(x, tn), dtype=float) - U[n])
        rows.extend((float(xi), tn, float(ei)) for xi, ei in zip(x, err))
    echo = _config_echo(sol)
    if config:
        echo.update(config)
    return ErrorReport(rows, max(e for _, _, e in rows), echo)


def max_error(sol: SpectralSolution, exact: Callable[[np.ndarray, float], np.ndarray], grid: Sequence[float]) -> float:
    """``M1``: maximum absolute error over ``grid`` and every time level."""
    x = np.asarray(grid, dtype=float)
    U = evaluate_history(sol, x)
    E = np.array([exact(x, float(t)) for t in sol.times])
    return float(np.max(np.abs(E - U)))


def manufactured_residual(problem: ProblemSpec, m: int, t: float = 0.0) -> np.ndarray:
    """Residual ``u_t - (d D u - e u_x + s)`` of the exact solution at the interior nodes.

    The exact solution must lie in the span of ``J_{L,0..m}`` (example 2 does
    for ``m >= 2``); its coefficients are obtained by interpolation and its
    time derivative by a central difference of the exact solution itself.
    """
    if problem.exact is None:
        raise ParameterError("problem has no exact solution")
    nodes = gauss_lobatto_nodes(m, problem.basis)
    inner = nodes[1:-1]
    U = np.linalg.solve(shifted_vandermonde(m, problem.basis, nodes), problem.exact(nodes, t))
    h = 1e-5
    ut = (problem.exact(inner, t + h) - problem.exact(inner, t - h)) / (2 * h)
    Lu = operator_matrix(problem, m, inner) @ U
    return ut - (Lu + problem.source(inner, t))


@dataclass(frozen=True)
class StudyTable:
    """``errors[a, b]`` is ``M1`` for ``m_list[a]`` and ``dt_list[b]``."""

    m_list: tuple[int, ...]
    dt_list: tuple[float, ...]
    errors: np.ndarray
    monotone_in_m: bool
    monotone_in_dt: bool

    def dt_ratios(self) -> np.ndarray:
        """Error ratios between consecutive time steps, per row of ``m``."""
        return self.errors[:, :-1] / self.errors[:, 1:]


def convergence_study(
    make_problem: Callable[[float], ProblemSpec],
    m_list: Sequence[int],
    dt_list: Sequence[float],
    grid: Sequence[float] | None = None,
    t: float | None = None,
    workers: int | None = None,
) -> StudyTable:
    """Grid of ``M1`` values over truncation orders and time steps.

    ``make_problem(dt)`` builds the problem for one time step.  With ``t``
    given the error is measured at that time only (on ``grid``), otherwise
    over every time level.  Cells are independent and run concurrently.
    ``monotone_in_m`` compares orders of magnitude, ``monotone_in_dt`` the
    raw values.
    """
    if not m_list:
        raise ParameterError("m_list must not be empty")
    if not dt_list:
        raise ParameterError("dt_list must not be empty")
    problems = {dt: make_problem(dt) for dt in dt_list}
    for pr in problems.values():
        if pr.exact is None:
            raise ParameterError("convergence study needs a problem with an exact solution")
    if grid is None:
        grid = np.linspace(0, next(iter(problems.values())).length, 101)

    def cell(args: tuple[int, float]) -> float:
        m, dt = args
        pr = problems[dt]
        sol = solve(pr, m)
        if t is None:
            return max_error(sol, pr.exact, grid)
        return error_report(sol, pr.exact, grid, t).max_error

    cells = [(m, dt) for m in m_list for dt in dt_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        vals = list(pool.map(cell, cells))
    E = np.array(vals).reshape(len(m_list), len(dt_list))
    mag = np.floor(np.log10(np.maximum(E, 1e-300)))
    mono_m = bool(np.all(np.diff(mag, axis=0) <= 0))
    mono_dt = bool(np.all(np.diff(E, axis=1) <= 0))
    return StudyTable(tuple(m_list), tuple(dt_list), E, mono_m, mono_dt)


def example1_table_run(m: int = 5, dt: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Computed vs. reference values at ``t = 0.3`` on the tabulated x-grid."""
    pr = example1_problem(1.7, 0.3, 1.5, 1.0, 0.3, dt)
    sol = solve(pr, m)
    x = np.array(list(EXAMPLE1_TABLE))
    return sol.evaluate(sol.n_steps, x), np.array(list(EXAMPLE1_TABLE.values()))


__all__ = [
    "EXAMPLE1_TABLE",
    "EXAMPLE2_GRID",
    "EXAMPLE2_MAX_ERRORS",
    "EXAMPLE2_POINTWISE",
    "ErrorReport",
    "StudyTable",
    "convergence_study",
    "error_report",
    "example1_exact",
    "example1_problem",
    "example1_table_run",
    "example2_exact",
    "example2_problem",
    "example2_source",
    "manufactured_residual",
    "max_error",
]
