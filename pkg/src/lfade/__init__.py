"""Jacobi spectral collocation for the Levy-Feller advection-dispersion equation.

    u_t = d D^alpha_theta u - e u_x + s(x, t)  on (0, L),  u(0, t) = u(L, t) = 0,

with ``D^alpha_theta`` the Riesz-Feller derivative of order ``1 < alpha <= 2``
and skewness ``theta``.  Space is discretized by collocation on shifted
Jacobi polynomials using closed-form fractional derivatives of the basis;
time is advanced with the trapezoidal rule.

>>> from lfade import example2_problem, solve
>>> pr = example2_problem(alpha=1.8, theta=0.1, t_final=1.0, dt=0.005)
>>> sol = solve(pr, m=3)
>>> round(float(sol.evaluate(sol.n_steps, 0.5)), 6)
0.055782
"""

from .errors import ConfigError, DomainError, LfadeError, NumericError, ParameterError
from .harness import (
    ErrorReport,
    convergence_study,
    error_report,
    example1_problem,
    example2_problem,
    max_error,
)
from .jacobi import (
    ExpansionCoeffs,
    JacobiParams,
    expand_coeffs,
    gauss_lobatto_nodes,
    jacobi_deriv,
    jacobi_eval,
    norm_h,
    shifted_deriv,
    shifted_eval,
)
from .riesz_feller import (
    FracDerivCoeffs,
    RieszFellerParams,
    frac_deriv_coeffs,
    monomial_left_rl,
    monomial_right_rl,
    oracle_rl_jacobi,
    riesz_feller_deriv_jacobi,
    rl_left_deriv_jacobi,
    rl_right_deriv_jacobi,
    skew_coeffs,
)
from .solver import (
    CollocationSystem,
    ProblemSpec,
    SpectralSolution,
    assemble,
    evaluate_solution,
    initial_coeffs,
    omega_entry,
    solve,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "CollocationSystem",
    "ConfigError",
    "DomainError",
    "ErrorReport",
    "ExpansionCoeffs",
    "FracDerivCoeffs",
    "JacobiParams",
    "LfadeError",
    "NumericError",
    "ParameterError",
    "ProblemSpec",
    "RieszFellerParams",
    "SpectralSolution",
    "assemble",
    "convergence_study",
    "error_report",
    "evaluate_solution",
    "example1_problem",
    "example2_problem",
    "expand_coeffs",
    "frac_deriv_coeffs",
    "gauss_lobatto_nodes",
    "initial_coeffs",
    "jacobi_deriv",
    "jacobi_eval",
    "max_error",
    "monomial_left_rl",
    "monomial_right_rl",
    "norm_h",
    "omega_entry",
    "oracle_rl_jacobi",
    "riesz_feller_deriv_jacobi",
    "rl_left_deriv_jacobi",
    "rl_right_deriv_jacobi",
    "shifted_deriv",
    "shifted_eval",
    "skew_coeffs",
    "solve",
    "step",
]
