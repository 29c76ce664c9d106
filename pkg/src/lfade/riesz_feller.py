"""Riemann-Liouville and Riesz-Feller derivatives of shifted Jacobi polynomials.

For ``1 < alpha < 2`` the Riesz-Feller derivative of skewness ``theta`` is

    D^alpha_theta f = -(c_plus * D_left f + c_minus * D_right f),

where ``D_left = 0D^alpha_x`` and ``D_right = xD^alpha_L`` are the one-sided
Riemann-Liouville derivatives on ``[0, L]`` and

    c_plus  = sin((alpha - theta) pi / 2) / sin(alpha pi)
    c_minus = sin((alpha + theta) pi / 2) / sin(alpha pi).

For ``alpha = 2`` it is the classical second derivative.

Closed forms
------------
Writing ``J_{L,j}`` in powers of ``x`` (or ``x - L``), differentiating each
power and re-expanding the powers in the same Jacobi family gives

    0D^alpha_x J_{L,j}(x) = x^(-alpha)     sum_{k<=j} sum_{i<=k} Theta[i,j,k] Upsilon[i,k]   J_{L,i}(x)
    xD^alpha_L J_{L,j}(x) = (L-x)^(-alpha) sum_{k<=j} sum_{i<=k} ThetaBar[j,k] UpsilonBar[i,k] J_{L,i}(x)

The basis function carries the *inner* index ``i``.  Carrying ``J_{L,j}``
outside both sums instead (so the ``i``-sum collapses to a scalar) does not
reproduce the derivative; the test suite checks both readings against the
term-by-term oracle :func:`oracle_rl_jacobi` and only the ``i`` reading
agrees.  The ``L^k`` factors of the monomial and re-expansion steps cancel,
so the coefficient tables depend on ``(alpha, beta, gamma)`` only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import DomainError, ParameterError
from .jacobi import (
    ArrayLike,
    JacobiParams,
    _check_indices,
    _wrap,
    monomial_coeffs,
    shifted_deriv,
    shifted_vandermonde,
)
from .special import pochhammer, rgamma

Side = Literal["left", "right"]

_SKEW_TOL = 1e-12


def _check_alpha(alpha: float) -> None:
    if not (1 < alpha <= 2):
        raise ParameterError(f"alpha must lie in (1,2], got {alpha}")


def _check_theta(alpha: float, theta: float) -> None:
    bound = min(alpha, 2 - alpha)
    if not abs(theta) <= bound + _SKEW_TOL:
        raise ParameterError(f"theta must satisfy |theta| <= min(alpha, 2-alpha) = {bound:g}, got {theta}")


def skew_coeffs(alpha: float, theta: float) -> tuple[float, float]:
    """Return ``(c_plus, c_minus)`` for ``1 < alpha < 2``.

    The one-sided limits ``theta = +-(2 - alpha)`` give an exact zero for
    the vanishing coefficient instead of a round-off residue of ``sin(pi)``.
    """
    if alpha == 2:
        raise ParameterError("alpha = 2 is the classical second derivative; c_plus/c_minus are undefined")
    _check_alpha(alpha)
    _check_theta(alpha, theta)
    s = math.sin(alpha * math.pi)
    cp = 0.0 if abs(alpha - theta - 2) <= 1e-14 else math.sin((alpha - theta) * math.pi / 2) / s
    cm = 0.0 if abs(alpha + theta - 2) <= 1e-14 else math.sin((alpha + theta) * math.pi / 2) / s
    return cp, cm


@dataclass(frozen=True)
class RieszFellerParams:
    """Order ``alpha`` in ``(1, 2]`` and skewness ``theta`` of the operator."""

    alpha: float
    theta: float = 0.0
    c_plus: float = field(init=False)
    c_minus: float = field(init=False)

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        _check_theta(self.alpha, self.theta)
        if self.is_classical:
            cp = cm = math.nan
        else:
            cp, cm = skew_coeffs(self.alpha, self.theta)
        object.__setattr__(self, "c_plus", cp)
        object.__setattr__(self, "c_minus", cm)

    @property
    def is_classical(self) -> bool:
        return self.alpha == 2


def _interior(x: ArrayLike, L: float, left: bool = True, right: bool = True) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    if left and np.any(~(xa > 0)):
        raise DomainError("x must be > 0 (the left derivative is singular at x = 0)")
    if right and np.any(~(xa < L)):
        raise DomainError(f"x must be < {L} (the right derivative is singular at x = L)")
    return xa


def monomial_left_rl(k: int, alpha: float, x: ArrayLike) -> ArrayLike:
    """Left Riemann-Liouville derivative of ``x^k``: ``k!/Gamma(k-alpha+1) x^(k-alpha)``."""
    xa = _interior(x, math.inf, right=False)
    return _wrap(x, math.factorial(k) * rgamma(k - alpha + 1) * xa ** (k - alpha))


def monomial_right_rl(k: int, alpha: float, x: ArrayLike, L: float) -> ArrayLike:
    """Right Riemann-Liouville derivative of ``(x-L)^k`` on ``[x, L]``."""
    xa = _interior(x, L, left=False)
    return _wrap(x, (-1) ** k * math.factorial(k) * rgamma(k - alpha + 1) * (L - xa) ** (k - alpha))


def oracle_rl_jacobi(side: Side, j: int, alpha: float, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """Riemann-Liouville derivative of ``J_{L,j}`` by term-wise monomial differentiation.

    Independent of the coefficient tables; reliable for ``j <= 10``.
    """
    _interior(x, p.length)
    if side == "left":
        c = monomial_coeffs(j, p, "left")
        terms = (ci * np.asarray(monomial_left_rl(i, alpha, x)) for i, ci in enumerate(c))
    elif side == "right":
        c = monomial_coeffs(j, p, "right")
        terms = (ci * np.asarray(monomial_right_rl(i, alpha, x, p.length)) for i, ci in enumerate(c))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return _wrap(x, sum(terms))


@dataclass(frozen=True, eq=False)
class FracDerivCoeffs:
    """x-independent coefficient tables for degrees ``0..n``.

    ``theta[i, j, k]``, ``upsilon[i, k]``, ``theta_bar[j, k]`` and
    ``upsilon_bar[i, k]`` are the raw building blocks (zero outside
    ``i <= k <= j``).  ``left[j, i]`` and ``right[j, i]`` hold the contracted
    sums over ``k``, i.e. the coefficient of ``J_{L,i}`` in the derivative
    of ``J_{L,j}`` before the ``x^(-alpha)`` / ``(L-x)^(-alpha)`` factor.
    """

    n: int
    alpha: float
    beta: float
    gamma: float
    theta: np.ndarray
    upsilon: np.ndarray
    theta_bar: np.ndarray
    upsilon_bar: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def left_matrix(self, p: JacobiParams, x: ArrayLike) -> np.ndarray:
        """``M[q, j] = 0D^alpha_x J_{L,j}(x_q)``."""
        xa = np.atleast_1d(_interior(x, p.length))
        V = shifted_vandermonde(self.n, p, xa)
        return xa[:, None] ** (-self.alpha) * (V @ self.left.T)

    def right_matrix(self, p: JacobiParams, x: ArrayLike) -> np.ndarray:
        """``M[q, j] = xD^alpha_L J_{L,j}(x_q)``."""
        xa = np.atleast_1d(_interior(x, p.length))
        V = shifted_vandermonde(self.n, p, xa)
        return (p.length - xa)[:, None] ** (-self.alpha) * (V @ self.right.T)


def _lobatto_factor(i: int, s: float) -> float:
    # (2+s)_{i-1} (1+s+2i) with s = beta+gamma; the i = 0 value is
    # (1+s)/(1+s) = 1, taken as the limit so that s = -1 stays finite
    if i == 0:
        return 1.0
    return pochhammer(2 + s, i - 1) * (1 + s + 2 * i)


def _upsilon(i: int, k: int, near: float, s: float) -> float:
    return (
        pochhammer(-k, i)
        * pochhammer(1 + near, k)
        * _lobatto_factor(i, s)
        / (pochhammer(1 + near, i) * pochhammer(2 + s, k) * pochhammer(2 + k + s, i))
    )


@lru_cache(maxsize=256)
def frac_deriv_coeffs(n: int, alpha: float, beta: float, gamma: float) -> FracDerivCoeffs:
    """Build (and cache) the coefficient tables for degrees up to ``n``."""
    _check_alpha(alpha)
    _check_indices(beta, gamma)
    if n < 0:
        raise ParameterError("degree must be non-negative")
    s = beta + gamma
    lam = s + 1
    th = np.zeros((n + 1, n + 1, n + 1))
    thb = np.zeros((n + 1, n + 1))
    up = np.zeros((n + 1, n + 1))
    upb = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        for i in range(k + 1):
            up[i, k] = _upsilon(i, k, gamma, s)
            upb[i, k] = _upsilon(i, k, beta, s)
    for j in range(n + 1):
        for k in range(j + 1):
            # Gamma(1+k)/k! == 1 is dropped
            common = pochhammer(j + lam, k) * rgamma(1 + k - alpha) / math.factorial(j - k)
            thb[j, k] = (-1) ** k * common * pochhammer(1 + beta + k, j - k)
            left_jk = (-1) ** (j + k) * common * pochhammer(1 + gamma + k, j - k)
            for i in range(k + 1):
                th[i, j, k] = (-1) ** i * left_jk
    left = np.einsum("ijk,ik->ji", th, up)
    right = np.einsum("jk,ik->ji", thb, upb)
    for a in (th, thb, up, upb, left, right):
        a.setflags(write=False)
    return FracDerivCoeffs(n, alpha, beta, gamma, th, up, thb, upb, left, right)


def _coeffs_for(j: int, alpha: float, p: JacobiParams) -> FracDerivCoeffs:
    if j < 0:
        raise ParameterError("degree must be non-negative")
    if not 1 < alpha < 2:
        raise ParameterError(f"fractional branch requires 1 < alpha < 2, got {alpha}")
    return frac_deriv_coeffs(j, float(alpha), float(p.beta), float(p.gamma))


def rl_left_deriv_jacobi(j: int, alpha: float, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """Left Riemann-Liouville derivative ``0D^alpha_x J_{L,j}(x)`` from the closed form."""
    return _wrap(x, _coeffs_for(j, alpha, p).left_matrix(p, x)[:, j].reshape(np.shape(x)))


def rl_right_deriv_jacobi(j: int, alpha: float, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """Right Riemann-Liouville derivative ``xD^alpha_L J_{L,j}(x)`` from the closed form."""
    return _wrap(x, _coeffs_for(j, alpha, p).right_matrix(p, x)[:, j].reshape(np.shape(x)))


def riesz_feller_matrix(n: int, rf: RieszFellerParams, p: JacobiParams, x: ArrayLike) -> np.ndarray:
    """``M[q, j] = D^alpha_theta J_{L,j}(x_q)`` for ``j = 0..n`` at interior points."""
    xa = np.atleast_1d(_interior(x, p.length))
    if rf.is_classical:
        out = np.empty((xa.size, n + 1))
        for j in range(n + 1):
            out[:, j] = shifted_deriv(2, j, p, xa)
        return out
    c = _coeffs_for(n, rf.alpha, p)
    out = np.zeros((xa.size, n + 1))
    if rf.c_plus != 0:
        out -= rf.c_plus * c.left_matrix(p, xa)
    if rf.c_minus != 0:
        out -= rf.c_minus * c.right_matrix(p, xa)
    return out


def riesz_feller_deriv_jacobi(j: int, rf: RieszFellerParams, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """Riesz-Feller derivative ``D^alpha_theta J_{L,j}(x)`` at interior ``x``."""
    if j < 0:
        raise ParameterError("degree must be non-negative")
    col = riesz_feller_matrix(j, rf, p, x)[:, j]
    return _wrap(x, col.reshape(np.shape(x)))
