"""Jacobi and shifted Jacobi polynomials on ``[-1, 1]`` and ``[0, L]``.

Conventions: ``J_k^{beta,gamma}(1) = Gamma(k+beta+1) / (k! Gamma(beta+1))``, so
``beta`` is tied to the right endpoint and ``gamma`` to the left one.  The
shifted family ``J_{L,k}(x) = J_k((2x - L)/L)`` is orthogonal on ``[0, L]``
under the weight ``x**gamma * (L - x)**beta``.

All evaluators accept a scalar or an array for ``x`` and return the same
shape.  Evaluation always goes through the three-term recurrence; the
monomial sums in :func:`shifted_eval_series` are meant for cross-checks at
low degree only, since they cancel catastrophically as ``k`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, NumericError, ParameterError
from .special import gamma, pochhammer, rgamma

ArrayLike = float | np.ndarray


@dataclass(frozen=True)
class JacobiParams:
    """Indices ``beta, gamma > -1`` and interval length ``L`` of a shifted family."""

    beta: float = 0.0
    gamma: float = 0.0
    length: float = 1.0

    def __post_init__(self) -> None:
        _check_indices(self.beta, self.gamma)
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ParameterError(f"length must be positive and finite, got {self.length}")


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Coefficients ``c_0..c_M`` of a truncated shifted Jacobi expansion."""

    coeffs: np.ndarray
    params: JacobiParams

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return shifted_series(self.coeffs, self.params, x)


def _check_indices(beta: float, gamma_: float) -> None:
    if not beta > -1:
        raise ParameterError(f"beta must be > -1, got {beta}")
    if not gamma_ > -1:
        raise ParameterError(f"gamma must be > -1, got {gamma_}")


def _wrap(x: ArrayLike, out: np.ndarray) -> ArrayLike:
    return float(out) if np.ndim(x) == 0 else out


def _recurrence(k: int, beta: float, gamma_: float, y: np.ndarray) -> np.ndarray:
    """Rows ``J_0(y) .. J_k(y)`` stacked along axis 0."""
    out = np.empty((k + 1,) + y.shape)
    out[0] = 1.0
    if k == 0:
        return out
    s = beta + gamma_
    out[1] = ((s + 2) * y + beta - gamma_) / 2
    for n in range(1, k):
        den = (n + 1) * (n + s + 1)
        a = (2 * n + s + 1) * (2 * n + s + 2) / (2 * den)
        b = (2 * n + s + 1) * (gamma_**2 - beta**2) / (2 * den * (2 * n + s))
        c = (n + beta) * (n + gamma_) * (2 * n + s + 2) / (den * (2 * n + s))
        out[n + 1] = (a * y - b) * out[n] - c * out[n - 1]
    return out


def jacobi_eval(k: int, beta: float, gamma: float, x: ArrayLike) -> ArrayLike:
    """Evaluate ``J_k^{beta,gamma}(x)`` by the three-term recurrence."""
    _check_indices(beta, gamma)
    if k < 0:
        raise ParameterError(f"degree must be non-negative, got {k}")
    y = np.asarray(x, dtype=float)
    return _wrap(x, _recurrence(k, beta, gamma, y)[k])


def jacobi_vandermonde(m: int, beta: float, gamma: float, x: ArrayLike) -> np.ndarray:
    """Matrix ``V[q, k] = J_k^{beta,gamma}(x_q)`` for ``k = 0..m``."""
    _check_indices(beta, gamma)
    y = np.atleast_1d(np.asarray(x, dtype=float))
    return _recurrence(m, beta, gamma, y).T


def jacobi_deriv(m: int, k: int, beta: float, gamma: float, x: ArrayLike) -> ArrayLike:
    """``m``-th derivative of ``J_k^{beta,gamma}`` at ``x``.

    Uses ``d^m/dx^m J_k^{b,g} = Gamma(m+k+b+g+1) / (2^m Gamma(k+b+g+1)) J_{k-m}^{b+m,g+m}``
    with the gamma ratio taken as a finite product (safe when ``k+b+g+1`` hits a pole).
    """
    _check_indices(beta, gamma)
    if m < 0 or k < 0:
        raise ParameterError("derivative order and degree must be non-negative")
    if m > k:
        return _wrap(x, np.zeros(np.shape(x)))
    scale = pochhammer(k + beta + gamma + 1, m) / 2.0**m
    y = np.asarray(x, dtype=float)
    return _wrap(x, scale * _recurrence(k - m, beta + m, gamma + m, y)[k - m])


def _to_reference(p: JacobiParams, x: ArrayLike) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(xa > p.length) or np.any(~np.isfinite(xa)):
        raise DomainError(f"x must lie in [0, {p.length}]")
    return (2 * xa - p.length) / p.length


def shifted_eval(k: int, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """Evaluate ``J_{L,k}^{beta,gamma}(x)`` for ``x`` in ``[0, L]``."""
    return _wrap(x, np.asarray(jacobi_eval(k, p.beta, p.gamma, _to_reference(p, x))))


def shifted_vandermonde(m: int, p: JacobiParams, x: ArrayLike) -> np.ndarray:
    """Matrix ``V[q, k] = J_{L,k}(x_q)`` for ``k = 0..m``."""
    y = np.atleast_1d(_to_reference(p, x))
    return jacobi_vandermonde(m, p.beta, p.gamma, y)


def shifted_deriv(m: int, k: int, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """``m``-th derivative of ``J_{L,k}`` in the physical variable ``x``."""
    y = _to_reference(p, x)
    d = np.asarray(jacobi_deriv(m, k, p.beta, p.gamma, y))
    return _wrap(x, (2.0 / p.length) ** m * d)


def shifted_deriv_matrix(m: int, p: JacobiParams, x: ArrayLike) -> np.ndarray:
    """Matrix ``D[q, k] = d/dx J_{L,k}(x_q)`` for ``k = 0..m``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros((x.size, m + 1))
    for k in range(1, m + 1):
        out[:, k] = shifted_deriv(1, k, p, x)
    return out


def shifted_series(coeffs: np.ndarray, p: JacobiParams, x: ArrayLike) -> ArrayLike:
    """Evaluate ``sum_k coeffs[k] * J_{L,k}(x)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    y = _to_reference(p, x)
    rows = _recurrence(len(coeffs) - 1, p.beta, p.gamma, np.asarray(y))
    return _wrap(x, np.tensordot(coeffs, rows, axes=1))


def endpoint_left(k: int, p: JacobiParams) -> float:
    """Closed form ``J_{L,k}(0) = (-1)^k Gamma(k+gamma+1) / (Gamma(gamma+1) k!)``."""
    return (-1) ** k * pochhammer(p.gamma + 1, k) / math.factorial(k)


def endpoint_right(k: int, p: JacobiParams) -> float:
    """Closed form ``J_{L,k}(L) = Gamma(k+beta+1) / (Gamma(beta+1) k!)``."""
    return pochhammer(p.beta + 1, k) / math.factorial(k)


def monomial_coeffs(k: int, p: JacobiParams, about: Literal["left", "right"] = "left") -> np.ndarray:
    """Coefficients of ``J_{L,k}`` in powers of ``x`` (``about='left'``) or ``x - L``.

    ``left``:  ``J_{L,k}(x) = sum_i a_i x^i``
    ``right``: ``J_{L,k}(x) = sum_i b_i (x - L)^i``
    """
    lam = p.beta + p.gamma + 1
    # the "near" index belongs to the expansion point: gamma at x=0, beta at x=L
    near = p.gamma if about == "left" else p.beta
    out = np.empty(k + 1)
    for i in range(k + 1):
        c = (
            pochhammer(i + near + 1, k - i)
            * pochhammer(k + lam, i)
            / (math.factorial(k - i) * math.factorial(i) * p.length**i)
        )
        out[i] = (-1) ** (k - i) * c if about == "left" else c
    return out


def shifted_eval_series(
    k: int, p: JacobiParams, x: ArrayLike, about: Literal["left", "right"] = "left"
) -> ArrayLike:
    """Evaluate ``J_{L,k}`` from its explicit monomial sum (cross-check path)."""
    xa = np.asarray(x, dtype=float)
    _to_reference(p, xa)
    z = xa if about == "left" else xa - p.length
    c = monomial_coeffs(k, p, about)
    return _wrap(x, sum(ci * z**i for i, ci in enumerate(c)))


def norm_h(k: int, p: JacobiParams) -> float:
    """``h_k = int_0^L w J_{L,k}^2 dx`` with ``w = x^gamma (L-x)^beta``."""
    b, g = p.beta, p.gamma
    lam = b + g + 1
    # Gamma(k+b+1) Gamma(k+g+1) / (k! Gamma(k+lam)); at k=0 with lam=0 the
    # (2k + lam) factor cancels the pole of Gamma(k + lam)
    if k == 0:
        ratio = gamma(b + 1) * gamma(g + 1) * rgamma(lam + 1)
    else:
        ratio = gamma(k + b + 1) * gamma(k + g + 1) / (math.factorial(k) * gamma(k + lam)) / (2 * k + lam)
    return p.length**lam * ratio


def gauss_jacobi(n: int, p: JacobiParams) -> tuple[np.ndarray, np.ndarray]:
    """``n``-point Gauss-Jacobi rule on ``[0, L]`` for the weight ``x^gamma (L-x)^beta``.

    Exact for polynomials of degree ``2n - 1``.
    """
    if n < 1:
        raise ParameterError("number of quadrature points must be >= 1")
    y, w = roots_jacobi(n, p.beta, p.gamma)
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(w))):
        raise NumericError("Gauss-Jacobi rule produced non-finite nodes or weights")
    half = p.length / 2
    x = np.clip(half * (y + 1), 0.0, p.length)
    return x, w * half ** (p.beta + p.gamma + 1)


def expand_coeffs(f: Callable[[np.ndarray], np.ndarray], M: int, p: JacobiParams) -> ExpansionCoeffs:
    """Project ``f`` onto ``J_{L,0..M}`` by Gauss-Jacobi quadrature with ``M + 8`` points."""
    if M < 0:
        raise ParameterError("truncation order must be >= 0")
    x, w = gauss_jacobi(M + 8, p)
    fx = np.asarray(f(x), dtype=float) * np.ones_like(x)
    if not np.all(np.isfinite(fx)):
        raise NumericError("f is not finite on the quadrature nodes")
    V = shifted_vandermonde(M, p, x)
    h = np.array([norm_h(k, p) for k in range(M + 1)])
    return ExpansionCoeffs((V.T @ (w * fx)) / h, p)


def gauss_lobatto_nodes(m: int, p: JacobiParams, tol: float = 1e-14, maxiter: int = 100) -> np.ndarray:
    """``m + 1`` Jacobi Gauss-Lobatto nodes on ``[0, L]``, endpoints included.

    Interior nodes are the roots of ``d/dx J_{L,m}``, i.e. of
    ``J_{m-1}^{beta+1,gamma+1}`` on the reference interval.  They are found by
    Newton iteration with deflation against roots already found, started
    from the Chebyshev extrema ``-cos(k pi / m)``.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    n = m - 1
    b, g = p.beta + 1, p.gamma + 1
    roots: list[float] = []
    for k in range(1, n + 1):
        r = -math.cos(k * math.pi / m)
        if roots:
            r = 0.5 * (r + roots[-1]) if r <= roots[-1] else r
        for _ in range(maxiter):
            f = jacobi_eval(n, b, g, r)
            df = jacobi_deriv(1, n, b, g, r)
            defl = sum(1.0 / (r - s) for s in roots)
            delta = -f / (df - f * defl)
            r += delta
            if abs(delta) <= tol:
                break
        else:
            raise NumericError(f"Gauss-Lobatto Newton iteration did not converge for node {k} of m={m}")
        roots.append(r)
    y = np.array([-1.0, *sorted(roots), 1.0])
    if np.any(np.diff(y) <= 0) or np.any(np.abs(y[1:-1]) >= 1):
        raise NumericError(f"Gauss-Lobatto nodes for m={m} are not strictly increasing in (-1, 1)")
    x = p.length * (y + 1) / 2
    x[0], x[-1] = 0.0, p.length
    return x
