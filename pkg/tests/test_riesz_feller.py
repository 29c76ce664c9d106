import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from lfade.errors import DomainError, ParameterError
from lfade.jacobi import JacobiParams, shifted_deriv, shifted_eval
from lfade.riesz_feller import (
    RieszFellerParams,
    frac_deriv_coeffs,
    monomial_left_rl,
    monomial_right_rl,
    oracle_rl_jacobi,
    riesz_feller_deriv_jacobi,
    riesz_feller_matrix,
    rl_left_deriv_jacobi,
    rl_right_deriv_jacobi,
    skew_coeffs,
)

LEGENDRE = JacobiParams(0.0, 0.0, 1.0)


def quad_rl(side, j, alpha, p, x):
    """RL derivative of J_{L,j} from a Taylor split plus a weakly singular integral.

    left:  f(0) x^-a / G(1-a) + f'(0) x^(1-a) / G(2-a) + int_0^x (x-s)^(1-a) f''(s) ds / G(2-a)
    right: f(L) (L-x)^-a / G(1-a) - f'(L) (L-x)^(1-a) / G(2-a) + int_x^L (s-x)^(1-a) f''(s) ds / G(2-a)
    """
    L = p.length
    f2 = lambda s: shifted_deriv(2, j, p, s)
    g1, g2 = math.gamma(1 - alpha), math.gamma(2 - alpha)
    if side == "left":
        integral, _ = quad(f2, 0, x, weight="alg", wvar=(0, 1 - alpha), epsabs=1e-12, epsrel=1e-12)
        return (
            shifted_eval(j, p, 0.0) * x**-alpha / g1
            + shifted_deriv(1, j, p, 0.0) * x ** (1 - alpha) / g2
            + integral / g2
        )
    integral, _ = quad(f2, x, L, weight="alg", wvar=(1 - alpha, 0), epsabs=1e-12, epsrel=1e-12)
    return (
        shifted_eval(j, p, L) * (L - x) ** -alpha / g1
        - shifted_deriv(1, j, p, L) * (L - x) ** (1 - alpha) / g2
        + integral / g2
    )


class TestSkewCoeffs:
    def test_one_sided(self):
        cp, cm = skew_coeffs(1.7, 0.3)
        assert cm == 0.0
        assert cp == pytest.approx(-1.0, rel=1e-12)

    def test_symmetric(self):
        cp, cm = skew_coeffs(1.5, 0.0)
        assert cp == cm == pytest.approx(-0.70710678118654752, rel=1e-12)

    def test_bound_violation(self):
        with pytest.raises(ParameterError):
            skew_coeffs(1.5, 0.8)

    def test_alpha_two_rejected(self):
        with pytest.raises(ParameterError):
            skew_coeffs(2.0, 0.0)

    @given(st.floats(1.01, 1.99))
    def test_degeneracy(self, alpha):
        assert skew_coeffs(alpha, 2 - alpha)[1] == 0.0
        assert skew_coeffs(alpha, alpha - 2)[0] == 0.0

    def test_params_reject_bad_alpha(self):
        with pytest.raises(ParameterError, match=r"alpha must lie in \(1,2\]"):
            RieszFellerParams(3.0, 0.0)
        with pytest.raises(ParameterError):
            RieszFellerParams(2.0, 0.1)

    def test_params_store_coeffs(self):
        rf = RieszFellerParams(1.6, 0.1)
        assert (rf.c_plus, rf.c_minus) == skew_coeffs(1.6, 0.1)
        assert RieszFellerParams(2.0).is_classical


class TestMonomialRules:
    def test_integer_order_left(self):
        assert monomial_left_rl(2, 2.0, 0.4) == pytest.approx(2.0)

    def test_left_values(self):
        assert monomial_left_rl(1, 1.5, 1.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-12)
        assert monomial_left_rl(1, 1.9, 0.5) == pytest.approx(0.5**-0.9 / math.gamma(0.1), rel=1e-12)

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.9])
    def test_left_against_quadrature(self, k, alpha):
        # x^k through the Taylor split: only the k-th power survives the two boundary terms
        x = 0.7
        g2 = math.gamma(2 - alpha)
        f2 = lambda s: k * (k - 1) * s ** (k - 2) if k >= 2 else 0.0
        integral, _ = quad(f2, 0, x, weight="alg", wvar=(0, 1 - alpha))
        ref = (k == 0) * x**-alpha / math.gamma(1 - alpha) + (k == 1) * x ** (1 - alpha) / g2 + integral / g2
        assert monomial_left_rl(k, alpha, x) == pytest.approx(ref, rel=1e-10)

    def test_integer_order_right(self):
        assert monomial_right_rl(2, 2.0, 0.3, 1.0) == pytest.approx(2.0)

    def test_right_values(self):
        # (x - L)^1 at x = 0: -(L - x)^-0.5 / G(0.5)
        assert monomial_right_rl(1, 1.5, 0.0, 1.0) == pytest.approx(-1 / math.sqrt(math.pi), rel=1e-12)
        assert monomial_right_rl(0, 1.5, 0.5, 1.0) == pytest.approx(-0.7978845608028654, rel=1e-12)

    def test_domains(self):
        with pytest.raises(DomainError):
            monomial_left_rl(1, 1.5, 0.0)
        with pytest.raises(DomainError):
            monomial_right_rl(1, 1.5, 1.0, 1.0)


class TestOracle:
    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_constant(self, alpha):
        p = JacobiParams(0.5, -0.5, 2.0)
        x = 0.7
        assert oracle_rl_jacobi("left", 0, alpha, p, x) == pytest.approx(x**-alpha / math.gamma(1 - alpha))
        assert oracle_rl_jacobi("right", 0, alpha, p, x) == pytest.approx((2 - x) ** -alpha / math.gamma(1 - alpha))

    def test_linear(self):
        # D^1.5 (2x - 1) = 2 x^-0.5 / G(0.5) - x^-1.5 / G(-0.5) at x = 0.5
        expected = 2 * 0.5**-0.5 / math.gamma(0.5) - 0.5**-1.5 / math.gamma(-0.5)
        assert oracle_rl_jacobi("left", 1, 1.5, LEGENDRE, 0.5) == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(2.3936536824085963, rel=1e-13)

    @pytest.mark.parametrize("side", ["left", "right"])
    @pytest.mark.parametrize("beta, gamma", [(0.0, 0.0), (1.0, 0.5), (-0.5, 0.3)])
    @pytest.mark.parametrize("alpha", [1.2, 1.7])
    def test_against_quadrature(self, side, beta, gamma, alpha):
        p = JacobiParams(beta, gamma, 1.5)
        for j in range(7):
            for x in (0.2, 0.75, 1.3):
                assert oracle_rl_jacobi(side, j, alpha, p, x) == pytest.approx(
                    quad_rl(side, j, alpha, p, x), rel=1e-8, abs=1e-9
                )

    @pytest.mark.parametrize("beta", [0.0, 0.5, -0.5, 1.5])
    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_reflection(self, beta, alpha):
        p = JacobiParams(beta, beta, 1.0)
        x = np.linspace(0, 1, 22)[1:-1]
        for j in range(9):
            left = np.asarray(oracle_rl_jacobi("left", j, alpha, p, x))
            right = (-1) ** j * np.asarray(oracle_rl_jacobi("right", j, alpha, p, 1 - x))
            assert_allclose(left, right, rtol=1e-8, atol=1e-8 * np.max(np.abs(left)))

    def test_domain(self):
        with pytest.raises(DomainError):
            oracle_rl_jacobi("left", 2, 1.5, LEGENDRE, 0.0)
        with pytest.raises(DomainError):
            oracle_rl_jacobi("right", 2, 1.5, LEGENDRE, 1.0)


class TestClosedForm:
    @pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
    def test_constant(self, alpha):
        x = 0.3
        assert rl_left_deriv_jacobi(0, alpha, LEGENDRE, x) == pytest.approx(x**-alpha / math.gamma(1 - alpha), rel=1e-13)
        assert rl_right_deriv_jacobi(0, alpha, LEGENDRE, x) == pytest.approx((1 - x) ** -alpha / math.gamma(1 - alpha), rel=1e-13)

    def test_linear_left(self):
        assert rl_left_deriv_jacobi(1, 1.5, LEGENDRE, 0.5) == pytest.approx(2.3936536824085963, rel=1e-12)

    @pytest.mark.parametrize("j", [1, 2])
    def test_matches_oracle_legendre(self, j):
        for side, fn in (("left", rl_left_deriv_jacobi), ("right", rl_right_deriv_jacobi)):
            assert fn(j, 1.5, LEGENDRE, 0.5) == pytest.approx(oracle_rl_jacobi(side, j, 1.5, LEGENDRE, 0.5), rel=1e-12)

    @pytest.mark.parametrize("beta, gamma", [(0.0, 0.0), (0.5, 0.5), (-0.5, -0.5), (1.0, 0.5), (-0.3, 2.0)])
    def test_outer_basis_index_disagrees(self, beta, gamma):
        """Summing Theta*Upsilon into a scalar times J_{L,j} is not the derivative."""
        p = JacobiParams(beta, gamma, 1.0)
        c = frac_deriv_coeffs(4, 1.5, beta, gamma)
        x = np.array([0.25, 0.5, 0.8])
        for j in (2, 3, 4):
            outer = x**-1.5 * c.left[j].sum() * np.asarray(shifted_eval(j, p, x))
            oracle = np.asarray(oracle_rl_jacobi("left", j, 1.5, p, x))
            assert np.max(np.abs(outer - oracle) / np.abs(oracle)) > 1e-2

    def test_tables_are_sparse_triangular(self):
        c = frac_deriv_coeffs(5, 1.3, 0.2, 0.7)
        for i in range(6):
            for j in range(6):
                for k in range(6):
                    if not i <= k <= j:
                        assert c.theta[i, j, k] == 0.0
        assert np.all(np.isfinite(c.left)) and np.all(np.isfinite(c.right))
        assert not c.left.flags.writeable

    def test_chebyshev_indices_finite(self):
        # beta + gamma = -1 puts Gamma(beta+gamma+1) on a pole; the tables must stay finite
        c = frac_deriv_coeffs(8, 1.5, -0.5, -0.5)
        assert np.all(np.isfinite(c.left)) and np.all(np.isfinite(c.right))

    def test_domain(self):
        with pytest.raises(DomainError):
            rl_left_deriv_jacobi(3, 1.5, LEGENDRE, 0.0)
        with pytest.raises(DomainError):
            rl_right_deriv_jacobi(3, 1.5, LEGENDRE, 1.0)

    @pytest.mark.parametrize("beta, gamma", [(0.0, 0.0), (0.5, 0.5), (2.0, -0.5)])
    def test_high_degree_against_quadrature(self, beta, gamma):
        p = JacobiParams(beta, gamma, 1.0)
        # the tables cancel at high degree: about 1e-8 relative at j = 12, 1e-5 at j = 16
        for j in (10, 12):
            for x in (0.15, 0.5, 0.9):
                for side, fn in (("left", rl_left_deriv_jacobi), ("right", rl_right_deriv_jacobi)):
                    ref = quad_rl(side, j, 1.6, p, x)
                    assert fn(j, 1.6, p, x) == pytest.approx(ref, rel=1e-6, abs=1e-6)


class TestRieszFeller:
    def test_one_sided_reduces_to_left(self):
        rf = RieszFellerParams(1.7, 0.3)
        x = np.array([0.2, 0.6])
        for j in range(5):
            assert_allclose(
                riesz_feller_deriv_jacobi(j, rf, LEGENDRE, x),
                -rf.c_plus * np.asarray(rl_left_deriv_jacobi(j, 1.7, LEGENDRE, x)),
                rtol=1e-14,
            )

    def test_classical(self):
        rf = RieszFellerParams(2.0, 0.0)
        for x in (0.1, 0.5, 0.77):
            assert riesz_feller_deriv_jacobi(2, rf, LEGENDRE, x) == pytest.approx(12.0)

    def test_skewed_combination(self):
        rf = RieszFellerParams(1.5, 0.2)
        cp, cm = skew_coeffs(1.5, 0.2)
        expected = -(cp * oracle_rl_jacobi("left", 1, 1.5, LEGENDRE, 0.5) + cm * oracle_rl_jacobi("right", 1, 1.5, LEGENDRE, 0.5))
        assert riesz_feller_deriv_jacobi(1, rf, LEGENDRE, 0.5) == pytest.approx(expected, rel=1e-12)

    @settings(max_examples=40)
    @given(
        st.floats(1.05, 1.95),
        st.floats(-1, 1),
        st.floats(-3, 3),
        st.floats(-3, 3),
        st.integers(0, 8),
        st.integers(0, 8),
        st.floats(0.05, 0.95),
    )
    def test_linearity(self, alpha, tfrac, a, b, j, k, x):
        rf = RieszFellerParams(alpha, tfrac * min(alpha, 2 - alpha))
        n = max(j, k)
        M = riesz_feller_matrix(n, rf, LEGENDRE, np.array([x]))[0]
        coeffs = np.zeros(n + 1)
        coeffs[j] += a
        coeffs[k] += b
        combo = M @ coeffs
        scale = abs(a * M[j]) + abs(b * M[k])
        assert combo == pytest.approx(a * M[j] + b * M[k], rel=1e-14, abs=1e-14 * scale)
        # tables of different sizes round differently; exact zeros occur by symmetry at theta = 0
        single = riesz_feller_deriv_jacobi(j, rf, LEGENDRE, x)
        assert M[j] == pytest.approx(single, rel=1e-12, abs=1e-12 * np.max(np.abs(M)))

    def test_continuity_at_two(self):
        rf = RieszFellerParams(2 - 1e-3, 0.0)
        p = JacobiParams(0.0, 0.0, 1.0)
        x = np.array([0.4, 0.5, 0.6])
        for j in range(7):
            frac = np.asarray(riesz_feller_deriv_jacobi(j, rf, p, x))
            classical = np.asarray(shifted_deriv(2, j, p, x))
            # relative 1% with unit floor: classical values vanish for j < 2
            assert np.all(np.abs(frac - classical) <= 0.01 * np.maximum(np.abs(classical), 1.0))

    def test_domain(self):
        with pytest.raises(DomainError):
            riesz_feller_deriv_jacobi(2, RieszFellerParams(1.5), LEGENDRE, 0.0)
        with pytest.raises(DomainError):
            riesz_feller_deriv_jacobi(2, RieszFellerParams(2.0), LEGENDRE, 1.0)
