import math

import numpy as np
import pytest

from pqmittag.fracderiv import (INTEGRANDS, ExtKernelParams, FracOrder, frac_ml_pair,
                                make_integrand, rl_ext_p, rl_ext_pq, rl_frac, rl_frac_pos)
from pqmittag.numcore import DomainError, QuadConfig
from conftest import rel

ONE = lambda t: np.ones_like(np.asarray(t, dtype=float))


def test_order_invariants():
    assert FracOrder.of(-0.5) == FracOrder(-0.5, 0)
    assert FracOrder.of(1.3).m == 2
    with pytest.raises(DomainError):
        FracOrder(-0.5, 1)
    with pytest.raises(DomainError):
        FracOrder(1.5, 1)
    with pytest.raises(DomainError):
        ExtKernelParams(-1, 0)


class TestClassical:
    def test_antiderivative(self):
        assert rl_frac(ONE, FracOrder.of(-1), 1.0).value == pytest.approx(1.0, rel=1e-13)

    def test_half_integral_of_one(self):
        assert rl_frac(ONE, FracOrder.of(-0.5), 1.0).value == pytest.approx(1 / math.gamma(1.5), rel=1e-13)

    def test_half_integral_of_square(self):
        v = rl_frac(lambda t: t ** 2, FracOrder.of(-0.5), 1.0).value
        assert v == pytest.approx(math.gamma(3) / math.gamma(3.5), rel=1e-13)

    def test_rejects_positive_order(self):
        with pytest.raises(DomainError):
            rl_frac(ONE, FracOrder.of(0.5), 1.0)

    def test_rejects_nonpositive_x(self):
        with pytest.raises(DomainError):
            rl_frac(ONE, FracOrder.of(-0.5), 0.0)

    @pytest.mark.parametrize("f, lam, x, want", [
        (lambda t: t, 0.5, 1.0, math.gamma(2) / math.gamma(1.5)),
        (ONE, 0.5, 1.0, 1 / math.gamma(0.5)),
        (lambda t: t ** 1.3, 0.5, 0.8, math.gamma(2.3) / math.gamma(1.8) * 0.8 ** 0.8),
        (lambda t: t ** 2, 1.5, 1.0, math.gamma(3) / math.gamma(1.5)),
    ])
    def test_positive_orders(self, f, lam, x, want):
        res = rl_frac_pos(f, FracOrder.of(lam), x)
        assert rel(res.value, want) <= 1e-7

    def test_adaptive_scheme(self):
        v = rl_frac(lambda t: t ** 2, FracOrder.of(-0.5), 1.0, QuadConfig(rel_tol=1e-12)).value
        assert v == pytest.approx(math.gamma(3) / math.gamma(3.5), rel=1e-11)

    @pytest.mark.parametrize("a", [0.0, 1.0, 2.5])
    def test_semigroup(self, a):
        f = lambda t: np.asarray(t, dtype=float) ** a
        inner = lambda t: np.array([rl_frac(f, FracOrder.of(-0.3), float(s)).value
                                    for s in np.atleast_1d(t)])
        composed = rl_frac(inner, FracOrder.of(-0.4), 1.3, QuadConfig(rel_tol=1e-9)).value
        direct = rl_frac(f, FracOrder.of(-0.7), 1.3).value
        assert rel(composed, direct) <= 1e-6


class TestExtendedKernels:
    def test_p_zero_is_classical(self):
        a = rl_ext_p(ONE, FracOrder.of(-0.5), 1.0, 0.0).value
        assert rel(a, rl_frac(ONE, FracOrder.of(-0.5), 1.0).value) <= 1e-10

    def test_p_oracle(self, oracle):
        v = rl_ext_p(ONE, FracOrder.of(-0.5), 1.0, 0.5).value
        assert rel(v, oracle["rl_ext_p_one_-0.5_x1_p0.5"]) <= 1e-10

    def test_p_monotone(self):
        order = FracOrder.of(-0.5)
        assert rl_ext_p(ONE, order, 1.0, 1.0).value < rl_ext_p(ONE, order, 1.0, 0.5).value

    def test_pq_collapse(self):
        order = FracOrder.of(-0.5)
        a = rl_ext_pq(ONE, order, 1.0, ExtKernelParams(0.4, 0.4)).value
        assert rel(a, rl_ext_p(ONE, order, 1.0, 0.4).value) <= 1e-10

    def test_pq_zero_is_classical(self):
        a = rl_ext_pq(ONE, FracOrder.of(-0.5), 1.0, ExtKernelParams()).value
        assert rel(a, rl_frac(ONE, FracOrder.of(-0.5), 1.0).value) <= 1e-10

    def test_pq_oracle(self, oracle):
        v = rl_ext_pq(lambda t: t ** 0.2, FracOrder.of(-0.7), 1.0, ExtKernelParams(0.3, 0.6)).value
        assert rel(v, oracle["rl_ext_pq_t0.2_-0.7_x1_0.3_0.6"]) <= 1e-10

    def test_kernel_collapse_symbolic(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.uniform(0.1, 5)
            tau = rng.uniform(0.01, 0.99) * x
            p = rng.uniform(0, 3)
            lhs = p * x / tau + p * x / (x - tau)
            rhs = p * x * x / (tau * (x - tau))
            assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(rhs))

    def test_positive_order_extended(self):
        # derivative of order 0.5 = d/dx of the integral of order -0.5
        kp = ExtKernelParams(0.3, 0.6)
        d = rl_ext_pq(ONE, FracOrder.of(0.5), 1.0, kp).value
        h = 1e-4
        i = lambda x: rl_ext_pq(ONE, FracOrder.of(-0.5), x, kp).value
        assert rel(d, (i(1 + h) - i(1 - h)) / (2 * h)) <= 1e-6


class TestFracMLPair:
    def test_classical_reduction(self):
        lhs, rhs = frac_ml_pair(1.0, 2.0, 1.0, 1.0, ExtKernelParams(), 0.5)
        assert rel(lhs.value, rhs.value) <= 1e-7

    def test_generic(self):
        lhs, rhs = frac_ml_pair(1.2, 2.5, 1.0, 1.5, ExtKernelParams(0.3, 0.7), 0.8)
        assert abs(lhs.value - rhs.value) <= 1e-6 * abs(rhs.value)

    def test_small_argument(self):
        lhs, rhs = frac_ml_pair(1.2, 2.5, 1.0, 1.5, ExtKernelParams(0.3, 0.7), 1e-3)
        assert lhs.value / rhs.value == pytest.approx(1.0, abs=1e-5)

    def test_unmatched_index_breaks_identity(self):
        lhs, rhs = frac_ml_pair(1.2, 2.5, 1.0, 1.5, ExtKernelParams(0.3, 0.7), 0.8, c=3.0)
        assert rel(lhs.value, rhs.value) > 1e-3

    def test_preconditions(self):
        with pytest.raises(DomainError):
            frac_ml_pair(2.0, 1.0, 1, 1, ExtKernelParams(), 0.5)
        with pytest.raises(DomainError):
            frac_ml_pair(1.0, 2.0, 1, 1, ExtKernelParams(), -0.5)


def test_registry():
    assert set(INTEGRANDS) == {"monomial", "exponential", "prabhakar-ml", "extended-ml"}
    t = np.array([0.5, 1.0])
    assert np.allclose(make_integrand("monomial", a=2)(t), t ** 2)
    assert np.allclose(make_integrand("exponential", k=-1)(t), np.exp(-t))
    assert make_integrand("prabhakar-ml")(t) == pytest.approx(np.exp(t), rel=1e-14)
    assert make_integrand("extended-ml", gamma=1, c=2)(t) == pytest.approx(np.exp(t), rel=1e-12)
    with pytest.raises(DomainError):
        make_integrand("sine")
