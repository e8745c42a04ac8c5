import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pqmittag.extbeta import BetaArgs, beta_classical, beta_p, beta_pq, beta_pq_many
from pqmittag.numcore import DomainError, QuadConfig
from conftest import rel


@pytest.mark.parametrize("x, y, want", [(1, 1, 1.0), (2, 2, 1 / 6), (0.5, 0.5, math.pi)])
def test_classical(x, y, want):
    assert beta_classical(x, y) == pytest.approx(want, rel=1e-15)


def test_beta_p_reduces_to_classical():
    assert beta_p(2, 2, 0.0).value == pytest.approx(1 / 6, rel=1e-13)


def test_beta_p_oracle(oracle):
    res = beta_p(1, 1, 0.5)
    assert res.converged
    assert rel(res.value, oracle["beta_p_1_1_0.5"]) <= 1e-12


def test_beta_p_symmetric():
    assert rel(beta_p(1.5, 2.5, 1).value, beta_p(2.5, 1.5, 1).value) <= 1e-10


@pytest.mark.parametrize("x, y", [(1, 1), (2, 3), (0.5, 1.5)])
def test_beta_pq_zero_kernel(x, y):
    assert rel(beta_pq(x, y, 0, 0).value, beta_classical(x, y)) <= 1e-10


def test_beta_pq_diagonal_is_beta_p():
    assert rel(beta_pq(1.2, 2.5, 0.7, 0.7).value, beta_p(1.2, 2.5, 0.7).value) <= 1e-10


def test_beta_pq_oracle(oracle):
    assert rel(beta_pq(1, 2, 0.3, 0.8).value, oracle["beta_pq_1_2_0.3_0.8"]) <= 1e-12


def test_adaptive_scheme_agrees(oracle):
    res = beta_pq(1, 2, 0.3, 0.8, QuadConfig(rel_tol=1e-11))
    assert rel(res.value, oracle["beta_pq_1_2_0.3_0.8"]) <= 1e-10


@pytest.mark.parametrize("bad", [(0, 1, 0, 0), (1, -1, 0, 0), (1, 1, -0.1, 0), (1, 1, 0, -2)])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        beta_pq(*bad)
    with pytest.raises(DomainError):
        BetaArgs(*bad)


def test_reflection_symmetry_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        x, y = rng.uniform(0.2, 5, 2)
        p, q = rng.uniform(0, 3, 2)
        assert rel(beta_pq(x, y, p, q).value, beta_pq(y, x, q, p).value) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0.2, 5), y=st.floats(0.2, 5), p=st.floats(0, 3), q=st.floats(0, 3))
def test_bounds(x, y, p, q):
    v = beta_pq(x, y, p, q).value
    assert 0 < v <= beta_classical(x, y) * (1 + 1e-13)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0.3, 4), y=st.floats(0.3, 4), p1=st.floats(0, 2), dp=st.floats(0.01, 2),
       q=st.floats(0, 2))
def test_monotone_in_p(x, y, p1, dp, q):
    assert beta_pq(x, y, p1, q).value > beta_pq(x, y, p1 + dp, q).value


def test_continuity_as_p_vanishes():
    base = beta_pq(1.3, 0.8, 0.0, 0.5).value
    near = beta_pq(1.3, 0.8, 1e-9, 0.5).value
    assert rel(base, near) <= 1e-7


def test_many_matches_single():
    xs = 1.2 + np.arange(6)
    vals, errs, effort, ok = beta_pq_many(xs, 1.3, 0.3, 0.6)
    assert ok.all()
    for x, v in zip(xs, vals):
        assert rel(v, beta_pq(x, 1.3, 0.3, 0.6).value) <= 1e-13
