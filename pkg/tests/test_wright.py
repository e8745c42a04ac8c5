import math

import numpy as np
import pytest

from pqmittag.mlcore import MLParams, ml_prabhakar
from pqmittag.numcore import DomainError
from pqmittag.wright import WrightSpec, mellin_closed_form, mellin_wright_spec, wright_psi
from conftest import rel


def test_exponential():
    assert wright_psi(WrightSpec([(1, 1)], [(1, 1)]), 1.0).value == pytest.approx(math.e, rel=1e-15)


@pytest.mark.parametrize("z", [-1.0, 0.0, 0.5, 2.0])
def test_cancelling_pairs_give_exp(z):
    spec = WrightSpec([(2.3, 1.5), (0.7, 1.0)], [(2.3, 1.5), (0.7, 1.0)])
    assert rel(wright_psi(spec, z).value, math.exp(z)) <= 1e-12


def test_prabhakar_relation():
    v = wright_psi(WrightSpec([(2, 1)], [(1.3, 0.7)]), 0.5).value
    assert rel(v, math.gamma(2) * ml_prabhakar(0.7, 1.3, 2, 0.5).value) <= 1e-10


def test_prabhakar_relation_random():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b, g = rng.uniform(0.5, 2.5), rng.uniform(0.3, 3), rng.uniform(0.3, 3)
        z = rng.uniform(-1.5, 1.5)
        v = wright_psi(WrightSpec([(g, 1)], [(b, a)]), z).value
        assert rel(v, math.gamma(g) * ml_prabhakar(a, b, g, z).value) <= 1e-10


def test_2psi2_oracle(oracle):
    spec = WrightSpec([(2, 1), (1.5, 1)], [(1, 0.8), (3, 1)])
    assert rel(wright_psi(spec, 0.4).value, oracle["wright_2psi2_z0.4"]) <= 1e-13


def test_spec_validation():
    with pytest.raises(DomainError):
        WrightSpec([(1, 0)], [(1, 1)])
    with pytest.raises(DomainError):
        WrightSpec([(1, 2), (1, 1)], [(1, 1)])  # 1 + 1 - 3 < 0


def test_radius_boundary():
    spec = WrightSpec([(1, 1), (1, 1)], [(1, 1)])  # 2F1-like, radius 1
    assert spec.excess == 0 and spec.radius == 1.0
    assert rel(wright_psi(spec, 0.5).value, 1 / (1 - 0.5)) <= 1e-12  # sum z^n
    with pytest.raises(DomainError):
        wright_psi(spec, 1.5)


def test_upper_pole_rejected():
    with pytest.raises(DomainError):
        wright_psi(WrightSpec([(-1.0, 1.0)], [(1, 1)]), 0.3)


def test_lower_pole_terms_vanish():
    # 1/Gamma(n - 1) kills n = 0, 1
    v = wright_psi(WrightSpec([(1, 1)], [(-1.0, 1.0)]), 0.5).value
    want = sum(math.gamma(1 + n) / math.gamma(n - 1) * 0.5 ** n / math.factorial(n) for n in range(2, 60))
    assert rel(v, want) <= 1e-13


def test_mellin_spec_slopes():
    pr = MLParams(0.8, 1.5, 1.2, 2.5)
    assert mellin_wright_spec(pr, 1, 1).lower[0] == (1.5, 0.8)
    assert mellin_wright_spec(pr, 1, 1, lower_slope="gamma").lower[0] == (1.5, 1.2)


def test_mellin_closed_form_at_zero():
    pr = MLParams(0.8, 1.5, 1.2, 2.5)
    s, r = 1.5, 2.0
    g, c, b = 1.2, 2.5, 1.5
    want = (math.gamma(s) * math.gamma(r) * math.gamma(c + r - g) * math.gamma(c) * math.gamma(g + s)
            / (math.gamma(g) * math.gamma(c - g) * math.gamma(b) * math.gamma(c + s + r)))
    assert rel(mellin_closed_form(pr, s, r, 0.0).value, want) <= 1e-14


def test_mellin_closed_form_unit_point_prefactor():
    pr = MLParams(0.8, 1.5, 1.2, 2.5)
    pref = math.gamma(2.5 + 1 - 1.2) / (math.gamma(1.2) * math.gamma(2.5 - 1.2))
    psi = wright_psi(WrightSpec([(2.5, 1), (2.2, 1)], [(1.5, 0.8), (4.5, 1)]), 0.3).value
    assert rel(mellin_closed_form(pr, 1, 1, 0.3).value, pref * psi) <= 1e-14


def test_mellin_closed_form_oracle(oracle):
    v = mellin_closed_form(MLParams(1, 1, 1.2, 2.5), 1.5, 2, 0.5).value
    assert rel(v, oracle["mellin_1_1_1.2_2.5_s1.5_r2_z0.5"]) <= 1e-13


def test_mellin_closed_form_rejects_bad_point():
    with pytest.raises(DomainError):
        mellin_closed_form(MLParams(1, 1, 1.2, 2.5), 0.0, 1, 0.5)
