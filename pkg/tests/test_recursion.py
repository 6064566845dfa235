import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mildflow.errors import DegenerateConstants, DomainError, InvalidRate
from mildflow.exponents.planner import BaseExponents, plan_exponents
from mildflow.exponents.recursion import (
    GrowthConstants, KValues, beta_function, diagonal_semigroup_constant, estimate_local_time, k0_functions,
    k_recursion, recursion_coefficients,
)
from mildflow.spectral import ScalarField, VelocityField

PLAN = plan_exponents(BaseExponents(2, 2.0, 2.0, 0.5, 0.5))


@given(st.floats(0.01, 30), st.floats(0.01, 30))
def test_beta_against_mpmath(x, y):
    assert beta_function(x, y) == pytest.approx(float(mp.beta(x, y)), rel=1e-12)


def test_beta_domain():
    with pytest.raises(DomainError):
        beta_function(0.0, 1.0)
    assert beta_function(1, 1) == 1.0
    assert beta_function(0.5, 0.5) == pytest.approx(math.pi)


def test_diagonal_constant_is_sup():
    for alpha, lam in ((0.5, 1.0), (1.0, 1.0), (0.3, 0.0)):
        t = np.geomspace(1e-4, 50, 4000)[:, None]
        mu = np.geomspace(2, 1e5, 4000)[None, :]
        brute = np.max((mu * t) ** alpha * np.exp(-(mu - lam) * t))
        C = diagonal_semigroup_constant(alpha, lam)
        assert brute <= C + 1e-12 and brute >= C * (1 - 1e-3)
    with pytest.raises(InvalidRate):
        diagonal_semigroup_constant(0.5, 2.0)


def test_constants_validation():
    with pytest.raises(DegenerateConstants):
        GrowthConstants(C1=0.0)
    with pytest.raises(DegenerateConstants):
        GrowthConstants(L_f=float("inf"))


def constant_k0(v):
    return KValues(*[lambda t, v=v: np.full_like(np.asarray(t, float), v)] * 4)


def test_recursion_zero_step_is_k0():
    k = k_recursion(PLAN, GrowthConstants(), constant_k0(0.1), 0.5, 0)
    assert k == KValues(0.1, 0.1, 0.1, 0.1)


def test_recursion_monotone_in_steps():
    t = np.linspace(0, 0.2, 9)
    prev = None
    for m in range(5):
        k = k_recursion(PLAN, GrowthConstants(), constant_k0(0.05), t, m)
        if prev is not None:
            for a, b in zip(prev, k):
                assert np.all(b >= a - 1e-15)
        prev = k


def test_recursion_one_step_formula():
    c = GrowthConstants()
    coef = recursion_coefficients(PLAN, c)
    t = 0.3
    k1 = k_recursion(PLAN, c, constant_k0(0.1), t, 1)
    cv, ev, cf, ef = coef["alpha1"]
    assert k1.alpha1 == pytest.approx(0.1 + cv * 0.01 * t**ev + cf * 0.1 * t**ef)
    ct, et, cd, ed = coef["beta2"]
    assert k1.beta2 == pytest.approx(0.1 + ct * 0.01 * t**et + cd * 0.01 * t**ed)


def test_local_time_shrinks_with_data():
    c = GrowthConstants()
    small = estimate_local_time(PLAN, c, constant_k0(1e-3))
    big = estimate_local_time(PLAN, c, constant_k0(1e-1))
    assert big.T1 <= small.T1
    assert small.margin >= 0.05 - 1e-12
    with pytest.raises(DegenerateConstants):
        estimate_local_time(PLAN, c, constant_k0(10.0))


def test_k0_functions_vanish_at_zero_for_raised_exponent():
    K = 4
    c = np.zeros((K, K))
    c[0, 0] = 0.1
    k0 = k0_functions(PLAN, VelocityField(c), ScalarField(c), t_max=1.0, nodes=256)
    assert float(k0.alpha1(0.0)) == 0.0
    ts = np.linspace(0.01, 1, 20)
    assert np.all(np.diff(k0.beta2(ts)) >= 0)


def test_beta_small_integers():
    assert beta_function(2, 3) == pytest.approx(1 / 12, rel=1e-14)
    assert beta_function(50, 50) == pytest.approx(float(mp.beta(50, 50)), rel=1e-10)
