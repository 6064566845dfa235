import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mildflow import _kernels_py, kernels
from mildflow.lab.gronwall import random_spec, volterra_oracle

compiled = pytest.importorskip("mildflow._kernels")


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), M=st.integers(2, 60))
def test_volterra_solve_agrees(seed, M):
    rng = np.random.default_rng(seed)
    g, left0, lag = rng.standard_normal((3, M + 1))
    a = _kernels_py.volterra_lag_solve(g, left0, lag, 1.3, 0.2)
    b = compiled.volterra_lag_solve(g, left0, lag, 1.3, 0.2)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_volterra_solve_direct():
    # z_i = (g_i + left0_i z_0 + sum lag[i-m] z_m) / denom written out for M = 3
    g, left0, lag = np.array([0, 1.0, 2.0, 3.0]), np.array([0, 0.5, 0.25, 0.125]), np.array([0, 0.1, 0.2, 0.3])
    z0, d = 2.0, 2.0
    z1 = (1 + 0.5 * z0) / d
    z2 = (2 + 0.25 * z0 + 0.1 * z1) / d
    z3 = (3 + 0.125 * z0 + 0.2 * z1 + 0.1 * z2) / d
    for impl in (_kernels_py, compiled):
        np.testing.assert_allclose(impl.volterra_lag_solve(g, left0, lag, d, z0), [z0, z1, z2, z3], rtol=1e-15)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), use_max=st.booleans(), gamma=st.floats(0.1, 1.5))
def test_holder_agrees(seed, use_max, gamma):
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((30, 7))
    t = np.cumsum(rng.uniform(0.01, 0.1, 30))
    a = _kernels_py.pairwise_holder_sup(V, t, gamma, 3, use_max, t[4])
    b = compiled.pairwise_holder_sup(V, t, gamma, 3, use_max, t[4])
    assert a[0] == pytest.approx(b[0], rel=1e-12)
    assert a[1:] == b[1:]


def test_holder_brute_force():
    rng = np.random.default_rng(1)
    V = rng.standard_normal((12, 4))
    t = np.linspace(0, 1, 12)
    best = max((np.linalg.norm(V[j, :2] - V[i, :2]) + np.linalg.norm(V[j, 2:] - V[i, 2:])) / (t[j] - t[i]) ** 0.7
               for i in range(12) for j in range(i + 1, 12))
    assert kernels.pairwise_holder_sup(V, t, 0.7, 2)[0] == pytest.approx(best, rel=1e-13)


def test_oracle_identical_across_backends():
    spec = random_spec(3)
    _, a = volterra_oracle(spec, 256, impl=_kernels_py)
    _, b = volterra_oracle(spec, 256, impl=compiled)
    np.testing.assert_allclose(a, b, rtol=1e-12)
