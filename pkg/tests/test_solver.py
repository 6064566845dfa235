import numpy as np
import pytest

from mildflow.errors import Diverged, InvalidTime, NumericalBlowup, ShapeError, TooFewNodes
from mildflow.forcing import make_law
from mildflow.solver import (
    TimeGrid, etd_march, picard_solve, residual_strong, restart_consistency, self_error_estimate, solve,
    trajectory_distance,
)
from mildflow.spectral import ScalarField, VelocityField


def small_data(K=6, amp=1e-2, seed=3):
    rng = np.random.default_rng(seed)
    lam = np.add.outer(np.arange(1, K + 1) ** 2, np.arange(1, K + 1) ** 2)
    c = rng.standard_normal((K, K)) / lam**1.5
    b = rng.standard_normal((K, K)) / lam
    return VelocityField(amp * c / np.abs(c).max()), ScalarField(amp * b / np.abs(b).max())


class TestTimeGrid:
    def test_nodes(self):
        g = TimeGrid(1.0, 0.25)
        assert g.steps == 4
        np.testing.assert_allclose(g.nodes, [0, 0.25, 0.5, 0.75, 1.0])

    def test_fraction_mismatch(self):
        with pytest.raises(InvalidTime):
            TimeGrid(1.0, 0.3)

    def test_bad_values(self):
        with pytest.raises(InvalidTime):
            TimeGrid(1.0, -0.1)
        with pytest.raises(InvalidTime):
            TimeGrid(0.0, 0.1)

    def test_too_few(self):
        with pytest.raises(TooFewNodes):
            TimeGrid(0.5, 0.5)

    def test_tail_and_refine(self):
        g = TimeGrid(1.0, 0.125)
        assert g.tail(4).t_start == 0.5 and g.tail(4).steps == 4
        assert g.refined().steps == 16


@pytest.mark.parametrize("mode", ["picard", "etd"])
def test_linear_exactness(mode):
    K = 4
    b = np.zeros((K, K))
    b[1, 2] = 0.7
    traj = solve(mode, VelocityField.zeros(K), ScalarField(b), make_law("zero"), TimeGrid(1.0, 1 / 16))
    lam = 2**2 + 3**2
    exact = 0.7 * np.exp(-lam * traj.times)
    assert np.max(np.abs(traj.theta[:, 1, 2] - exact) / exact) <= 1e-10
    assert not np.any(traj.u)


@pytest.mark.parametrize("mode", ["picard", "etd"])
def test_zero_data_stays_zero(mode):
    traj = solve(mode, VelocityField.zeros(3), ScalarField.zeros(3), make_law("sin"), TimeGrid(0.5, 1 / 8))
    assert not np.any(traj.u) and not np.any(traj.theta)


def test_pure_velocity_mode_decays_at_eigenvalue():
    # a single stream mode is a steady Euler solution, so it decays like e^{-2t}
    c = np.zeros((3, 3))
    c[0, 0] = 0.3
    traj = etd_march(VelocityField(c), ScalarField.zeros(3), make_law("zero"), TimeGrid(1.0, 1 / 32))
    np.testing.assert_allclose(traj.u[:, 0, 0], 0.3 * np.exp(-2 * traj.times), rtol=1e-10)


def test_picard_contraction():
    u0, th0 = small_data()
    traj, dist = picard_solve(u0, th0, make_law("sin"), TimeGrid(0.5, 1 / 64), max_iter=20, tol=1e-10)
    assert dist[-1] <= 1e-10 and len(dist) <= 20
    d = np.asarray(dist)
    assert np.all(d[2:] / d[1:-1] <= 0.5)


def test_picard_and_etd_agree():
    u0, th0 = small_data()
    grid = TimeGrid(0.5, 1 / 256)
    a, _ = picard_solve(u0, th0, make_law("sin"), grid)
    b = etd_march(u0, th0, make_law("sin"), grid)
    assert trajectory_distance(a, b) <= 1e-3 * 1e-2


def test_diverged_raised():
    u0, th0 = small_data(amp=5.0)
    with pytest.raises((Diverged, NumericalBlowup)):
        picard_solve(u0, th0, make_law("linear-buoyancy", g=50.0), TimeGrid(2.0, 1 / 8), max_iter=3, tol=1e-14)


def test_shape_errors():
    with pytest.raises(ShapeError):
        etd_march(VelocityField.zeros(3), ScalarField.zeros(4), make_law("zero"), TimeGrid(1.0, 0.5))
    with pytest.raises(ShapeError):
        etd_march(ScalarField.zeros(3), ScalarField.zeros(3), make_law("zero"), TimeGrid(1.0, 0.5))


def test_unknown_mode():
    with pytest.raises(ValueError):
        solve("rk4", VelocityField.zeros(2), ScalarField.zeros(2), make_law("zero"), TimeGrid(1.0, 0.5))


@pytest.mark.parametrize("mode", ["picard", "etd"])
def test_restart_consistency(mode):
    u0, th0 = small_data(K=4)
    traj = solve(mode, u0, th0, make_law("sin"), TimeGrid(0.5, 1 / 32))
    assert restart_consistency(traj, 8) <= 1e-10
    with pytest.raises(InvalidTime):
        restart_consistency(traj, 99)


def test_residual_shrinks():
    u0, th0 = small_data(K=4, amp=1e-1)
    law = make_law("linear-buoyancy")
    r = []
    for dt in (1 / 64, 1 / 128):
        ru, rt = residual_strong(etd_march(u0, th0, law, TimeGrid(1.0, dt)))
        r.append(max(ru.max(), rt.max()))
    assert r[1] < r[0] / 2


def test_self_error_estimate_tracks_true_error():
    # second order: halving dt removes ~3/4 of the error, so estimate ~ 0.75 x true error
    u0, th0 = small_data(K=4)
    law = make_law("sin")
    traj = etd_march(u0, th0, law, TimeGrid(0.5, 1 / 64))
    ref = etd_march(u0, th0, law, TimeGrid(0.5, 1 / 1024))
    true = trajectory_distance(traj, type(traj)(traj.grid, ref.u[::16], ref.theta[::16], law, "etd"))
    assert 0.5 * true <= self_error_estimate(traj) <= 1.0 * true


def test_norm_histories():
    u0, th0 = small_data(K=4)
    traj = etd_march(u0, th0, make_law("sin"), TimeGrid(0.5, 1 / 16))
    nu, nt = traj.l2_norms()
    assert nu.shape == nt.shape == traj.times.shape
    fu, ft = traj.fractional_norms(0.5, 0.5)
    assert np.all(fu >= nu * np.sqrt(2) * (1 - 1e-12))
