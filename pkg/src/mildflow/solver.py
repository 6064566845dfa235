"""Mild solutions by whole-trajectory Picard iteration or exponential time stepping.

Both schemes work in eigencoordinates, where the linear flow is ``exp(-lam t)``
for ``lam = k^2 + l^2`` (the same table for velocity and temperature).  Between
nodes the nonlinearity is reconstructed linearly and its convolution with the
exponential kernel is integrated exactly with ``phi_1`` and ``phi_2``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import Diverged, InvalidTime, NumericalBlowup, ShapeError, TooFewNodes
from .expint import phi
from .forcing import ForcingLaw
from .rhs import rhs_coeffs
from .spectral import (
    STOKES,
    TEMPERATURE,
    ScalarField,
    VelocityField,
    eigenvalue_table,
    l2_norm_coeffs,
)

log = logging.getLogger(__name__)

BLOWUP_FACTOR = 1e8
MODES = ("picard", "etd")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform nodes ``t_start = t_0 < ... < t_M = t_end``."""

    t_end: float
    dt: float
    t_start: float = 0.0
    min_steps: int = field(default=2, repr=False, compare=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidTime(f"dt must be > 0, got {self.dt}")
        span = self.t_end - self.t_start
        if not span > 0:
            raise InvalidTime(f"t_end must exceed t_start, got [{self.t_start}, {self.t_end}]")
        M = int(round(span / self.dt))
        if abs(M * self.dt - span) > 1e-9 * span:
            raise InvalidTime(f"dt={self.dt} does not divide the interval length {span}")
        if M < self.min_steps:
            raise TooFewNodes(f"time grid needs at least {self.min_steps} steps, got {M}")

    @property
    def steps(self):
        return int(round((self.t_end - self.t_start) / self.dt))

    @property
    def nodes(self):
        t = self.t_start + self.dt * np.arange(self.steps + 1)
        t[-1] = self.t_end
        return t

    def tail(self, j):
        return TimeGrid(self.t_end, self.dt, float(self.nodes[j]), min_steps=1)

    def refined(self, factor=2):
        return TimeGrid(self.t_end, self.dt / factor, self.t_start, self.min_steps)


@dataclass(frozen=True, eq=False)
class MildTrajectory:
    """Coefficient histories ``u`` (stream) and ``theta``, each shaped ``(M+1, K, K)``."""

    grid: TimeGrid
    u: np.ndarray
    theta: np.ndarray
    law: ForcingLaw
    mode: str
    iterations_used: int | None = None
    resolution: int | None = None
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.u.shape != self.theta.shape or self.u.shape[0] != self.grid.steps + 1:
            raise ShapeError("trajectory arrays do not match the time grid")
        for a in (self.u, self.theta):
            a.setflags(write=False)

    @property
    def bandwidth(self):
        return self.u.shape[-1]

    @property
    def times(self):
        return self.grid.nodes

    @property
    def u_series(self):
        return [VelocityField(c) for c in self.u]

    @property
    def theta_series(self):
        return [ScalarField(c) for c in self.theta]

    def l2_norms(self):
        return l2_norm_coeffs(self.u, STOKES), l2_norm_coeffs(self.theta, TEMPERATURE)

    def fractional_norms(self, alpha, beta=None):
        """``||A^alpha u(t)||_2`` and ``||B^beta theta(t)||_2`` per node."""
        beta = alpha if beta is None else beta
        lam = eigenvalue_table(self.bandwidth)
        return (
            l2_norm_coeffs(self.u * lam**alpha, STOKES),
            l2_norm_coeffs(self.theta * lam**beta, TEMPERATURE),
        )


def _coeffs(u0, theta0):
    if not isinstance(u0, VelocityField) or not isinstance(theta0, ScalarField):
        raise ShapeError("initial data must be (VelocityField, ScalarField)")
    if u0.bandwidth != theta0.bandwidth:
        raise ShapeError(f"bandwidth mismatch: {u0.bandwidth} vs {theta0.bandwidth}")
    return u0.coeffs, theta0.coeffs


def _panel_weights(lam, h):
    z = -lam * h
    p1, p2 = phi(z, 1), phi(z, 2)
    return np.exp(z), h * p1, h * p2


class _Guard:
    def __init__(self, c0, b0):
        self.ref = float(l2_norm_coeffs(c0, STOKES) + l2_norm_coeffs(b0, TEMPERATURE))

    def check(self, c, b, partial=None):
        try:
            self._check(c, b)
        except NumericalBlowup as exc:
            exc.partial = partial() if callable(partial) else partial
            raise

    def _check(self, c, b):
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(b))):
            raise NumericalBlowup("non-finite values in solution")
        if self.ref > 0:
            size = np.max(l2_norm_coeffs(c, STOKES) + l2_norm_coeffs(b, TEMPERATURE))
            if size > BLOWUP_FACTOR * self.ref:
                raise NumericalBlowup(f"solution norm {size:.3e} exceeds {BLOWUP_FACTOR:.0e} x initial")


def _linear_flow(c0, b0, grid):
    lam = eigenvalue_table(c0.shape[-1])
    decay = np.exp(-np.multiply.outer(grid.nodes - grid.t_start, lam))
    return decay * c0, decay * b0


def _duhamel(Nv, E, W1, W2):
    # I_{i+1} = e^z I_i + h(phi1 - phi2) N_i + h phi2 N_{i+1}
    out = np.zeros_like(Nv)
    A, B = W1 - W2, W2
    for i in range(Nv.shape[0] - 1):
        out[i + 1] = E * out[i] + A * Nv[i] + B * Nv[i + 1]
    return out


def _distance(c1, b1, c0, b0):
    return float(np.max(l2_norm_coeffs(c1 - c0, STOKES) + l2_norm_coeffs(b1 - b0, TEMPERATURE)))


def picard_solve(u0, theta0, law, grid, max_iter=50, tol=1e-10, N=None):
    """Successive approximation of the Duhamel equations on the whole grid.

    Iterate 0 is the free linear flow.  Returns ``(trajectory, distances)`` where
    ``distances[m]`` is the sup over nodes of the L2 step between iterates m and m+1.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    c0, b0 = _coeffs(u0, theta0)
    lam = eigenvalue_table(c0.shape[-1])
    E, W1, W2 = _panel_weights(lam, grid.dt)
    lin_c, lin_b = _linear_flow(c0, b0, grid)
    guard = _Guard(c0, b0)
    settings = {"max_iter": max_iter, "tol": tol}

    def build(c, b, iters):
        c, b = c.copy(), b.copy()
        c[0], b[0] = c0, b0
        return MildTrajectory(grid, c, b, law, "picard", iters, N, settings)

    c, b = lin_c, lin_b
    distances = []
    for m in range(max_iter):
        F, G = rhs_coeffs(c, b, law, N)
        c_new = lin_c + _duhamel(F, E, W1, W2)
        b_new = lin_b + _duhamel(G, E, W1, W2)
        guard.check(c_new, b_new, partial=lambda: build(c, b, m))
        distances.append(_distance(c_new, b_new, c, b))
        c, b = c_new, b_new
        log.debug("picard iterate %d distance %.3e", m + 1, distances[-1])
        if distances[-1] <= tol:
            return build(c, b, m + 1), distances
    raise Diverged(
        f"Picard iteration did not reach tol={tol} in {max_iter} iterations "
        f"(last distance {distances[-1]:.3e})",
        trajectory=build(c, b, max_iter),
        distances=distances,
    )


def etd_march(u0, theta0, law, grid, N=None):
    """Second-order exponential Runge-Kutta stepping (ETD2RK)."""
    c0, b0 = _coeffs(u0, theta0)
    lam = eigenvalue_table(c0.shape[-1])
    E, W1, W2 = _panel_weights(lam, grid.dt)
    M = grid.steps
    c = np.empty((M + 1,) + c0.shape)
    b = np.empty_like(c)
    c[0], b[0] = c0, b0
    guard = _Guard(c0, b0)

    def partial(i):
        # states up to and including node i
        sub = TimeGrid(float(grid.nodes[i]), grid.dt, grid.t_start, min_steps=1)
        return lambda: MildTrajectory(sub, c[: i + 1].copy(), b[: i + 1].copy(), law, "etd", None, N)

    for i in range(M):
        Fx, Gx = rhs_coeffs(c[i], b[i], law, N)
        ac = E * c[i] + W1 * Fx
        ab = E * b[i] + W1 * Gx
        Fa, Ga = rhs_coeffs(ac, ab, law, N)
        c[i + 1] = ac + W2 * (Fa - Fx)
        b[i + 1] = ab + W2 * (Ga - Gx)
        guard.check(c[i + 1], b[i + 1], partial=partial(i) if i > 0 else None)
    return MildTrajectory(grid, c, b, law, "etd", None, N)


def solve(mode, u0, theta0, law, grid, N=None, **picard_kw):
    """Dispatch on ``mode``; Picard returns only the trajectory here."""
    if mode == "picard":
        return picard_solve(u0, theta0, law, grid, N=N, **picard_kw)[0]
    if mode == "etd":
        return etd_march(u0, theta0, law, grid, N=N)
    raise ValueError(f"unknown solver mode {mode!r}; expected one of {MODES}")


def _rerun(traj, grid, c0, b0):
    kw = dict(traj.settings) if traj.mode == "picard" else {}
    return solve(traj.mode, VelocityField(c0), ScalarField(b0), traj.law, grid, traj.resolution, **kw)


def residual_strong(traj):
    """Relative strong-form residuals ``(r_u, r_theta)`` at the interior nodes."""
    M = traj.grid.steps
    if M < 2:
        raise TooFewNodes("residual needs at least 3 nodes")
    lam = eigenvalue_table(traj.bandwidth)
    c, b = traj.u, traj.theta
    F, G = rhs_coeffs(c[1:-1], b[1:-1], traj.law, traj.resolution)
    h2 = 2.0 * traj.grid.dt
    out = []
    for x, Nx, kind in ((c, F, STOKES), (b, G, TEMPERATURE)):
        Ax = lam * x[1:-1]
        res = (x[2:] - x[:-2]) / h2 + Ax - Nx
        out.append(l2_norm_coeffs(res, kind) / np.maximum(1.0, l2_norm_coeffs(Ax, kind)))
    return out[0], out[1]


def trajectory_distance(a, b):
    """Sup over common nodes of ``||u_a - u_b||_2 + ||theta_a - theta_b||_2``."""
    return _distance(a.u, a.theta, b.u, b.theta)


def restart_consistency(traj, j):
    """Re-solve from node ``j`` with the same scheme and compare against the stored tail."""
    M = traj.grid.steps
    if not 0 <= j < M:
        raise InvalidTime(f"restart node must satisfy 0 <= j < {M}, got {j}")
    grid = traj.grid if j == 0 else traj.grid.tail(j)
    rerun = _rerun(traj, grid, traj.u[j], traj.theta[j])
    return _distance(rerun.u, rerun.theta, traj.u[j:], traj.theta[j:])


def self_error_estimate(traj):
    """Distance to the same run at half the step, on the shared nodes."""
    fine = _rerun(traj, traj.grid.refined(2), traj.u[0], traj.theta[0])
    return _distance(fine.u[::2], fine.theta[::2], traj.u, traj.theta)
