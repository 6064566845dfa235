"""Nonlinear terms of the velocity/temperature system.

``F(u, theta) = -P (u.grad) u + P f(theta)`` and
``G(u, theta) = -(u.grad) theta + Phi(u, u)``.
"""
from __future__ import annotations

from . import _galerkin as gk
from .errors import ShapeError
from .spectral import ScalarField, VelocityField


def _resolve(K, N):
    return gk.quadrature(K, 2 * K if N is None else int(N))


def _need(obj, cls, name):
    if not isinstance(obj, cls):
        raise ShapeError(f"{name} must be a {cls.__name__}, got {type(obj).__name__}")


def _same_band(*fields):
    bands = {f.bandwidth for f in fields}
    if len(bands) != 1:
        raise ShapeError(f"bandwidth mismatch: {sorted(bands)}")
    return bands.pop()


def dissipation(u, v, N=None):
    """``2 D(u):D(v)`` projected onto the temperature basis (exact for ``N >= 2K - 1``)."""
    _need(u, VelocityField, "u")
    _need(v, VelocityField, "v")
    q = _resolve(_same_band(u, v), N)
    d = u.coeffs if v is u else v.coeffs
    return ScalarField(gk.dissipation(q, u.coeffs, d))


def dissipation_grid(u, v, N=None):
    """Pointwise ``2 D(u):D(v)`` on the closed grid ``j pi/(N+1)``, ``0 <= j <= N+1``."""
    _need(u, VelocityField, "u")
    _need(v, VelocityField, "v")
    q = _resolve(_same_band(u, v), N)
    d = u.coeffs if v is u else v.coeffs
    return gk.dissipation_values(q, u.coeffs, d)


def convection_velocity(u, N=None):
    """``-P (u.grad) u`` truncated to the bandwidth of ``u``."""
    _need(u, VelocityField, "u")
    q = _resolve(u.bandwidth, N)
    return VelocityField(gk.convection_velocity(q, u.coeffs))


def buoyancy(theta, law, N=None):
    """``P f(theta)`` with ``f`` sampled at the interior nodes."""
    _need(theta, ScalarField, "theta")
    q = _resolve(theta.bandwidth, N)
    return VelocityField(gk.buoyancy(q, theta.coeffs, law))


def convection_temperature(u, theta, N=None):
    """``-(u.grad) theta`` truncated to the common bandwidth."""
    _need(u, VelocityField, "u")
    _need(theta, ScalarField, "theta")
    q = _resolve(_same_band(u, theta), N)
    return ScalarField(gk.convection_temperature(q, u.coeffs, theta.coeffs))


def rhs_full(u, theta, law, N=None):
    F = convection_velocity(u, N) + buoyancy(theta, law, N)
    G = convection_temperature(u, theta, N) + dissipation(u, u, N)
    return F, G


def rhs_coeffs(c, b, law, N=None):
    """Array form of ``rhs_full`` on stream/temperature coefficients with leading batch axes."""
    if c.shape != b.shape:
        raise ShapeError(f"coefficient shapes differ: {c.shape} vs {b.shape}")
    q = _resolve(c.shape[-1], N)
    F = gk.convection_velocity(q, c) + gk.buoyancy(q, b, law)
    G = gk.convection_temperature(q, c, b) + gk.dissipation(q, c, c)
    return F, G
