"""Exact Galerkin projections of the quadratic terms.

Products are sampled on the closed grid ``x_j = j pi / M`` (``M = N + 1``) and
integrated against the basis with trapezoid weights.  For band-limited inputs
the trapezoid rule is exact, so the projections carry no aliasing error:

* ``(u.grad) theta`` and ``(u.grad) u`` need ``M > 3K/2``;
* the dissipation (a cosine series of degree ``2K``) is first recovered by a
  DCT-I, which needs ``M >= 2K``, then moved onto the sine basis analytically.

All routines accept coefficient arrays with arbitrary leading batch axes.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ResolutionError
from .spectral import VELOCITY_NORM2, eigenvalue_table


def sine_cosine_transfer(m_max, k_max):
    """``I[m-1, k] = int_0^pi sin(m x) cos(k x) dx`` for ``1 <= m <= m_max``, ``0 <= k <= k_max``."""
    m = np.arange(1, m_max + 1, dtype=float)[:, None]
    k = np.arange(0, k_max + 1, dtype=float)[None, :]
    odd = (m + k) % 2 == 1
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(odd, 2.0 * m / (m * m - k * k), 0.0)
    return out


class Quadrature:
    """Matrices for bandwidth ``K`` on interior resolution ``N``."""

    def __init__(self, K, N):
        if N < 2 * K - 1:
            raise ResolutionError(f"grid resolution {N} too coarse to dealias bandwidth {K}")
        M = N + 1
        self.K, self.N, self.M = K, N, M
        x = np.arange(M + 1) * np.pi / M
        k = np.arange(1, K + 1, dtype=float)
        self.k = k
        S = np.sin(np.outer(k, x))
        S[:, [0, -1]] = 0.0
        C = np.cos(np.outer(k, x))
        w = np.full(M + 1, np.pi / M)
        w[[0, -1]] *= 0.5
        self.S, self.C, self.w = S, C, w
        self.Sw, self.Cw = S * w, C * w

        # DCT-I onto cos(j x), j = 0..M, then the sine transfer
        j = np.arange(M + 1, dtype=float)
        D = (2.0 / M) * np.cos(np.outer(j, x)) * (w * M / np.pi)
        D[[0, -1]] *= 0.5
        self.T = sine_cosine_transfer(K, M) @ D

        # sine series of interior data, then int h(x) cos(kx) dx
        xi = x[1:-1]
        m = np.arange(1, M, dtype=float)
        Sfull = (2.0 / M) * np.sin(np.outer(m, xi))
        U = sine_cosine_transfer(M - 1, K)[:, 1:].T @ Sfull
        self.U = U
        self.Si = S[:, 1:-1]
        self.Siw = self.Si * (np.pi / M)

        lam = eigenvalue_table(K)
        self.vel_scale = 1.0 / (VELOCITY_NORM2 * lam)

    # evaluation on the closed grid --------------------------------------

    def scalar(self, b):
        f = 2.0 / np.pi
        S, C, k = self.S, self.C, self.k
        th = f * (S.T @ b @ S)
        thx = f * (C.T @ (b * k[:, None]) @ S)
        thy = f * (S.T @ (b * k[None, :]) @ C)
        return th, thx, thy

    def velocity(self, c):
        S, C, k = self.S, self.C, self.k
        u1 = S.T @ (c * k[None, :]) @ C
        u2 = -(C.T @ (c * k[:, None]) @ S)
        return u1, u2

    def velocity_gradient(self, c):
        S, C, k = self.S, self.C, self.k
        ckl = c * k[:, None] * k[None, :]
        u1x = C.T @ ckl @ C
        u1y = -(S.T @ (c * (k * k)[None, :]) @ S)
        u2x = S.T @ (c * (k * k)[:, None]) @ S
        return u1x, u1y, u2x, -u1x

    # projections ---------------------------------------------------------

    def project_scalar(self, g):
        """Coefficients on ``(2/pi) sin sin`` of an (s,s)-class closed-grid field."""
        return (2.0 / np.pi) * (self.Sw @ g @ self.Sw.T)

    def project_velocity(self, w1, w2):
        """Stream coefficients of the L2 projection of an (s,c),(c,s)-class field."""
        k = self.k
        num = (self.Sw @ w1 @ self.Cw.T) * k[None, :] - (self.Cw @ w2 @ self.Sw.T) * k[:, None]
        return num * self.vel_scale

    def project_cosine(self, g):
        """Sine coefficients of a (c,c)-class field of degree <= M in each variable."""
        return (2.0 / np.pi) * (self.T @ g @ self.T.T)

    def project_interior_vector(self, g1, g2):
        """Stream coefficients of the L2 projection of interior (s,s)-class samples."""
        k = self.k
        num = (self.Siw @ g1 @ self.U.T) * k[None, :] - (self.U @ g2 @ self.Siw.T) * k[:, None]
        return num * self.vel_scale

    def interior_scalar(self, b):
        Si = self.Si
        return (2.0 / np.pi) * (Si.T @ b @ Si)


@lru_cache(maxsize=64)
def quadrature(K, N):
    return Quadrature(K, N)


def convection_temperature(q, c, b):
    u1, u2 = q.velocity(c)
    _, thx, thy = q.scalar(b)
    return -q.project_scalar(u1 * thx + u2 * thy)


def convection_velocity(q, c, d=None):
    """``-P (u.grad) v`` for stream coefficients ``c`` (u) and ``d`` (v, default u)."""
    u1, u2 = q.velocity(c)
    v1x, v1y, v2x, v2y = q.velocity_gradient(c if d is None else d)
    return -q.project_velocity(u1 * v1x + u2 * v1y, u1 * v2x + u2 * v2y)


def dissipation_values(q, c, d):
    a1x, a1y, a2x, a2y = q.velocity_gradient(c)
    if d is c:
        sa = a1y + a2x
        return 2.0 * (a1x * a1x + a2y * a2y) + sa * sa
    b1x, b1y, b2x, b2y = q.velocity_gradient(d)
    return 2.0 * (a1x * b1x + a2y * b2y) + (a1y + a2x) * (b1y + b2x)


def dissipation(q, c, d):
    return q.project_cosine(dissipation_values(q, c, d))


def buoyancy(q, b, law):
    g1, g2 = law.evaluate(q.interior_scalar(b))
    return q.project_interior_vector(g1, g2)
