"""Seeded random fields for empirical constants.

Amplitudes on the orthonormal basis are i.i.d. standard normal damped by
``(k^2 + l^2)^-decay``.  For velocities the orthonormal element is
``curl(sin kx sin ly) / ((pi/2) sqrt(k^2 + l^2))``, so stream coefficients carry
an extra ``(k^2 + l^2)^-1/2``.  Each sample is drawn on a fixed ``KMAX x KMAX``
block and truncated, so the samples at bandwidth ``K`` are exactly the leading
blocks of the samples at ``2K``.
"""
from __future__ import annotations

import numpy as np

from ..spectral import STOKES, ScalarField, VelocityField, eigenvalue_table

KMAX = 64
DEFAULT_DECAY = 1.0


def sample_coeffs(seed, index, K, kind=None, decay=DEFAULT_DECAY):
    if K > KMAX:
        raise ValueError(f"bandwidth {K} exceeds sampling block {KMAX}")
    rng = np.random.default_rng([int(seed), int(index)])
    c = rng.standard_normal((KMAX, KMAX))[:K, :K]
    lam = eigenvalue_table(K)
    c = c * lam**-decay
    if kind == STOKES:
        c = c / np.sqrt(lam)
    return c


def sample_field(kind, seed, index, K, decay=DEFAULT_DECAY):
    cls = VelocityField if kind == STOKES else ScalarField
    return cls(sample_coeffs(seed, index, K, kind, decay))


def sample_fields(kind, seed, count, K, decay=DEFAULT_DECAY):
    return [sample_field(kind, seed, i, K, decay) for i in range(count)]


def mode_field(kind, K, k, l, amplitude=1.0):
    """Single basis element ``(k, l)`` at bandwidth ``K``."""
    c = np.zeros((K, K))
    c[k - 1, l - 1] = amplitude
    cls = VelocityField if kind == STOKES else ScalarField
    return cls(c)
