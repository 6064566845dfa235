"""Exponential-integrator weights ``phi_0, phi_1, phi_2``."""
from __future__ import annotations

from math import factorial

import numpy as np

_SERIES_RADIUS = 1.0
_SERIES_TERMS = 20


def _series(z, order):
    # phi_k(z) = sum_j z^j / (j + k)!  (Horner)
    out = np.full_like(z, 1.0 / factorial(_SERIES_TERMS - 1 + order))
    for j in range(_SERIES_TERMS - 2, -1, -1):
        out = out * z + 1.0 / factorial(j + order)
    return out


def phi(z, order):
    """Vectorized ``phi_order(z)`` for ``order`` in {0, 1, 2}."""
    if order not in (0, 1, 2):
        raise ValueError(f"phi order must be 0, 1 or 2, got {order}")
    z = np.asarray(z, dtype=float)
    if order == 0:
        return np.exp(z)
    small = np.abs(z) < _SERIES_RADIUS
    zs = np.where(small, z, 0.0)
    zl = np.where(small, 1.0, z)
    em1 = np.expm1(zl)
    direct = em1 / zl if order == 1 else (em1 - zl) / (zl * zl)
    return np.where(small, _series(zs, order), direct)


def phi_functions(z, order):
    """Scalar ``phi_order(z)``."""
    return float(phi(z, order))
