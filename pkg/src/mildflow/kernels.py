"""Kernel dispatch: the compiled extension when importable, NumPy otherwise.

Set ``MILDFLOW_PURE_PYTHON=1`` to force the NumPy path.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("MILDFLOW_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py


def volterra_lag_solve(g, left0, lag, denom, z0, impl=None):
    impl = impl or _impl
    f = np.ascontiguousarray
    return impl.volterra_lag_solve(f(g, dtype=float), f(left0, dtype=float), f(lag, dtype=float),
                                   float(denom), float(z0))


def pairwise_holder_sup(V, t, gamma, split, use_max=False, t_min=0.0, impl=None):
    impl = impl or _impl
    V = np.ascontiguousarray(V, dtype=float)
    t = np.ascontiguousarray(t, dtype=float)
    return impl.pairwise_holder_sup(V, t, float(gamma), int(split), bool(use_max), float(t_min))
