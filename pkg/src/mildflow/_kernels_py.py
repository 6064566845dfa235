"""NumPy implementations of the quadratic-cost kernels (fallback for the compiled module)."""
from __future__ import annotations

import numpy as np


def volterra_lag_solve(g, left0, lag, denom, z0):
    """Solve ``z_i = (g_i + left0[i] z_0 + sum_{m=1}^{i-1} lag[i-m] z_m) / denom`` for ``i >= 1``.

    ``g``, ``left0`` and ``lag`` have length ``M + 1``; entry 0 of ``lag`` is unused.
    """
    M = g.shape[0] - 1
    z = np.empty(M + 1)
    z[0] = z0
    rev = lag[::-1]  # rev[M - n] = lag[n]
    for i in range(1, M + 1):
        # sum_{m=1}^{i-1} lag[i-m] z[m]
        s = np.dot(rev[M - i + 1:M], z[1:i]) if i > 1 else 0.0
        z[i] = (g[i] + left0[i] * z0 + s) / denom
    return z


def pairwise_holder_sup(V, t, gamma, split, use_max, t_min):
    """``sup_{i<j, t_i >= t_min} (|V_j - V_i|_a + |V_j - V_i|_b) / (t_j - t_i)^gamma``.

    Columns ``[:split]`` and ``[split:]`` are normed separately (Euclidean, or max-abs
    when ``use_max``) and the two norms are added.  Returns ``(sup, i, j)``.
    """
    M = V.shape[0]
    best, bi, bj = 0.0, -1, -1
    start = int(np.searchsorted(t, t_min - 1e-14 * max(1.0, abs(t_min))))
    for i in range(start, M - 1):
        d = V[i + 1:] - V[i]
        if use_max:
            n = np.abs(d[:, :split]).max(axis=1, initial=0.0) + np.abs(d[:, split:]).max(axis=1, initial=0.0)
        else:
            n = np.sqrt(np.einsum("ij,ij->i", d[:, :split], d[:, :split])) + np.sqrt(
                np.einsum("ij,ij->i", d[:, split:], d[:, split:]))
        q = n / (t[i + 1:] - t[i]) ** gamma
        k = int(np.argmax(q))
        if q[k] > best:
            best, bi, bj = float(q[k]), i, i + 1 + k
    return best, bi, bj
