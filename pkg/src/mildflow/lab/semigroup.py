"""Empirical semigroup, Hoelder-in-time and embedding constants."""
from __future__ import annotations

from math import comb

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import InvalidExponent, InvalidIndices, InvalidRate
from ..exponents.recursion import diagonal_semigroup_constant
from ..spectral import STOKES, VELOCITY_NORM2, eigenvalue_table, make_operator, norm_fractional
from .report import STABILITY_TOL, EstimateReport, relative_change
from .sampling import KMAX, mode_field, sample_fields

DIM = 2


def default_times(alpha=0.0, lam=0.0):
    t = np.concatenate([[0.0, 1.0], np.geomspace(1e-4, 1e2, 600)])
    if alpha > 0 and lam < 2:
        t = np.append(t, alpha / (2 - lam))
    return np.unique(t)


def _energy(fields):
    """Per-mode L2 energy ``|c|^2 * w(lam)`` for each field, shape ``(S, K*K)``."""
    lam = eigenvalue_table(fields[0].bandwidth).ravel()
    c = np.stack([f.coeffs.ravel() for f in fields])
    e = c * c
    if fields[0].kind == STOKES:
        e = e * (VELOCITY_NORM2 * lam)
    return lam, e


def _semigroup_sup(fields, alpha, lam, times):
    ev, e = _energy(fields)
    total = e.sum(axis=1)
    ok = total > 0
    decay = np.exp(-2.0 * np.outer(times, ev)) * ev ** (2 * alpha)  # (T, modes)
    num = np.sqrt(decay @ e[ok].T)  # (T, S)
    weight = np.power(times, alpha) * np.exp(lam * times)
    ratio = weight[:, None] * num / np.sqrt(total[ok])[None, :]
    return float(ratio.max(initial=0.0))


def estimate_semigroup_constant(op, alpha, lam, samples=100, times=None, seed=0, fields=None):
    """``sup t^alpha e^{lam t} ||A^alpha e^{-tA} f|| / ||f||`` over samples and times."""
    if not 0 <= lam < op.first_eigenvalue:
        raise InvalidRate(f"rate must satisfy 0 <= lam < {op.first_eigenvalue}, got {lam}")
    if alpha < 0:
        raise InvalidExponent("alpha must be >= 0")
    times = default_times(alpha, lam) if times is None else np.asarray(times, dtype=float)
    K = op.bandwidth
    given = fields is not None
    fields = list(fields) if given else sample_fields(op.kind, seed, samples, K)
    const = _semigroup_sup(fields, alpha, lam, times)
    stable = None
    if not given and 2 * K <= KMAX:
        fine = _semigroup_sup(sample_fields(op.kind, seed, samples, 2 * K), alpha, lam, times)
        stable = relative_change(const, fine) <= STABILITY_TOL
    return EstimateReport(
        "semigroup", const, len(fields), K, stable, None if given else seed,
        {"alpha": alpha, "lam": lam, "envelope": diagonal_semigroup_constant(alpha, lam)},
    )


def scalar_holder_bound(alpha):
    """``sup_{x>0} (1 - e^{-x}) / x^alpha`` (equals 1 at ``alpha = 1``)."""
    if not 0 < alpha <= 1:
        raise InvalidExponent("alpha must lie in (0, 1]")
    if alpha == 1:
        return 1.0
    res = minimize_scalar(lambda s: -(-np.expm1(-np.exp(s))) / np.exp(alpha * s),
                          bounds=(-20, 20), method="bounded", options={"xatol": 1e-12})
    return float(-res.fun)


def _holder_sup(fields, alpha, times):
    ev, e = _energy(fields)
    den = np.sqrt(e @ ev ** (2 * alpha))
    ok = den > 0
    t = times[times > 0]
    num = np.sqrt(np.expm1(-np.outer(t, ev)) ** 2 @ e[ok].T)
    return float((num / (np.power(t, alpha)[:, None] * den[ok][None, :])).max(initial=0.0))


def estimate_holder_constant(op, alpha, samples=100, times=None, seed=0, fields=None):
    """``sup ||(e^{-tA} - I) f|| / (t^alpha ||A^alpha f||)`` over samples and a log time grid."""
    if not 0 < alpha <= 1:
        raise InvalidExponent("alpha must lie in (0, 1]")
    times = np.geomspace(1e-6, 1e2, 800) if times is None else np.asarray(times, dtype=float)
    K = op.bandwidth
    given = fields is not None
    fields = list(fields) if given else sample_fields(op.kind, seed, samples, K)
    const = _holder_sup(fields, alpha, times)
    stable = None
    if not given and 2 * K <= KMAX:
        fine = _holder_sup(sample_fields(op.kind, seed, samples, 2 * K), alpha, times)
        stable = relative_change(const, fine) <= STABILITY_TOL
    return EstimateReport("holder", const, len(fields), K, stable, None if given else seed,
                          {"alpha": alpha, "scalar_bound": scalar_holder_bound(alpha)})


def small_time_profile(op, alpha, field, levels=40):
    """``t^alpha ||A^alpha e^{-tA} f||`` along ``t = 2^-k``, ``k = 0..levels``."""
    t = 2.0 ** -np.arange(levels + 1)
    ev, e = _energy([field])
    vals = np.power(t, alpha) * np.sqrt(np.exp(-2.0 * np.outer(t, ev)) * ev ** (2 * alpha) @ e[0])
    return t, vals


# embeddings -----------------------------------------------------------------

def embedding_indices_ok(alpha, k, r, p, n=DIM):
    return 1 / p - (2 * alpha - k) / n <= 1 / r + 1e-15 and 1 / r <= 1 / p + 1e-15


def _component_terms(field):
    """``(coeff, x_shift, y_shift)`` with ``f_c = sum coeff sin(kx + sx pi/2) sin(ly + sy pi/2)``."""
    K = field.bandwidth
    k = np.arange(1, K + 1, dtype=float)
    c = field.coeffs
    if field.kind == STOKES:
        return [[(c * k[None, :], 0, 1)], [(-c * k[:, None], 1, 0)]]
    return [[((2 / np.pi) * c, 0, 0)]]


def sobolev_seminorm(field, order, r, nodes=None):
    """``|| |grad^order f| ||_r`` with trapezoid weights on a closed grid of ``nodes`` panels."""
    K = field.bandwidth
    M = nodes or 4 * K + 2
    x = np.arange(M + 1) * np.pi / M
    kk = np.arange(1, K + 1, dtype=float)
    w = np.full(M + 1, np.pi / M)
    w[[0, -1]] *= 0.5

    def basis(shift):
        return np.sin(np.outer(kk, x) + shift * np.pi / 2)

    mag2 = np.zeros((M + 1, M + 1))
    for comp in _component_terms(field):
        for a in range(order + 1):
            b = order - a
            val = np.zeros((M + 1, M + 1))
            for coeff, sx, sy in comp:
                cab = coeff * (kk**a)[:, None] * (kk**b)[None, :]
                val += basis(sx + a).T @ cab @ basis(sy + b)
            mag2 += comb(order, a) * val * val
    mag = np.sqrt(mag2)
    W = np.outer(w, w)
    if np.isinf(r):
        return float(mag.max())
    return float((W * mag**r).sum() ** (1 / r))


def _embedding_sup(kind, alpha, k, r, p, seed, samples, K, probes):
    op = make_operator(kind, K)
    fields = sample_fields(kind, seed, samples, K)
    if probes:
        fields += [mode_field(kind, K, a, b) for a, b in {(1, 1), (K, K), (K, 1), (1, K)}]
    best = 0.0
    for f in fields:
        den = norm_fractional(op, alpha, p, f)
        if den > 0:
            best = max(best, sobolev_seminorm(f, k, r) / den)
    return best, len(fields)


def embedding_ratio(op, alpha, k, r, samples=50, p=2, seed=0, force=False, probes=True):
    """``sup ||grad^k f||_r / ||A^alpha f||_p``, with a stability flag from bandwidth doubling."""
    inside = embedding_indices_ok(alpha, k, r, p)
    if not inside and not force:
        raise InvalidIndices(f"(alpha={alpha}, k={k}, r={r}, p={p}) outside the embedding range")
    K = op.bandwidth
    const, count = _embedding_sup(op.kind, alpha, k, r, p, seed, samples, K, probes)
    fine, _ = _embedding_sup(op.kind, alpha, k, r, p, seed, samples, 2 * K, probes)
    stable = relative_change(const, fine) <= STABILITY_TOL
    return EstimateReport("embedding", const, count, K, stable, seed,
                          {"alpha": alpha, "k": k, "r": r, "p": p, "outside_range": not inside,
                           "refined_constant": fine})
