"""Diagnostics on solved trajectories: decay fits, Hoelder quotients, dependence, bound functions."""
from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import CannotFit, IdenticalData, InvalidRate, ShapeError, TooFewNodes
from ..spectral import STOKES, TEMPERATURE, VELOCITY_NORM2, _trig, eigenvalue_table, l2_norm_coeffs

FIRST_EIGENVALUE = 2.0


def _selector(traj, selector):
    if callable(selector):
        return np.asarray(selector(traj), dtype=float)
    if selector in ("l2", "l2-sum"):
        nu, nt = traj.l2_norms()
        return nu + nt
    if selector == "u":
        return traj.l2_norms()[0]
    if selector == "theta":
        return traj.l2_norms()[1]
    if isinstance(selector, tuple) and selector[0] == "fractional":
        nu, nt = traj.fractional_norms(*selector[1:])
        return nu + nt
    raise ValueError(f"unknown norm selector {selector!r}")


def fit_decay_rate(traj, selector="l2-sum", window=None):
    """Least-squares decay rate ``-d log||x|| / dt`` over ``window``; returns ``(rate, rms_residual)``."""
    t = traj.times
    y = _selector(traj, selector)
    lo, hi = window if window is not None else (t[0], t[-1])
    sel = (t >= lo - 1e-12) & (t <= hi + 1e-12)
    if sel.sum() < 2:
        raise TooFewNodes(f"fit window [{lo}, {hi}] holds fewer than 2 nodes")
    ts, ys = t[sel], y[sel]
    if not np.all(ys > 0):
        raise CannotFit("norm vanishes or is not positive inside the fit window")
    A = np.stack([ts, np.ones_like(ts)], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.log(ys), rcond=None)
    resid = np.log(ys) - A @ coef
    return float(-coef[0]), float(np.sqrt(np.mean(resid**2)))


def _orthonormal(traj, alpha):
    """Flattened coefficient histories whose Euclidean norms are the X^alpha / Y^alpha norms."""
    lam = eigenvalue_table(traj.bandwidth)
    M = traj.u.shape[0]
    U = (traj.u * lam**alpha * np.sqrt(VELOCITY_NORM2 * lam)).reshape(M, -1)
    T = (traj.theta * lam**alpha).reshape(M, -1)
    return U, T


def _grid_values(traj, N):
    S, C = _trig(traj.bandwidth, N)
    k = np.arange(1, traj.bandwidth + 1, dtype=float)
    M = traj.u.shape[0]
    u1 = np.einsum("ai,tij,jb->tab", S.T, traj.u * k[None, None, :], C)
    u2 = -np.einsum("ai,tij,jb->tab", C.T, traj.u * k[None, :, None], S)
    th = (2 / np.pi) * np.einsum("ai,tij,jb->tab", S.T, traj.theta, S)
    U = np.concatenate([u1.reshape(M, -1), u2.reshape(M, -1)], axis=1)
    return U, th.reshape(M, -1)


def holder_quotient(traj, gamma, space=1.0, t_start=0.0, N=None):
    """``sup (|u(t)-u(s)| + |theta(t)-theta(s)|) / (t-s)^gamma`` over node pairs with ``s >= t_start``.

    ``space`` is a fractional exponent (X^space norms) or ``"grid-max"`` for max
    norms of the sampled fields.  Returns ``(sup, (s, t))``.
    """
    if not 0 < gamma:
        raise ValueError("gamma must be positive")
    t = traj.times
    if (t >= t_start - 1e-12).sum() < 3:
        raise TooFewNodes("Hoelder quotient needs at least 3 nodes after t_start")
    if space == "grid-max":
        U, T = _grid_values(traj, N or 2 * traj.bandwidth)
        use_max = True
    else:
        U, T = _orthonormal(traj, float(space))
        use_max = False
    V = np.concatenate([U, T], axis=1)
    sup, i, j = kernels.pairwise_holder_sup(V, t, gamma, U.shape[1], use_max, t_start)
    pair = (float(t[i]), float(t[j])) if i >= 0 else None
    return sup, pair


def _weighted(t, expo, norms):
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(t > 0, np.power(np.where(t > 0, t, 1.0), expo), 1.0 if expo == 0 else 0.0)
    return w * norms


def continuous_dependence(traj, other, alpha0=0.5, beta0=0.5, alpha=None, beta=None, plan=None):
    """Per-node ``D(t) / D0`` with ``D(t) = t^(a-a0)|du|_{X^a} + t^(b-b0)|dtheta|_{Y^b}``.

    With ``plan`` given, the base exponents and ``(alpha1, beta1)`` are taken from it.
    Returns ``(times, ratios, sup)``.
    """
    if plan is not None:
        alpha0, beta0 = plan.base.alpha0, plan.base.beta0
        alpha = plan.alpha1 if alpha is None else alpha
        beta = plan.beta1 if beta is None else beta
    alpha = alpha0 if alpha is None else alpha
    beta = beta0 if beta is None else beta
    if traj.u.shape != other.u.shape or not np.allclose(traj.times, other.times):
        raise ShapeError("trajectories must share the time grid and bandwidth")
    lam = eigenvalue_table(traj.bandwidth)
    du, dth = traj.u - other.u, traj.theta - other.theta
    D0 = float(l2_norm_coeffs(du[0] * lam**alpha0, STOKES) + l2_norm_coeffs(dth[0] * lam**beta0, TEMPERATURE))
    if D0 == 0:
        raise IdenticalData("initial data coincide; the dependence ratio is undefined")
    t = traj.times
    D = (_weighted(t, alpha - alpha0, l2_norm_coeffs(du * lam**alpha, STOKES))
         + _weighted(t, beta - beta0, l2_norm_coeffs(dth * lam**beta, TEMPERATURE)))
    ratios = D / D0
    return t, ratios, float(ratios.max())


def check_rates(lam, lam2, lam1=None):
    """Validate ``0 < lam < lam1 < 2`` and ``lam < lam2 < min(2 lam, lam1)``; returns ``lam1``."""
    if not 0 < lam < FIRST_EIGENVALUE:
        raise InvalidRate(f"need 0 < lambda < {FIRST_EIGENVALUE}, got {lam}")
    if lam1 is None:
        lam1 = 0.5 * (max(lam, lam2) + FIRST_EIGENVALUE)
    if not lam < lam1 < FIRST_EIGENVALUE:
        raise InvalidRate(f"need lambda < lambda1 < {FIRST_EIGENVALUE}, got lambda1={lam1}")
    if not lam < lam2 < min(2 * lam, lam1):
        raise InvalidRate(f"need lambda < lambda2 < min(2 lambda, lambda1), got lambda2={lam2}")
    return lam1


def global_bound_functions(traj, lam, lam2, plan, lam1=None):
    """Running suprema ``E_{1,alpha}`` (alpha = alpha1, alpha2), ``E_{2,beta}`` (beta1, beta2) and their max.

    Suprema run over trajectory nodes; the value at ``t = 0`` is the limit of the
    weighted norm (the data norm when the exponent equals the base one, else 0).
    """
    check_rates(lam, lam2, lam1)
    t = traj.times
    a0, b0 = plan.base.alpha0, plan.base.beta0
    out = {}
    for name, a in (("E1_alpha1", plan.alpha1), ("E1_alpha2", plan.alpha2)):
        nu = traj.fractional_norms(a, 0)[0]
        out[name] = np.maximum.accumulate(_weighted(t, a - a0, nu) * np.exp(lam * t))
    for name, b in (("E2_beta1", plan.beta1), ("E2_beta2", plan.beta2)):
        nt = traj.fractional_norms(0, b)[1]
        out[name] = np.maximum.accumulate(_weighted(t, b - b0, nt) * np.exp(lam2 * t))
    out["E"] = np.max(np.stack(list(out.values())), axis=0)
    return out
