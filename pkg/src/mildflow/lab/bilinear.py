"""Empirical constants of the nonlinear estimates at a plan's exponents."""
from __future__ import annotations

import numpy as np

from .. import _galerkin as gk
from ..forcing import make_law
from ..spectral import STOKES, TEMPERATURE, eigenvalue_table, l2_norm_coeffs
from .report import STABILITY_TOL, EstimateReport, relative_change
from .sampling import KMAX, sample_coeffs


def _xnorm(c, kind, alpha):
    return float(l2_norm_coeffs(c * eigenvalue_table(c.shape[-1]) ** alpha, kind))


# smoother than the default sampler so that X^alpha norms with alpha near 1 converge
BILINEAR_DECAY = 2.0


def _ratios(plan, K, samples, seed, law, decay=BILINEAR_DECAY):
    q = gk.quadrature(K, 2 * K)
    lam = eigenvalue_table(K)
    a1, a2, b1, b2 = plan.alpha1, plan.alpha2, plan.beta1, plan.beta2
    d1, d2 = plan.delta1, plan.delta2
    W = np.outer(q.w, q.w)
    out = {"C1": 0.0, "C2": 0.0, "C3": 0.0, "C4": 0.0}
    for i in range(samples):
        u = sample_coeffs(seed, 3 * i, K, STOKES, decay)
        v = sample_coeffs(seed, 3 * i + 1, K, STOKES, decay)
        th = sample_coeffs(seed, 3 * i + 2, K, TEMPERATURE, decay)
        conv = gk.convection_velocity(q, u, v) * lam ** (-d1)
        out["C1"] = max(out["C1"], _xnorm(conv, STOKES, 0) / (_xnorm(u, STOKES, a1) * _xnorm(v, STOKES, a1)))
        adv = gk.convection_temperature(q, u, th) * lam ** (-d2)
        out["C2"] = max(out["C2"], _xnorm(adv, TEMPERATURE, 0)
                        / (_xnorm(u, STOKES, a2) * _xnorm(th, TEMPERATURE, b2)))
        phi = gk.dissipation_values(q, u, v)
        phi_l2 = float(np.sqrt((W * phi * phi).sum()))
        out["C3"] = max(out["C3"], phi_l2 / (_xnorm(u, STOKES, a2) * _xnorm(v, STOKES, a2)))
        if law.lipschitz_constant > 0:
            pf = gk.buoyancy(q, th, law)
            out["C4"] = max(out["C4"], _xnorm(pf, STOKES, 0)
                            / (law.lipschitz_constant * _xnorm(th, TEMPERATURE, b1)))
    return out


def estimate_nonlinear_constants(plan, K=8, samples=200, seed=0, law=None, decay=BILINEAR_DECAY):
    """Empirical ``C1..C4`` as ``{name: EstimateReport}``; stability compares bandwidth ``K`` and ``2K``."""
    law = law or make_law("sin")
    coarse = _ratios(plan, K, samples, seed, law, decay)
    fine = _ratios(plan, 2 * K, samples, seed, law, decay) if 2 * K <= KMAX else None
    reports = {}
    for name, val in coarse.items():
        stable = None if fine is None else relative_change(val, fine[name]) <= STABILITY_TOL
        extra = {"refined_constant": None if fine is None else fine[name], "law": law.name, "decay": decay}
        reports[name] = EstimateReport(name, val, samples, K, stable, seed, extra)
    return reports
