"""Named trajectory checks run by the experiment runner."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CannotFit
from ..lab import trajectory as lab
from ..solver import residual_strong, restart_consistency, solve
from ..spectral import ScalarField, VelocityField


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail", "skipped"
    value: float | None = None
    threshold: float | None = None
    details: dict = field(default_factory=dict)
    series: np.ndarray | None = None  # columns t, value, bound

    @property
    def passed(self):
        return self.status != "fail"

    def to_dict(self):
        return {"name": self.name, "status": self.status, "value": self.value,
                "threshold": self.threshold, "details": self.details}


def _verdict(ok):
    return "pass" if ok else "fail"


def check_decay(ctx, p):
    traj = ctx.traj
    window = p["window"] or (0.2 * traj.grid.t_end, traj.grid.t_end)
    try:
        rate, resid = lab.fit_decay_rate(traj, p["selector"], tuple(window))
    except CannotFit as exc:
        return CheckResult("decay", "skipped", details={"reason": str(exc)})
    ok = rate >= p["min_rate"]
    if p["expected"] is not None:
        ok = ok and abs(rate - p["expected"]) <= p["tol"]
    norms = lab._selector(traj, p["selector"])
    bound = norms[0] * np.exp(-rate * (traj.times - traj.times[0]))
    return CheckResult("decay", _verdict(ok), rate, p["min_rate"],
                       {"residual": resid, "window": list(window), "expected": p["expected"]},
                       np.column_stack([traj.times, norms, bound]))


def check_holder(ctx, p):
    traj = ctx.traj
    t0 = p["t_start"] if p["t_start"] is not None else 0.25 * traj.grid.t_end
    q, pair = lab.holder_quotient(traj, p["gamma"], p["space"], t0)
    ok = np.isfinite(q) and (p["max"] is None or q <= p["max"])
    return CheckResult("holder", _verdict(ok), q, p["max"],
                       {"gamma": p["gamma"], "space": p["space"], "t_start": t0, "pair": pair})


def check_dependence(ctx, p):
    traj = ctx.traj
    eps = p["perturbation"]
    # perturb both fields along the lowest mode
    K = traj.bandwidth
    d = np.zeros((K, K))
    d[0, 0] = 1.0
    u1 = VelocityField(traj.u[0] + eps * d)
    th1 = ScalarField(traj.theta[0] + eps * d)
    other = solve(traj.mode, u1, th1, traj.law, traj.grid, traj.resolution, **ctx.solver_kw)
    t, ratios, sup = lab.continuous_dependence(traj, other, plan=ctx.plan)
    ok = np.isfinite(sup) and (p["max_ratio"] is None or sup <= p["max_ratio"])
    return CheckResult("dependence", _verdict(ok), sup, p["max_ratio"], {"perturbation": eps},
                       np.column_stack([t, ratios, np.full_like(t, sup)]))


def check_bounds(ctx, p):
    E = lab.global_bound_functions(ctx.traj, p["lam"], p["lam2"], ctx.plan, p["lam1"])
    ET = float(E["E"][-1])
    ok = np.isfinite(ET) and (p["max"] is None or ET <= p["max"])
    details = {k: float(v[-1]) for k, v in E.items()}
    details.update(lam=p["lam"], lam2=p["lam2"])
    return CheckResult("bounds", _verdict(ok), ET, p["max"], details,
                       np.column_stack([ctx.traj.times, E["E"], np.full_like(E["E"], ET)]))


def check_residual(ctx, p):
    ru, rt = residual_strong(ctx.traj)
    r = np.maximum(ru, rt)
    val = float(r.max())
    ok = np.isfinite(val) and (p["max"] is None or val <= p["max"])
    t = ctx.traj.times[1:-1]
    return CheckResult("residual", _verdict(ok), val, p["max"], {},
                       np.column_stack([t, r, np.full_like(t, val)]))


def check_restart(ctx, p):
    M = ctx.traj.grid.steps
    j = p["node"] if p["node"] is not None else M // 2
    dist = restart_consistency(ctx.traj, j)
    return CheckResult("restart", _verdict(dist <= p["tol"]), dist, p["tol"], {"node": j})


CHECKS = {"decay": check_decay, "holder": check_holder, "dependence": check_dependence,
          "bounds": check_bounds, "residual": check_residual, "restart": check_restart}


@dataclass
class CheckContext:
    traj: object
    plan: object
    solver_kw: dict


def run_checks(ctx, checks):
    return [CHECKS[name](ctx, params) for name, params in sorted(checks.items())]
