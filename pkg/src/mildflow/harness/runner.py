"""Experiment runner: plan, build data, solve, check, persist."""
from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from .. import __version__
from ..errors import PlanError, PlanInfeasible
from ..exponents.planner import BaseExponents, ExponentPlan, plan_exponents
from ..exponents.validate import revalidate
from ..forcing import make_law
from ..solver import TimeGrid, etd_march, picard_solve
from . import persist
from .checks import CheckContext, run_checks
from .config import ExperimentConfig
from .initial import make_initial_data

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_INFRA = 0, 2, 3


@dataclass
class RunRecord:
    config: dict
    plan: dict | None = None
    timings: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    version: str = __version__
    status: str = "pass"  # pass | fail | error
    stage: str | None = None  # stage of the first failure
    error: str | None = None
    content_hash: str = ""

    def hashed_content(self):
        return {"config": self.config, "plan": self.plan, "summary": self.summary, "checks": self.checks,
                "version": self.version, "status": self.status, "stage": self.stage, "error": self.error}

    def compute_hash(self):
        return hashlib.sha256(persist.canonical_json(self.hashed_content()).encode()).hexdigest()

    @property
    def exit_code(self):
        return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(self.status, EXIT_INFRA)

    def to_dict(self):
        d = self.hashed_content()
        d.update(timings=self.timings, content_hash=self.content_hash)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def to_text(self):
        lines = [f"run {self.content_hash[:12]}  status={self.status}  version={self.version}"]
        if self.stage:
            lines.append(f"failed at stage {self.stage}: {self.error}")
        if self.plan:
            p = self.plan
            lines.append("plan: " + "  ".join(f"{k}={p[k]:.6g}" for k in
                                              ("alpha1", "alpha2", "beta1", "beta2", "delta1", "delta2")))
        if self.summary.get("t"):
            s = self.summary
            lines.append(f"t_end={s['t'][-1]:.6g}  |u|={s['u_l2'][-1]:.6e}  |theta|={s['theta_l2'][-1]:.6e}")
        if self.checks:
            w = max(len(c["name"]) for c in self.checks)
            lines.append(f"{'check':<{w}}  {'status':<7}  {'value':>14}  {'threshold':>14}")
            for c in self.checks:
                v = "-" if c["value"] is None else f"{c['value']:.6e}"
                th = "-" if c["threshold"] is None else f"{c['threshold']:.6e}"
                lines.append(f"{c['name']:<{w}}  {c['status']:<7}  {v:>14}  {th:>14}")
        return "\n".join(lines)


def make_plan(config):
    base = BaseExponents(**config.base)
    ov = config.plan.get("override")
    if ov:
        plan = ExponentPlan(base, branch="override", **ov)
        ok, failures, _ = revalidate(plan)
        if not ok:
            raise PlanInfeasible(f"plan override violates {failures}", report={"violations": failures})
        return plan
    return plan_exponents(base, config.plan["margins"], config.plan["delta"])


def _summary(traj, plan):
    nu, nt = traj.l2_norms()
    fu, ft = traj.fractional_norms(plan.base.alpha0, plan.base.beta0)
    return {"t": traj.times, "u_l2": nu, "theta_l2": nt, "u_base": fu, "theta_base": ft,
            "mode": traj.mode, "iterations": traj.iterations_used}


def solve_config(config, u0, th0):
    law = make_law(config.forcing["law"], **config.forcing["params"])
    grid = TimeGrid(config.T, config.dt)
    if config.solver["mode"] == "picard":
        traj, dist = picard_solve(u0, th0, law, grid, config.solver["max_iter"], config.solver["tol"], config.N)
        return traj, {"max_iter": config.solver["max_iter"], "tol": config.solver["tol"]}, dist
    return etd_march(u0, th0, law, grid, config.N), {}, None


def run_experiment(config: ExperimentConfig, out=None, checks=True, trajectory=None, persist_artifacts=True):
    """Run every stage; failures are recorded with their stage rather than raised.

    ``trajectory`` skips data and solve stages (checks run on the stored run).
    """
    rec = RunRecord(config=config.to_dict())
    out = Path(out or config.output.get("dir", "mildflow-out"))
    traj = plan = None
    results = []
    stage = "plan"
    try:
        t0 = time.perf_counter()
        plan = make_plan(config)
        rec.plan = plan.to_dict()
        rec.timings["plan"] = time.perf_counter() - t0

        if trajectory is None:
            stage = "data"
            u0, th0 = make_initial_data(config.initial, plan.base, config.K)
            stage = "solve"
            t0 = time.perf_counter()
            traj, solver_kw, dist = solve_config(config, u0, th0)
            rec.timings["solve"] = time.perf_counter() - t0
        else:
            traj = trajectory
            solver_kw = {"max_iter": config.solver["max_iter"], "tol": config.solver["tol"]} \
                if traj.mode == "picard" else {}
            dist = None
        rec.summary = _summary(traj, plan)
        if dist is not None:
            rec.summary["picard_distances"] = dist

        if checks and config.checks:
            stage = "checks"
            t0 = time.perf_counter()
            results = run_checks(CheckContext(traj, plan, solver_kw), config.checks)
            rec.checks = [r.to_dict() for r in results]
            rec.timings["checks"] = time.perf_counter() - t0
            if not all(r.passed for r in results):
                rec.status = "fail"
                rec.stage = "checks"
    except PlanError as exc:
        rec.status, rec.stage, rec.error = "fail", stage, f"{type(exc).__name__}: {exc}"
        if getattr(exc, "report", None) is not None:
            rec.summary = {"plan_report": exc.report}
    except Exception as exc:  # recorded, reported through the exit code
        log.exception("stage %s failed", stage)
        rec.status, rec.stage, rec.error = "error", stage, f"{type(exc).__name__}: {exc}"

    rec.summary = persist.to_jsonable(rec.summary)
    rec.checks = persist.to_jsonable(rec.checks)
    rec.content_hash = rec.compute_hash()
    if persist_artifacts:
        write_artifacts(out, rec, traj, results)
    return rec


def write_artifacts(out, rec, traj, results=()):
    out = Path(out)
    persist.write_json(out / "record.json", rec.to_dict())
    if traj is not None:
        persist.save_trajectory(out / "trajectory.npz", traj)
        s = rec.summary
        persist.write_csv(out / "norms.csv", ["t", "u_l2", "theta_l2", "u_base", "theta_base"],
                          zip(s["t"], s["u_l2"], s["theta_l2"], s["u_base"], s["theta_base"]))
    for r in results:
        if r.series is not None:
            persist.write_csv(out / "checks" / f"{r.name}.csv", ["t", "value", "bound"], r.series)
    return out
