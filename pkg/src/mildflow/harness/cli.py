"""Command-line entry point: ``mildflow plan|simulate|verify|gronwall|report``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..errors import ConfigError, MildflowError, PlanError
from ..exponents.planner import BaseExponents, check_base_exponents, plan_exponents
from ..exponents.validate import revalidate
from . import persist
from .config import CHECK_DEFAULTS, ExperimentConfig, load_config, tomllib
from .runner import EXIT_FAIL, EXIT_INFRA, EXIT_PASS, RunRecord, run_experiment


def _config(args):
    cfg = load_config(args.config) if args.config else ExperimentConfig.from_mapping({})
    if getattr(args, "seed", None) is not None:
        init = dict(cfg.initial, seed=args.seed)
        cfg = cfg.replace(initial=init)
    if getattr(args, "mode", None):
        cfg = cfg.replace(solver=dict(cfg.solver, mode=args.mode))
    if getattr(args, "checks", None):
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in names if c not in CHECK_DEFAULTS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; known: {sorted(CHECK_DEFAULTS)}")
        checks = {n: cfg.checks.get(n, dict(CHECK_DEFAULTS[n])) for n in names}
        cfg = cfg.replace(checks=checks)
    # round-trip so overrides go through validation
    return ExperimentConfig.from_mapping(cfg.to_dict())


def cmd_plan(args):
    cfg = _config(args)
    base = BaseExponents(**cfg.base)
    gate = check_base_exponents(base)
    out = {"base": cfg.base, "base_check": gate.to_dict()}
    code = EXIT_PASS
    try:
        plan = plan_exponents(base, cfg.plan["margins"], cfg.plan["delta"])
        ok, failures, slack = revalidate(plan)
        out.update(plan=plan.to_dict(), revalidated=ok, revalidation_failures=failures)
        code = EXIT_PASS if ok else EXIT_FAIL
    except PlanError as exc:
        out.update(plan=None, error=str(exc), report=getattr(exc, "report", None))
        code = EXIT_FAIL
    if args.json:
        print(json.dumps(persist.to_jsonable(out), indent=2, sort_keys=True))
    else:
        for v in gate.verdicts:
            print(f"{v.name:<22} {'ok' if v.passed else 'VIOLATED':<9} slack={v.slack:+.6g}  {v.statement}")
        if out.get("plan"):
            p = out["plan"]
            print("plan: " + "  ".join(f"{k}={p[k]:.6g}" for k in
                                       ("delta1", "delta2", "alpha1", "alpha2", "beta1", "beta2")))
            print(f"branch={p['branch']}  min_slack={p['min_slack']:.6g}  revalidated={out['revalidated']}")
        else:
            print(f"infeasible: {out['error']}")
    if args.out:
        persist.write_json(Path(args.out) / "plan.json", out)
    return code


def cmd_simulate(args):
    cfg = _config(args)
    rec = run_experiment(cfg, out=args.out, checks=False)
    print(rec.to_text())
    return rec.exit_code


def cmd_verify(args):
    cfg = _config(args)
    traj = None
    if args.trajectory:
        src = Path(args.trajectory)
        if src.is_dir():
            if not args.config and (src / "record.json").exists():
                snap = persist.read_json(src / "record.json")["config"]
                cfg = ExperimentConfig.from_mapping(snap)
                cfg = _config_with(cfg, args)
            src = src / "trajectory.npz"
        traj = persist.load_trajectory(src)
    rec = run_experiment(cfg, out=args.out, trajectory=traj)
    print(rec.to_text())
    return rec.exit_code


def _config_with(cfg, args):
    if args.checks:
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
        cfg = cfg.replace(checks={n: cfg.checks.get(n, dict(CHECK_DEFAULTS[n])) for n in names})
    return cfg


def _read_spec(path):
    from ..lab.gronwall import GronwallSpec

    text = Path(path).read_text()
    data = tomllib.loads(text) if str(path).endswith(".toml") else json.loads(text)
    return GronwallSpec.from_dict(data)


def cmd_gronwall(args):
    from ..lab.gronwall import bound_table, dominates

    spec = _read_spec(args.spec)
    table, C = bound_table(spec, args.nodes, args.C)
    ok = dominates(spec, C, oracle=(table[:, 0], table[:, 1]))
    out = Path(args.out or ".")
    persist.write_csv(out / "gronwall.csv", ["t", "oracle", "bound"], table)
    persist.write_json(out / "gronwall.json", {"spec": spec.to_dict(), "C": C, "dominates": ok,
                                               "nodes": args.nodes})
    print(f"C={C:g}  dominates={ok}  nodes={args.nodes}  -> {out / 'gronwall.csv'}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_report(args):
    path = Path(args.record)
    if path.is_dir():
        path = path / "record.json"
    rec = RunRecord.from_dict(persist.read_json(path))
    if args.csv:
        rows = [(c["name"], c["status"], c["value"], c["threshold"]) for c in rec.checks]
        print("name,status,value,threshold")
        for r in rows:
            print(",".join("" if x is None else str(x) for x in r))
    else:
        print(rec.to_text())
    return rec.exit_code


def build_parser():
    ap = argparse.ArgumentParser(prog="mildflow", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, mode=True, checks=False):
        p.add_argument("--config", help="TOML experiment config")
        p.add_argument("--seed", type=int, help="seed for randomized initial data")
        p.add_argument("--out", help="output directory")
        if mode:
            p.add_argument("--mode", choices=("picard", "etd"))
        if checks:
            p.add_argument("--checks", help="comma-separated check names: " + ",".join(sorted(CHECK_DEFAULTS)))

    p = sub.add_parser("plan", help="exponent feasibility report")
    common(p, mode=False)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="solve and persist a trajectory")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run checks on a fresh or stored run")
    common(p, checks=True)
    p.add_argument("--trajectory", help="run directory or trajectory.npz to check instead of solving")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gronwall", help="Gronwall bound against the Volterra reference")
    p.add_argument("spec", help="JSON or TOML file with a, b, T")
    p.add_argument("--out")
    p.add_argument("--nodes", type=int, default=1024)
    p.add_argument("--C", type=float, default=None, help="explicit constant (searched when omitted)")
    p.set_defaults(func=cmd_gronwall)

    p = sub.add_parser("report", help="render a stored run record")
    p.add_argument("record", help="record.json or run directory")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except MildflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFRA


if __name__ == "__main__":
    sys.exit(main())
