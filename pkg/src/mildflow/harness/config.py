"""Experiment configuration: TOML with dotted sections, validated and defaulted."""
from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..errors import ConfigError, InvariantViolation

DEFAULTS = {
    "base": {"n": 2, "p": 2.0, "q": 2.0, "alpha0": 0.5, "beta0": 0.5},
    "plan": {"margins": 0.0, "delta": 0.05, "override": None},
    "operator": {"K": 8},
    "grid": {"N": None},
    "time": {"T": 1.0, "dt": 1 / 64},
    "forcing": {"law": "sin", "params": {}},
    "initial": {"recipe": "single-mode", "u_norm": 1e-2, "theta_norm": 1e-2, "seed": None,
                "mode": [1, 1], "band": 4},
    "solver": {"mode": "etd", "max_iter": 50, "tol": 1e-10},
    "checks": {},
    "output": {"dir": "mildflow-out", "deterministic": True},
}

# parameters each check accepts, with defaults
CHECK_DEFAULTS = {
    "decay": {"window": None, "selector": "l2-sum", "min_rate": 1.5, "expected": None, "tol": 1e-3},
    "holder": {"gamma": 0.5, "space": 1.0, "t_start": None, "max": None},
    "dependence": {"perturbation": 1e-4, "max_ratio": None},
    "bounds": {"lam": 1.0, "lam2": 1.5, "lam1": None, "max": None},
    "residual": {"max": None},
    "restart": {"node": None, "tol": 1e-8},
}

PLAN_OVERRIDE_KEYS = ("delta1", "delta2", "alpha1", "alpha2", "beta1", "beta2")
RECIPES = ("single-mode", "random-band", "taylor-vortex-like")


def _number(value, where):
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{where}: expected a number or a fraction string, got {value!r}")


def _merge(section, given, defaults, open_keys=()):
    out = copy.deepcopy(defaults)
    for key, value in given.items():
        if key not in defaults and key not in open_keys:
            raise ConfigError(f"unknown key {key!r} in [{section}]")
        out[key] = value
    return out


@dataclass
class ExperimentConfig:
    base: dict
    plan: dict
    K: int
    N: int
    T: float
    dt: float
    forcing: dict
    initial: dict
    solver: dict
    checks: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, raw):
        raw = dict(raw)
        for key in raw:
            if key not in DEFAULTS:
                raise ConfigError(f"unknown key {key!r} at top level")
        sec = {}
        for name, defaults in DEFAULTS.items():
            given = raw.get(name, {})
            if not isinstance(given, dict):
                raise ConfigError(f"[{name}] must be a table")
            if name == "checks":
                sec[name] = given
                continue
            sec[name] = _merge(name, given, defaults)

        base = {k: _number(v, f"base.{k}") for k, v in sec["base"].items()}
        base["n"] = int(base["n"])
        K = sec["operator"]["K"]
        if isinstance(K, bool) or not isinstance(K, int) or K < 1:
            raise InvariantViolation(f"operator bandwidth K must be a positive integer, got {K!r}")
        N = sec["grid"]["N"]
        N = 2 * K if N is None else N
        if isinstance(N, bool) or not isinstance(N, int):
            raise ConfigError(f"grid.N must be an integer, got {N!r}")
        if N < 2 * K:
            raise InvariantViolation(f"grid resolution N={N} must be at least 2K={2 * K}")
        T = _number(sec["time"]["T"], "time.T")
        dt = _number(sec["time"]["dt"], "time.dt")
        if not T > 0:
            raise InvariantViolation(f"time horizon T must be > 0, got {T}")
        if not dt > 0:
            raise InvariantViolation(f"time step dt must be > 0, got {dt}")

        plan = sec["plan"]
        if plan["override"] is not None:
            ov = plan["override"]
            if not isinstance(ov, dict):
                raise ConfigError("plan.override must be a table")
            for k in ov:
                if k not in PLAN_OVERRIDE_KEYS:
                    raise ConfigError(f"unknown key {k!r} in [plan.override]")
            missing = [k for k in PLAN_OVERRIDE_KEYS if k not in ov]
            if missing:
                raise ConfigError(f"plan.override is missing {missing}")
            plan["override"] = {k: _number(v, f"plan.override.{k}") for k, v in ov.items()}

        forcing = sec["forcing"]
        if not isinstance(forcing["params"], dict):
            raise ConfigError("forcing.params must be a table")

        init = sec["initial"]
        if init["recipe"] not in RECIPES:
            raise ConfigError(f"unknown initial recipe {init['recipe']!r}; expected one of {RECIPES}")
        for k in ("u_norm", "theta_norm"):
            init[k] = _number(init[k], f"initial.{k}")
            if init[k] < 0:
                raise InvariantViolation(f"initial.{k} must be >= 0")
        if init["recipe"] == "random-band" and init["seed"] is None:
            raise InvariantViolation("initial.seed is required by the random-band recipe")

        solver = sec["solver"]
        if solver["mode"] not in ("picard", "etd"):
            raise ConfigError(f"unknown solver mode {solver['mode']!r}")

        checks = {}
        for name, params in sec["checks"].items():
            if name not in CHECK_DEFAULTS:
                raise ConfigError(f"unknown key {name!r} in [checks]")
            if params is True:
                params = {}
            if not isinstance(params, dict):
                raise ConfigError(f"[checks.{name}] must be a table")
            checks[name] = _merge(f"checks.{name}", params, CHECK_DEFAULTS[name])

        return cls(base, plan, K, N, float(T), float(dt), forcing, init, solver, checks, sec["output"])

    def to_dict(self):
        """Snapshot that ``from_mapping`` turns back into an equal config (``None`` entries dropped)."""
        def clean(d):
            if isinstance(d, dict):
                return {k: clean(v) for k, v in d.items() if v is not None}
            return d

        return clean({
            "base": self.base, "plan": self.plan, "operator": {"K": self.K}, "grid": {"N": self.N},
            "time": {"T": self.T, "dt": self.dt}, "forcing": self.forcing, "initial": self.initial,
            "solver": self.solver, "checks": self.checks, "output": self.output,
        })

    def replace(self, **changes):
        d = copy.deepcopy(self.__dict__)
        d.update(changes)
        return ExperimentConfig(**d)


def parse_config(text):
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    return ExperimentConfig.from_mapping(raw)


def load_config(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text())
