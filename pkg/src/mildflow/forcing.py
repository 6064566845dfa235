"""Pointwise body-force laws ``f: R -> R^2`` with ``f(0) = 0``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, InvariantViolation


@dataclass(frozen=True)
class ForcingLaw:
    """``evaluator`` maps an array of temperatures to a pair of arrays of the same shape."""

    name: str
    evaluator: Callable
    lipschitz_constant: float
    differentiable: bool = True
    params: dict = field(default_factory=dict)
    check_seed: int = 0

    def __post_init__(self):
        if not self.lipschitz_constant >= 0:
            raise InvariantViolation("lipschitz_constant must be >= 0")
        g1, g2 = self.evaluate(np.zeros(1))
        if np.any(g1 != 0) or np.any(g2 != 0):
            raise InvariantViolation(f"forcing law {self.name!r} has f(0) != 0")
        rng = np.random.default_rng(self.check_seed)
        a, b = rng.normal(scale=3.0, size=(2, 64))
        fa, fb = np.stack(self.evaluate(a)), np.stack(self.evaluate(b))
        gap = np.hypot(*(fa - fb))
        if np.any(gap > self.lipschitz_constant * np.abs(a - b) * (1 + 1e-12) + 1e-14):
            raise InvariantViolation(f"forcing law {self.name!r} exceeds its Lipschitz constant")

    def evaluate(self, theta):
        g1, g2 = self.evaluator(np.asarray(theta, dtype=float))
        return np.broadcast_to(g1, np.shape(theta)), np.broadcast_to(g2, np.shape(theta))

    def __call__(self, theta):
        return self.evaluate(theta)

    def describe(self):
        return {"name": self.name, "params": dict(self.params), "lipschitz": self.lipschitz_constant}


def _linear(g=1.0):
    g = float(g)
    return ForcingLaw("linear-buoyancy", lambda th: (0.0 * th, g * th), abs(g), True, {"g": g})


def _sin(g=1.0):
    g = float(g)
    return ForcingLaw("sin", lambda th: (0.0 * th, g * np.sin(th)), abs(g), True, {"g": g})


def _zero():
    return ForcingLaw("zero", lambda th: (0.0 * th, 0.0 * th), 0.0, True, {})


_REGISTRY = {"linear-buoyancy": _linear, "sin": _sin, "zero": _zero}


def register_law(name, factory):
    """Register ``factory(**params) -> ForcingLaw`` under ``name``."""
    _REGISTRY[name] = factory


def available_laws():
    return sorted(_REGISTRY)


def make_law(name, **params):
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ConfigError(f"unknown forcing law {name!r}; known: {available_laws()}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for forcing law {name!r}: {exc}") from None
