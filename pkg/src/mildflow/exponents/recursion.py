"""Bound recursion for the successive approximations and a certified local time."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ..errors import DegenerateConstants, DomainError, InvalidRate, PlanError

CONTRACTION_MARGIN = 0.05


def beta_function(x, y):
    """``B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)`` through log-gamma."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta function needs positive arguments, got ({x}, {y})")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def diagonal_semigroup_constant(alpha, lam):
    """``sup_{t>0} sup_{mu>=2} (mu t)^alpha exp(-(mu - lam) t)`` for ``0 <= lam < 2``.

    This is the smallest ``C`` with ``||A^alpha e^{-tA} f|| <= C t^-alpha e^{-lam t} ||f||``
    for a self-adjoint operator whose spectrum lies in ``[2, inf)``.
    """
    if not 0 <= lam < 2:
        raise InvalidRate(f"rate must satisfy 0 <= lam < 2, got {lam}")
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return 1.0
    return (2 * alpha / (2 - lam)) ** alpha * math.exp(-alpha)


@dataclass(frozen=True)
class GrowthConstants:
    """Constants entering the bound recursion.

    ``semigroup_A`` / ``semigroup_B`` map an exponent to ``C_{A,alpha,lam}``; the
    default is the closed-form diagonal value at rate ``lam``.
    """

    C1: float = 1.0
    C2: float = 1.0
    C3: float = 1.0
    C4: float = 1.0
    L_f: float = 1.0
    lam: float = 1.0
    semigroup_A: Callable | None = None
    semigroup_B: Callable | None = None
    provenance: str = "config"

    def __post_init__(self):
        for name in ("C1", "C2", "C3", "C4"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise DegenerateConstants(f"{name} must be positive and finite, got {v}")
        if not (np.isfinite(self.L_f) and self.L_f >= 0):
            raise DegenerateConstants(f"L_f must be finite and >= 0, got {self.L_f}")

    def cA(self, alpha):
        f = self.semigroup_A or (lambda a: diagonal_semigroup_constant(a, self.lam))
        return f(alpha)

    def cB(self, beta):
        f = self.semigroup_B or (lambda b: diagonal_semigroup_constant(b, self.lam))
        return f(beta)

    def scaled(self, factor):
        """All of ``C1..C4`` and the semigroup constants multiplied by ``factor``."""
        sa, sb = self.cA, self.cB
        return GrowthConstants(self.C1 * factor, self.C2 * factor, self.C3 * factor,
                               self.C4 * factor, self.L_f, self.lam,
                               lambda a: factor * sa(a), lambda b: factor * sb(b),
                               self.provenance)


class KValues(NamedTuple):
    alpha1: object
    alpha2: object
    beta1: object
    beta2: object


def _beta_or_plan_error(x, y, where):
    try:
        return beta_function(x, y)
    except DomainError as exc:
        raise PlanError(f"plan inconsistent with the {where} coefficient: {exc}") from None


def recursion_coefficients(plan, constants):
    """Coefficients and time powers of the two-step bound recursion, keyed by target exponent."""
    a0, b0 = plan.base.alpha0, plan.base.beta0
    d1, d2 = plan.delta1, plan.delta2
    a1, a2, b1, b2 = plan.alpha1, plan.alpha2, plan.beta1, plan.beta2
    c = constants
    out = {}
    for key, a in (("alpha1", a1), ("alpha2", a2)):
        conv = c.cA(a + d1) * c.C1 * _beta_or_plan_error(1 - (a + d1), 1 + 2 * (a0 - a1), "convection")
        force = c.cA(a) * c.C4 * c.L_f * _beta_or_plan_error(1 - a, 1 + b0 - b1, "forcing")
        out[key] = (conv, 1 + a0 - 2 * a1 - d1, force, 1 + b0 - a0 - b1)
    for key, b in (("beta1", b1), ("beta2", b2)):
        trans = c.cB(b + d2) * c.C2 * _beta_or_plan_error(1 - (b + d2), 1 + a0 + b0 - a2 - b2, "transport")
        diss = c.cB(b) * c.C3 * _beta_or_plan_error(1 - b, 1 + 2 * (a0 - a2), "dissipation")
        out[key] = (trans, 1 + a0 - a2 - b2 - d2, diss, 1 + 2 * a0 - b0 - 2 * a2)
    return out


def _tpow(t, e):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(t > 0, np.power(np.where(t > 0, t, 1.0), e), 0.0 if e > 0 else 1.0)


def k_recursion(plan, constants, k0, t, m):
    """``m`` steps of the bound recursion starting from ``k0`` (four callables of ``t``)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    k0 = KValues(*k0) if not isinstance(k0, KValues) else k0
    base = KValues(*(np.asarray(f(t), dtype=float) for f in k0))
    coef = recursion_coefficients(plan, constants)
    K = base
    for _ in range(m):
        new = []
        for key in ("alpha1", "alpha2"):
            cv, ev, cf, ef = coef[key]
            new.append(getattr(base, key) + cv * K.alpha1**2 * _tpow(t, ev) + cf * K.beta1 * _tpow(t, ef))
        for key in ("beta1", "beta2"):
            ct, et, cd, ed = coef[key]
            new.append(getattr(base, key) + ct * K.alpha2 * K.beta2 * _tpow(t, et)
                       + cd * K.alpha2**2 * _tpow(t, ed))
        K = KValues(*new)
    if np.ndim(t) == 0:
        return KValues(*(float(v) for v in K))
    return K


@dataclass(frozen=True)
class LocalTime:
    T1: float
    margin: float
    C: float
    branch: str
    provenance: str


def estimate_local_time(plan, constants, k0, C=None, t_max=1.0, t_min=1e-12):
    """Largest ``t <= t_max`` with contraction factor ``<= 1 - CONTRACTION_MARGIN``.

    The factor is ``C (K0(t) + t^gamma)`` with ``gamma = 1 + beta0 - alpha0 - beta1``
    in the strict branch and ``C K0(t)`` in the equality branch; ``K0`` is the
    pointwise max of the four initial functions.  ``C`` defaults to the largest
    recursion coefficient.
    """
    k0 = KValues(*k0) if not isinstance(k0, KValues) else k0
    if C is None:
        C = max(max(v[0], v[2]) for v in recursion_coefficients(plan, constants).values())
        provenance = f"recursion-max({constants.provenance})"
    else:
        provenance = "explicit"
    if not (np.isfinite(C) and C > 0):
        raise DegenerateConstants(f"generic constant must be positive and finite, got {C}")
    gamma = plan.gamma
    strict = plan.branch == "strict"
    if strict and gamma <= 0:
        raise PlanError(f"strict branch needs 1 + beta0 - alpha0 - beta1 > 0, got {gamma}")

    def kappa(t):
        k = max(float(f(t)) for f in k0)
        return C * (k + t**gamma) if strict else C * k

    cap = 1 - CONTRACTION_MARGIN
    if kappa(t_min) > cap:
        raise DegenerateConstants(f"no contraction time above t = {t_min:g} (C = {C:.3g})")
    if kappa(t_max) <= cap:
        lo = t_max
    else:
        lo, hi = t_min, t_max
        for _ in range(200):
            mid = math.sqrt(lo * hi) if hi / lo > 4 else 0.5 * (lo + hi)
            if kappa(mid) <= cap:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-14 * hi:
                break
    return LocalTime(lo, 1 - kappa(lo), C, plan.branch, provenance)


def k0_functions(plan, u0, theta0, t_max=1.0, nodes=2048):
    """Initial functions ``sup_{0<s<=t} s^(a - a0) ||e^{-sA} x0||_{X^a}`` for the four plan exponents.

    Evaluated on a log-spaced grid; the running max is interpolated (monotone).
    """
    from ..spectral import fractional_l2, apply_semigroup, make_operator, STOKES, TEMPERATURE

    K = u0.bandwidth
    opA, opB = make_operator(STOKES, K), make_operator(TEMPERATURE, K)
    s = np.geomspace(1e-8, t_max, nodes)
    a0, b0 = plan.base.alpha0, plan.base.beta0
    fns = []
    for field, op, expo, ref in ((u0, opA, plan.alpha1, a0), (u0, opA, plan.alpha2, a0),
                                 (theta0, opB, plan.beta1, b0), (theta0, opB, plan.beta2, b0)):
        vals = np.array([si ** (expo - ref) * fractional_l2(apply_semigroup(op, si, field), expo) for si in s])
        run = np.maximum.accumulate(vals)
        fns.append(_Monotone(s, run))
    return KValues(*fns)


class _Monotone:
    def __init__(self, s, v):
        self.s, self.v = s, v

    def __call__(self, t):
        return np.interp(t, self.s, self.v, left=0.0, right=self.v[-1])
