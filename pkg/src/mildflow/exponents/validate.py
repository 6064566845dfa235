"""Independent re-check of an exponent plan.

Deliberately shares no code with the planner: each condition is written out
directly in terms of the plan's fields.
"""
from __future__ import annotations

from dataclasses import dataclass

NONSTRICT_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float
    rhs: float
    relation: str  # "<", "<=", "=="

    @property
    def slack(self):
        if self.relation == "==":
            return -abs(self.lhs - self.rhs)
        return self.rhs - self.lhs

    @property
    def ok(self):
        if self.relation == "<":
            return self.lhs < self.rhs
        if self.relation == "<=":
            return self.lhs <= self.rhs + NONSTRICT_TOL
        return abs(self.lhs - self.rhs) <= 1e-9


def plan_checks(plan):
    b = plan.base
    n, p, q, a0, b0 = b.n, b.p, b.q, b.alpha0, b.beta0
    d1, d2 = plan.delta1, plan.delta2
    a1, a2, b1, b2 = plan.alpha1, plan.alpha2, plan.beta1, plan.beta2
    E = a0 - b0 - n * (1 / p - 1 / q) / 2
    c = [
        # standing assumptions
        Check("p > max(1, n/3)", max(1, n / 3), p, "<"),
        Check("q > 1", 1, q, "<"),
        Check("1/p - 1/(2q) < 1/n", 1 / p - 1 / (2 * q), 1 / n, "<"),
        Check("1/q - 1/p < 2/n", 1 / q - 1 / p, 2 / n, "<"),
        Check("alpha0 >= 0", 0, a0, "<="),
        Check("alpha0 >= n/(2p) - 1/2", n / (2 * p) - 1 / 2, a0, "<="),
        Check("alpha0 < 1", a0, 1, "<"),
        Check("beta0 >= 0", 0, b0, "<="),
        Check("beta0 < 1", b0, 1, "<"),
        Check("alpha0 - beta0/2 >= (n/2)(1/p - 1/(2q))", n * (1 / p - 1 / (2 * q)) / 2, a0 - b0 / 2, "<="),
        Check("gap > -1", -1, E, "<"),
        Check("gap <= 1", E, 1, "<="),
        # delta rule
        Check("delta1 >= 0", 0, d1, "<="),
        Check("delta2 >= 0", 0, d2, "<="),
        Check("delta1 = 0 iff alpha0 > 0", float(d1 == 0), float(a0 > 0), "=="),
        Check("delta2 = 0 iff beta0 > 0", float(d2 == 0), float(b0 > 0), "=="),
        # ranges
        Check("alpha0 < alpha1", a0, a1, "<"),
        Check("alpha1 < 1 - delta1", a1, 1 - d1, "<"),
        Check("alpha0 < alpha2", a0, a2, "<"),
        Check("alpha2 < 1 - delta1", a2, 1 - d1, "<"),
        Check("beta0 < beta1", b0, b1, "<"),
        Check("beta1 < 1 - delta2", b1, 1 - d2, "<"),
        Check("beta0 < beta2", b0, b2, "<"),
        Check("beta2 < 1 - delta2", b2, 1 - d2, "<"),
        # bilinear velocity estimate
        Check("alpha1 > 0", 0, a1, "<"),
        Check("delta1 < 1/2 + (n/2)(1 - 1/p)", d1, 1 / 2 + n * (1 - 1 / p) / 2, "<"),
        Check("alpha1 + delta1 > 1/2", 1 / 2, a1 + d1, "<"),
        Check("2 alpha1 + delta1 >= n/(2p) + 1/2", n / (2 * p) + 1 / 2, 2 * a1 + d1, "<="),
        # transport estimate
        Check("alpha2 >= 0", 0, a2, "<="),
        Check("beta2 >= 0", 0, b2, "<="),
        Check("alpha2 > (n/2)(1/p - 1/q)", n * (1 / p - 1 / q) / 2, a2, "<"),
        Check("delta2 < 1/2 + (n/2)(1 - 1/q)", d2, 1 / 2 + n * (1 - 1 / q) / 2, "<"),
        Check("beta2 + delta2 > 1/2", 1 / 2, b2 + d2, "<"),
        Check("alpha2 + beta2 + delta2 >= n/(2p) + 1/2", n / (2 * p) + 1 / 2, a2 + b2 + d2, "<="),
        # dissipation estimate
        Check("alpha2 >= 1/2 + (n/2)(1/p - 1/(2q))", 1 / 2 + n * (1 / p - 1 / (2 * q)) / 2, a2, "<="),
        Check("alpha2 <= 1", a2, 1, "<="),
        # forcing estimate
        Check("beta1 >= (n/2)(1/q - 1/p)", n * (1 / q - 1 / p) / 2, b1, "<="),
        Check("beta1 >= 0", 0, b1, "<="),
        Check("beta1 <= 1", b1, 1, "<="),
        # closing conditions
        Check("2 alpha1 + delta1 <= 1 + alpha0", 2 * a1 + d1, 1 + a0, "<="),
        Check("alpha2 + beta2 + delta2 <= 1 + alpha0", a2 + b2 + d2, 1 + a0, "<="),
        Check("alpha2 <= alpha0 + (1 - beta0)/2", a2, a0 + (1 - b0) / 2, "<="),
    ]
    if abs(E - 1) <= 1e-9:
        c.append(Check("beta1 = 1 - alpha0 + beta0", b1, 1 - a0 + b0, "=="))
    else:
        c.append(Check("|gap| < 1", abs(E), 1, "<"))
        c.append(Check("beta1 < 1 - alpha0 + beta0", b1, 1 - a0 + b0, "<"))
    return c


def revalidate(plan):
    """Return ``(ok, failures, min_strict_slack)``."""
    checks = plan_checks(plan)
    failures = [c.name for c in checks if not c.ok]
    strict = [c.slack for c in checks if c.relation == "<"]
    return not failures, failures, min(strict)
