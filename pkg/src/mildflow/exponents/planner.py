"""Feasibility of the exponent systems and selection of auxiliary exponents.

A plan fixes ``delta1, delta2`` by the zero/positive rule on ``alpha0, beta0`` and
then picks ``alpha1, alpha2, beta1, beta2``.  Every constraint bounds a single
variable or the sum ``alpha2 + beta2``, so for a required strict slack ``s`` the
feasible set is a product of intervals and one strip.  The largest feasible
``s`` is found by bisection; within it the smallest admissible values are taken.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..errors import InvalidExponent, PlanInfeasible

EQUALITY_TOL = 1e-9
DEFAULT_DELTA = 0.05
_EPS_SLACK = 1e-12


@dataclass(frozen=True)
class BaseExponents:
    n: int
    p: float
    q: float
    alpha0: float
    beta0: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidExponent(f"dimension n must be an integer >= 2, got {self.n}")
        if not (self.p > 1 and self.q > 1):
            raise InvalidExponent(f"need p, q > 1, got p={self.p}, q={self.q}")

    @property
    def scaling_gap(self):
        """``alpha0 - beta0 - (n/2)(1/p - 1/q)``."""
        n, p, q = self.n, self.p, self.q
        return self.alpha0 - self.beta0 - 0.5 * n * (1 / p - 1 / q)


@dataclass(frozen=True)
class Verdict:
    name: str
    statement: str
    slack: float
    strict: bool

    @property
    def passed(self):
        return self.slack > 0 if self.strict else self.slack >= 0


@dataclass(frozen=True)
class ConstraintReport:
    verdicts: tuple

    @property
    def passed(self):
        return all(v.passed for v in self.verdicts)

    @property
    def violations(self):
        return [v.name for v in self.verdicts if not v.passed]

    def __getitem__(self, name):
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def to_dict(self):
        return {
            "passed": self.passed,
            "verdicts": [dict(asdict(v), passed=v.passed) for v in self.verdicts],
        }


def _v(name, statement, slack, strict):
    return Verdict(name, statement, float(slack), strict)


def check_base_exponents(base):
    """Itemized verdicts for the standing assumptions on ``(n, p, q, alpha0, beta0)``."""
    n, p, q, a0, b0 = base.n, base.p, base.q, base.alpha0, base.beta0
    E = base.scaling_gap
    return ConstraintReport((
        _v("p_lower", "max{1, n/3} < p", p - max(1.0, n / 3), True),
        _v("q_lower", "1 < q", q - 1, True),
        _v("sobolev_pq", "1/p - 1/(2q) < 1/n", 1 / n - (1 / p - 1 / (2 * q)), True),
        _v("sobolev_qp", "1/q - 1/p < 2/n", 2 / n - (1 / q - 1 / p), True),
        _v("alpha0_lower", "alpha0 >= max{0, n/(2p) - 1/2}", a0 - max(0.0, n / (2 * p) - 0.5), False),
        _v("alpha0_upper", "alpha0 < 1", 1 - a0, True),
        _v("beta0_lower", "beta0 >= 0", b0, False),
        _v("beta0_upper", "beta0 < 1", 1 - b0, True),
        _v("alpha0_beta0_balance", "alpha0 - beta0/2 - (n/2)(1/p - 1/(2q)) >= 0",
           a0 - b0 / 2 - 0.5 * n * (1 / p - 1 / (2 * q)), False),
        _v("gap_lower", "-1 < alpha0 - beta0 - (n/2)(1/p - 1/q)", E + 1, True),
        _v("gap_upper", "alpha0 - beta0 - (n/2)(1/p - 1/q) <= 1", 1 - E, False),
    ))


def check_regularity_exponents(base):
    """Itemized verdicts for the extra conditions used for time-derivative regularity."""
    n, p, q, a0, b0 = base.n, base.p, base.q, base.alpha0, base.beta0
    return ConstraintReport((
        _v("reg_alpha0", "alpha0 >= n(1/p - 1/(2q))", a0 - n * (1 / p - 1 / (2 * q)), False),
        _v("reg_beta0", "beta0 >= n/(2p) - 1/2", b0 - (n / (2 * p) - 0.5), False),
        _v("reg_balance", "2 alpha0 - beta0 >= n/(2p) - 1/2", 2 * a0 - b0 - (n / (2 * p) - 0.5), False),
        _v("classical_p", "n < p", p - n, True),
        _v("classical_q", "n < q", q - n, True),
        _v("classical_pq", "1/p - 1/(2q) <= 0", -(1 / p - 1 / (2 * q)), False),
        _v("classical_qp", "1/q - 1/p < 2/n", 2 / n - (1 / q - 1 / p), True),
    ))


@dataclass(frozen=True)
class ExponentPlan:
    base: BaseExponents
    delta1: float
    delta2: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    branch: str = "strict"
    min_slack: float = 0.0
    margins: float = 0.0

    @property
    def gamma(self):
        """Time power ``1 + beta0 - alpha0 - beta1`` of the forcing term in the bound recursion."""
        return 1 + self.base.beta0 - self.base.alpha0 - self.beta1

    def to_dict(self):
        d = asdict(self)
        d["base"] = asdict(self.base)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["base"] = BaseExponents(**d["base"])
        return cls(**d)


# interval bookkeeping -------------------------------------------------------

@dataclass
class _Bound:
    name: str
    value: float
    strict: bool

    def at(self, s, sign):
        return self.value + sign * s if self.strict else self.value


@dataclass
class _Interval:
    lower: list = field(default_factory=list)
    upper: list = field(default_factory=list)

    def lo(self, s):
        return max(b.at(s, +1) for b in self.lower)

    def hi(self, s):
        return min(b.at(s, -1) for b in self.upper)

    def binding(self, s):
        lo = max(self.lower, key=lambda b: b.at(s, +1))
        hi = min(self.upper, key=lambda b: b.at(s, -1))
        return [lo.name, hi.name]


def choose_deltas(base, delta=DEFAULT_DELTA):
    d1 = 0.0 if base.alpha0 > 0 else delta
    d2 = 0.0 if base.beta0 > 0 else delta
    return d1, d2


def _blocks(base, d1, d2):
    n, p, q, a0, b0 = base.n, base.p, base.q, base.alpha0, base.beta0
    B = _Bound
    a1 = _Interval(
        [B("alpha1 > alpha0", a0, True), B("alpha1 > 0", 0.0, True),
         B("alpha1 + delta1 > 1/2", 0.5 - d1, True),
         B("2 alpha1 + delta1 >= n/(2p) + 1/2", (n / (2 * p) + 0.5 - d1) / 2, False)],
        [B("alpha1 < 1 - delta1", 1 - d1, True),
         B("2 alpha1 + delta1 <= 1 + alpha0", (1 + a0 - d1) / 2, False)],
    )
    a2 = _Interval(
        [B("alpha2 > alpha0", a0, True), B("alpha2 >= 0", 0.0, False),
         B("alpha2 > (n/2)(1/p - 1/q)", 0.5 * n * (1 / p - 1 / q), True),
         B("alpha2 >= max{0, 1/2 + (n/2)(1/p - 1/(2q))}",
           max(0.0, 0.5 + 0.5 * n * (1 / p - 1 / (2 * q))), False)],
        [B("alpha2 < 1 - delta1", 1 - d1, True), B("alpha2 <= 1", 1.0, False),
         B("alpha2 <= alpha0 + (1 - beta0)/2", a0 + (1 - b0) / 2, False)],
    )
    b2 = _Interval(
        [B("beta2 > beta0", b0, True), B("beta2 >= 0", 0.0, False),
         B("beta2 + delta2 > 1/2", 0.5 - d2, True)],
        [B("beta2 < 1 - delta2", 1 - d2, True)],
    )
    strip = _Interval(
        [B("alpha2 + beta2 + delta2 >= n/(2p) + 1/2", n / (2 * p) + 0.5 - d2, False)],
        [B("alpha2 + beta2 + delta2 <= 1 + alpha0", 1 + a0 - d2, False)],
    )
    b1 = _Interval(
        [B("beta1 > beta0", b0, True),
         B("beta1 >= max{0, (n/2)(1/q - 1/p)}", max(0.0, 0.5 * n * (1 / q - 1 / p)), False)],
        [B("beta1 < 1 - delta2", 1 - d2, True), B("beta1 <= 1", 1.0, False)],
    )
    E = base.scaling_gap
    target = 1 - a0 + b0
    if abs(E - 1) <= EQUALITY_TOL:
        branch = "equality"
        b1.lower.append(B("beta1 = 1 - alpha0 + beta0", target, False))
        b1.upper.append(B("beta1 = 1 - alpha0 + beta0", target, False))
    else:
        branch = "strict"
        b1.upper.append(B("beta1 < 1 - alpha0 + beta0", target, True))
    consts = [
        ("0 <= delta1 < 1/2 + (n/2)(1 - 1/p)", 0.5 + 0.5 * n * (1 - 1 / p) - d1),
        ("0 <= delta2 < 1/2 + (n/2)(1 - 1/q)", 0.5 + 0.5 * n * (1 - 1 / q) - d2),
    ]
    return {"alpha1": a1, "alpha2": a2, "beta2": b2, "sum": strip, "beta1": b1}, consts, branch


def _select(blocks, s):
    """Smallest admissible values at strict slack ``s``; ``None`` where a block is empty."""
    out, bad = {}, []
    for name in ("alpha1", "beta1"):
        iv = blocks[name]
        lo, hi = iv.lo(s), iv.hi(s)
        if lo > hi:
            bad.extend(iv.binding(s))
        out[name] = lo
    a2, b2, sm = blocks["alpha2"], blocks["beta2"], blocks["sum"]
    alo, ahi, blo, bhi = a2.lo(s), a2.hi(s), b2.lo(s), b2.hi(s)
    slo, shi = sm.lo(s), sm.hi(s)
    if alo > ahi:
        bad.extend(a2.binding(s))
    if blo > bhi:
        bad.extend(b2.binding(s))
    if alo + blo > shi:
        bad.extend([a2.binding(s)[0], b2.binding(s)[0], sm.binding(s)[1]])
    if ahi + bhi < slo:
        bad.extend([a2.binding(s)[1], b2.binding(s)[1], sm.binding(s)[0]])
    a = max(alo, slo - bhi)
    out["alpha2"] = a
    out["beta2"] = max(blo, slo - a)
    return out, list(dict.fromkeys(bad))


def plan_exponents(base, margins=0.0, delta=DEFAULT_DELTA):
    """Choose auxiliary exponents maximizing the minimum strict slack.

    ``margins`` is the smallest acceptable strict slack.  Raises ``PlanInfeasible``
    with a report naming the violated or binding constraints.
    """
    gate = check_base_exponents(base)
    if not gate.passed:
        raise PlanInfeasible(f"base exponents violate {gate.violations}", report=gate.to_dict())
    if margins < 0:
        raise InvalidExponent("margins must be >= 0")
    d1, d2 = choose_deltas(base, delta)
    blocks, consts, branch = _blocks(base, d1, d2)
    need = max(margins, _EPS_SLACK)

    def infeasible(names):
        report = {"passed": False, "violations": names, "deltas": [d1, d2], "branch": branch,
                  "margins": margins}
        return PlanInfeasible(f"no exponent plan with slack >= {need:g}: binding {names}", report=report)

    bad_consts = [name for name, slack in consts if slack < need]
    if bad_consts:
        raise infeasible(bad_consts)
    _, bad = _select(blocks, need)
    if bad:
        raise infeasible(bad)

    lo, hi = need, min(1.0, min(slack for _, slack in consts))
    if not _select(blocks, hi)[1]:
        lo = hi
    else:
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if _select(blocks, mid)[1]:
                hi = mid
            else:
                lo = mid
    values, _ = _select(blocks, lo)
    return ExponentPlan(base, d1, d2, values["alpha1"], values["alpha2"], values["beta1"],
                        values["beta2"], branch, lo, margins)
