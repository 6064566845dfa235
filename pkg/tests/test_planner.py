import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from mildflow.errors import InvalidExponent, PlanInfeasible
from mildflow.exponents.planner import (
    BaseExponents, ExponentPlan, check_base_exponents, check_regularity_exponents, choose_deltas, plan_exponents,
)
from mildflow.exponents.validate import plan_checks, revalidate

WORKED = BaseExponents(2, 2.0, 2.0, 0.5, 0.5)


def test_worked_case_feasible():
    plan = plan_exponents(WORKED)
    ok, failures, slack = revalidate(plan)
    assert ok, failures
    assert plan.delta1 == plan.delta2 == 0.0
    assert plan.branch == "strict" and slack > 0


def test_zero_base_names_violation():
    base = BaseExponents(2, 2.0, 2.0, 0.0, 0.0)
    gate = check_base_exponents(base)
    assert gate.violations == ["alpha0_beta0_balance"]
    with pytest.raises(PlanInfeasible, match="alpha0_beta0_balance") as info:
        plan_exponents(base)
    assert info.value.report["passed"] is False


def test_delta_rule():
    assert choose_deltas(BaseExponents(2, 4.0, 2.0, 0.0, 0.3)) == (0.05, 0.0)
    assert choose_deltas(BaseExponents(2, 4.0, 2.0, 0.3, 0.0), 0.1) == (0.0, 0.1)


def test_zero_alpha_feasible_when_balance_allows():
    # alpha0 = beta0 = 0 passes the base gate only when 1/p <= 1/(2q)
    base = BaseExponents(2, 4.0, 2.0, 0.0, 0.0)
    assert check_base_exponents(base).passed
    with pytest.raises(PlanInfeasible):
        plan_exponents(base)


def test_invalid_base():
    with pytest.raises(InvalidExponent):
        BaseExponents(1, 2.0, 2.0, 0.5, 0.5)
    with pytest.raises(InvalidExponent):
        BaseExponents(2, 1.0, 2.0, 0.5, 0.5)


def test_margins():
    plan = plan_exponents(WORKED)
    with pytest.raises(PlanInfeasible):
        plan_exponents(WORKED, margins=plan.min_slack + 1e-3)
    tight = plan_exponents(WORKED, margins=plan.min_slack * 0.5)
    assert revalidate(tight)[0] and tight.min_slack >= 0.5 * plan.min_slack
    with pytest.raises(InvalidExponent):
        plan_exponents(WORKED, margins=-1)


def test_equality_branch():
    # gap alpha0 - beta0 - (n/2)(1/p - 1/q) = 1 forces beta1 = 1 - alpha0 + beta0
    base = BaseExponents(2, 2.0, 5 / 3, 0.9, 0.0)
    assert base.scaling_gap == pytest.approx(1.0)
    plan = plan_exponents(base)
    assert plan.branch == "equality"
    assert plan.beta1 == pytest.approx(1 - base.alpha0 + base.beta0)
    assert revalidate(plan)[0]


def test_regularity_report():
    rep = check_regularity_exponents(BaseExponents(2, 6.0, 3.0, 0.5, 0.5))
    assert rep.passed
    rep = check_regularity_exponents(WORKED)
    assert "classical_p" in rep.violations


def test_roundtrip():
    plan = plan_exponents(WORKED)
    assert ExponentPlan.from_dict(plan.to_dict()) == plan


def test_revalidate_catches_tampering():
    plan = plan_exponents(WORKED)
    bad = ExponentPlan.from_dict(dict(plan.to_dict(), alpha1=0.99))
    ok, failures, _ = revalidate(bad)
    assert not ok and "2 alpha1 + delta1 <= 1 + alpha0" in failures


bases = st.builds(
    lambda n, ip, iq, a0, b0: BaseExponents(n, 1 / ip, 1 / iq, a0, b0),
    st.sampled_from([2, 3]), st.floats(0.02, 0.98), st.floats(0.02, 0.98),
    st.floats(0.0, 0.99), st.floats(0.0, 0.99),
)


@settings(max_examples=300, deadline=None)
@given(bases)
def test_emitted_plans_revalidate(base):
    assume(check_base_exponents(base).passed)
    try:
        plan = plan_exponents(base)
    except PlanInfeasible as exc:
        assert exc.report["violations"]
        return
    ok, failures, slack = revalidate(plan)
    assert ok, failures
    assert slack > 0


def test_fifty_random_bases():
    rng = np.random.default_rng(11)
    emitted = 0
    seen = 0
    while seen < 50:
        n = int(rng.choice([2, 3]))
        base = BaseExponents(n, 1 / rng.uniform(0.05, 0.95), 1 / rng.uniform(0.05, 0.95),
                             rng.uniform(0, 0.99), rng.uniform(0, 0.99))
        if not check_base_exponents(base).passed:
            continue
        seen += 1
        try:
            plan = plan_exponents(base)
        except PlanInfeasible:
            continue
        emitted += 1
        assert revalidate(plan)[0]
    assert emitted >= 25


def test_checker_names_unique():
    names = [c.name for c in plan_checks(plan_exponents(WORKED))]
    assert len(names) == len(set(names))


def test_margins_slack_reported():
    for m in (0.0, 0.01):
        plan = plan_exponents(WORKED, margins=m)
        ok, _, slack = revalidate(plan)
        assert ok and slack >= m


def test_failing_base_propagates_violations():
    base = BaseExponents(2, 2.0, 2.0, 1.2, 0.5)
    with pytest.raises(PlanInfeasible) as info:
        plan_exponents(base)
    names = [v["name"] for v in info.value.report["verdicts"] if not v["passed"]]
    assert names == check_base_exponents(base).violations


@pytest.mark.parametrize("base,binding", [
    (BaseExponents(2, 4.0, 2.0, 0.0, 0.0), "alpha2 + beta2 + delta2 <= 1 + alpha0"),
    (BaseExponents(3, 3.244, 1.058, 0.01, 0.0), "beta1 < 1 - delta2"),
])
def test_gate_passing_but_infeasible(base, binding):
    assert check_base_exponents(base).passed
    with pytest.raises(PlanInfeasible) as info:
        plan_exponents(base)
    assert binding in info.value.report["violations"]
