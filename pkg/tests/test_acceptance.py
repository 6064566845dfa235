"""The twelve acceptance criteria at their stated tolerances."""
import numpy as np
import pytest

from mildflow.errors import MildflowError, PlanInfeasible
from mildflow.exponents.planner import BaseExponents, check_base_exponents, plan_exponents
from mildflow.exponents.recursion import diagonal_semigroup_constant
from mildflow.exponents.validate import revalidate
from mildflow.forcing import make_law
from mildflow.harness import ExperimentConfig, persist, run_experiment
from mildflow.lab.gronwall import GronwallSpec, domination_constant, dominates, random_spec, volterra_oracle
from mildflow.lab.semigroup import estimate_semigroup_constant
from mildflow.lab.trajectory import continuous_dependence, fit_decay_rate, holder_quotient
from mildflow.rhs import convection_temperature, convection_velocity, dissipation_grid
from mildflow.solver import TimeGrid, etd_march, picard_solve, residual_strong, solve
from mildflow.spectral import (
    STOKES, TEMPERATURE, VELOCITY_NORM2, ScalarField, VelocityField, eigenvalue_table, l2_norm, make_operator,
)


def damped_data(K, amp, power=1.0, seed=0):
    """Random velocity and temperature with coefficients damped by lam^-power, scaled to L2 norm ``amp``."""
    rng = np.random.default_rng(seed)
    lam = eigenvalue_table(K)
    u = VelocityField(rng.standard_normal((K, K)) / lam ** (power + 0.5))
    th = ScalarField(rng.standard_normal((K, K)) / lam**power)
    return u * (amp / l2_norm(u)), th * (amp / l2_norm(th))


def sampled(traj, stride):
    return traj.u[::stride], traj.theta[::stride]


def max_dist(a, b):
    return max(np.abs(a[0] - b[0]).max(), np.abs(a[1] - b[1]).max())


@pytest.mark.parametrize("mode", ["picard", "etd"])
def test_c01_linear_exactness(mode, criterion):
    K = 4
    b = np.zeros((K, K))
    b[0, 0] = 0.3
    traj = solve(mode, VelocityField.zeros(K), ScalarField(b), make_law("zero"), TimeGrid(1.0, 1 / 32))
    exact = 0.3 * np.exp(-2 * traj.times)
    err = np.max(np.abs(traj.theta[:, 0, 0] - exact) / exact)
    rest = np.abs(traj.theta).sum(axis=(1, 2)) - np.abs(traj.theta[:, 0, 0])
    ok = err <= 1e-10 and not rest.any() and not traj.u.any()
    assert criterion(1, f"linear exactness ({mode})", ok, f"max rel err {err:.2e} <= 1e-10")


def test_c02_picard_contraction(criterion):
    u0, th0 = damped_data(8, 1e-2)
    _, dist = picard_solve(u0, th0, make_law("sin"), TimeGrid(0.5, 1 / 64), max_iter=20, tol=1e-10)
    d = np.asarray(dist)
    ratios = d[2:] / d[1:-1]
    ok = len(d) <= 20 and d[-1] <= 1e-10 and np.all(ratios <= 0.5)
    assert criterion(2, "Picard contraction", ok,
                     f"{len(d)} iterations, max ratio {ratios.max():.3g} <= 0.5, final {d[-1]:.1e}")


def test_c03_scheme_order(criterion):
    u0, th0 = damped_data(8, 1e-2)
    law = make_law("sin")
    ref = etd_march(u0, th0, law, TimeGrid(1.0, 1 / 1024))
    errs = []
    for n in (32, 64, 128):
        run = etd_march(u0, th0, law, TimeGrid(1.0, 1 / n))
        errs.append(max_dist(sampled(run, 1), sampled(ref, 1024 // n)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    ok = np.all((orders >= 1.6) & (orders <= 2.4))
    assert criterion(3, "ETD self-convergence order", ok, f"orders {np.round(orders, 3).tolist()} in [1.6, 2.4]")


def test_c04_residual_ratio(criterion):
    # smooth, stiff-free data so the residual is dominated by the time-stepping error
    u0, th0 = damped_data(4, 1e-1, power=2.0)
    law = make_law("linear-buoyancy", g=1.0)
    res = []
    for n in (128, 256, 512):
        ru, rt = residual_strong(etd_march(u0, th0, law, TimeGrid(1.0, 1 / n)))
        res.append(max(ru.max(), rt.max()))
    ratios = np.array(res[:-1]) / np.array(res[1:])
    ok = np.all(np.abs(ratios - 4) <= 0.3 * 4)
    assert criterion(4, "strong residual halving ratio", ok, f"ratios {np.round(ratios, 3).tolist()} in 4 +- 30%")


def _bounded(amp, K=8, T=5.0, dt=1 / 32):
    u0, th0 = damped_data(K, amp, seed=1)
    try:
        traj = etd_march(u0, th0, make_law("sin"), TimeGrid(T, dt))
    except MildflowError:
        return None
    nu, nt = traj.l2_norms()
    ok = np.all(np.isfinite(nu + nt)) and (nu + nt)[-1] <= (nu + nt)[0]
    return traj if ok else None


def test_c05_small_data_decay(criterion):
    lo, hi = 1e-3, 1e2
    assert _bounded(lo) is not None
    if _bounded(hi) is not None:
        lo = hi
    else:
        for _ in range(30):
            mid = np.sqrt(lo * hi)
            if _bounded(mid) is not None:
                lo = mid
            else:
                hi = mid
            if hi / lo < 1.05:
                break
    traj = _bounded(lo)
    rate, _ = fit_decay_rate(traj, "l2-sum", (1.0, 5.0))
    assert criterion(5, "small-data global decay", rate >= 1.5,
                     f"eps {lo:.3g} by bisection, fitted rate {rate:.4f} >= 1.5 (< 2)")


def test_c06_continuous_dependence(criterion):
    plan = plan_exponents(BaseExponents(2, 2.0, 2.0, 0.5, 0.5))
    K = 8
    u0, th0 = damped_data(K, 1e-2, seed=2)
    law = make_law("sin")
    grid = TimeGrid(1.0, 1 / 64)
    base = etd_march(u0, th0, law, grid)
    d = np.zeros((K, K))
    d[0, 0] = 1.0
    sups = []
    for D0 in (1e-3, 1e-4, 1e-5):
        other = etd_march(u0 + VelocityField(D0 * d), th0 + ScalarField(D0 * d), law, grid)
        sups.append(continuous_dependence(base, other, plan=plan)[2])
    spread = max(sups) / min(sups) - 1
    assert criterion(6, "continuous dependence ratio", spread <= 0.2,
                     f"sup ratios {np.round(sups, 5).tolist()}, spread {spread:.2%} <= 20%")


def test_c07_semigroup_envelope(criterion):
    worst = []
    ok = True
    for kind in (STOKES, TEMPERATURE):
        for alpha, lam in ((0.5, 1.0), (1.0, 1.0)):
            rep = estimate_semigroup_constant(make_operator(kind, 16), alpha, lam, samples=100)
            env = diagonal_semigroup_constant(alpha, lam)
            ok &= rep.constant <= env + 1e-9
            worst.append(rep.constant - env)
    assert criterion(7, "semigroup envelope", ok, f"max (empirical - envelope) {max(worst):.2e} <= 1e-9")


def test_c08_gronwall_domination(criterion):
    spec = GronwallSpec(((1.0, 0.0),), ((1.0, 0.0),))
    t, y = volterra_oracle(spec, 4096)
    oracle_err = float(np.max(np.abs(y - np.exp(t))))
    ok = oracle_err <= 1e-6
    constants = []
    for seed in range(10):
        s = random_spec(seed)
        C = domination_constant(s, 1024)
        ok &= C is not None and dominates(s, C, 1024) and dominates(s.scaled_a(10.0), C, 1024)
        constants.append(C)
    assert criterion(8, "Gronwall domination", ok,
                     f"oracle err {oracle_err:.1e} <= 1e-6, C per spec {constants}, all survive a -> 10a")


def test_c09_planner_soundness(criterion):
    rng = np.random.default_rng(2024)
    seen = emitted = 0
    ok = True
    while seen < 50:
        base = BaseExponents(int(rng.choice([2, 3])), 1 / rng.uniform(0.05, 0.95), 1 / rng.uniform(0.05, 0.95),
                             rng.uniform(0, 0.99), rng.uniform(0, 0.99))
        if not check_base_exponents(base).passed:
            continue
        seen += 1
        try:
            plan = plan_exponents(base)
        except PlanInfeasible:
            continue
        emitted += 1
        ok &= revalidate(plan)[0]
    worked = revalidate(plan_exponents(BaseExponents(2, 2.0, 2.0, 0.5, 0.5)))[0]
    zero = BaseExponents(2, 2.0, 2.0, 0.0, 0.0)
    try:
        plan_exponents(zero)
        named = False
    except PlanInfeasible as exc:
        named = "alpha0_beta0_balance" in str(exc)
    ok = ok and worked and named
    assert criterion(9, "planner soundness", ok,
                     f"{emitted}/50 plans emitted, all revalidate; worked case feasible; zero base names the balance")


def test_c10_dissipation_structure(criterion):
    rng = np.random.default_rng(10)
    K = 8
    lam = eigenvalue_table(K)
    worst_phi, worst_skew = np.inf, 0.0
    for _ in range(100):
        u = VelocityField(rng.standard_normal((K, K)) / lam)
        th = ScalarField(rng.standard_normal((K, K)) / lam)
        worst_phi = min(worst_phi, dissipation_grid(u, u).min())
        nu, nt = l2_norm(u), l2_norm(th)
        sv = VELOCITY_NORM2 * np.sum(lam * convection_velocity(u).coeffs * u.coeffs) / nu**3
        st = np.sum(convection_temperature(u, th).coeffs * th.coeffs) / (nu * nt**2)
        worst_skew = max(worst_skew, abs(sv), abs(st))
    ok = worst_phi >= -1e-12 and worst_skew <= 1e-10
    assert criterion(10, "dissipation structure", ok,
                     f"min Phi {worst_phi:.2e} >= -1e-12, max normalized skew {worst_skew:.1e} <= 1e-10")


HOLDER_ADMISSIBLE = 1.0


def _holder_series(gamma, levels=7):
    u0, th0 = damped_data(8, 1e-2, seed=3)
    law = make_law("sin")
    q = []
    for j in range(levels):
        traj = etd_march(u0, th0, law, TimeGrid(1.0, 1 / (16 * 2**j)))
        q.append(holder_quotient(traj, gamma, 1.0, t_start=0.25)[0])
    return np.array(q)


def test_c11_holder_contrast(criterion):
    inside = _holder_series(0.5)
    steps = inside[1:] / inside[:-1]
    stable = np.all(np.abs(steps - 1) <= 0.2)
    outside = _holder_series(HOLDER_ADMISSIBLE + 0.2)
    growth = outside[-1] / outside[0]
    ok = stable and growth >= 2
    assert criterion(11, "Hoelder quotient contrast", ok,
                     f"gamma 0.5 step changes <= {np.abs(steps - 1).max():.1%}; "
                     f"gamma 1.2 grows {growth:.2f}x over 6 halvings (>= 2)")


def test_c12_determinism(criterion, tmp_path):
    cfg = ExperimentConfig.from_mapping({
        "initial": {"recipe": "random-band", "seed": 17, "band": 4},
        "time": {"T": 0.5, "dt": "1/64"},
        "checks": {"decay": {"min_rate": 0.0}, "restart": {}, "residual": {}, "dependence": {}, "bounds": {}},
    })
    a = run_experiment(cfg, out=tmp_path / "a")
    b = run_experiment(cfg, out=tmp_path / "b")
    same_bytes = persist.canonical_json(a.hashed_content()) == persist.canonical_json(b.hashed_content())
    ok = a.content_hash == b.content_hash and a.status == b.status == "pass" and same_bytes
    assert criterion(12, "determinism", ok, f"hash {a.content_hash[:16]} repeated, status {a.status}")
