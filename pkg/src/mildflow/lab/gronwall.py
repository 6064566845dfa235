"""Weakly singular Gronwall bound and a product-integration reference solution.

The reference solves, with equality,

    y(t) = sum_i a_i t^-alpha_i + sum_j b_j int_0^t (t - s)^-beta_j y(s) ds.

Power terms ``t^gamma`` map to ``b B(1 - beta, 1 + gamma) t^(1 + gamma - beta)``
under the kernel, so the part of ``y`` with exponents below 1 is summed exactly.
The remainder ``z`` starts at 0, is continuous, and is solved with a piecewise
linear product-integration rule whose kernel moments are integrated exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import DomainError, OracleFailure
from ..exponents.recursion import beta_function

SMOOTH_EXPONENT = 1.0
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class GronwallSpec:
    a: tuple  # ((a_i, alpha_i), ...)
    b: tuple  # ((b_j, beta_j), ...)
    T: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", tuple((float(c), float(e)) for c, e in self.a))
        object.__setattr__(self, "b", tuple((float(c), float(e)) for c, e in self.b))
        if not self.a or not self.b:
            raise DomainError("both term lists must be nonempty")
        for c, e in self.a:
            if not (c > 0 and 0 <= e < 1):
                raise DomainError(f"a-term needs a > 0 and alpha in [0, 1), got ({c}, {e})")
        for c, e in self.b:
            if not (c >= 0 and 0 <= e < 1):
                raise DomainError(f"b-term needs b >= 0 and beta in [0, 1), got ({c}, {e})")
        if not self.T > 0:
            raise DomainError(f"horizon must be positive, got {self.T}")

    def scaled_a(self, factor):
        return GronwallSpec(tuple((c * factor, e) for c, e in self.a), self.b, self.T)

    def to_dict(self):
        return {"a": [list(x) for x in self.a], "b": [list(x) for x in self.b], "T": self.T}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(map(tuple, d["a"])), tuple(map(tuple, d["b"])), float(d.get("T", 1.0)))


def random_spec(seed):
    """Random spec with at most two terms per list, ``beta_j <= 0.8`` and ``T = 1``.

    Kernel weights are drawn as ``b_j = u_j / (m Gamma(1 - beta_j))`` with
    ``u_j <= 1``, which keeps the solution's exponential growth rate below 1; raw
    ``b_j`` of order one with ``beta_j`` near 0.8 give growth like ``exp(500 t)``.
    """
    rng = np.random.default_rng(seed)
    a = tuple((rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.9)) for _ in range(rng.integers(1, 3)))
    m = int(rng.integers(1, 3))
    betas = rng.uniform(0.0, 0.8, size=m)
    b = tuple((rng.uniform(0.2, 1.0) / (m * math.gamma(1 - be)), be) for be in betas)
    return GronwallSpec(a, b, 1.0)


def n_beta(spec):
    beta = max(e for _, e in spec.b)
    return math.floor(beta / (1 - beta)) + 1


def gronwall_bound(spec, t, C):
    """The generalized Gronwall bound at ``t`` (scalar or array) with explicit constant ``C``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > spec.T * (1 + 1e-12)):
        raise DomainError(f"bound needs 0 < t <= {spec.T}")
    if not (np.isfinite(C) and C > 0):
        raise DomainError(f"constant must be positive and finite, got {C}")
    nb = n_beta(spec)
    B1 = sum(c * t ** (1 - e) for c, e in spec.b)
    lead = sum(c * t**-e for c, e in spec.a)
    Bn = B1 ** (nb + 1)
    with np.errstate(over="ignore"):
        growth = 1 + Bn * np.exp(C * Bn)
    partial = sum(B1**k for k in range(nb + 1))
    out = C * lead * growth * partial
    return float(out) if out.ndim == 0 else out


# reference solution ----------------------------------------------------------

def _key(e):
    return round(e, 12)


def _singular_part(spec):
    """Closure of the forcing powers under the kernel, split at ``SMOOTH_EXPONENT``.

    Returns ``(S, G)`` as ``{exponent: coefficient}``: ``S`` holds exponents below the
    split (summed into ``y`` exactly), ``G`` the kernel image of ``S`` above it.
    """
    S, G = {}, {}
    frontier = {}
    for c, e in spec.a:
        frontier[_key(-e)] = frontier.get(_key(-e), 0.0) + c
    while frontier:
        for g, c in frontier.items():
            S[g] = S.get(g, 0.0) + c
        nxt = {}
        for g, c in frontier.items():
            for bc, be in spec.b:
                if bc == 0:
                    continue
                ng = _key(g + 1 - be)
                val = c * bc * beta_function(1 - be, 1 + g)
                target = nxt if ng < SMOOTH_EXPONENT else G
                target[ng] = target.get(ng, 0.0) + val
        frontier = nxt
    return S, G


def _power_sum(terms, t):
    out = np.zeros_like(t)
    for g, c in terms.items():
        out += c * np.power(t, g) if g != 0 else c
    return out


def _moments(beta, n):
    """``P(n) = int_0^1 (n-s)^-beta ds`` and ``Q(n) = int_0^1 s (n-s)^-beta ds`` for ``n = 1..len``."""
    n = np.asarray(n, dtype=float)
    P = (n ** (1 - beta) - (n - 1) ** (1 - beta)) / (1 - beta)
    Q = np.empty_like(n)
    one = n == 1
    Q[one] = 1.0 / ((1 - beta) * (2 - beta))
    m = n[~one]
    if m.size:
        w = (m[:, None] - _GL_X[None, :]) ** -beta
        Q[~one] = w @ (_GL_X * _GL_W)
        # P by quadrature as well, avoiding cancellation for large n
        P[~one] = w @ _GL_W
    return P, Q


def volterra_oracle(spec, M, impl=None):
    """Reference ``y`` at the nodes ``t_i = i T / M``, ``i = 1..M``; returns ``(t, y)``."""
    if M < 16:
        raise ValueError(f"oracle needs M >= 16 nodes, got {M}")
    h = spec.T / M
    t = h * np.arange(M + 1)
    S, G = _singular_part(spec)
    n = np.arange(1, M + 2)
    L = np.zeros(M + 2)
    R = np.zeros(M + 2)
    for bc, be in spec.b:
        if bc == 0:
            continue
        P, Q = _moments(be, n)
        L[1:] += bc * h ** (1 - be) * (P - Q)
        R[1:] += bc * h ** (1 - be) * Q
    denom = 1.0 - R[1]
    if denom <= 0:
        raise OracleFailure(f"node solve singular (1 - R(1) = {denom:.3g}); increase M")
    g = _power_sum(G, t)
    left0 = L[: M + 1].copy()
    lag = np.zeros(M + 1)
    lag[1:] = L[1: M + 1] + R[2: M + 2]
    z = kernels.volterra_lag_solve(g, left0, lag, denom, 0.0, impl=impl)
    y = _power_sum(S, t[1:]) + z[1:]
    if not np.all(np.isfinite(y)):
        raise OracleFailure("reference solution is not finite")
    return t[1:], y


def domination_constant(spec, M=1024, k_range=(-8, 64), oracle=None):
    """Smallest ``C = 2^k`` whose bound dominates the reference at every node; ``None`` if none does."""
    t, y = oracle if oracle is not None else volterra_oracle(spec, M)
    for k in range(*k_range):
        C = 2.0**k
        if np.all(gronwall_bound(spec, t, C) >= y):
            return C
    return None


def dominates(spec, C, M=1024, oracle=None):
    t, y = oracle if oracle is not None else volterra_oracle(spec, M)
    return bool(np.all(gronwall_bound(spec, t, C) >= y))


def bound_table(spec, M=1024, C=None):
    """Rows ``(t, oracle, bound)`` and the constant used (searched when not given)."""
    t, y = volterra_oracle(spec, M)
    if C is None:
        C = domination_constant(spec, oracle=(t, y))
        if C is None:
            raise OracleFailure("no dominating constant found on the search grid")
    return np.column_stack([t, y, gronwall_bound(spec, t, C)]), C
