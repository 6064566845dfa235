"""Diagonal Stokes/Dirichlet operators on the square (0, pi)^2.

Temperature fields are expanded in the orthonormal Dirichlet basis
``e_kl = (2/pi) sin(kx) sin(ly)``.  Velocities are stored through a stream
function ``psi = sum c_kl sin(kx) sin(ly)`` with ``u = (psi_y, -psi_x)``; each
such ``u`` is divergence free, tangential on the boundary, stress free, and an
eigenfunction of the Stokes operator with eigenvalue ``k^2 + l^2``.  Powers and
semigroups therefore act coefficient-wise.

Coefficient arrays have shape ``(K, K)`` with entry ``[k-1, l-1]``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    InvalidBandwidth,
    InvalidExponent,
    InvalidTime,
    ResolutionError,
    ShapeError,
)

TEMPERATURE = "temperature-laplacian"
STOKES = "stokes-freeslip"
KINDS = (TEMPERATURE, STOKES)

# ||curl(sin kx sin ly)||_2^2 = VELOCITY_NORM2 * (k^2 + l^2)
VELOCITY_NORM2 = np.pi**2 / 4.0


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def eigenvalue_table(K):
    k = np.arange(1, K + 1, dtype=float)
    return _frozen(k[:, None] ** 2 + k[None, :] ** 2)


@dataclass(frozen=True)
class Operator:
    """Positive diagonal operator with eigenvalues ``k^2 + l^2``, ``1 <= k, l <= K``."""

    kind: str
    bandwidth: int
    eigenvalues: np.ndarray
    first_eigenvalue: float

    def __repr__(self):
        return f"Operator({self.kind!r}, K={self.bandwidth})"


def make_operator(kind, bandwidth):
    if kind not in KINDS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {KINDS}")
    if int(bandwidth) != bandwidth or bandwidth < 1:
        raise InvalidBandwidth(f"bandwidth must be an integer >= 1, got {bandwidth}")
    eig = eigenvalue_table(int(bandwidth))
    return Operator(kind, int(bandwidth), eig, float(eig.min()))


class _Field:
    kind = None

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 1:
            raise ShapeError(f"coefficients must be a square (K, K) array, got {c.shape}")
        c.setflags(write=False)
        self._c = c

    @property
    def coeffs(self):
        return self._c

    @property
    def bandwidth(self):
        return self._c.shape[0]

    @classmethod
    def zeros(cls, K):
        return cls(np.zeros((K, K)))

    def _check(self, other):
        if type(other) is not type(self):
            raise ShapeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.bandwidth != self.bandwidth:
            raise ShapeError(f"bandwidth mismatch: {self.bandwidth} vs {other.bandwidth}")

    def __add__(self, other):
        self._check(other)
        return type(self)(self._c + other._c)

    def __sub__(self, other):
        self._check(other)
        return type(self)(self._c - other._c)

    def __mul__(self, s):
        return type(self)(self._c * float(s))

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(-self._c)

    def __eq__(self, other):
        return type(other) is type(self) and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash((type(self).__name__, self._c.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}(K={self.bandwidth})"

    def truncate(self, K):
        """Zero-pad or cut to bandwidth ``K``."""
        out = np.zeros((K, K))
        m = min(K, self.bandwidth)
        out[:m, :m] = self._c[:m, :m]
        return type(self)(out)


class ScalarField(_Field):
    """Temperature-like field, coefficients on ``(2/pi) sin(kx) sin(ly)``."""

    kind = TEMPERATURE


class VelocityField(_Field):
    """Solenoidal velocity, stream-function coefficients on ``sin(kx) sin(ly)``."""

    kind = STOKES


@dataclass(frozen=True)
class GridField:
    """Values at the interior nodes ``(i pi/(N+1), j pi/(N+1))``, ``1 <= i, j <= N``.

    ``values`` has shape ``(N, N)`` for scalars and ``(2, N, N)`` for vectors.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim not in (2, 3) or v.shape[-1] != v.shape[-2] or (v.ndim == 3 and v.shape[0] != 2):
            raise ShapeError(f"grid values must be (N, N) or (2, N, N), got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def resolution(self):
        return self.values.shape[-1]

    @property
    def arity(self):
        return 1 if self.values.ndim == 2 else 2


def _check_op(op, field):
    if field.kind != op.kind:
        raise ShapeError(f"{type(field).__name__} does not live in the domain of {op}")
    if field.bandwidth != op.bandwidth:
        raise ShapeError(f"field bandwidth {field.bandwidth} != operator bandwidth {op.bandwidth}")


def apply_fractional_power(op, alpha, field):
    if alpha < -1:
        raise InvalidExponent(f"fractional power must be >= -1, got {alpha}")
    _check_op(op, field)
    if alpha == 0:
        return field
    return type(field)(field.coeffs * op.eigenvalues**alpha)


def apply_semigroup(op, t, field):
    if t < 0:
        raise InvalidTime(f"semigroup time must be >= 0, got {t}")
    _check_op(op, field)
    if t == 0:
        return field
    return type(field)(field.coeffs * np.exp(-t * op.eigenvalues))


# ---------------------------------------------------------------------------
# grid transforms

def nodes(N):
    return np.arange(1, N + 1) * np.pi / (N + 1)


@lru_cache(maxsize=None)
def _trig(K, N):
    x = nodes(N)
    k = np.arange(1, K + 1)
    return _frozen(np.sin(np.outer(k, x))), _frozen(np.cos(np.outer(k, x)))


def _check_resolution(K, N):
    if N < K:
        raise ResolutionError(f"grid resolution {N} cannot carry bandwidth {K}")


def scalar_values(c, N):
    """Evaluate scalar coefficient array(s) ``(..., K, K)`` on the interior grid."""
    K = c.shape[-1]
    S, _ = _trig(K, N)
    return (2.0 / np.pi) * (S.T @ c @ S)


def velocity_values(c, N):
    """Evaluate stream coefficient array(s) as ``(..., 2, N, N)`` velocity samples."""
    K = c.shape[-1]
    S, C = _trig(K, N)
    k = np.arange(1, K + 1, dtype=float)
    u1 = S.T @ (c * k[None, :]) @ C
    u2 = -(C.T @ (c * k[:, None]) @ S)
    return np.stack([u1, u2], axis=-3)


def to_grid(field, N):
    _check_resolution(field.bandwidth, N)
    if isinstance(field, ScalarField):
        return GridField(scalar_values(field.coeffs, N))
    return GridField(velocity_values(field.coeffs, N))


def from_grid(grid, K):
    """Scalar grids: discrete sine transform truncated to ``K``.  Vector grids: ``leray_project``."""
    if grid.arity == 2:
        return leray_project(grid, K)
    N = grid.resolution
    _check_resolution(K, N)
    S, _ = _trig(K, N)
    return ScalarField((2.0 * np.pi / (N + 1) ** 2) * (S @ grid.values @ S.T))


@lru_cache(maxsize=None)
def _leray_factors(K, N):
    # Gram matrix of the sampled stream basis is (N+1)/2 * (I (x) H + H (x) I)
    _, C = _trig(K, N)
    k = np.arange(1, K + 1, dtype=float)
    H = (k[:, None] * (C @ C.T)) * k[None, :]
    mu, Q = np.linalg.eigh(H)
    denom = 0.5 * (N + 1) * (mu[:, None] + mu[None, :])
    return _frozen(Q), _frozen(denom)


def leray_project(grid, K=None):
    """Discrete L2-orthogonal projection of a vector grid onto the stream basis.

    Orthogonality is with respect to the uniform-weight node inner product used by
    ``inner_product``, so the map is exactly idempotent and self-adjoint there.
    """
    if grid.arity != 2:
        raise ShapeError("leray_project needs a 2-vector grid field")
    N = grid.resolution
    K = N if K is None else K
    _check_resolution(K, N)
    S, C = _trig(K, N)
    k = np.arange(1, K + 1, dtype=float)
    w1, w2 = grid.values
    rhs = (S @ w1 @ C.T) * k[None, :] - (C @ w2 @ S.T) * k[:, None]
    Q, denom = _leray_factors(K, N)
    return VelocityField(Q @ ((Q.T @ rhs @ Q) / denom) @ Q.T)


# ---------------------------------------------------------------------------
# norms

def quadrature_weight(N):
    return (np.pi / (N + 1)) ** 2


def norm_lp(grid, p):
    """Uniform-weight node approximation of the L^p(Omega) norm (vectors: Euclidean magnitude)."""
    if p < 1:
        raise InvalidExponent(f"L^p exponent must be >= 1, got {p}")
    v = grid.values
    mag = np.abs(v) if grid.arity == 1 else np.hypot(v[0], v[1])
    if not np.all(np.isfinite(mag)):
        raise ValueError("grid field has non-finite values")
    if np.isinf(p):
        return float(mag.max(initial=0.0))
    w = quadrature_weight(grid.resolution)
    m = mag.max(initial=0.0)
    if m == 0.0:
        return 0.0
    return float(m * (w * np.sum((mag / m) ** p)) ** (1.0 / p))


def inner_product(a, b):
    """Node quadrature of ``int a . b`` over Omega."""
    if a.values.shape != b.values.shape:
        raise ShapeError("grid fields differ in shape")
    return float(quadrature_weight(a.resolution) * np.sum(a.values * b.values))


def l2_norm_coeffs(c, kind):
    """Exact L2 norm(s) from coefficient array(s) ``(..., K, K)``."""
    if kind == TEMPERATURE:
        return np.sqrt(np.sum(c * c, axis=(-2, -1)))
    lam = eigenvalue_table(c.shape[-1])
    return np.sqrt(VELOCITY_NORM2 * np.sum(lam * c * c, axis=(-2, -1)))


def l2_norm(field):
    return float(l2_norm_coeffs(field.coeffs, field.kind))


def fractional_l2(field, alpha):
    """``||A^alpha f||_2`` computed by Parseval."""
    lam = eigenvalue_table(field.bandwidth)
    return float(l2_norm_coeffs(field.coeffs * lam**alpha, field.kind))


def norm_fractional(op, alpha, p, field, N=None):
    """``||A^alpha f||_p``.

    ``p == 2`` uses Parseval, which is exact; other ``p`` sample the powered field
    on an ``N``-node grid (default ``4K``) and apply ``norm_lp``.
    """
    powered = apply_fractional_power(op, alpha, field)
    if p == 2:
        return l2_norm(powered)
    return norm_lp(to_grid(powered, N or 4 * field.bandwidth), p)


def divergence_values(field, N):
    """Pseudo-spectral divergence of a velocity field on the interior grid."""
    S, C = _trig(field.bandwidth, N)
    k = np.arange(1, field.bandwidth + 1, dtype=float)
    kl = field.coeffs * k[:, None] * k[None, :]
    # d_x u1 = sum c k l cos cos ; d_y u2 = -sum c k l cos cos
    return C.T @ kl @ C - C.T @ kl @ C


# ---------------------------------------------------------------------------
# serialization

def field_to_json(field):
    return json.dumps(
        {
            "kind": field.kind,
            "bandwidth": field.bandwidth,
            "coefficients": field.coeffs.ravel(order="C").tolist(),
        }
    )


def field_from_json(text):
    rec = json.loads(text)
    K = int(rec["bandwidth"])
    coeffs = np.asarray(rec["coefficients"], dtype=float)
    if coeffs.size != K * K:
        raise ShapeError(f"expected {K * K} coefficients, got {coeffs.size}")
    cls = {TEMPERATURE: ScalarField, STOKES: VelocityField}[rec["kind"]]
    return cls(coeffs.reshape(K, K))


def grid_to_csv(grid):
    x = nodes(grid.resolution)
    X, Y = np.meshgrid(x, x, indexing="ij")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if grid.arity == 1:
        w.writerow(["x", "y", "value"])
        rows = zip(X.ravel(), Y.ravel(), grid.values.ravel())
    else:
        w.writerow(["x", "y", "u1", "u2"])
        rows = zip(X.ravel(), Y.ravel(), grid.values[0].ravel(), grid.values[1].ravel())
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def grid_from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, data = rows[0], np.array(rows[1:], dtype=float)
    N = int(round(np.sqrt(len(data))))
    if N * N != len(data):
        raise ShapeError("CSV rows do not form a square grid")
    if header[2:] == ["value"]:
        return GridField(data[:, 2].reshape(N, N))
    return GridField(np.stack([data[:, 2].reshape(N, N), data[:, 3].reshape(N, N)]))
