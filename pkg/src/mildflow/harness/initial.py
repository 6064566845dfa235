"""Named initial-data recipes scaled to target fractional norms."""
from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..lab.sampling import sample_coeffs
from ..spectral import STOKES, TEMPERATURE, ScalarField, VelocityField, make_operator, norm_fractional


def _single_mode(K, recipe):
    k, l = recipe.get("mode", (1, 1))
    if not (1 <= k <= K and 1 <= l <= K):
        raise ConfigError(f"mode ({k}, {l}) outside bandwidth {K}")
    c = np.zeros((K, K))
    c[k - 1, l - 1] = 1.0
    return c, c.copy()


def _random_band(K, recipe):
    seed = recipe.get("seed")
    if seed is None:
        raise ConfigError("random-band recipe needs a seed")
    band = min(int(recipe.get("band", K)), K)
    c = sample_coeffs(seed, 0, K, STOKES)
    b = sample_coeffs(seed, 1, K, TEMPERATURE)
    c[band:, :] = 0.0
    c[:, band:] = 0.0
    b[band:, :] = 0.0
    b[:, band:] = 0.0
    return c, b


def _taylor_vortex(K, recipe):
    # cellular stream function sin(kx) sin(ky) over a warm lower-mode background
    k = min(int(recipe.get("mode", (2, 2))[0]), K)
    c = np.zeros((K, K))
    c[k - 1, k - 1] = 1.0
    b = np.zeros((K, K))
    b[0, 0] = 1.0
    if k > 1:
        b[k - 1, k - 1] = 0.5
    return c, b


GENERATORS = {"single-mode": _single_mode, "random-band": _random_band,
              "taylor-vortex-like": _taylor_vortex}


def _scale(op, expo, p, field, target):
    if target == 0:
        return type(field)(np.zeros_like(field.coeffs))
    cur = norm_fractional(op, expo, p, field)
    if cur == 0:
        raise ConfigError("recipe produced a zero field but the target norm is positive")
    field = field * (target / cur)
    # one correction pass so grid-based p-norms land on the target as well
    cur = norm_fractional(op, expo, p, field)
    return field * (target / cur)


def make_initial_data(recipe, base, K):
    """``(u0, theta0)`` from ``recipe`` with ``||A^alpha0 u0||_p = u_norm`` and ``||B^beta0 theta0||_q = theta_norm``."""
    name = recipe.get("recipe", "single-mode")
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise ConfigError(f"unknown initial recipe {name!r}; known: {sorted(GENERATORS)}") from None
    c, b = gen(K, recipe)
    u0 = _scale(make_operator(STOKES, K), base.alpha0, base.p, VelocityField(c), recipe.get("u_norm", 0.0))
    th0 = _scale(make_operator(TEMPERATURE, K), base.beta0, base.q, ScalarField(b), recipe.get("theta_norm", 0.0))
    return u0, th0
