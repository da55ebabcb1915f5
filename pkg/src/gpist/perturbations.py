"""Certified perturbation generators for the stability experiment.

Each family provides closed-form derivatives up to third order; the
amplitude is rescaled so the weighted sup over k <= 3 of <x>^4 |d^k u1|
equals one, and that bound is re-verified on a 10x refined grid rather than
assumed.
"""

from __future__ import annotations

import numpy as np

from .errors import NormalizationFailedError
from .fields import FieldProfile, black_soliton
from .spectral import Grid1D

FAMILIES = ("gaussian_real", "gaussian_complex", "algebraic_x4", "random_bump")


def _gaussian_derivs(x, center=0.0, width2=4.0, chirp=0.0):
    """(f, f', f'', f''') for exp(-(x-c)^2/width2 + i chirp x)."""
    s = x - center
    f = np.exp(-s * s / width2 + 1j * chirp * x)
    p1 = -2.0 * s / width2 + 1j * chirp
    dp1 = -2.0 / width2
    p2 = p1 * p1 + dp1
    p3 = p1 * p2 + 2.0 * p1 * dp1
    return f, p1 * f, p2 * f, p3 * f


def _algebraic_derivs(x):
    """(f, f', f'', f''') for (1+x^2)^(-5/2)."""
    g = 1.0 + x * x
    f = g ** -2.5
    f1 = -5.0 * x * g ** -3.5
    f2 = 35.0 * x * x * g ** -4.5 - 5.0 * g ** -3.5
    f3 = 105.0 * x * g ** -4.5 - 315.0 * x ** 3 * g ** -5.5
    return f, f1, f2, f3


def _family_derivs(family: str, seed: int):
    if family == "gaussian_real":
        return lambda x: _gaussian_derivs(x)
    if family == "gaussian_complex":
        return lambda x: _gaussian_derivs(x, chirp=0.5)
    if family == "algebraic_x4":
        return lambda x: _algebraic_derivs(x)
    if family == "random_bump":
        rng = np.random.default_rng(seed)
        n_bump = 3
        centers = rng.uniform(-3.0, 3.0, n_bump)
        width2s = rng.uniform(2.0, 8.0, n_bump)
        amps = rng.uniform(0.3, 1.0, n_bump) * np.exp(2j * np.pi * rng.uniform(size=n_bump))

        def derivs(x):
            parts = [np.zeros(np.shape(x), dtype=complex) for _ in range(4)]
            for c, w2, a in zip(centers, width2s, amps):
                for k, term in enumerate(_gaussian_derivs(x, center=c, width2=w2)):
                    parts[k] = parts[k] + a * term
            return tuple(parts)
        return derivs
    raise ValueError(f"unknown perturbation family {family!r}")


def _weighted_sup(derivs, x) -> float:
    w = (1.0 + x * x) ** 2
    return max(float(np.max(w * np.abs(d))) for d in derivs(x))


def make_perturbation(family: str, epsilon: float, seed: int = 0,
                      grid: Grid1D | None = None) -> FieldProfile:
    """u0 = U0 + epsilon*u1 with the weighted-sup normalization certified."""
    grid = grid or Grid1D.default()
    if epsilon == 0.0:
        return FieldProfile.from_function(black_soliton, grid)
    derivs = _family_derivs(family, seed)
    fine = np.linspace(grid.x_min, grid.x_max, 10 * (grid.n - 1) + 1)
    alpha = 1.0 / _weighted_sup(derivs, fine)
    achieved = _weighted_sup(lambda x: [alpha * d for d in derivs(x)], fine)
    if achieved > 1.0 + 1e-9:
        raise NormalizationFailedError(
            f"weighted sup {achieved:.6f} > 1 after rescaling ({family})")

    def u_fn(x):
        return black_soliton(x) + epsilon * alpha * derivs(x)[0]

    return FieldProfile.from_function(u_fn, grid)
