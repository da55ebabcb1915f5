"""Shared numerical helpers: quadrature weights, interpolation, oscillatory transforms."""

from __future__ import annotations

import numpy as np

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

# Gregory end corrections of order 6 (trapezoid plus difference corrections
# through the fourth order); interior weights stay 1.
_GREGORY6_EDGE = np.array([95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0,
                           793.0 / 720.0, 157.0 / 160.0])


def gregory_weights(n_nodes: int, spacing: float) -> np.ndarray:
    """Endpoint-corrected trapezoid weights on a uniform grid, O(h^6) accurate."""
    if n_nodes < 12:
        raise ValueError("gregory_weights needs at least 12 nodes")
    w = np.ones(n_nodes)
    w[:5] = _GREGORY6_EDGE
    w[-5:] = _GREGORY6_EDGE[::-1]
    return w * spacing


def trapezoid_weights(n_nodes: int, spacing: float) -> np.ndarray:
    w = np.full(n_nodes, spacing)
    w[0] = w[-1] = 0.5 * spacing
    return w


def uniform_interp(x0: float, dx: float, values: np.ndarray,
                   xq: np.ndarray, order: int = 5) -> np.ndarray:
    """Lagrange interpolation of samples on a uniform grid at query points.

    `order` is the polynomial degree; the stencil has order+1 nodes chosen
    centered around each query point (clipped at the ends).
    """
    xq = np.asarray(xq)
    scalar = xq.ndim == 0
    xq = np.atleast_1d(xq).astype(float)
    n = len(values)
    m = order + 1
    # leftmost stencil node for each query
    j0 = np.floor((xq - x0) / dx).astype(int) - (m // 2 - 1)
    j0 = np.clip(j0, 0, n - m)
    t = (xq - x0) / dx - j0  # in units of dx, relative to stencil start
    out = np.zeros(xq.shape, dtype=values.dtype)
    for k in range(m):
        lk = np.ones_like(t)
        for l in range(m):
            if l != k:
                lk *= (t - l) / (k - l)
        out = out + values[j0 + k] * lk
    return out[0] if scalar else out


def extrapolate_even(zeta: np.ndarray, f: np.ndarray) -> complex:
    """Value at zeta=0 from an even-order polynomial through nearby samples.

    Least-squares fit of c0 + c2 z^2 + c4 z^4 through the given samples
    (intended use: the 3 nearest samples on each side of zero).
    """
    z = np.asarray(zeta, dtype=float)
    scale = np.max(np.abs(z))
    zs = z / scale
    basis = np.stack([np.ones_like(zs), zs ** 2, zs ** 4], axis=1)
    coef, *_ = np.linalg.lstsq(basis, np.asarray(f), rcond=None)
    return complex(coef[0])


def _phase_moments(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """m0 = int_0^1 e^{i th t} dt and m1 = int_0^1 t e^{i th t} dt."""
    th = np.asarray(theta)
    small = np.abs(th) < 1e-4
    ths = np.where(small, 1.0, th)  # avoid 0/0; small branch uses series
    ith = 1j * ths
    e = np.exp(1j * th)
    m0 = (e - 1.0) / ith
    m1 = (ith * e - e + 1.0) / (ith * ith)
    t2 = th * th
    m0_series = 1.0 + 1j * th / 2.0 - t2 / 6.0 - 1j * th * t2 / 24.0
    m1_series = 0.5 + 1j * th / 3.0 - t2 / 8.0 - 1j * th * t2 / 30.0
    return np.where(small, m0_series, m0), np.where(small, m1_series, m1)


def oscillatory_transform(zeta: np.ndarray, phase: np.ndarray,
                          envelopes: list[np.ndarray], z: np.ndarray,
                          chunk: int = 256) -> list[np.ndarray]:
    """(1/2pi) * int env(zeta) e^{i(zeta z + phase(zeta))} dzeta for several envelopes.

    Trapezoid-type product integration: the envelope is piecewise linear
    between nodes, the total phase is linearized per panel and its moments
    are integrated exactly.  Accurate uniformly in z and in the phase rate,
    unlike the plain trapezoid sum.
    """
    zeta = np.asarray(zeta, dtype=float)
    phase = np.asarray(phase, dtype=float)
    z = np.asarray(z, dtype=float)
    dzeta = np.diff(zeta)
    outs = [np.zeros(len(z), dtype=complex) for _ in envelopes]
    for lo in range(0, len(z), chunk):
        zc = z[lo:lo + chunk]
        phi = zeta[:, None] * zc[None, :] + phase[:, None]
        theta = phi[1:, :] - phi[:-1, :]
        m0, m1 = _phase_moments(theta)
        base = np.exp(1j * phi[:-1, :]) * dzeta[:, None]
        wa = base * (m0 - m1)   # weight on the left node of each panel
        wb = base * m1          # weight on the right node
        for out, env in zip(outs, envelopes):
            out[lo:lo + chunk] = (env[:-1] @ wa + env[1:] @ wb) / (2.0 * np.pi)
    return outs


def fd_derivative(values: np.ndarray, h: float, order: int = 1,
                  accuracy: int = 4) -> np.ndarray:
    """Centered finite-difference derivative on a uniform grid.

    One-sided stencils of the same accuracy fill the edges.
    """
    v = np.asarray(values)
    n = len(v)
    out = np.empty_like(v)
    if order == 1 and accuracy == 2:
        out[1:-1] = (v[2:] - v[:-2]) / (2 * h)
        out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
        out[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    elif order == 1 and accuracy == 4:
        out[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
        for i in (0, 1):
            out[i] = _onesided(v, i, h, 1)
        for i in (n - 2, n - 1):
            out[i] = _onesided(v, i, h, 1)
    elif order == 2 and accuracy == 2:
        out[1:-1] = (v[2:] - 2 * v[1:-1] + v[:-2]) / (h * h)
        out[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / (h * h)
        out[-1] = (2 * v[-1] - 5 * v[-2] + 4 * v[-3] - v[-4]) / (h * h)
    elif order == 2 and accuracy == 4:
        out[2:-2] = (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2]
                     + 16 * v[3:-1] - v[4:]) / (12 * h * h)
        for i in (0, 1):
            out[i] = _onesided(v, i, h, 2)
        for i in (n - 2, n - 1):
            out[i] = _onesided(v, i, h, 2)
    else:
        raise ValueError(f"unsupported (order, accuracy) = ({order}, {accuracy})")
    return out


def _onesided(v: np.ndarray, i: int, h: float, order: int) -> complex:
    """6-point polynomial derivative at node i using the nearest stencil."""
    n = len(v)
    j0 = min(max(i - 2, 0), n - 6)
    xs = (np.arange(6) + j0 - i) * h
    # derivative weights from the Vandermonde system
    vm = np.vander(xs, 6, increasing=True).T
    rhs = np.zeros(6)
    rhs[order] = float(np.prod(range(1, order + 1)))
    w = np.linalg.solve(vm, rhs)
    return (w * v[j0:j0 + 6]).sum()


def nan_scan(name: str, *arrays: np.ndarray) -> None:
    """Raise if any array contains NaN or inf (silent propagation guard)."""
    for arr in arrays:
        a = np.asarray(arr)
        if a.size and not np.all(np.isfinite(a)):
            raise FloatingPointError(f"non-finite values in {name}")
