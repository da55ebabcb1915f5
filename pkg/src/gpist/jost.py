"""Jost solutions and transition coefficients for a perturbed kink profile.

The first-order 2x2 system is integrated inward from the normalization end
with a fourth-order commutator-free exponential one-step method.  Each step
multiplies by exact 2x2 matrix exponentials, so the free oscillation
e^{+-i zeta x} is propagated without step error and the accumulated error is
set by the slowly varying part of the solution, uniformly in zeta.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import (DerivativeMismatchError, GapGrowthError,
                     InconsistentNormingConstantError, MismatchedGridsError,
                     NoZeroFoundError)
from .fields import FieldProfile
from .numutil import SQRT2, fd_derivative, nan_scan
from .spectral import (Grid1D, Sheet, SheetPoint, SpectralGrid, classify_sheet,
                       make_spectral_grid, unperturbed_a)

# commutator-free 4th-order coefficients (two Gauss nodes, two exponentials)
_GAUSS_C1 = 0.5 - np.sqrt(3.0) / 6.0
_GAUSS_C2 = 0.5 + np.sqrt(3.0) / 6.0
_CF_A = 0.25 + np.sqrt(3.0) / 6.0
_CF_B = 0.25 - np.sqrt(3.0) / 6.0

# oscillation-control target: max |2 zeta h| per substep
_THETA_MAX = 0.35

TOL_ZERO = 1e-4      # acceptance gate for min |a| on the gap
TOL_REAL = 1e-5      # allowed imaginary part of mu0
TOL_B0 = 1e-5        # agreement of the two b0 component ratios
TOL_APRIME = 1e-3    # relative FD vs integral-formula a'(lambda0) gate


def _n_sub(zeta, h: float) -> int:
    return max(1, int(np.ceil(2.0 * abs(zeta) * h / _THETA_MAX)))


def _sinhc(m: np.ndarray) -> np.ndarray:
    small = np.abs(m) < 1e-6
    msafe = np.where(small, 1.0, m)
    m2 = m * m
    return np.where(small, 1.0 + m2 / 6.0 + m2 * m2 / 120.0, np.sinh(msafe) / msafe)


def _expmat(p: np.ndarray, b: complex, c: complex):
    """exp of the traceless matrix [[p, b], [c, -p]]; p batched, b and c scalars."""
    m = np.sqrt(p * p + b * c)
    ch = np.cosh(m)
    sc = _sinhc(m)
    return ch + sc * p, sc * b, sc * c, ch - sc * p


def _apply_step(v1, v2, lam, hs: float, q1: complex, q2: complex):
    """One CF4 substep of size hs acting on the solution columns (v1, v2)."""
    p = -1j * lam * (hs / 2.0)
    for qa, qb in (( _CF_A * q1 + _CF_B * q2, _CF_A * np.conj(q1) + _CF_B * np.conj(q2)),
                   ( _CF_B * q1 + _CF_A * q2, _CF_B * np.conj(q1) + _CF_A * np.conj(q2))):
        e11, e12, e21, e22 = _expmat(p, 1j * hs * qb, -1j * hs * qa)
        v1, v2 = e11 * v1 + e12 * v2, e21 * v1 + e22 * v2
    return v1, v2


def _march(profile: FieldProfile, lam: np.ndarray, x_nodes: np.ndarray,
           v0: np.ndarray, n_sub: int, store: bool = False) -> np.ndarray:
    """March v' = A(x) v along x_nodes (monotone, either direction).

    lam has shape (B,), v0 shape (B, 2) or (B, 2, 2) for a fundamental
    matrix (columns evolve independently).  Returns the final state, or all
    states with a leading node axis when store is set.
    """
    lam = np.asarray(lam, dtype=complex)
    fundamental = v0.ndim == 3
    if fundamental:
        cols1 = v0[..., 0, 0].copy(), v0[..., 1, 0].copy()
        cols2 = v0[..., 0, 1].copy(), v0[..., 1, 1].copy()
    else:
        cols1 = v0[..., 0].copy(), v0[..., 1].copy()
        cols2 = None

    n_steps = len(x_nodes) - 1
    hs = (x_nodes[1] - x_nodes[0]) / n_sub
    # Gauss-node abscissae for every substep, evaluated in one shot
    k = np.arange(n_steps * n_sub)
    xa = x_nodes[0] + hs * k
    xg = np.concatenate([xa + _GAUSS_C1 * hs, xa + _GAUSS_C2 * hs])
    qg = profile.q_at(xg)
    q1s, q2s = qg[:len(k)], qg[len(k):]

    if store:
        shape = (len(x_nodes),) + v0.shape
        out = np.empty(shape, dtype=complex)
        out[0] = v0

    idx = 0
    for j in range(n_steps):
        for _ in range(n_sub):
            q1, q2 = complex(q1s[idx]), complex(q2s[idx])
            cols1 = _apply_step(*cols1, lam, hs, q1, q2)
            if cols2 is not None:
                cols2 = _apply_step(*cols2, lam, hs, q1, q2)
            idx += 1
        if store:
            if fundamental:
                out[j + 1, ..., 0, 0], out[j + 1, ..., 1, 0] = cols1
                out[j + 1, ..., 0, 1], out[j + 1, ..., 1, 1] = cols2
            else:
                out[j + 1, ..., 0], out[j + 1, ..., 1] = cols1

    if store:
        return out
    if fundamental:
        final = np.empty(v0.shape, dtype=complex)
        final[..., 0, 0], final[..., 1, 0] = cols1
        final[..., 0, 1], final[..., 1, 1] = cols2
        return final
    final = np.empty(v0.shape, dtype=complex)
    final[..., 0], final[..., 1] = cols1
    return final


def _center_index(grid: Grid1D) -> int:
    mid = (grid.n - 1) // 2
    if abs(grid.x[mid]) > 1e-12:
        raise MismatchedGridsError("grid must contain x = 0 as a node")
    return mid


def _transfer_to_center(profile: FieldProfile, lam: np.ndarray, side: str,
                        n_sub: int) -> np.ndarray:
    """Transfer matrix from the given end ('left'/'right') to x = 0."""
    grid = profile.grid
    mid = _center_index(grid)
    nodes = grid.x[mid:][::-1] if side == "right" else grid.x[:mid + 1]
    eye = np.broadcast_to(np.eye(2, dtype=complex), (len(lam), 2, 2)).copy()
    return _march(profile, lam, nodes, eye, n_sub)


# ---------------------------------------------------------------------------
# public types

@dataclass
class WronskianResult:
    value: complex
    max_deviation: float


@dataclass
class JostPair:
    """Jost solution samples in the renormalized variable e^{+-i zeta x} v."""

    point: SheetPoint
    side: str                 # psi1 | psi2 | phi1 | phi2
    grid: Grid1D
    values: np.ndarray        # (n, 2) complex, renormalized
    renorm_sign: int          # stored = e^{renorm_sign * i zeta x} * (true solution)
    renormalized: bool = True

    def physical(self) -> np.ndarray:
        phase = np.exp(-self.renorm_sign * 1j * self.point.zeta * self.grid.x)
        return self.values * phase[:, None]


_SIDE_TABLE = {
    # side: (end, renorm_sign, initial constant vector factory)
    "psi1": ("right", +1, lambda w: (1.0, w)),
    "psi2": ("right", -1, lambda w: (w, 1.0)),
    "phi1": ("left", +1, lambda w: (1.0, -w)),
    "phi2": ("left", -1, lambda w: (-w, 1.0)),
}


def jost_solve(profile: FieldProfile, point: SheetPoint, side: str,
               n_sub: Optional[int] = None) -> JostPair:
    """Solve for one Jost solution on the profile grid.

    Off the real branches only the normalizations decaying at their own end
    are well-posed: psi2/phi1 for Im zeta > 0, psi1/phi2 for Im zeta < 0.
    """
    if side not in _SIDE_TABLE:
        raise ValueError(f"unknown Jost side {side!r}")
    imz = complex(point.zeta).imag
    if imz > 1e-12 and side in ("psi1", "phi2"):
        raise GapGrowthError(f"{side} grows toward the interior for Im zeta > 0")
    if imz < -1e-12 and side in ("psi2", "phi1"):
        raise GapGrowthError(f"{side} grows toward the interior for Im zeta < 0")

    end, sgn, init = _SIDE_TABLE[side]
    grid = profile.grid
    lam = np.array([point.lam], dtype=complex)
    w = SQRT2 * (point.lam - point.zeta)
    v0 = np.array([init(w)], dtype=complex)
    nodes = grid.x[::-1] if end == "right" else grid.x
    ns = n_sub if n_sub is not None else _n_sub(point.zeta, grid.h)
    states = _march(profile, lam, nodes, v0, ns, store=True)[:, 0, :]
    if end == "right":
        states = states[::-1]
    # stored state is e^{sgn i zeta x_end} * true solution; renormalize per node
    x_end = grid.x_max if end == "right" else grid.x_min
    phase = np.exp(sgn * 1j * point.zeta * (grid.x - x_end))
    values = states * phase[:, None]
    nan_scan("jost samples", values)
    return JostPair(point, side, grid, values, sgn)


def wronskian(v: JostPair, w: JostPair) -> WronskianResult:
    """x-independent Wronskian v1 w2 - v2 w1: mean over x and max deviation."""
    if v.grid != w.grid:
        raise MismatchedGridsError("Jost pairs live on different grids")
    if v.point != w.point:
        raise MismatchedGridsError("Jost pairs belong to different spectral points")
    phase = np.exp(-(v.renorm_sign + w.renorm_sign) * 1j * v.point.zeta * v.grid.x)
    wr = phase * (v.values[:, 0] * w.values[:, 1] - v.values[:, 1] * w.values[:, 0])
    mean = complex(np.mean(wr))
    return WronskianResult(mean, float(np.max(np.abs(wr - mean))))


def ode_residual(pair: JostPair, profile: FieldProfile) -> float:
    """Max defect of the scattering ODE over the interior nodes (FD derivative)."""
    v = pair.physical()
    h = pair.grid.h
    q = profile.q
    lam = pair.point.lam
    dv1 = fd_derivative(v[:, 0], h, 1, 4)
    dv2 = fd_derivative(v[:, 1], h, 1, 4)
    r1 = 1j * dv1 + np.conj(q) * v[:, 1] - lam * v[:, 0]
    r2 = -1j * dv2 + q * v[:, 0] - lam * v[:, 1]
    sl = slice(4, -4)
    return float(max(np.max(np.abs(r1[sl])), np.max(np.abs(r2[sl]))))


@dataclass
class DiscreteData:
    lambda0: float
    nu0: float
    b0: complex
    a_prime0: complex
    mu0: float
    a_prime0_fd: complex
    min_abs_a: float

    def as_dict(self) -> dict:
        return {"lambda0": self.lambda0, "nu0": self.nu0,
                "re_b0": self.b0.real, "im_b0": self.b0.imag,
                "re_aprime": self.a_prime0.real, "im_aprime": self.a_prime0.imag,
                "mu0": self.mu0}


@dataclass
class ScatteringData:
    """Continuous coefficients on both lambda branches plus discrete data."""

    sgrid: SpectralGrid
    a: np.ndarray          # (2, n): branch index 0 -> lambda > 0, 1 -> lambda < 0
    b: np.ndarray
    discrete: Optional[DiscreteData] = None

    branches = (1, -1)

    @property
    def lambda0(self): return self.discrete.lambda0

    @property
    def nu0(self): return self.discrete.nu0

    @property
    def b0(self): return self.discrete.b0

    @property
    def mu0(self): return self.discrete.mu0

    def norm_defect(self) -> np.ndarray:
        return np.abs(np.abs(self.a) ** 2 - np.abs(self.b) ** 2 - 1.0)


# ---------------------------------------------------------------------------
# continuous spectrum

def transition_coefficients(profile: FieldProfile,
                            sgrid: Optional[SpectralGrid] = None) -> ScatteringData:
    """a, b on the real spectrum via Wronskians of inward-marched Jost solutions.

    Both integrations meet at x = 0 where the Wronskians are evaluated; the
    transfer matrices depend on lambda only, so mirrored points zeta -> -zeta
    are treated identically by construction.
    """
    sgrid = sgrid or make_spectral_grid()
    grid = profile.grid
    zeta = sgrid.zeta
    zpos = sgrid.positive_half
    lam_pos = np.sqrt(zpos ** 2 + 0.5)
    lam_all = np.concatenate([lam_pos, -lam_pos]).astype(complex)  # (2*nh,)

    # group by substep count (oscillation control)
    ns_values = np.array([_n_sub(z, grid.h) for z in zpos])
    ns_all = np.concatenate([ns_values, ns_values])
    t_left = np.empty((len(lam_all), 2, 2), dtype=complex)
    t_right = np.empty_like(t_left)
    for ns in np.unique(ns_all):
        sel = ns_all == ns
        t_left[sel] = _transfer_to_center(profile, lam_all[sel], "left", int(ns))
        t_right[sel] = _transfer_to_center(profile, lam_all[sel], "right", int(ns))

    nh = len(zpos)
    a = np.empty((2, sgrid.n), dtype=complex)
    b = np.empty_like(a)
    x_max = grid.x_max
    for bi in range(2):
        tl = t_left[bi * nh:(bi + 1) * nh]
        tr = t_right[bi * nh:(bi + 1) * nh]
        lam_b = lam_all[bi * nh:(bi + 1) * nh]
        for sign, cols in ((1, slice(nh, 2 * nh)), (-1, slice(0, nh))):
            zs = sign * zpos
            w = SQRT2 * (lam_b - zs)
            phi1 = np.stack([tl[:, 0, 0] - w * tl[:, 0, 1],
                             tl[:, 1, 0] - w * tl[:, 1, 1]], axis=-1)
            psi1 = np.stack([tr[:, 0, 0] + w * tr[:, 0, 1],
                             tr[:, 1, 0] + w * tr[:, 1, 1]], axis=-1)
            psi2 = np.stack([w * tr[:, 0, 0] + tr[:, 0, 1],
                             w * tr[:, 1, 0] + tr[:, 1, 1]], axis=-1)
            denom = 4.0 * zs * (lam_b - zs)
            wr_a = phi1[:, 0] * psi2[:, 1] - phi1[:, 1] * psi2[:, 0]
            wr_b = phi1[:, 0] * psi1[:, 1] - phi1[:, 1] * psi1[:, 0]
            idx = np.argsort(zs) + 0  # zs ascending within its half
            vals_a = np.exp(2j * zs * x_max) * wr_a / denom
            vals_b = -wr_b / denom
            if sign > 0:
                a[bi, nh:], b[bi, nh:] = vals_a, vals_b
            else:
                a[bi, :nh], b[bi, :nh] = vals_a[::-1], vals_b[::-1]
    nan_scan("transition coefficients", a, b)
    return ScatteringData(sgrid, a, b)


# ---------------------------------------------------------------------------
# gap / complexified points (decaying pair only)

def _decaying_pair_at_zero(profile: FieldProfile, lam: np.ndarray,
                           zeta: np.ndarray):
    """phi1-hat(0), psi2-hat(0) and the Wronskian denominator, batched.

    Hatted solutions carry e^{+-i zeta x_end} so the initial data are the
    constant free-state vectors.
    """
    lam = np.asarray(lam, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    w = SQRT2 * (lam - zeta)
    v_phi = np.stack([np.ones_like(w), -w], axis=-1)
    v_psi = np.stack([w, np.ones_like(w)], axis=-1)
    grid = profile.grid
    mid = _center_index(grid)
    ns = int(np.max([_n_sub(z, grid.h) for z in zeta]))
    phi1 = _march(profile, lam, grid.x[:mid + 1], v_phi, ns)
    psi2 = _march(profile, lam, grid.x[mid:][::-1], v_psi, ns)
    return phi1, psi2, 4.0 * zeta * (lam - zeta)


def a_on_gamma_plus(profile: FieldProfile, lam: np.ndarray,
                    zeta: np.ndarray) -> np.ndarray:
    """a(lambda) anywhere on the closed upper sheet (gap included)."""
    phi1, psi2, denom = _decaying_pair_at_zero(profile, lam, zeta)
    wr = phi1[:, 0] * psi2[:, 1] - phi1[:, 1] * psi2[:, 0]
    return np.exp(2j * np.asarray(zeta, dtype=complex) * profile.grid.x_max) * wr / denom


def _gap_zeta(lam: np.ndarray) -> np.ndarray:
    return 1j * np.sqrt(0.5 - np.asarray(lam, dtype=float) ** 2)


def _gap_a(profile: FieldProfile, lam: np.ndarray) -> np.ndarray:
    return a_on_gamma_plus(profile, lam.astype(complex), _gap_zeta(lam))


def discrete_data(profile: FieldProfile, n_scan: int = 512,
                  tol_zero: float = TOL_ZERO) -> DiscreteData:
    """Locate the gap eigenvalue and assemble (lambda0, nu0, b0, a'(lambda0), mu0)."""
    edge = SQRT2 / 2.0 - 1e-4
    lam_scan = np.linspace(-edge, edge, n_scan)
    avals = np.abs(_gap_a(profile, lam_scan))
    k = int(np.argmin(avals))
    lo = lam_scan[max(k - 1, 0)]
    hi = lam_scan[min(k + 1, n_scan - 1)]
    # batched bracket refinement, then parabolic polish of |a|^2
    for _ in range(4):
        inner = np.linspace(lo, hi, 33)
        vals = np.abs(_gap_a(profile, inner))
        j = int(np.argmin(vals))
        lo, hi = inner[max(j - 1, 0)], inner[min(j + 1, 32)]
    lam3 = np.linspace(lo, hi, 3)
    f3 = np.abs(_gap_a(profile, lam3)) ** 2
    d1 = (f3[2] - f3[0]) / (lam3[2] - lam3[0])
    d2 = (f3[2] - 2 * f3[1] + f3[0]) / ((lam3[1] - lam3[0]) ** 2)
    lambda0 = float(lam3[1] - d1 / d2) if d2 > 0 else float(lam3[1])
    min_abs_a = float(np.abs(_gap_a(profile, np.array([lambda0])))[0])
    if min_abs_a >= tol_zero:
        raise NoZeroFoundError(
            f"min |a| on the gap is {min_abs_a:.3e} >= {tol_zero:.1e}")

    nu0 = float(np.sqrt(0.5 - lambda0 ** 2))
    zeta0 = 1j * nu0

    # norming constant from the component ratio at x = 0
    phi1, psi2, _ = _decaying_pair_at_zero(
        profile, np.array([lambda0], dtype=complex), np.array([zeta0]))
    ratios = phi1[0] / psi2[0]
    if abs(ratios[0] - ratios[1]) > TOL_B0 * max(1.0, abs(ratios[0])):
        raise InconsistentNormingConstantError(
            f"b0 component ratios differ: {ratios[0]:.8e} vs {ratios[1]:.8e}")
    b0 = complex(0.5 * (ratios[0] + ratios[1]))

    # a'(lambda0): 4th-order centered difference along the gap
    dl = 2e-3
    stencil = lambda0 + dl * np.array([-2.0, -1.0, 1.0, 2.0])
    a_st = _gap_a(profile, stencil)
    aprime_fd = complex((a_st[0] - 8 * a_st[1] + 8 * a_st[2] - a_st[3]) / (12 * dl))

    # ... and from the eigenfunction-norm integral formula
    point0 = SheetPoint(complex(lambda0), zeta0, Sheet.GAP_UPPER)
    pair = jost_solve(profile, point0, "psi2")
    psi2_phys = pair.physical()
    norm2 = float(np.trapezoid(np.sum(np.abs(psi2_phys) ** 2, axis=1),
                               profile.grid.x))
    aprime_int = complex(-1j * b0 * norm2 / (2.0 * SQRT2 * zeta0))

    rel = abs(aprime_fd - aprime_int) / abs(aprime_int)
    if rel > TOL_APRIME:
        raise DerivativeMismatchError(
            f"a'(lambda0) cross-check: fd={aprime_fd:.8e}, "
            f"integral={aprime_int:.8e} (rel {rel:.2e})")

    mu0c = b0 / (nu0 * aprime_int)
    if abs(mu0c.imag) > TOL_REAL * max(1.0, abs(mu0c)):
        raise InconsistentNormingConstantError(
            f"mu0 has imaginary part {mu0c.imag:.3e}")
    return DiscreteData(lambda0, nu0, b0, aprime_int, float(mu0c.real),
                        aprime_fd, min_abs_a)


def forward_scattering(profile: FieldProfile,
                       sgrid: Optional[SpectralGrid] = None) -> ScatteringData:
    """Full forward stage: continuous coefficients plus discrete data."""
    data = transition_coefficients(profile, sgrid)
    data.discrete = discrete_data(profile)
    return data


# ---------------------------------------------------------------------------
# diagnostics

@dataclass
class ZeroLimitFit:
    sigma_plus: float
    sigma_minus: float
    sigma_plus_a: float
    sigma_minus_a: float
    zeta_a_at_min: float
    zeta_b_at_min: float

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def zero_limit_diagnostic(data: ScatteringData, n_fit: int = 8) -> ZeroLimitFit:
    """Fit the 1/zeta coefficients of a and b near zeta = 0 on each branch."""
    z = data.sgrid.zeta
    order = np.argsort(np.abs(z))[:n_fit]
    zf = z[order]
    scale = np.min(np.abs(zf))
    basis = np.stack([scale / zf, np.ones_like(zf), zf / scale], axis=1)

    def fit_sigma(values: np.ndarray) -> float:
        coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
        return float(np.abs(coef[0]) * scale)

    a0 = np.array([[unperturbed_a(SheetPoint(bs * np.sqrt(zz ** 2 + 0.5), zz,
                                             classify_sheet(bs * np.sqrt(zz ** 2 + 0.5), zz)))
                    for zz in zf] for bs in (1, -1)])
    sig_b_p = fit_sigma(data.b[0, order])
    sig_b_m = fit_sigma(data.b[1, order])
    sig_a_p = fit_sigma(data.a[0, order] - a0[0])
    sig_a_m = fit_sigma(data.a[1, order] - a0[1])
    imin = order[0]
    za = float(np.abs(z[imin]) * max(abs(data.a[0, imin]), abs(data.a[1, imin])))
    zb = float(np.abs(z[imin]) * max(abs(data.b[0, imin]), abs(data.b[1, imin])))
    return ZeroLimitFit(sig_b_p, sig_b_m, sig_a_p, sig_a_m, za, zb)


def argument_principle_count(profile: FieldProfile, re_max: float = 0.6,
                             im_max: float = 0.1, n_side: int = 200) -> complex:
    """(1/2pi i) contour integral of a'/a over a rectangle on the upper sheet.

    a' is taken by centered differences of the contour samples and the
    integral by the trapezoid rule; the result should sit within 0.05 of the
    number of zeros of a enclosed by the rectangle.
    """
    corners = [complex(-re_max, -im_max), complex(re_max, -im_max),
               complex(re_max, im_max), complex(-re_max, im_max)]
    nodes = []
    for c0, c1 in zip(corners, corners[1:] + corners[:1]):
        seg = c0 + (c1 - c0) * np.arange(n_side) / n_side
        nodes.append(seg)
    lam = np.concatenate(nodes)
    zeta = 1j * np.sqrt(0.5 - lam ** 2)  # principal root keeps Im zeta > 0 here
    avals = a_on_gamma_plus(profile, lam, zeta)
    lam_next = np.roll(lam, -1)
    lam_prev = np.roll(lam, 1)
    aprime = (np.roll(avals, -1) - np.roll(avals, 1)) / (lam_next - lam_prev)
    dlam = (lam_next - lam_prev) / 2.0
    return complex(np.sum(aprime / avals * dlam) / (2j * np.pi))


# ---------------------------------------------------------------------------
# CSV / JSON interfaces

def write_scattering_csv(path, data: ScatteringData, t: Optional[float] = None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["zeta", "branch", "re_a", "im_a", "re_b", "im_b"]
        if t is not None:
            header.append("t")
        writer.writerow(header)
        for bi, branch in enumerate(ScatteringData.branches):
            for j, z in enumerate(data.sgrid.zeta):
                row = [repr(float(z)), str(branch),
                       repr(data.a[bi, j].real), repr(data.a[bi, j].imag),
                       repr(data.b[bi, j].real), repr(data.b[bi, j].imag)]
                if t is not None:
                    row.append(repr(float(t)))
                writer.writerow(row)


def write_discrete_json(path, disc: DiscreteData) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(disc.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_scattering_csv(path) -> ScatteringData:
    rows = {1: [], -1: []}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            rows[int(row[1])].append((float(row[0]),
                                      float(row[2]) + 1j * float(row[3]),
                                      float(row[4]) + 1j * float(row[5])))
    zeta = np.array([r[0] for r in rows[1]])
    a = np.array([[r[1] for r in rows[1]], [r[1] for r in rows[-1]]])
    b = np.array([[r[2] for r in rows[1]], [r[2] for r in rows[-1]]])
    # rebuild weights for the stored nodes (nodes define the rule)
    from .spectral import SpectralGrid as _SG
    pos = zeta[zeta > 0]
    # infer the sinh-map weights by reconstructing from node positions
    sgrid = _rebuild_grid(zeta)
    return ScatteringData(sgrid, a, b)


def _rebuild_grid(zeta: np.ndarray) -> SpectralGrid:
    """Recover quadrature weights for stored nodes via local spacing."""
    w = np.empty_like(zeta)
    w[1:-1] = (zeta[2:] - zeta[:-2]) / 2.0
    w[0] = (zeta[1] - zeta[0]) / 2.0
    w[-1] = (zeta[-1] - zeta[-2]) / 2.0
    # account for the center gap: the two innermost nodes get the half-panel
    pos = zeta > 0
    return SpectralGrid(zeta, w, float(np.max(zeta)), float(np.min(np.abs(zeta))))


def read_discrete_json(path) -> DiscreteData:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    b0 = d["re_b0"] + 1j * d["im_b0"]
    ap = d["re_aprime"] + 1j * d["im_aprime"]
    return DiscreteData(d["lambda0"], d["nu0"], b0, ap, d["mu0"], ap, 0.0)
