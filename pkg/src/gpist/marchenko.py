"""Marchenko kernels, the dense solves, field reconstruction, and residual checks.

The kernels split into an analytic finite-rank part from the gap eigenvalue
and a Fourier-type transform of the reflection ratios.  The right system is
well conditioned for stations x >= 0 and the left system for x <= 0 (each
kernel decays toward its own side), so full-line reconstructions stitch the
two at the origin.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import lapack as _lapack

from .errors import (IllConditionedError, ImaginaryLeakError, PoleHitError,
                     ResidualTooLargeError)
from .evolution import EvolvedData
from .fields import FieldProfile
from .numutil import (SQRT2, SQRT3, extrapolate_even, gregory_weights,
                      nan_scan, oscillatory_transform, uniform_interp)
from .spectral import Grid1D

IMAG_LEAK_LIMIT = 1e-6
POLE_TOL = 1e-10
COND_LIMIT = 1e8
TOL_RES = 1e-7


# ---------------------------------------------------------------------------
# kernel assembly

@dataclass
class MarchenkoKernels:
    """Real kernels on uniform z grids plus the split the solver consumes.

    F1/F2/F2prime are the combined kernels (transform part minus the
    discrete exponential); the *_cont arrays hold the transform part alone,
    which is what the dense solver interpolates -- the discrete exponential
    is applied analytically to avoid amplifying table noise.
    """

    t: float
    lambda0: float
    nu0: float
    mu0_t: float
    mu0_left_t: float
    z_right: np.ndarray
    F1_cont: np.ndarray
    F2_cont: np.ndarray
    F2prime_cont: np.ndarray
    z_left: Optional[np.ndarray] = None
    F1_left_cont: Optional[np.ndarray] = None
    F2_left_cont: Optional[np.ndarray] = None
    F2prime_left_cont: Optional[np.ndarray] = None
    max_imag: float = 0.0
    provenance: str = ""

    @property
    def has_left(self) -> bool:
        return self.z_left is not None

    # combined kernels (type contract): F = F^(cont) - discrete exponential
    @property
    def F1(self):
        return self.F1_cont - self.mu0_t * self.lambda0 * np.exp(-self.nu0 * self.z_right)

    @property
    def F2(self):
        return self.F2_cont - self.mu0_t * np.exp(-self.nu0 * self.z_right)

    @property
    def F2prime(self):
        return self.F2prime_cont + self.nu0 * self.mu0_t * np.exp(-self.nu0 * self.z_right)

    @property
    def F1_left(self):
        return self.F1_left_cont - self.mu0_left_t * self.lambda0 * np.exp(self.nu0 * self.z_left)

    @property
    def F2_left(self):
        return self.F2_left_cont - self.mu0_left_t * np.exp(self.nu0 * self.z_left)

    @property
    def F2prime_left(self):
        return self.F2prime_left_cont - self.nu0 * self.mu0_left_t * np.exp(self.nu0 * self.z_left)

    def _interp(self, zgrid, table, z):
        return uniform_interp(zgrid[0], zgrid[1] - zgrid[0], table, z, order=5)

    def eval_cont(self, z, side: str = "right"):
        """Interpolated transform parts (F1, F2, F2') at arbitrary z."""
        if side == "right":
            return (self._interp(self.z_right, self.F1_cont, z),
                    self._interp(self.z_right, self.F2_cont, z),
                    self._interp(self.z_right, self.F2prime_cont, z))
        return (self._interp(self.z_left, self.F1_left_cont, z),
                self._interp(self.z_left, self.F2_left_cont, z),
                self._interp(self.z_left, self.F2prime_left_cont, z))

    def eval_full(self, z, side: str = "right"):
        """Combined kernels at arbitrary z (discrete part analytic)."""
        f1, f2, f2p = self.eval_cont(z, side)
        z = np.asarray(z, dtype=float)
        if side == "right":
            e = np.exp(-self.nu0 * z)
            return (f1 - self.mu0_t * self.lambda0 * e,
                    f2 - self.mu0_t * e,
                    f2p + self.nu0 * self.mu0_t * e)
        e = np.exp(self.nu0 * z)
        return (f1 - self.mu0_left_t * self.lambda0 * e,
                f2 - self.mu0_left_t * e,
                f2p - self.nu0 * self.mu0_left_t * e)


def _insert_zero_node(zeta: np.ndarray, arrays: list[np.ndarray]):
    """Insert a zeta = 0 node with even-extrapolated values (3 samples per side)."""
    nh = len(zeta) // 2
    sel = slice(nh - 3, nh + 3)
    znew = np.insert(zeta, nh, 0.0)
    out = []
    for arr in arrays:
        val = extrapolate_even(zeta[sel], arr[sel])
        if not np.iscomplexobj(arr):
            val = val.real
        out.append(np.insert(arr, nh, val))
    return znew, out


def build_kernels(evolved: EvolvedData, x_station_span: float = 36.6,
                  p_max: float = 12.0, dz: float = 0.05,
                  include_left: bool = True, z_margin: float = 6.5,
                  imag_limit: float = IMAG_LEAK_LIMIT) -> MarchenkoKernels:
    """Assemble Marchenko kernels from evolved scattering data.

    The transform of the reflection ratios uses trapezoid-type product
    integration with the oscillatory phase (z and evolution phases alike)
    integrated exactly per panel, so late times need no extra samples.
    """
    base = evolved.base
    disc = base.discrete
    zeta = base.sgrid.zeta
    lam = np.sqrt(zeta ** 2 + 0.5)
    t = evolved.t

    cp = base.b[0] / base.a[0]          # branch lambda > 0
    cm = base.b[1] / base.a[1]
    phase = -4.0 * lam * zeta * t       # e^{-4 i lambda zeta t} on branch +
    z_hi = 2 * x_station_span + 4 * p_max + z_margin
    if include_left:
        z_all = np.linspace(-z_hi, z_hi, int(round(2 * z_hi / dz)) + 1)
    else:
        z_all = np.linspace(-z_margin, z_hi,
                            int(round((z_hi + z_margin) / dz)) + 1)

    env_p = [cp, cp / lam, 1j * zeta * cp / lam]
    env_m = [cm, -cm / lam, -1j * zeta * cm / lam]
    if include_left:
        # The left problem is the right problem of the mirrored field
        # -u*(-t, -x), whose data are (a, +b*); its kernels, evaluated at
        # -z, are the left kernels.
        ctp = np.conj(base.b[0]) / base.a[0]
        ctm = np.conj(base.b[1]) / base.a[1]
        env_p = env_p + [ctm, -ctm / lam, -1j * zeta * ctm / lam]
        env_m = env_m + [ctp, ctp / lam, 1j * zeta * ctp / lam]

    zp, arrs_p = _insert_zero_node(zeta, env_p + [phase])
    _, arrs_m = _insert_zero_node(zeta, env_m + [-phase])
    phase_p, phase_m = arrs_p.pop().real, arrs_m.pop().real

    got_p = oscillatory_transform(zp, phase_p, arrs_p, z_all)
    got_m = oscillatory_transform(zp, phase_m, arrs_m, z_all)

    f1c = got_p[0] + got_m[0]
    f2c = got_p[1] + got_m[1]
    f2pc = got_p[2] + got_m[2]
    if include_left:
        # mirrored-problem kernels on the symmetric grid, then z -> -z
        f1cl = (got_m[3] + got_p[3])[::-1]
        f2cl = (got_m[4] + got_p[4])[::-1]
        f2pcl = -(got_m[5] + got_p[5])[::-1]

    leaky = [f1c, f2c, f2pc] + ([f1cl, f2cl, f2pcl] if include_left else [])
    max_imag = float(max(np.max(np.abs(x.imag)) for x in leaky))
    if max_imag > imag_limit:
        raise ImaginaryLeakError(
            f"kernel transforms have imaginary part {max_imag:.3e}")

    right = z_all >= -z_margin
    left = z_all <= z_margin
    mu0_left = (disc.mu0 / abs(disc.b0) ** 2) * np.exp(-4.0 * disc.lambda0 * disc.nu0 * t)
    kern = MarchenkoKernels(
        t=t, lambda0=disc.lambda0, nu0=disc.nu0, mu0_t=evolved.mu0_t,
        mu0_left_t=float(mu0_left),
        z_right=z_all[right], F1_cont=f1c[right].real,
        F2_cont=f2c[right].real, F2prime_cont=f2pc[right].real,
        max_imag=max_imag, provenance=f"t={t}")
    if include_left:
        kern.z_left = z_all[left]
        kern.F1_left_cont = f1cl[left].real
        kern.F2_left_cont = f2cl[left].real
        kern.F2prime_left_cont = f2pcl[left].real
    nan_scan("marchenko kernels", kern.F1_cont, kern.F2_cont, kern.F2prime_cont)
    return kern


# ---------------------------------------------------------------------------
# finite-rank part

def finite_rank_solution(evolved_or_kern, x, p_grid, side: str = "right"):
    """Closed-form kernel from the discrete data alone, sampled on (x, p_grid).

    Returns (psi11, psi12) for the right side, (phi11, phi12) for the left;
    raising PoleHit if the rank-one denominator vanishes (impossible for
    mu0 near -2, guards corrupted data).
    """
    if isinstance(evolved_or_kern, EvolvedData):
        disc = evolved_or_kern.base.discrete
        lam0, nu0 = disc.lambda0, disc.nu0
        mu0_t = evolved_or_kern.mu0_t
        mu0_left = (disc.mu0 / abs(disc.b0) ** 2) * np.exp(
            -4.0 * lam0 * nu0 * evolved_or_kern.t)
    else:
        kern = evolved_or_kern
        lam0, nu0, mu0_t, mu0_left = kern.lambda0, kern.nu0, kern.mu0_t, kern.mu0_left_t
    p = np.asarray(p_grid, dtype=float)
    if side == "right":
        if abs(mu0_t) < POLE_TOL:
            return np.zeros_like(p, dtype=complex), np.zeros_like(p, dtype=complex)
        denom = 1.0 - (2.0 * SQRT2 * nu0 / mu0_t) * np.exp(2.0 * nu0 * x)
        if abs(denom) < POLE_TOL:
            raise PoleHitError(f"finite-rank denominator {denom:.3e} at x={x}")
        amp = nu0 * np.exp(-2.0 * nu0 * p) / denom      # e^{nu0 (x - y)}, y = x + 2p
        return amp + 0j, SQRT2 * (lam0 - 1j * nu0) * amp
    if abs(mu0_left) < POLE_TOL:
        return np.zeros_like(p, dtype=complex), np.zeros_like(p, dtype=complex)
    denom = 1.0 - (mu0_left / (2.0 * SQRT2 * nu0)) * np.exp(2.0 * nu0 * x)
    if abs(denom) < POLE_TOL:
        raise PoleHitError(f"left finite-rank denominator {denom:.3e} at x={x}")
    amp = (-mu0_left / (2.0 * SQRT2)) * np.exp(2.0 * nu0 * x) * np.exp(-2.0 * nu0 * p) / denom
    return amp + 0j, SQRT2 * (lam0 - 1j * nu0) * amp


# ---------------------------------------------------------------------------
# dense solves

@dataclass
class KernelField:
    """Solved kernel rows Psi(x, .) per station, with the finite-rank split."""

    side: str
    t: float
    x_stations: np.ndarray
    p_grid: np.ndarray
    psi11: np.ndarray          # (n_stations, n_p + 1)
    psi12: np.ndarray
    fr11: np.ndarray
    fr12: np.ndarray
    remainder_l2: np.ndarray   # discrete L2 of Psi - Psi^(1) per station
    residuals: np.ndarray
    conds: np.ndarray

    @property
    def u(self) -> np.ndarray:
        if self.side == "right":
            return 2.0 * SQRT2 * 1j * np.conj(self.psi12[:, 0]) + 1.0
        # left rows are the mirrored right kernel; u = -conj(mirror u)
        return 2.0 * SQRT2 * 1j * self.psi12[:, 0] - 1.0


def _station_kernels(kern: MarchenkoKernels, x: float, dy: float, m: int,
                     side: str):
    """Kernel tables F(2x +- k dy), k = 0..m, with the discrete part analytic."""
    sgn = 1.0 if side == "right" else -1.0
    zk = 2.0 * x + sgn * dy * np.arange(m + 1)
    f1, f2, f2p = kern.eval_full(zk, side)
    return f1, f2, f2p


def solve_marchenko(evolved: EvolvedData, kern: MarchenkoKernels,
                    x_stations, p_max: float = 12.0, n_p: int = 480,
                    side: str = "right", tol_res: float = TOL_RES,
                    cond_limit: float = COND_LIMIT,
                    check_residual: bool = False) -> KernelField:
    """Solve the coupled Marchenko system station by station (dense direct).

    Trapezoid weights with Gregory end corrections discretize the integral;
    each station assembles a 2(n_p+1) complex system and solves it by LU,
    with a reciprocal-condition estimate as the coercivity monitor.
    """
    x_stations = np.atleast_1d(np.asarray(x_stations, dtype=float))
    p = np.linspace(0.0, p_max, n_p + 1)
    dy = 2.0 * p_max / n_p
    w = gregory_weights(n_p + 1, dy)
    npts = n_p + 1
    idx = np.add.outer(np.arange(npts), np.arange(npts))

    psi11 = np.empty((len(x_stations), npts), dtype=complex)
    psi12 = np.empty_like(psi11)
    fr11 = np.empty_like(psi11)
    fr12 = np.empty_like(psi11)
    rem = np.empty(len(x_stations))
    res = np.zeros(len(x_stations))
    conds = np.empty(len(x_stations))

    for k, x in enumerate(x_stations):
        f1, f2, f2p = _station_kernels(kern, x, dy, 2 * n_p, side)
        if side == "right":
            gm = SQRT2 * (f1 - 1j * f2p)
            gp = SQRT2 * (f1 + 1j * f2p)
            k12, k21 = gm, gp
            rhs2_kernel = gp
        else:
            gm = SQRT2 * (f1 - 1j * f2p)
            gp = SQRT2 * (f1 + 1j * f2p)
            k12, k21 = gp, gm
            rhs2_kernel = gm
        m11 = f2[idx] * w[None, :]
        m11[np.diag_indices(npts)] += 2.0 * SQRT2
        mat = np.empty((2 * npts, 2 * npts), dtype=complex)
        mat[:npts, :npts] = m11
        mat[:npts, npts:] = k12[idx] * w[None, :]
        mat[npts:, :npts] = k21[idx] * w[None, :]
        mat[npts:, npts:] = m11
        rhs = np.concatenate([f2[:npts], rhs2_kernel[:npts]])

        anorm = np.linalg.norm(mat, 1)
        lu, piv, info = _lapack.zgetrf(mat)
        if info != 0:
            raise IllConditionedError(f"LU breakdown at station x={x}")
        rcond, _ = _lapack.zgecon(lu, anorm, norm="1")
        conds[k] = 1.0 / max(rcond, 1e-300)
        if conds[k] > cond_limit:
            raise IllConditionedError(
                f"condition estimate {conds[k]:.2e} at station x={x}")
        sol, info = _lapack.zgetrs(lu, piv, rhs)
        psi11[k] = sol[:npts]
        psi12[k] = sol[npts:]

        f11, f12 = finite_rank_solution(kern, x, p, side)
        fr11[k], fr12[k] = f11, f12
        rem[k] = float(np.sqrt(np.sum(w * (np.abs(psi11[k] - f11) ** 2
                                           + np.abs(psi12[k] - f12) ** 2))))

        if check_residual:
            res[k] = _station_residual(kern, x, p, w, psi11[k], psi12[k], side)
            if res[k] > tol_res:
                raise ResidualTooLargeError(
                    f"integral-equation residual {res[k]:.3e} at x={x}")

    nan_scan("kernel field", psi11, psi12)
    return KernelField(side, kern.t, x_stations, p, psi11, psi12,
                       fr11, fr12, rem, res, conds)


def _station_residual(kern, x, p, w, p11, p12, side) -> float:
    """Relative defect of the integral equations at staggered collocation points."""
    dy = 2.0 * (p[1] - p[0])
    sgn = 1.0 if side == "right" else -1.0
    y_mid_p = p[:-1] + 0.5 * (p[1] - p[0])
    p11_m = uniform_interp(0.0, p[1] - p[0], p11, y_mid_p, order=5)
    p12_m = uniform_interp(0.0, p[1] - p[0], p12, y_mid_p, order=5)
    zmat = 2.0 * x + sgn * (np.add.outer(2.0 * y_mid_p, 2.0 * p))
    f1, f2, f2p = kern.eval_full(zmat.ravel(), side)
    f1, f2, f2p = (a.reshape(zmat.shape) for a in (f1, f2, f2p))
    gm = SQRT2 * (f1 - 1j * f2p)
    gp = SQRT2 * (f1 + 1j * f2p)
    if side == "right":
        k12, k21, rhs2k = gm, gp, gp
    else:
        k12, k21, rhs2k = gp, gm, gm
    zr = 2.0 * x + sgn * 2.0 * y_mid_p
    r1f, r2f, r2pf = kern.eval_full(zr, side)
    rhs1 = r2f
    rhs2 = SQRT2 * (r1f + 1j * r2pf) if side == "right" else SQRT2 * (r1f - 1j * r2pf)
    lhs1 = 2 * SQRT2 * p11_m + (k12 * w) @ p12 + (f2 * w) @ p11
    lhs2 = 2 * SQRT2 * p12_m + (k21 * w) @ p11 + (f2 * w) @ p12
    scale = max(np.max(np.abs(rhs1)), np.max(np.abs(rhs2)), 1e-30)
    return float(max(np.max(np.abs(lhs1 - rhs1)), np.max(np.abs(lhs2 - rhs2))) / scale)


# ---------------------------------------------------------------------------
# reconstruction

@dataclass
class ReconstructionResult:
    """Reconstructed field at stations plus the residual bookkeeping."""

    x: np.ndarray
    u: np.ndarray
    t: float
    boundary_residual: float = float("nan")
    residual_ode: float = float("nan")
    residual_time: float = float("nan")

    def u_at(self, xq):
        step = self.x[1] - self.x[0]
        return uniform_interp(self.x[0], step, self.u, xq, order=7)

    def profile(self, grid: Grid1D) -> FieldProfile:
        return FieldProfile(grid, self.u_at(grid.x))


def reconstruct_field(fields: "KernelField | list[KernelField]",
                      reference_profile: Optional[FieldProfile] = None,
                      t: Optional[float] = None) -> ReconstructionResult:
    """Field values from solved kernel rows via the boundary identity.

    The boundary residual compares the kernel diagonal against an
    independently known q (the reference profile) when one is supplied;
    the reconstruction identity itself fixes u from the diagonal.
    """
    if isinstance(fields, KernelField):
        fields = [fields]
    xs = np.concatenate([f.x_stations for f in fields])
    us = np.concatenate([f.u for f in fields])
    order = np.argsort(xs)
    xs, us = xs[order], us[order]
    nan_scan("reconstruction", us)
    bres = float("nan")
    if reference_profile is not None:
        parts = []
        for f in fields:
            qref = reference_profile.q_at(f.x_stations)
            if f.side == "right":
                psi21 = np.conj(f.psi12[:, 0])
                parts.append(np.abs(psi21 + 0.5j * (qref - SQRT2 / 2.0)))
            else:
                phi21 = -f.psi12[:, 0]      # mirror relation
                parts.append(np.abs(phi21 - 0.5j * (qref + SQRT2 / 2.0)))
        bres = float(np.max(np.concatenate(parts)))
    tval = t if t is not None else fields[0].t
    return ReconstructionResult(xs, us, tval, boundary_residual=bres)


def reconstruct_profile(evolved: EvolvedData, kern: MarchenkoKernels,
                        x_span: float = 36.4, station_step: float = 0.2,
                        p_max: float = 12.0, n_p: int = 480,
                        reference_profile: Optional[FieldProfile] = None,
                        **solve_kw) -> ReconstructionResult:
    """Stitched full-line reconstruction: right solve for x >= 0, left for x < 0."""
    n_right = int(np.floor(x_span / station_step))
    xr = station_step * np.arange(0, n_right + 1)
    xl = -station_step * np.arange(1, n_right + 1)[::-1]
    f_right = solve_marchenko(evolved, kern, xr, p_max, n_p, "right", **solve_kw)
    f_left = solve_marchenko(evolved, kern, xl, p_max, n_p, "left", **solve_kw)
    return reconstruct_field([f_left, f_right], reference_profile, t=kern.t)


# ---------------------------------------------------------------------------
# consistency residuals (Jost assembly from the solved kernel)

def _assemble_psi1(field: KernelField, lam: complex, zeta: complex):
    """psi1(x, lambda) at every station from the kernel representation."""
    x = field.x_stations
    p = field.p_grid
    w = gregory_weights(len(p), 2.0 * (p[1] - p[0]))  # dy weights over y = x + 2p
    ph_x = np.exp(-1j * zeta * x)
    wfac = SQRT2 * (lam - zeta)
    ph_p = np.exp(-2j * zeta * p)
    x1_1 = ph_p[None, :] * ph_x[:, None]
    x1_2 = wfac * x1_1
    p11, p12 = field.psi11, field.psi12
    p21, p22 = np.conj(p12), np.conj(p11)
    c1 = ph_x - ((p11 * x1_1 + p12 * x1_2) * w[None, :]).sum(axis=1)
    c2 = wfac * ph_x - ((p21 * x1_1 + p22 * x1_2) * w[None, :]).sum(axis=1)
    return np.stack([c1, c2], axis=-1)


@dataclass
class ConsistencyResiduals:
    residual_ode: float
    residual_time: float


def consistency_residuals(data, t: float, kern_builder=None,
                          x_centers=(0.6, 1.4, 2.6), zetas=(0.7, 2.1),
                          h_fd: float = 0.02, delta_t: float = 1e-3,
                          fd_order: int = 4, p_max: float = 12.0,
                          n_p: int = 480) -> ConsistencyResiduals:
    """Defects of the scattering ODE and of the time-evolution relation.

    The solved kernel at clusters of nearby stations supplies psi1 and the
    reconstructed q; spatial derivatives use centered differences of order
    `fd_order` across the cluster, the time derivative a centered difference
    of the fields at t +- delta_t.
    """
    from .evolution import evolve

    if kern_builder is None:
        kern_builder = lambda ev: build_kernels(
            ev, x_station_span=max(x_centers) + 1.0, p_max=p_max,
            include_left=False)
    offsets = h_fd * np.arange(-2, 3)
    stations = np.concatenate([xc + offsets for xc in x_centers])
    fields = {}
    for tt in (t - delta_t, t, t + delta_t):
        ev = evolve(data, tt)
        kern = kern_builder(ev)
        fields[tt] = solve_marchenko(ev, kern, stations, p_max, n_p, "right")

    fld = fields[t]
    u = fld.u
    res_ode = 0.0
    res_time = 0.0
    q = (SQRT2 / 2.0) * u
    n_off = len(offsets)

    if fd_order == 4:
        d1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12.0 * h_fd)
        d2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * h_fd ** 2)
    else:
        d1 = np.array([0.0, -1.0, 0.0, 1.0, 0.0]) / (2.0 * h_fd)
        d2 = np.array([0.0, 1.0, -2.0, 1.0, 0.0]) / h_fd ** 2

    for zv in zetas:
        lam = np.sqrt(zv ** 2 + 0.5)
        zeta = complex(zv)
        psi_t = _assemble_psi1(fld, lam, zeta)
        psi_m = _assemble_psi1(fields[t - delta_t], lam, zeta)
        psi_p = _assemble_psi1(fields[t + delta_t], lam, zeta)
        for ic, xc in enumerate(x_centers):
            sl = slice(ic * n_off, (ic + 1) * n_off)
            psi = psi_t[sl]
            qc = q[sl]
            dpsi = d1 @ psi
            c = n_off // 2
            r1 = 1j * dpsi[0] + np.conj(qc[c]) * psi[c, 1] - lam * psi[c, 0]
            r2 = -1j * dpsi[1] + qc[c] * psi[c, 0] - lam * psi[c, 1]
            res_ode = max(res_ode, abs(r1), abs(r2))

            # evolution relation in the chi variables
            ee = 2.0 * lam / SQRT3
            xs = fld.x_stations[sl]
            phx = np.exp(1j * ee * xs / 2.0)
            wts = np.array([np.sqrt(SQRT3 - 1.0), np.sqrt(SQRT3 + 1.0)])
            chi = psi * phx[:, None] * wts[None, :]
            chi_m = psi_m[sl] * phx[:, None] * wts[None, :]
            chi_p = psi_p[sl] * phx[:, None] * wts[None, :]
            dchidt = (chi_p[c] - chi_m[c]) / (2.0 * delta_t)
            uc = u[sl]
            ux = d1 @ uc
            chix2 = d2 @ chi
            pot11 = (np.abs(uc[c]) ** 2 - 1.0) / (SQRT3 + 1.0)
            pot22 = (np.abs(uc[c]) ** 2 - 1.0) / (SQRT3 - 1.0)
            b_chi = np.array([
                -SQRT3 * chix2[0] + pot11 * chi[c, 0] + 1j * np.conj(ux) * chi[c, 1],
                -SQRT3 * chix2[1] - 1j * ux * chi[c, 0] + pot22 * chi[c, 1]])
            rhs = 1j * SQRT3 * (ee / 2.0 - zeta) ** 2 * chi[c]
            defect = dchidt + 1j * b_chi - rhs
            res_time = max(res_time, float(np.max(np.abs(defect))))

    return ConsistencyResiduals(float(res_ode), float(res_time))


# ---------------------------------------------------------------------------
# diagnostics / IO

def kernel_tail_integrals(kern: MarchenkoKernels, m_cut: float = 5.0) -> float:
    """Integral of |F1^(2)| + |F2^(2)| + |F2^(2)'| over [m_cut, z_max]."""
    z = kern.z_right
    sel = z >= m_cut
    total = np.trapezoid(np.abs(kern.F1_cont[sel]) + np.abs(kern.F2_cont[sel])
                         + np.abs(kern.F2prime_cont[sel]), z[sel])
    return float(total)


def write_kernels_csv(path, kern: MarchenkoKernels, side: str = "right") -> None:
    z = kern.z_right if side == "right" else kern.z_left
    f1 = kern.F1 if side == "right" else kern.F1_left
    f2 = kern.F2 if side == "right" else kern.F2_left
    f2p = kern.F2prime if side == "right" else kern.F2prime_left
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["z", "F1", "F2", "F2prime"])
        for row in zip(z, f1, f2, f2p):
            writer.writerow([repr(float(v)) for v in row])


def write_field_csv(path, field: KernelField) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "p", "re_psi11", "im_psi11", "re_psi12", "im_psi12"])
        for i, x in enumerate(field.x_stations):
            for j, p in enumerate(field.p_grid):
                writer.writerow([repr(float(x)), repr(float(p)),
                                 repr(field.psi11[i, j].real), repr(field.psi11[i, j].imag),
                                 repr(field.psi12[i, j].real), repr(field.psi12[i, j].imag)])
