"""Experiment configuration, the orbital-stability run, and diagnostics."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import marchenko, pde
from .errors import StageError
from .evolution import evolve
from .fields import FieldProfile, black_soliton
from .jost import (ScatteringData, argument_principle_count,
                   forward_scattering, zero_limit_diagnostic)
from .marchenko import build_kernels, kernel_tail_integrals, reconstruct_profile
from .perturbations import make_perturbation
from .spectral import Grid1D, make_spectral_grid

HORIZON_NOTE = ("finite forward horizon only; the sup bound is certified on "
                "the configured t grid, not for all t")


@dataclass
class ExperimentConfig:
    epsilon: float = 0.05
    family: str = "gaussian_real"
    seed: int = 0
    x_max: float = 40.0
    h: float = 0.02
    zeta_max: float = 30.0
    n_zeta: int = 4096
    zeta_min: float = 1e-3
    p_max: float = 12.0
    n_p: int = 480
    station_step: float = 0.2
    x_span: float = 36.4
    times: tuple = (0.5, 1.0, 2.0)
    window_margin: float = 5.0
    run_pde: bool = True
    run_left: bool = True
    pde_dt: float = 5e-5
    tol_norm: float = 1e-6
    tol_zero: float = 1e-4
    tol_real: float = 1e-5
    tol_bc: float = 1e-5
    tol_res: float = 1e-7
    out_dir: str = "gpist_out"

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 0.2):
            raise ValueError("epsilon must lie in (0, 0.2]")
        self.times = tuple(sorted(float(t) for t in self.times))
        if self.times and self.times[0] < 0:
            raise ValueError("times must be nonnegative")

    def grid(self) -> Grid1D:
        return Grid1D.default(self.x_max, self.h)

    def sgrid(self):
        return make_spectral_grid(self.zeta_max, self.n_zeta, self.zeta_min)


_BOOL = {"true": True, "false": False, "yes": True, "no": False,
         "on": True, "off": False, "1": True, "0": False}


def parse_config(path) -> ExperimentConfig:
    """Flat key = value text, # comments, commas for lists."""
    kwargs = {}
    fields = {f: t for f, t in ExperimentConfig.__annotations__.items()}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in fields:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            kwargs[key] = _convert(key, val)
    return ExperimentConfig(**kwargs)


def _convert(key: str, val: str):
    if key == "times":
        return tuple(float(v) for v in val.split(","))
    if key in ("family", "out_dir"):
        return val
    if key in ("seed", "n_zeta", "n_p"):
        return int(val)
    if key in ("run_pde", "run_left"):
        return _BOOL[val.lower()]
    return float(val)


@dataclass
class StabilityRow:
    t: float
    shift: float
    sup_distance: float
    best_shift: float
    best_sup_distance: float
    d_energy: float
    oracle_gap_sup: float
    oracle_gap_l2: float


@dataclass
class StabilityReport:
    config: ExperimentConfig
    lambda0: float
    b0: complex
    mu0: float
    rows: list
    max_sup_distance: float
    empirical_c: float
    window: float
    note: str = HORIZON_NOTE

    def summary(self) -> dict:
        return {"note": self.note,
                "epsilon": self.config.epsilon,
                "family": self.config.family,
                "seed": self.config.seed,
                "lambda0": self.lambda0,
                "re_b0": self.b0.real, "im_b0": self.b0.imag,
                "mu0": self.mu0,
                "window": self.window,
                "max_sup_distance": self.max_sup_distance,
                "empirical_c": self.empirical_c,
                "times": list(t.t for t in self.rows)}


def _sup_distance(recon, shift: float, x_window: np.ndarray) -> float:
    return float(np.max(np.abs(recon.u_at(x_window + shift)
                               - black_soliton(x_window))))


def _best_shift(recon, shift0: float, x_window: np.ndarray):
    shifts = shift0 + np.linspace(-0.5, 0.5, 41)
    vals = [_sup_distance(recon, s, x_window) for s in shifts]
    k = int(np.argmin(vals))
    lo, hi = shifts[max(k - 1, 0)], shifts[min(k + 1, len(shifts) - 1)]
    for _ in range(20):
        mids = np.linspace(lo, hi, 5)
        mv = [_sup_distance(recon, s, x_window) for s in mids]
        j = int(np.argmin(mv))
        lo, hi = mids[max(j - 1, 0)], mids[min(j + 1, 4)]
    best = 0.5 * (lo + hi)
    return float(best), _sup_distance(recon, best, x_window)


def run_stability(config: ExperimentConfig) -> StabilityReport:
    """Forward -> evolve -> invert at each time, measured against the kink."""
    grid = config.grid()
    try:
        u0 = make_perturbation(config.family, config.epsilon, config.seed, grid)
    except Exception as exc:
        raise StageError("perturbation", exc) from exc
    try:
        data = forward_scattering(u0, config.sgrid())
    except Exception as exc:
        raise StageError("forward", exc) from exc

    lam0 = data.lambda0
    window = config.x_max - config.window_margin
    x_window = grid.x[np.abs(grid.x) <= window + 1e-12]

    pde_states = {}
    if config.run_pde and config.times:
        try:
            states = pde.integrate(u0, max(config.times), config.pde_dt,
                                   record_times=config.times)
            pde_states = {round(s.t, 9): s for s in states}
        except Exception as exc:
            raise StageError("pde", exc) from exc

    rows = []
    for t in config.times:
        try:
            ev = evolve(data, t)
            kern = build_kernels(ev, x_station_span=config.x_span + 1.0,
                                 p_max=config.p_max,
                                 include_left=config.run_left)
            recon = reconstruct_profile(
                ev, kern, x_span=config.x_span,
                station_step=config.station_step,
                p_max=config.p_max, n_p=config.n_p)
        except Exception as exc:
            raise StageError(f"inverse(t={t})", exc) from exc

        shift = 2.0 * lam0 * t
        sup_d = _sup_distance(recon, shift, x_window)
        bshift, bsup = _best_shift(recon, shift, x_window)
        wgrid = Grid1D(-window, window, len(x_window))
        u_shifted = FieldProfile(wgrid, recon.u_at(x_window + shift), strict=False)
        d_e = pde.energy_distance(
            u_shifted, FieldProfile(wgrid, black_soliton(x_window), strict=False))
        gap_sup = gap_l2 = float("nan")
        key = round(t, 9)
        if key in pde_states:
            up = pde_states[key].profile
            diff = np.abs(recon.u_at(x_window) - up.u_at(x_window))
            gap_sup = float(np.max(diff))
            gap_l2 = float(np.sqrt(np.trapezoid(diff ** 2, x_window)))
        rows.append(StabilityRow(t, shift, sup_d, bshift, bsup, d_e,
                                 gap_sup, gap_l2))

    max_sup = max((r.sup_distance for r in rows), default=0.0)
    report = StabilityReport(config, lam0, data.b0, data.mu0, rows,
                             max_sup, max_sup / config.epsilon, window)
    return report


@dataclass
class DiagnosticRecord:
    sigma_plus: float
    sigma_minus: float
    zero_count: float
    min_abs_a: float
    b_decay_constant: float
    zeta_b_at_min: float
    zeta_a_at_min: float
    kernel_tail: float
    kernel_tail_over_eps: float

    def as_dict(self) -> dict:
        return asdict(self)


def run_diagnostics(config: ExperimentConfig) -> DiagnosticRecord:
    grid = config.grid()
    u0 = make_perturbation(config.family, config.epsilon, config.seed, grid)
    data = forward_scattering(u0, config.sgrid())
    fit = zero_limit_diagnostic(data)
    count = argument_principle_count(u0)
    eps = config.epsilon
    zeta = data.sgrid.zeta
    wz = (1.0 + zeta ** 2) ** 1.5
    bdec = float(np.max(wz * np.max(np.abs(data.b), axis=0))) / eps
    ev = evolve(data, 0.0)
    kern = build_kernels(ev, x_station_span=config.x_span + 1.0,
                         p_max=config.p_max, include_left=False)
    tail = kernel_tail_integrals(kern, m_cut=5.0)
    return DiagnosticRecord(fit.sigma_plus, fit.sigma_minus,
                            float(count.real), data.discrete.min_abs_a,
                            bdec, fit.zeta_b_at_min, fit.zeta_a_at_min,
                            tail, tail / eps)


# ---------------------------------------------------------------------------
# emission

def write_stability_report(report: StabilityReport, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "stability.csv"
    json_path = out / "stability_summary.json"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {report.note}\n")
        fh.write(f"# window: |x| <= {report.window}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "shift", "sup_distance", "best_shift",
                         "best_sup_distance", "d_energy",
                         "oracle_gap_sup", "oracle_gap_l2"])
        for r in report.rows:
            writer.writerow([repr(float(v)) for v in
                             (r.t, r.shift, r.sup_distance, r.best_shift,
                              r.best_sup_distance, r.d_energy,
                              r.oracle_gap_sup, r.oracle_gap_l2)])
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def write_diagnostics(record: DiagnosticRecord, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "diagnostics.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
