"""Command-line interface.

Subcommands mirror the pipeline stages; every run writes CSV files with
documented headers plus a JSON summary and exits nonzero with a
stage-tagged message on failure.  GPIST_THREADS bounds the linear-algebra
thread pool (0 or unset = automatic).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path


def _apply_thread_bound() -> None:
    raw = os.environ.get("GPIST_THREADS", "").strip()
    if raw and raw != "0":
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, raw)


_apply_thread_bound()

from . import __version__  # noqa: E402
from .errors import GpistError, StageError  # noqa: E402


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gpist",
        description="Inverse scattering for the 1D Gross-Pitaevskii equation "
                    "near the black soliton")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="forward stage: profile -> scattering data")
    p.add_argument("profile", help="input profile CSV (x,re_u,im_u)")
    p.add_argument("--out", default="gpist_out")
    p.add_argument("--zeta-max", type=float, default=30.0)
    p.add_argument("--n-zeta", type=int, default=4096)

    p = sub.add_parser("evolve", help="advance scattering data to time t")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--data", default="gpist_out",
                   help="directory holding scattering.csv + discrete.json")
    p.add_argument("--out", default="gpist_out")

    p = sub.add_parser("reconstruct", help="Marchenko inversion at time t")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--data", default="gpist_out")
    p.add_argument("--out", default="gpist_out")
    p.add_argument("--p-max", type=float, default=12.0)
    p.add_argument("--n-p", type=int, default=480)
    p.add_argument("--x-span", type=float, default=36.4)
    p.add_argument("--station-step", type=float, default=0.2)
    p.add_argument("--emit-field", action="store_true",
                   help="also write the solved kernel rows")

    p = sub.add_parser("pde", help="direct GP integration of a profile")
    p.add_argument("profile")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, default=5e-5)
    p.add_argument("--times", default="",
                   help="comma-separated record times (default: t-end)")
    p.add_argument("--out", default="gpist_out")

    p = sub.add_parser("stability", help="orbital-stability experiment")
    p.add_argument("--config", required=True)

    p = sub.add_parser("diagnose", help="spectral diagnostics record")
    p.add_argument("--config", required=True)
    return ap


def _cmd_scatter(args) -> int:
    from .fields import read_profile_csv
    from .jost import (forward_scattering, write_discrete_json,
                       write_scattering_csv)
    from .spectral import make_spectral_grid

    profile = read_profile_csv(args.profile)
    data = forward_scattering(profile, make_spectral_grid(args.zeta_max, args.n_zeta))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_scattering_csv(out / "scattering.csv", data)
    write_discrete_json(out / "discrete.json", data.discrete)
    _summary(out / "scatter_summary.json",
             {"lambda0": data.lambda0, "mu0": data.mu0,
              "max_norm_defect": float(data.norm_defect().max())})
    return 0


def _load_data(dirname):
    from .jost import read_discrete_json, read_scattering_csv
    d = Path(dirname)
    data = read_scattering_csv(d / "scattering.csv")
    data.discrete = read_discrete_json(d / "discrete.json")
    return data


def _cmd_evolve(args) -> int:
    from .evolution import evolve
    from .jost import write_scattering_csv

    data = _load_data(args.data)
    ev = evolve(data, args.t)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    evolved_view = ev.as_base()
    write_scattering_csv(out / f"scattering_t{args.t:g}.csv", evolved_view, t=args.t)
    _summary(out / f"evolve_summary_t{args.t:g}.json",
             {"t": args.t, "re_b0_t": ev.b0_t.real, "im_b0_t": ev.b0_t.imag,
              "mu0_t": ev.mu0_t})
    return 0


def _cmd_reconstruct(args) -> int:
    from .evolution import evolve
    from .fields import write_profile_csv
    from .marchenko import (build_kernels, reconstruct_profile,
                            write_field_csv, write_kernels_csv, solve_marchenko)
    from .spectral import Grid1D

    data = _load_data(args.data)
    ev = evolve(data, args.t)
    kern = build_kernels(ev, x_station_span=args.x_span + 1.0, p_max=args.p_max)
    recon = reconstruct_profile(ev, kern, x_span=args.x_span,
                                station_step=args.station_step,
                                p_max=args.p_max, n_p=args.n_p)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = Grid1D.default(args.x_span - 1.0, args.station_step / 4.0)
    prof = recon.profile(grid)
    write_profile_csv(out / f"reconstruction_t{args.t:g}.csv", prof, t=args.t)
    write_kernels_csv(out / f"kernels_t{args.t:g}.csv", kern, side="right")
    write_kernels_csv(out / f"kernels_left_t{args.t:g}.csv", kern, side="left")
    if args.emit_field:
        fld = solve_marchenko(ev, kern, recon.x[recon.x >= 0.0],
                              args.p_max, args.n_p, "right")
        write_field_csv(out / f"kernel_field_t{args.t:g}.csv", fld)
    _summary(out / f"reconstruct_summary_t{args.t:g}.json",
             {"t": args.t, "stations": len(recon.x),
              "u_at_0": [float(recon.u_at(0.0).real), float(recon.u_at(0.0).imag)]})
    return 0


def _cmd_pde(args) -> int:
    import csv as _csv

    from .fields import read_profile_csv, write_profile_csv
    from .pde import integrate

    profile = read_profile_csv(args.profile)
    times = ([float(s) for s in args.times.split(",") if s]
             if args.times else [args.t_end])
    states = integrate(profile, args.t_end, args.dt, record_times=times)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for st in states:
        write_profile_csv(out / f"pde_t{st.t:g}.csv", st.profile, t=st.t)
    with open(out / "energy.csv", "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "H"])
        for st in states:
            writer.writerow([repr(float(st.t)), repr(float(st.energy))])
    return 0


def _cmd_stability(args) -> int:
    from .harness import parse_config, run_stability, write_stability_report

    config = parse_config(args.config)
    report = run_stability(config)
    csv_path, json_path = write_stability_report(report, config.out_dir)
    print(f"stability report: {csv_path} {json_path}")
    print(f"max sup-distance {report.max_sup_distance:.6e} "
          f"(C = {report.empirical_c:.3f} at epsilon = {config.epsilon})")
    return 0


def _cmd_diagnose(args) -> int:
    from .harness import parse_config, run_diagnostics, write_diagnostics

    config = parse_config(args.config)
    record = run_diagnostics(config)
    path = write_diagnostics(record, config.out_dir)
    print(f"diagnostics: {path}")
    print(f"zero count {record.zero_count:.4f}, "
          f"sigma+ {record.sigma_plus:.3e}, sigma- {record.sigma_minus:.3e}")
    return 0


def _summary(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


_COMMANDS = {"scatter": _cmd_scatter, "evolve": _cmd_evolve,
             "reconstruct": _cmd_reconstruct, "pde": _cmd_pde,
             "stability": _cmd_stability, "diagnose": _cmd_diagnose}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StageError as exc:
        print(f"gpist: {exc}", file=sys.stderr)
        return 2
    except GpistError as exc:
        print(f"gpist: [{args.command}] {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # surfaced with the stage tag, no traceback spam
        print(f"gpist: [{args.command}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
