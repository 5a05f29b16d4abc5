"""Command-line entry point.

Verbs:
    run    --config PATH [--out DIR] [--seed N] [--experimental-theta] [--l K]
    check  STATE_FILE [--theta X]
    sweep  --config PATH [--out DIR] [--seed N] [--experimental-theta]
    caps   [--theta LIST] [--n N]

Exit codes: 0 success, 2 config error, 3 monitor abort / non-convergence,
4 inequality hypothesis unmet.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from capflow import __version__
from capflow.config import RunConfig, load_run_config, load_sweep_config, parse_angle
from capflow.errors import BoundaryNewtonError, CapflowError, ConeViolationError, ConfigError, MonitorAbort, StateFormatError
from capflow.flow import run as flow_run
from capflow.halfsphere import make_grid
from capflow.inequalities import full_report, render_report
from capflow.quermass import cap_constants
from capflow.scenarios import CapSpec, PerturbationSpec, cap_phi, perturbed_cap
from capflow.stateio import config_hash, load_state, save_state, save_trajectory_csv
from capflow.surface import geometry_from_phi

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MONITOR = 3
EXIT_HYPOTHESIS = 4


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def build_initial_state(cfg: RunConfig):
    grid = make_grid(cfg.grid.n_beta, cfg.grid.n_xi, axisymmetric=cfg.grid.axisymmetric)
    spec = CapSpec(cfg.scenario.radius, cfg.scenario.theta)
    if cfg.scenario.kind == "cap" or cfg.scenario.amplitude == 0.0:
        return cap_phi(spec, grid)
    pert = PerturbationSpec(
        amplitude=cfg.scenario.amplitude,
        xi_mode=cfg.scenario.xi_mode,
        beta_profile=cfg.scenario.beta_profile,
    )
    return perturbed_cap(spec, pert, grid)


def _write_run_outputs(cfg: RunConfig, traj, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    cfg_hash = config_hash(cfg.source_text)
    meta = {
        "n_beta": cfg.grid.n_beta,
        "n_xi": cfg.grid.n_xi,
        "seed": cfg.seed,
        "scenario": cfg.scenario.kind,
    }
    save_trajectory_csv(traj, os.path.join(out_dir, "trajectory.csv"), cfg_hash, meta)
    snap_dir = os.path.join(out_dir, "snapshots")
    os.makedirs(snap_dir, exist_ok=True)
    for i, (t, state) in enumerate(traj.snapshots):
        save_state(state, os.path.join(snap_dir, f"snap_{i:04d}_t{t:.6f}.txt"), cfg_hash)
    save_state(traj.final_state, os.path.join(out_dir, "final_state.txt"), cfg_hash)

    report = full_report(geometry_from_phi(traj.final_state))
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(f"# config-sha256 = {cfg_hash}\n")
        fh.write(render_report(report))

    V2 = traj.quermass_series(traj.l)
    lines = [
        f"version = {__version__}",
        f"config-sha256 = {config_hash(cfg.source_text)}",
        f"converged = {str(traj.converged).lower()}",
        f"stop_reason = {traj.stop_reason}",
        f"steps = {traj.steps}",
        f"t_final = {_fmt(traj.final_fit['t_final'])}",
        f"fitted_radius = {_fmt(traj.final_fit['radius'])}",
        f"fitted_center_height = {_fmt(traj.final_fit['center_height'])}",
        f"radius_spread = {_fmt(traj.final_fit['radius_spread'])}",
        f"v_l_drift = {_fmt(float(np.max(np.abs(V2 - V2[0])) / abs(V2[0])))}",
        f"final_max_speed = {_fmt(traj.samples[-1].monitors['max_speed'])}",
    ]
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_run(args) -> int:
    cfg = load_run_config(
        args.config,
        allow_experimental=args.experimental_theta,
        overrides={"out": args.out, "seed": args.seed, "l": args.l},
    )
    state = build_initial_state(cfg)
    traj = flow_run(state, cfg.flow)
    _write_run_outputs(cfg, traj, cfg.out_dir)
    print(f"run: {traj.stop_reason}")
    print(f"run: wrote trajectory ({len(traj.samples)} samples) and summary to {cfg.out_dir}")
    if not traj.converged:
        print("run: FAILED to reach the speed threshold within t_max", file=sys.stderr)
        return EXIT_MONITOR
    return EXIT_OK


def cmd_check(args) -> int:
    state = load_state(args.state)
    theta = parse_angle(args.theta) if args.theta is not None else None
    report = full_report(geometry_from_phi(state), theta)
    sys.stdout.write(render_report(report))
    if not report.hypothesis_ok:
        return EXIT_HYPOTHESIS
    return EXIT_OK


SWEEP_COLUMNS = (
    "theta,amplitude,n_beta,n_xi,status,kappa_min,af_gap_k0,af_gap_k1,willmore_gap,"
    "minkowski_gap,gauss_bonnet_resid,mink_res_1,mink_res_2,v_l_drift,t_final,"
    "converged,radius_spread"
)


def _sweep_cell(sc, theta, amplitude, n_beta) -> tuple[dict, int]:
    grid = make_grid(int(n_beta), max(4, int(n_beta) // 2))
    spec = CapSpec(sc.radius, theta)
    if amplitude == 0.0:
        state = cap_phi(spec, grid)
    else:
        state = perturbed_cap(spec, PerturbationSpec(amplitude, sc.xi_mode, sc.beta_profile), grid)
    row = {
        "theta": theta,
        "amplitude": amplitude,
        "n_beta": grid.n_beta,
        "n_xi": grid.n_xi,
        "status": "ok",
        "v_l_drift": 0.0,
        "t_final": 0.0,
        "converged": 1,
        "radius_spread": 0.0,
    }
    code = EXIT_OK
    if sc.mode == "run":
        import copy

        flow_cfg = copy.copy(sc.flow)
        traj = flow_run(state, flow_cfg)
        Vl = traj.quermass_series(traj.l)
        row["v_l_drift"] = float(np.max(np.abs(Vl - Vl[0])) / abs(Vl[0]))
        row["t_final"] = traj.final_fit["t_final"]
        row["converged"] = int(traj.converged)
        row["radius_spread"] = traj.final_fit["radius_spread"]
        state = traj.final_state
        if not traj.converged:
            row["status"] = "no-convergence"
            code = EXIT_MONITOR
    geom = geometry_from_phi(state)
    report = full_report(geom)
    row["kappa_min"] = geom.kappa_min
    row["af_gap_k0"] = report.entry("af_k0").gap
    row["af_gap_k1"] = report.entry("af_k1").gap
    row["willmore_gap"] = report.entry("willmore").gap
    row["minkowski_gap"] = report.entry("minkowski").gap
    row["gauss_bonnet_resid"] = report.entry("gauss_bonnet").gap
    row["mink_res_1"] = report.entry("minkowski_identity_k1").gap
    row["mink_res_2"] = report.entry("minkowski_identity_k2").gap
    if not report.hypothesis_ok:
        row["status"] = "hypothesis-unmet"
        code = max(code, EXIT_HYPOTHESIS)
    return row, code


def cmd_sweep(args) -> int:
    sc = load_sweep_config(
        args.config,
        allow_experimental=args.experimental_theta,
        overrides={"out": args.out, "seed": args.seed},
    )
    os.makedirs(sc.out_dir, exist_ok=True)
    rows = []
    worst = EXIT_OK
    for theta in sc.thetas:
        for amplitude in sc.amplitudes:
            for n_beta in sc.resolutions:
                try:
                    row, code = _sweep_cell(sc, theta, amplitude, n_beta)
                except (MonitorAbort, ConeViolationError, CapflowError, ValueError) as exc:
                    row = {
                        "theta": theta,
                        "amplitude": amplitude,
                        "n_beta": n_beta,
                        "n_xi": max(4, int(n_beta) // 2),
                        "status": f"error: {type(exc).__name__}",
                    }
                    code = EXIT_MONITOR
                    print(f"sweep cell theta={theta:.4g} amp={amplitude} n={n_beta}: {exc}", file=sys.stderr)
                rows.append(row)
                worst = max(worst, code)
    cols = SWEEP_COLUMNS.split(",")
    path = os.path.join(sc.out_dir, "sweep_summary.csv")
    with open(path, "w") as fh:
        fh.write("# capflow-sweep 1\n")
        fh.write(f"# version = {__version__}\n")
        fh.write(f"# config-sha256 = {config_hash(sc.source_text)}\n")
        fh.write(f"# columns: {SWEEP_COLUMNS}\n")
        fh.write(SWEEP_COLUMNS + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) if isinstance(row.get(c), float) else str(row.get(c, "")) for c in cols) + "\n")
    print(f"sweep: wrote {len(rows)} cells to {path}")
    return worst


def cmd_caps(args) -> int:
    thetas = [parse_angle(s) for s in args.theta.split(",")] if args.theta else [
        parse_angle(s) for s in ("pi/6", "pi/4", "pi/3", "pi/2")
    ]
    print("theta,b_theta,omega_theta,cap_area,wetted_disk_area")
    for theta in thetas:
        c = cap_constants(theta, args.n)
        print(",".join(_fmt(x) for x in (theta, c.b_theta, c.omega_theta, c.cap_area, c.wetted_disk_area)))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capflow", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"capflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="flow a scenario to convergence and write outputs")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--l", type=int, default=None, help="curvature ratio index (experimental for l < 2)")
    p_run.add_argument("--experimental-theta", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser("check", help="audit the inequalities on a saved state")
    p_check.add_argument("state")
    p_check.add_argument("--theta", default=None)
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="run or audit a (theta x amplitude x resolution) matrix")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--experimental-theta", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_caps = sub.add_parser("caps", help="print the spherical-cap constants table")
    p_caps.add_argument("--theta", default=None, help="comma-separated list, e.g. 'pi/6,pi/4'")
    p_caps.add_argument("--n", type=int, default=2)
    p_caps.set_defaults(func=cmd_caps)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StateFormatError as exc:
        print(f"state file error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MonitorAbort, ConeViolationError, BoundaryNewtonError) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_MONITOR


if __name__ == "__main__":
    sys.exit(main())
