"""Plain-text serialization: state snapshots and trajectory CSV files.

State snapshot format ("capflow-state 1"): comment header carrying theta
and the grid parameters, a column-name line, then one whitespace-separated
row per node in row-major (beta, xi) order:

    # capflow-state 1
    # theta = <radians>
    # n_beta = <J>
    # n_xi = <K>
    # axisymmetric = <0|1>
    # columns: beta xi phi kappa1 kappa2 support weight
    <beta> <xi> <phi> <kappa1> <kappa2> <support> <weight>

Only phi, theta, and the grid are needed to reconstruct a state; the other
columns are derived quantities included for plotting tools.

Trajectory CSV ("capflow-trajectory 1"): comment header with the artifact
version, config hash and run parameters, then a CSV header row with the
fixed column order

    t,dt,V0,V1,V2,V3,F_min,F_max,kappa_min,kappa_max,H_max,support_min,
    r_in,r_out,max_speed,bc_residual,mink_res_1,mink_res_2,fH0,fH1,fH2,fH3

followed by one row per sample.  Floats are written with 17 significant
digits, so identical runs serialize byte-identically.
"""

from __future__ import annotations

import hashlib
import io

import numpy as np

from capflow import __version__
from capflow.errors import StateFormatError
from capflow.flow import MONITOR_KEYS, FlowTrajectory
from capflow.halfsphere import make_grid
from capflow.surface import RadialField, geometry_from_phi, make_radial_field

STATE_MAGIC = "# capflow-state 1"
TRAJ_MAGIC = "# capflow-trajectory 1"

TRAJECTORY_COLUMNS = (
    ["t", "dt", "V0", "V1", "V2", "V3"]
    + list(MONITOR_KEYS)
    + ["mink_res_1", "mink_res_2", "fH0", "fH1", "fH2", "fH3"]
)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def dump_state(state: RadialField, cfg_hash: str | None = None) -> str:
    geom = geometry_from_phi(state)
    grid = state.grid
    buf = io.StringIO()
    buf.write(STATE_MAGIC + "\n")
    buf.write(f"# version = {__version__}\n")
    if cfg_hash is not None:
        buf.write(f"# config-sha256 = {cfg_hash}\n")
    buf.write(f"# theta = {_fmt(state.theta)}\n")
    buf.write(f"# n_beta = {grid.n_beta}\n")
    buf.write(f"# n_xi = {grid.n_xi}\n")
    buf.write(f"# axisymmetric = {int(grid.axisymmetric)}\n")
    buf.write("# columns: beta xi phi kappa1 kappa2 support weight\n")
    for j in range(grid.n_beta):
        for k in range(grid.n_xi):
            row = (
                grid.beta[j],
                grid.xi[k],
                state.phi[j, k],
                geom.kappa1[j, k],
                geom.kappa2[j, k],
                geom.support[j, k],
                geom.area_weight[j, k],
            )
            buf.write(" ".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def save_state(state: RadialField, path, cfg_hash: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dump_state(state, cfg_hash))


def load_state(path) -> RadialField:
    header: dict = {}
    phi_rows: list = []
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != STATE_MAGIC:
            raise StateFormatError(f"{path}: not a capflow state file (missing '{STATE_MAGIC}')")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line:
                    key, _, val = line.lstrip("# ").partition("=")
                    header[key.strip()] = val.strip()
                continue
            parts = line.split()
            if len(parts) != 7:
                raise StateFormatError(f"{path}:{lineno}: expected 7 columns, found {len(parts)}")
            try:
                phi_rows.append(float(parts[2]))
            except ValueError as exc:
                raise StateFormatError(f"{path}:{lineno}: unparseable number: {exc}") from exc
    try:
        theta = float(header["theta"])
        n_beta = int(header["n_beta"])
        n_xi = int(header["n_xi"])
        axisym = bool(int(header.get("axisymmetric", "0")))
    except KeyError as exc:
        raise StateFormatError(f"{path}: header is missing {exc}") from exc
    if len(phi_rows) != n_beta * n_xi:
        raise StateFormatError(
            f"{path}: expected {n_beta * n_xi} node rows for a {n_beta}x{n_xi} grid, found {len(phi_rows)}"
        )
    grid = make_grid(n_beta, n_xi, axisymmetric=axisym)
    phi = np.array(phi_rows).reshape(n_beta, n_xi)
    return make_radial_field(phi, theta, grid)


def dump_trajectory_csv(traj: FlowTrajectory, cfg_hash: str = "none", meta: dict | None = None) -> str:
    buf = io.StringIO()
    buf.write(TRAJ_MAGIC + "\n")
    buf.write(f"# version = {__version__}\n")
    buf.write(f"# config-sha256 = {cfg_hash}\n")
    buf.write(f"# theta = {_fmt(traj.theta)}\n")
    buf.write(f"# l = {traj.l}\n")
    for key, val in (meta or {}).items():
        buf.write(f"# {key} = {val}\n")
    buf.write(f"# columns: {','.join(TRAJECTORY_COLUMNS)}\n")
    buf.write(",".join(TRAJECTORY_COLUMNS) + "\n")
    for s in traj.samples:
        row = [s.t, s.dt] + list(s.qv.V)
        row += [s.monitors[k] for k in MONITOR_KEYS]
        row += list(s.mink_residuals)
        row += list(s.speed_integrals)
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def save_trajectory_csv(traj: FlowTrajectory, path, cfg_hash: str = "none", meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dump_trajectory_csv(traj, cfg_hash, meta))
