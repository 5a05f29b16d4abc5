"""Explicit time stepping of the scalar capillary flow with monitors.

The graph function evolves by d(phi)/dt = (v / exp(phi)) * f with the speed
f = (1 + cos(theta) <nu,e>)/F - <x,nu>, F = H_l/H_{l-1}, and the nonlinear
contact-angle condition re-enforced through the equator ghost row after
every update.

Time step: dt = dt_safety * dbeta^2 / max(Lambda), where Lambda is the
per-node largest eigenvalue of the effective diffusion coefficient
(1 + cos(theta)<nu,e>) / (F^2 exp(2 phi)) * P F' pulled back to the round
metric (bounded by the product of the factor eigenvalue maxima).  Longitude
stiffness near the pole is handled by a zonal Fourier filter that removes,
on each latitude row, the xi-modes whose diffusion eigenvalue would exceed
the latitude sawtooth budget: mode m is kept on row j iff

    sin(m * dxi / 2) <= sin(beta_j) * dxi / dbeta.

With that cut the combined explicit-Euler stability bound is
dt * Lambda * 8 / dbeta^2 <= 2, so keep dt_safety <= 0.25.

Monitored a priori estimates (violations abort the run): conservation of
V_l, per-sample monotonicity of V_k for k < l, the initial two-sided cap
barrier, the initial bounds on F, the mean-curvature ceiling, and the
star-shapedness floor on <x, nu>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from capflow import surface
from capflow.errors import ConeViolationError, MonitorAbort
from capflow.quermass import QuermassVector, cap_constants, minkowski_residual, quermass_all
from capflow.surface import GeometricState, RadialField, capillary_speed, check_cone, geometry_from_phi

MONITOR_KEYS = (
    "F_min",
    "F_max",
    "kappa_min",
    "kappa_max",
    "H_max",
    "support_min",
    "r_in",
    "r_out",
    "max_speed",
    "bc_residual",
)


@dataclass
class FlowConfig:
    """Knobs of a flow run; defaults mirror the audited estimate budgets."""

    theta: float | None = None  # must match the state's angle when set
    l: int | None = None  # curvature-ratio index, default n
    dt_safety: float = 0.2
    t_max: float = 30.0
    stop_speed: float = 1e-5
    sample_every: int = 200  # steps between recorded samples
    snapshot_every: int = 0  # steps between stored snapshots (0: ends only)
    allow_experimental_theta: bool = False
    conservation_budget: float = 1e-3  # relative drift of V_l
    monotonicity_slack: float = 1e-6  # relative per-sample slack for V_k, k<l
    f_bound_margin: float = 1e-3  # absolute margin on the initial F range
    support_floor: float = 0.5  # fraction of the initial min support
    barrier_cells: float = 1.0  # allowed sandwich excursion, in grid cells
    h_budget_factor: float = 1.1  # ceiling factor for the mean curvature
    max_steps: int = 10_000_000

    def validate(self) -> None:
        if not 0.0 < self.dt_safety < 1.0:
            raise ValueError("dt_safety must lie in (0, 1)")
        if not self.stop_speed > 0.0:
            raise ValueError("stop_speed must be positive")
        if self.t_max <= 0.0:
            raise ValueError("t_max must be positive")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")


@dataclass
class FlowSample:
    """One recorded instant of a trajectory."""

    t: float
    dt: float
    qv: QuermassVector
    monitors: dict
    speed_integrals: np.ndarray  # int f H_k dA for k = 0..n+1
    mink_residuals: np.ndarray  # Minkowski identity residuals, k = 1..n


@dataclass
class FlowTrajectory:
    """Time series of quermassintegrals, monitors, and state snapshots."""

    theta: float
    l: int
    n: int
    samples: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)  # (t, RadialField)
    converged: bool = False
    stop_reason: str = ""
    steps: int = 0
    final_state: RadialField = None
    final_fit: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def quermass_series(self, k: int) -> np.ndarray:
        return np.array([s.qv.V[k] for s in self.samples])

    def monitor_series(self, key: str) -> np.ndarray:
        return np.array([s.monitors[key] for s in self.samples])


def enforce_boundary(state: RadialField) -> RadialField:
    """Re-solve the contact-angle ghost row; interior values are untouched."""
    return surface.make_radial_field(state.phi, state.theta, state.grid)


def fitted_radius_field(geom: GeometricState) -> np.ndarray:
    """Radius of the cap around the downward axis through each surface point.

    Solves rho^2 sin^2(theta) = |x|^2 - 2 rho cos(theta) <x,e> per node by
    the quadratic formula (positive root); constant exactly on caps.
    """
    st2 = math.sin(geom.theta) ** 2
    r = np.exp(geom.phi)
    b = -math.cos(geom.theta) * r * geom.grid.cos_beta[:, None]  # cos(theta)<x,e>
    return (-b + np.sqrt(b * b + st2 * r * r)) / st2


def diffusion_eigenvalue(geom: GeometricState, l: int) -> np.ndarray:
    """Per-node bound for the largest effective diffusion eigenvalue."""
    if l == 2:
        s = geom.kappa1 + geom.kappa2
        fprime = 2.0 * np.maximum(geom.kappa1**2, geom.kappa2**2) / s**2
        F = 2.0 * geom.kappa1 * geom.kappa2 / s
    elif l == 1:
        fprime = 0.5
        F = 0.5 * (geom.kappa1 + geom.kappa2)
    else:
        raise ValueError(f"l={l} out of range")
    weight = 1.0 - math.cos(geom.theta) * geom.nu_vert
    return weight / (F**2 * np.exp(2.0 * geom.phi)) * fprime


def _polar_filter_plan(grid) -> list:
    """(row, rfft keep-mask) pairs for rows whose xi spacing outpaces dbeta."""
    if grid.n_xi == 1:
        return []
    plan = []
    m = np.arange(grid.n_xi // 2 + 1)
    for j in range(grid.n_beta):
        cut = grid.sin_beta[j] * grid.dxi / grid.dbeta
        if cut >= 1.0:
            continue
        mask = np.sin(np.minimum(m * grid.dxi / 2.0, np.pi / 2)) <= cut
        if not np.all(mask):
            plan.append((j, mask.astype(float)))
    return plan


def _apply_filter(phi: np.ndarray, plan: list, n_xi: int) -> None:
    for j, mask in plan:
        phi[j] = np.fft.irfft(np.fft.rfft(phi[j]) * mask, n_xi)


def step_monitors(geom: GeometricState, speed_linf: float) -> dict:
    rho = fitted_radius_field(geom)
    F = geom.curvature_ratio(2)
    return {
        "F_min": float(np.min(F)),
        "F_max": float(np.max(F)),
        "kappa_min": geom.kappa_min,
        "kappa_max": geom.kappa_max,
        "H_max": float(np.max(geom.kappa1 + geom.kappa2)),
        "support_min": float(np.min(geom.support)),
        "r_in": float(np.min(rho)),
        "r_out": float(np.max(rho)),
        "max_speed": float(speed_linf),
        "bc_residual": float(geom.bc_residual),
    }


def _advance(state, geom, rhs, dt, plan, l):
    """One accepted explicit Euler update; halves dt on convexity loss."""
    for _ in range(10):
        phi_new = state.phi + dt * rhs
        _apply_filter(phi_new, plan, state.grid.n_xi)
        new_state = surface.make_radial_field(phi_new, state.theta, state.grid)
        new_geom = geometry_from_phi(new_state)
        if new_geom.kappa_min > 0.0 and (l == 2 or np.all(new_geom.kappa1 + new_geom.kappa2 > 0.0)):
            return new_state, new_geom, dt
        dt *= 0.5
    raise MonitorAbort(
        "convexity",
        "the updated surface left the positivity cone even after 10 time-step "
        f"halvings (kappa_min={new_geom.kappa_min:.3e}); convexity preservation "
        "holds for the ratio index l = n, so this signals a scheme failure "
        "or an experimental l < n run",
    )


def step(state: RadialField, config: FlowConfig):
    """Single explicit Euler step; returns (new state, dt used, monitors)."""
    config.validate()
    geom = geometry_from_phi(state)
    l = config.l if config.l is not None else geom.n
    f = capillary_speed(geom, l)
    rhs = f * geom.v * np.exp(-geom.phi)
    lam = float(np.max(diffusion_eigenvalue(geom, l)))
    dt = config.dt_safety * state.grid.dbeta**2 / lam
    plan = _polar_filter_plan(state.grid)
    new_state, new_geom, dt = _advance(state, geom, rhs, dt, plan, l)
    f_new = capillary_speed(new_geom, l)
    linf = float(np.max(np.abs(f_new * new_geom.v * np.exp(-new_geom.phi))))
    return new_state, dt, step_monitors(new_geom, linf)


class _BudgetAuditor:
    """Checks each recorded sample against the a priori estimate budgets."""

    def __init__(self, config: FlowConfig, first: FlowSample, grid, l: int, b_theta: float):
        self.config = config
        self.l = l
        self.b_theta = b_theta
        self.V0 = first.qv.V.copy()
        self.prev_V = first.qv.V.copy()
        m = first.monitors
        self.F_range = (m["F_min"], m["F_max"])
        self.support0 = m["support_min"]
        self.r_in0 = m["r_in"]
        self.r_out0 = m["r_out"]
        self.H0 = m["H_max"]
        self.cell = self.r_out0 * grid.dbeta * config.barrier_cells

    def check(self, sample: FlowSample) -> None:
        cfg = self.config
        V = sample.qv.V
        m = sample.monitors
        drift = abs(V[self.l] - self.V0[self.l]) / abs(self.V0[self.l])
        if drift > cfg.conservation_budget:
            raise MonitorAbort(
                "conservation",
                f"V_{self.l} drifted by {drift:.3e} relative at t={sample.t:.6g} "
                f"(budget {cfg.conservation_budget:g}); the flow preserves V_l exactly",
            )
        for k in range(self.l):
            slack = cfg.monotonicity_slack * abs(self.prev_V[k])
            if V[k] < self.prev_V[k] - slack:
                raise MonitorAbort(
                    "monotonicity",
                    f"V_{k} decreased by {self.prev_V[k] - V[k]:.3e} at t={sample.t:.6g}; "
                    "V_k must be non-decreasing for k < l along the flow",
                )
        if m["F_min"] < self.F_range[0] - cfg.f_bound_margin or m["F_max"] > self.F_range[1] + cfg.f_bound_margin:
            raise MonitorAbort(
                "f-bounds",
                f"F range [{m['F_min']:.6g}, {m['F_max']:.6g}] left the initial range "
                f"[{self.F_range[0]:.6g}, {self.F_range[1]:.6g}] by more than {cfg.f_bound_margin:g}; "
                "the speed ratio obeys the initial-data maximum principle",
            )
        if m["support_min"] < cfg.support_floor * self.support0:
            raise MonitorAbort(
                "star-shapedness",
                f"min <x,nu> = {m['support_min']:.6g} fell below "
                f"{cfg.support_floor:g} x initial ({self.support0:.6g}); the flow "
                "keeps the surface uniformly star-shaped",
            )
        if m["r_in"] < self.r_in0 - self.cell or m["r_out"] > self.r_out0 + self.cell:
            raise MonitorAbort(
                "cap-barrier",
                f"fitted radii [{m['r_in']:.6g}, {m['r_out']:.6g}] escaped the initial "
                f"cap sandwich [{self.r_in0:.6g}, {self.r_out0:.6g}] by more than one grid cell; "
                "static caps are two-sided barriers",
            )
        r_fit = V[self.l] / self.b_theta if self.l == sample.qv.n else None
        ceiling = cfg.h_budget_factor * max(self.H0, (2.0 / r_fit) if r_fit else self.H0)
        if m["H_max"] > ceiling:
            raise MonitorAbort(
                "mean-curvature",
                f"H_max = {m['H_max']:.6g} exceeded the empirical ceiling {ceiling:.6g}; "
                "the mean curvature stays uniformly bounded along the flow",
            )
        self.prev_V = V.copy()


def run(initial: RadialField, config: FlowConfig) -> FlowTrajectory:
    """Flow to the stopping threshold, recording samples and snapshots."""
    config.validate()
    state = enforce_boundary(initial)
    theta = state.theta
    if config.theta is not None and not math.isclose(config.theta, theta, rel_tol=1e-12):
        raise ValueError("config.theta disagrees with the state's contact angle")
    if theta > math.pi / 2 + 1e-12 and not config.allow_experimental_theta:
        raise ValueError(
            f"contact angle theta={theta:.6g} exceeds pi/2; convergence is only "
            "guaranteed for theta in (0, pi/2] - pass the experimental flag to force"
        )
    geom = geometry_from_phi(state)
    l = config.l if config.l is not None else geom.n
    if not 1 <= l <= geom.n:
        raise ValueError(f"l={l} out of range 1..{geom.n}")
    check_cone(geom, geom.n)  # strictly convex initial data

    grid = state.grid
    consts = cap_constants(theta, geom.n)
    plan = _polar_filter_plan(grid)
    traj = FlowTrajectory(theta=theta, l=l, n=geom.n)

    def record(t, dt, geom, f_field, rhs):
        qv = quermass_all(geom)
        integrals = np.array(
            [float(np.sum(f_field * geom.mean_curvature_H(k) * geom.area_weight)) for k in range(geom.n + 1)]
            + [0.0]  # H_{n+1} = 0
        )
        mink = np.array([minkowski_residual(geom, k=k) for k in range(1, geom.n + 1)])
        sample = FlowSample(
            t=t,
            dt=dt,
            qv=qv,
            monitors=step_monitors(geom, float(np.max(np.abs(rhs)))),
            speed_integrals=integrals,
            mink_residuals=mink,
        )
        traj.samples.append(sample)
        return sample

    t = 0.0
    f = capillary_speed(geom, l)
    rhs = f * geom.v * np.exp(-geom.phi)
    first = record(t, 0.0, geom, f, rhs)
    auditor = _BudgetAuditor(config, first, grid, l, consts.b_theta)
    traj.snapshots.append((0.0, state))

    steps_since_sample = 0
    last_dt = 0.0
    while True:
        max_speed = float(np.max(np.abs(rhs)))
        if max_speed < config.stop_speed:
            traj.converged = True
            traj.stop_reason = f"speed threshold reached (|dphi/dt|_inf = {max_speed:.3e})"
            break
        if t >= config.t_max:
            traj.stop_reason = f"time budget t_max={config.t_max:g} exhausted"
            break
        if traj.steps >= config.max_steps:
            raise MonitorAbort("step-budget", f"exceeded max_steps={config.max_steps}")

        lam = float(np.max(diffusion_eigenvalue(geom, l)))
        dt = min(config.dt_safety * grid.dbeta**2 / lam, config.t_max - t)
        try:
            state, geom, dt = _advance(state, geom, rhs, dt, plan, l)
        except ConeViolationError as exc:  # re-raise with monitor context
            raise MonitorAbort("convexity", str(exc)) from exc
        t += dt
        last_dt = dt
        traj.steps += 1
        steps_since_sample += 1

        f = capillary_speed(geom, l)
        rhs = f * geom.v * np.exp(-geom.phi)

        if steps_since_sample >= config.sample_every:
            sample = record(t, dt, geom, f, rhs)
            auditor.check(sample)
            steps_since_sample = 0
        if config.snapshot_every and traj.steps % config.snapshot_every == 0:
            traj.snapshots.append((t, state))

    if steps_since_sample > 0:
        sample = record(t, last_dt, geom, f, rhs)
        auditor.check(sample)
    traj.final_state = state
    if traj.snapshots[-1][1] is not state:
        traj.snapshots.append((t, state))

    rho = fitted_radius_field(geom)
    spread = float((np.max(rho) - np.min(rho)) / np.mean(rho))
    r_fit = float(traj.samples[-1].qv.V[geom.n] / consts.b_theta)
    traj.final_fit = {
        "radius": r_fit,
        "center_height": -r_fit * math.cos(theta),
        "radius_spread": spread,
        "t_final": t,
    }
    return traj


def variational_check(traj: FlowTrajectory, k: int):
    """First-variation audit: dV_k/dt against ((n+1-k)/(n+1)) int f H_k dA.

    Central (nonuniform) finite differences of the sampled V_k series are
    compared with the quadrature at interior sample times.  Returns
    (times, fd, rhs, residuals) with residuals relative to the local rhs.
    """
    if len(traj.samples) < 3:
        raise ValueError("variational check needs at least 3 samples")
    if not 0 <= k <= traj.n + 1:
        raise ValueError(f"k={k} out of range 0..{traj.n + 1}")
    t = traj.times
    V = traj.quermass_series(k)
    I = np.array([s.speed_integrals[k] for s in traj.samples])
    coeff = (traj.n + 1 - k) / (traj.n + 1)

    h1 = t[1:-1] - t[:-2]
    h2 = t[2:] - t[1:-1]
    fd = (
        -h2 / (h1 * (h1 + h2)) * V[:-2]
        + (h2 - h1) / (h1 * h2) * V[1:-1]
        + h1 / (h2 * (h1 + h2)) * V[2:]
    )
    rhs = coeff * I[1:-1]
    floor = 1e-12 * (1.0 + abs(V[0]))
    residuals = np.abs(fd - rhs) / np.maximum(np.abs(rhs), floor)
    return t[1:-1], fd, rhs, residuals
