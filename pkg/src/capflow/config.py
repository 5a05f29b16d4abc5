"""Flat key = value run and sweep configuration files.

The format is INI-style sections of scalar assignments (no nesting), e.g.

    [grid]
    n_beta = 128
    n_xi = 64

    [scenario]
    kind = perturbed_cap
    radius = 1.0
    theta = pi/3
    amplitude = 0.05
    xi_mode = 2

    [flow]
    l = 2
    dt_safety = 0.2
    t_max = 30.0
    stop_speed = 3e-5
    sample_every = 25
    snapshot_every = 0

    [output]
    dir = out

    [run]
    seed = 1

Angles accept plain radians or simple pi expressions ("pi/3", "2*pi/3").
Sweep files replace [scenario] with a [sweep] section listing thetas,
amplitudes and resolutions (comma separated) plus mode = check|run.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field

from capflow.errors import ConfigError
from capflow.flow import FlowConfig

_PI_EXPR = re.compile(r"^\s*(?:(\d+(?:\.\d+)?)\s*\*\s*)?pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from a float literal or a 'a*pi/b' expression."""
    text = str(text).strip()
    m = _PI_EXPR.match(text)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse angle {text!r}: {exc}") from exc


@dataclass
class ScenarioSpec:
    kind: str  # "cap" | "perturbed_cap"
    radius: float
    theta: float
    amplitude: float = 0.0
    xi_mode: int = 2
    beta_profile: int = 2


@dataclass
class GridSpec:
    n_beta: int = 128
    n_xi: int = 64
    axisymmetric: bool = False


@dataclass
class RunConfig:
    grid: GridSpec
    scenario: ScenarioSpec
    flow: FlowConfig
    out_dir: str = "out"
    seed: int = 0
    source_text: str = ""


@dataclass
class SweepConfig:
    thetas: list
    amplitudes: list
    resolutions: list
    mode: str = "check"  # check: static audit; run: flow each cell
    radius: float = 1.0
    xi_mode: int = 2
    beta_profile: int = 2
    flow: FlowConfig = field(default_factory=FlowConfig)
    out_dir: str = "out"
    seed: int = 0
    source_text: str = ""


def _read(path) -> tuple[configparser.ConfigParser, str]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            text = fh.read()
        parser.read_string(text, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    return parser, text


def _get(parser, section, key, conv, default=None, required=False):
    if not parser.has_option(section, key):
        if required:
            raise ConfigError(f"missing required key [{section}] {key}")
        return default
    raw = parser.get(section, key)
    try:
        if conv is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return conv(raw)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc


def _flow_config(parser, allow_experimental: bool) -> FlowConfig:
    cfg = FlowConfig(
        l=_get(parser, "flow", "l", int),
        dt_safety=_get(parser, "flow", "dt_safety", float, 0.2),
        t_max=_get(parser, "flow", "t_max", float, 30.0),
        stop_speed=_get(parser, "flow", "stop_speed", float, 3e-5),
        sample_every=_get(parser, "flow", "sample_every", int, 25),
        snapshot_every=_get(parser, "flow", "snapshot_every", int, 0),
        conservation_budget=_get(parser, "flow", "conservation_budget", float, 1e-3),
        monotonicity_slack=_get(parser, "flow", "monotonicity_slack", float, 1e-6),
        f_bound_margin=_get(parser, "flow", "f_bound_margin", float, 1e-3),
        support_floor=_get(parser, "flow", "support_floor", float, 0.5),
        barrier_cells=_get(parser, "flow", "barrier_cells", float, 1.0),
        allow_experimental_theta=allow_experimental,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise ConfigError(f"[flow] invalid: {exc}") from exc
    if cfg.l is not None and not 1 <= cfg.l <= 2:
        raise ConfigError(f"[flow] l = {cfg.l} out of range 1..2")
    return cfg


def _check_theta(theta: float, allow_experimental: bool) -> None:
    if not 0.0 < theta < math.pi:
        raise ConfigError(f"theta = {theta:.6g} outside (0, pi)")
    if theta > math.pi / 2 + 1e-12 and not allow_experimental:
        raise ConfigError(
            f"theta = {theta:.6g} exceeds pi/2: runs default to the contact-angle "
            "range (0, pi/2] where convergence is proven; pass --experimental-theta "
            "to audit beyond it"
        )


def load_run_config(path, allow_experimental: bool = False, overrides: dict | None = None) -> RunConfig:
    parser, text = _read(path)
    overrides = overrides or {}

    grid = GridSpec(
        n_beta=_get(parser, "grid", "n_beta", int, 128),
        n_xi=_get(parser, "grid", "n_xi", int, 64),
        axisymmetric=_get(parser, "grid", "axisymmetric", bool, False),
    )
    if grid.axisymmetric:
        grid.n_xi = 1

    kind = _get(parser, "scenario", "kind", str, required=True).strip()
    if kind not in ("cap", "perturbed_cap"):
        raise ConfigError(f"[scenario] kind = {kind!r}; expected 'cap' or 'perturbed_cap'")
    theta = _get(parser, "scenario", "theta", parse_angle, required=True)
    _check_theta(theta, allow_experimental)
    scenario = ScenarioSpec(
        kind=kind,
        radius=_get(parser, "scenario", "radius", float, 1.0),
        theta=theta,
        amplitude=_get(parser, "scenario", "amplitude", float, 0.0),
        xi_mode=_get(parser, "scenario", "xi_mode", int, 2),
        beta_profile=_get(parser, "scenario", "beta_profile", int, 2),
    )
    if scenario.radius <= 0:
        raise ConfigError(f"[scenario] radius = {scenario.radius} must be positive")

    flow = _flow_config(parser, allow_experimental)
    if "l" in overrides and overrides["l"] is not None:
        flow.l = int(overrides["l"])
        if not 1 <= flow.l <= 2:
            raise ConfigError(f"--l {flow.l} out of range 1..2")

    out_dir = overrides.get("out") or _get(parser, "output", "dir", str, "out")
    seed = overrides.get("seed")
    if seed is None:
        seed = _get(parser, "run", "seed", int, 0)
    return RunConfig(grid=grid, scenario=scenario, flow=flow, out_dir=out_dir, seed=int(seed), source_text=text)


def _float_list(raw: str, conv=float) -> list:
    items = [s.strip() for s in str(raw).split(",") if s.strip()]
    return [conv(s) for s in items]


def load_sweep_config(path, allow_experimental: bool = False, overrides: dict | None = None) -> SweepConfig:
    parser, text = _read(path)
    overrides = overrides or {}
    if not parser.has_section("sweep"):
        raise ConfigError("sweep config needs a [sweep] section")
    thetas = _get(parser, "sweep", "thetas", lambda s: _float_list(s, parse_angle), default=[])
    for theta in thetas:
        _check_theta(theta, allow_experimental)
    mode = _get(parser, "sweep", "mode", str, "check").strip()
    if mode not in ("check", "run"):
        raise ConfigError(f"[sweep] mode = {mode!r}; expected 'check' or 'run'")
    cfg = SweepConfig(
        thetas=thetas,
        amplitudes=_get(parser, "sweep", "amplitudes", _float_list, default=[]),
        resolutions=_get(parser, "sweep", "resolutions", lambda s: _float_list(s, int), default=[]),
        mode=mode,
        radius=_get(parser, "sweep", "radius", float, 1.0),
        xi_mode=_get(parser, "sweep", "xi_mode", int, 2),
        beta_profile=_get(parser, "sweep", "beta_profile", int, 2),
        flow=_flow_config(parser, allow_experimental) if parser.has_section("flow") else FlowConfig(),
        out_dir=overrides.get("out") or _get(parser, "output", "dir", str, "out"),
        seed=overrides.get("seed") if overrides.get("seed") is not None else _get(parser, "run", "seed", int, 0),
        source_text=text,
    )
    cfg.flow.allow_experimental_theta = allow_experimental
    return cfg
