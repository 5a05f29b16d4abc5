"""Inequality audit for convex capillary states.

Checked statements (n = 2; unit-cap constants b_theta, omega_theta from
the quermass module):

    af_k:        V_2/b >= (V_k/b)^(1/(3-k)),  k = 0, 1
    willmore:    int H^2 dA >= 4 |unit cap area|            (H = kappa1+kappa2)
    minkowski:   int H dA >= 2 sqrt(omega_theta) (|Sigma| - cos(theta)|wetted|)^(1/2)
                            + sin(theta) cos(theta) |boundary|

with equality exactly on the spherical caps around the downward axis.

Verdicts: "violated" iff the normalized gap falls below -tolerance;
"equality-within-tol" for states that are caps up to the tolerance
(measured by the fitted-cap radius spread, which is scale invariant and
vanishes identically on caps) or whose gap sits inside numerical noise;
"holds" for strictly positive gaps on non-cap states.  Positivity at small
perturbation amplitude is far inside the equality tolerance band (the gap
is quadratic in the deformation), so "holds" is keyed to the geometric
equality test rather than to gap > tolerance.  Equality detection is
relative to caps around the vertical axis through the origin; horizontally
translated caps would audit as strict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from capflow import __version__
from capflow.flow import fitted_radius_field
from capflow.quermass import CapConstants, QuermassVector, cap_constants, gauss_bonnet_check, minkowski_residual, quermass_all
from capflow.scenarios import CapSpec, cap_phi
from capflow.surface import GeometricState, capillary_speed, geometry_from_phi

_POSITIVITY_FLOOR = 1e-12  # below this a normalized gap is numerical noise
_BC_HYPOTHESIS_TOL = 1e-8

_tolerance_cache: dict = {}


def equality_tolerance(grid, theta: float) -> float:
    """max(1e-3, 10 x discretization-error estimate at this resolution).

    The estimate is the static-cap speed residual on the same grid, the
    cheapest observable proxy for the scheme's O(h^2) error level.
    """
    key = (grid.n_beta, grid.n_xi, round(float(theta), 12))
    if key not in _tolerance_cache:
        cap = cap_phi(CapSpec(1.0, theta), grid)
        residual = float(np.max(np.abs(capillary_speed(geometry_from_phi(cap)))))
        _tolerance_cache[key] = max(1e-3, 10.0 * residual)
    return _tolerance_cache[key]


@dataclass
class IneqEntry:
    name: str
    lhs: float
    rhs: float
    gap: float  # normalized: (lhs - rhs)/|rhs|
    verdict: str
    tolerance: float
    tag: str  # stable key describing what the entry checks


@dataclass
class InequalityReport:
    theta: float
    n: int
    equality_tol: float
    cap_deviation: float  # fitted-radius spread, 0 on caps
    hypothesis_ok: bool
    hypothesis_reason: str
    entries: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def entry(self, name: str) -> IneqEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def _verdict(gap: float, tol: float, is_equality_case: bool) -> str:
    if gap < -tol:
        return "violated"
    if is_equality_case or abs(gap) <= _POSITIVITY_FLOOR:
        return "equality-within-tol"
    if gap > _POSITIVITY_FLOOR:
        return "holds"
    return "equality-within-tol"


def _entry(name, lhs, rhs, tol, eq_case, tag) -> IneqEntry:
    gap = (lhs - rhs) / abs(rhs)
    return IneqEntry(name=name, lhs=lhs, rhs=rhs, gap=gap, verdict=_verdict(gap, tol, eq_case), tolerance=tol, tag=tag)


def check_af(qv: QuermassVector, constants: CapConstants, k: int, tol: float = 1e-3, is_equality_case: bool = False) -> IneqEntry:
    """Quermassintegral chain entry V_n/b >= (V_k/b)^(1/(n+1-k))."""
    n = qv.n
    if not 0 <= k < n:
        raise ValueError(f"k={k} out of range 0..{n - 1}")
    lhs = qv.V[n] / constants.b_theta
    rhs = (qv.V[k] / constants.b_theta) ** (1.0 / (n + 1 - k))
    return _entry(f"af_k{k}", lhs, rhs, tol, is_equality_case, "quermassintegral-chain")


def check_minkowski_2d(qv: QuermassVector, constants: CapConstants, tol: float = 1e-3, is_equality_case: bool = False) -> IneqEntry:
    """Total-mean-curvature lower bound with the wetting and boundary terms."""
    if qv.n != 2:
        raise ValueError("the Minkowski corollary is stated for n = 2")
    theta = qv.theta
    lhs = 2.0 * qv.curvature_integrals[1]  # int H dA with H = 2 H_1
    energy = qv.area - math.cos(theta) * qv.wetted_area
    rhs = 2.0 * math.sqrt(constants.omega_theta) * math.sqrt(energy) + math.sin(theta) * math.cos(theta) * qv.boundary_length
    return _entry("minkowski", lhs, rhs, tol, is_equality_case, "total-mean-curvature")


def check_willmore_2d(state: GeometricState, constants: CapConstants, tol: float = 1e-3, is_equality_case: bool = False) -> IneqEntry:
    """int H^2 dA >= 4 x (unit cap area), scale invariant."""
    if state.n != 2:
        raise ValueError("the Willmore bound is stated for n = 2")
    H = state.kappa1 + state.kappa2
    lhs = float(np.sum(H**2 * state.area_weight))
    rhs = 4.0 * constants.cap_area
    return _entry("willmore", lhs, rhs, tol, is_equality_case, "willmore-energy")


def full_report(state: GeometricState, theta: float | None = None) -> InequalityReport:
    """Audit every inequality and identity on one state.

    States outside the hypotheses (non-convex, or with an unenforced
    contact-angle condition) get verdict "hypothesis-unmet" on every entry.
    """
    theta = state.theta if theta is None else float(theta)
    n = state.n
    tol = equality_tolerance(state.grid, theta)
    consts = cap_constants(theta, n)
    qv = quermass_all(state, theta)

    rho = fitted_radius_field(state)
    cap_dev = float((np.max(rho) - np.min(rho)) / np.mean(rho))
    eq_case = cap_dev <= tol

    hypothesis_ok = True
    reason = "convex capillary state"
    if state.kappa_min <= 0.0:
        hypothesis_ok = False
        reason = f"state is not convex (kappa_min = {state.kappa_min:.3e})"
    elif state.bc_residual > _BC_HYPOTHESIS_TOL:
        hypothesis_ok = False
        reason = f"contact-angle condition unenforced (residual {state.bc_residual:.3e})"

    entries = [check_af(qv, consts, k, tol, eq_case) for k in range(n)]
    if n == 2:
        entries.append(check_minkowski_2d(qv, consts, tol, eq_case))
        entries.append(check_willmore_2d(state, consts, tol, eq_case))

    gb_residual = gauss_bonnet_check(state, theta) / consts.cap_area
    residual_entries = [
        IneqEntry(
            name="gauss_bonnet",
            lhs=qv.curvature_integrals[n],
            rhs=consts.cap_area,
            gap=gb_residual,
            verdict="residual-pass" if abs(gb_residual) <= tol else "residual-fail",
            tolerance=tol,
            tag="gauss-map-area",
        )
    ]
    for k in range(1, n + 1):
        res = minkowski_residual(state, theta, k)
        residual_entries.append(
            IneqEntry(
                name=f"minkowski_identity_k{k}",
                lhs=0.0,
                rhs=0.0,
                gap=res,
                verdict="residual-pass" if abs(res) <= tol else "residual-fail",
                tolerance=tol,
                tag="minkowski-identity",
            )
        )

    if not hypothesis_ok:
        for e in entries:
            e.verdict = "hypothesis-unmet"
        for e in residual_entries:
            e.verdict = "hypothesis-unmet"

    return InequalityReport(
        theta=theta,
        n=n,
        equality_tol=tol,
        cap_deviation=cap_dev,
        hypothesis_ok=hypothesis_ok,
        hypothesis_reason=reason,
        entries=entries + residual_entries,
        extras={
            "V": list(qv.V),
            "V_n_plus_1": float(qv.V[n + 1]),  # reported, not asserted
            "b_theta": consts.b_theta,
            "omega_theta": consts.omega_theta,
            "area": qv.area,
            "wetted_area": qv.wetted_area,
            "boundary_length": qv.boundary_length,
            "enclosed_volume": qv.enclosed_volume,
            "kappa_min": state.kappa_min,
            "kappa_max": state.kappa_max,
            "bc_residual": state.bc_residual,
        },
    )


def render_report(report: InequalityReport) -> str:
    """Deterministic plain-text rendering with a flat key=value section."""
    lines = [
        "capflow inequality report",
        "=========================",
        f"version: {__version__}",
        f"theta = {report.theta:.17g}",
        f"equality-tolerance = {report.equality_tol:.17g}",
        f"cap-deviation = {report.cap_deviation:.17g}",
        f"hypothesis: {'ok' if report.hypothesis_ok else 'UNMET'} ({report.hypothesis_reason})",
        "",
    ]
    for e in report.entries:
        lines.append(
            f"[{e.name}] lhs={e.lhs:.12g} rhs={e.rhs:.12g} gap={e.gap:+.6e} "
            f"tol={e.tolerance:.3g} verdict={e.verdict}"
        )
    lines.append("")
    lines.append("machine-readable:")
    for e in report.entries:
        lines.append(f"{e.name}.lhs = {e.lhs:.17g}")
        lines.append(f"{e.name}.rhs = {e.rhs:.17g}")
        lines.append(f"{e.name}.gap = {e.gap:.17g}")
        lines.append(f"{e.name}.verdict = {e.verdict}")
    for key in sorted(report.extras):
        val = report.extras[key]
        if isinstance(val, list):
            val = " ".join(f"{x:.17g}" for x in val)
        elif isinstance(val, float):
            val = f"{val:.17g}"
        lines.append(f"extras.{key} = {val}")
    lines.append(f"hypothesis.ok = {str(report.hypothesis_ok).lower()}")
    return "\n".join(lines) + "\n"
