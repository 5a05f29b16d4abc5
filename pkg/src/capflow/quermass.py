"""Capillary quermassintegrals, spherical-cap constants, Minkowski residuals.

For a capillary surface with contact angle theta enclosing the domain D
against the supporting hyperplane, the functionals are

    V_0 = |D|
    V_1 = (|Sigma| - cos(theta) |wetted face|) / (n+1)
    V_{k+1} = ( int_Sigma H_k dA
               - cos(theta) sin^k(theta)/n * int_bdry H^bdry_{k-1} ds ) / (n+1)

for 1 <= k <= n, where H^bdry_{k-1} is the normalized mean curvature of the
boundary curve inside the hyperplane.  A spherical cap of radius r scales as
V_k = r^{n+1-k} * b_theta, with b_theta the volume of the unit cap domain.

Normalization note: b_theta is defined operationally as the unit cap-domain
volume (slice integral below); the wetting-energy constant is then
omega_theta = (n+1) * b_theta, and the verified Gauss-Bonnet style identity
is int_Sigma H_n dA = |unit spherical cap area|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from capflow.surface import GeometricState


def sphere_area(n: int) -> float:
    """Area of the unit n-sphere."""
    return float(2.0 * np.pi ** ((n + 1) / 2.0) / special.gamma((n + 1) / 2.0))


def sin_power_integral(m: int, theta: float) -> float:
    """int_0^theta sin^m(t) dt for theta in (0, pi), via the incomplete beta.

    For theta <= pi/2 this is B((m+1)/2, 1/2)/2 * I_{sin^2 theta}; beyond the
    equator the reflection t -> pi - t supplies the remainder.
    """
    if not 0.0 < theta < np.pi:
        raise ValueError(f"theta={theta} outside (0, pi)")
    a = (m + 1) / 2.0
    b = 0.5
    half = 0.5 * special.beta(a, b)
    s = math.sin(theta) ** 2
    if theta <= np.pi / 2:
        return float(half * special.betainc(a, b, s))
    return float(half * (2.0 - special.betainc(a, b, s)))


@dataclass(frozen=True)
class CapConstants:
    """Constants of the unit spherical cap with contact angle theta."""

    theta: float
    n: int
    b_theta: float  # volume of the unit cap domain
    omega_theta: float  # (n+1) * b_theta, the capillary free-energy constant
    omega_n: float  # area of the unit n-sphere
    cap_area: float  # area of the unit spherical cap
    wetted_disk_area: float  # area of the flat face of the unit cap domain


def cap_constants(theta: float, n: int = 2) -> CapConstants:
    """Exact cap constants via slice integrals.

    b_theta = |B^n| * int_{cos theta}^1 (1 - t^2)^{n/2} dt, evaluated as
    (omega_{n-1}/n) * int_0^theta sin^{n+1}(u) du.  For n = 2 this reduces to
    the closed form (pi/3)(2 - 3 cos(theta) + cos^3(theta)).
    """
    if not 0.0 < theta < np.pi:
        raise ValueError(f"theta={theta} outside (0, pi)")
    omega_nm1 = sphere_area(n - 1)
    b_theta = omega_nm1 / n * sin_power_integral(n + 1, theta)
    cap_area = omega_nm1 * sin_power_integral(n - 1, theta)
    wetted = omega_nm1 / n * math.sin(theta) ** n
    return CapConstants(
        theta=float(theta),
        n=int(n),
        b_theta=float(b_theta),
        omega_theta=float((n + 1) * b_theta),
        omega_n=sphere_area(n),
        cap_area=float(cap_area),
        wetted_disk_area=float(wetted),
    )


@dataclass
class QuermassVector:
    """V_0 .. V_{n+1} together with the raw integrals they are built from."""

    theta: float
    n: int
    V: np.ndarray  # length n+2
    area: float
    wetted_area: float
    boundary_length: float
    enclosed_volume: float
    curvature_integrals: np.ndarray  # int H_k dA for k = 0..n
    boundary_curvature_integrals: np.ndarray  # int H^bdry_{k-1} ds for k = 1..n

    def reassemble(self) -> np.ndarray:
        """Recompute V from the raw fields (pure arithmetic, for audits)."""
        n = self.n
        ct = math.cos(self.theta)
        st = math.sin(self.theta)
        V = np.empty(n + 2)
        V[0] = self.enclosed_volume
        V[1] = (self.area - ct * self.wetted_area) / (n + 1)
        for k in range(1, n + 1):
            V[k + 1] = (
                self.curvature_integrals[k]
                - ct * st**k / n * self.boundary_curvature_integrals[k - 1]
            ) / (n + 1)
        return V


def quermass_all(state: GeometricState, theta: float | None = None) -> QuermassVector:
    """All capillary quermassintegrals of a geometric state.

    The enclosed volume V_0 comes from the divergence theorem over the
    surface alone: the flat wetted face is tangent to the position field and
    contributes nothing.
    """
    theta = state.theta if theta is None else float(theta)
    n = state.n
    dA = state.area_weight
    area = float(np.sum(dA))
    enclosed_volume = float(np.sum(state.support * dA) / (n + 1))

    curvature_integrals = np.array(
        [float(np.sum(state.mean_curvature_H(k) * dA)) for k in range(n + 1)]
    )
    bd = state.boundary
    # n = 2: H^bdry_0 = 1 and H^bdry_1 is the planar curvature of the curve
    boundary_curvature_integrals = np.array(
        [bd.length, float(np.sum(bd.curvature * bd.ds))]
    )

    qv = QuermassVector(
        theta=theta,
        n=n,
        V=np.empty(n + 2),
        area=area,
        wetted_area=bd.enclosed_area,
        boundary_length=bd.length,
        enclosed_volume=enclosed_volume,
        curvature_integrals=curvature_integrals,
        boundary_curvature_integrals=boundary_curvature_integrals,
    )
    qv.V = qv.reassemble()
    return qv


def minkowski_residual(state: GeometricState, theta: float | None = None, k: int = 1) -> float:
    """Normalized defect of the capillary Minkowski identity

        int H_{k-1} (1 + cos(theta) <nu,e>) dA  =  int H_k <x,nu> dA,

    which holds for every capillary hypersurface; the returned value is
    (LHS - RHS)/|RHS| (absolute when RHS is below the floating floor).
    """
    theta = state.theta if theta is None else float(theta)
    if not 1 <= k <= state.n:
        raise ValueError(f"k={k} out of range 1..{state.n}")
    weight = 1.0 - math.cos(theta) * state.nu_vert
    dA = state.area_weight
    lhs = float(np.sum(state.mean_curvature_H(k - 1) * weight * dA))
    rhs = float(np.sum(state.mean_curvature_H(k) * state.support * dA))
    if abs(rhs) < 1e-14 * max(1.0, abs(lhs)):
        return lhs - rhs
    return (lhs - rhs) / abs(rhs)


def gauss_bonnet_check(state: GeometricState, theta: float | None = None) -> float:
    """int H_n dA minus the unit-cap area (zero for capillary surfaces)."""
    theta = state.theta if theta is None else float(theta)
    total = float(np.sum(state.mean_curvature_H(state.n) * state.area_weight))
    return total - cap_constants(theta, state.n).cap_area
