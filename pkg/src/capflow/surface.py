"""Extrinsic geometry of the capillary graph surface over the half-sphere.

A state is the log-radial field phi on the grid together with the contact
angle theta; the surface is {exp(phi(X)) * X : X in the closed half-sphere}.
All derived quantities (graph factor, normal components, shape operator,
principal curvatures, area weights, boundary curve data) live on
``GeometricState`` and are computed in one pass by the kernels module.

Sign conventions: nu is the outward normal and the downward direction is
e = -e_{n+1}, so the stored vertical component nu_vert = <nu, e_{n+1}>
satisfies <nu, e> = -nu_vert.  The contact-angle boundary condition in graph
coordinates reads  d_beta phi = cos(theta) * sqrt(1 + |grad phi|^2)  on the
equator row and is imposed through a ghost row solved by scalar Newton
iteration per boundary node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from capflow import halfsphere, kernels
from capflow.errors import BoundaryNewtonError, ConeViolationError
from capflow.halfsphere import HalfSphereGrid

BC_TOLERANCE = 1e-12
_NEWTON_MAX_ITER = 50


@dataclass
class RadialField:
    """Log-radial graph function with an enforced contact-angle ghost row."""

    phi: np.ndarray
    theta: float
    grid: HalfSphereGrid
    ghost: np.ndarray = None
    bc_residual: float = np.inf
    bc_iterations: int = 0
    _geometry: "GeometricState" = field(default=None, repr=False, compare=False)

    def copy_with_phi(self, phi: np.ndarray) -> "RadialField":
        return make_radial_field(phi, self.theta, self.grid)


@dataclass
class BoundaryGeometry:
    """The boundary curve rho(xi) * (cos xi, sin xi) in the supporting plane."""

    rho: np.ndarray
    curvature: np.ndarray
    ds: np.ndarray
    length: float
    enclosed_area: float


@dataclass
class GeometricState:
    """Per-node first/second fundamental data derived from a radial field."""

    grid: HalfSphereGrid
    theta: float
    n: int
    phi: np.ndarray
    ghost: np.ndarray
    grad_beta: np.ndarray
    grad_xi: np.ndarray
    v: np.ndarray
    nu_vert: np.ndarray
    support: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    weingarten: np.ndarray  # (J, K, 2, 2), orthonormal round frame
    area_weight: np.ndarray
    boundary: BoundaryGeometry
    bc_residual: float

    @property
    def kappa_min(self) -> float:
        return float(np.min(self.kappa1))

    @property
    def kappa_max(self) -> float:
        return float(np.max(self.kappa2))

    @property
    def area(self) -> float:
        return float(np.sum(self.area_weight))

    def mean_curvature_H(self, k: int) -> np.ndarray:
        """Normalized mean curvature field H_k, k = 0..n (n = 2)."""
        if k == 0:
            return np.ones_like(self.kappa1)
        if k == 1:
            return 0.5 * (self.kappa1 + self.kappa2)
        if k == 2:
            return self.kappa1 * self.kappa2
        raise ValueError(f"H_{k} undefined for n={self.n}")

    def curvature_ratio(self, l: int) -> np.ndarray:
        """F = H_l / H_{l-1} fieldwise (no cone check; see capillary_speed)."""
        if l == 1:
            return 0.5 * (self.kappa1 + self.kappa2)
        if l == 2:
            return 2.0 * self.kappa1 * self.kappa2 / (self.kappa1 + self.kappa2)
        raise ValueError(f"l={l} out of range 1..{self.n}")


def solve_boundary_ghost(phi: np.ndarray, theta: float, grid: HalfSphereGrid):
    """Ghost-row values making the centered equator derivative satisfy the
    contact-angle condition.

    Solves, per boundary node, p = cos(theta) * sqrt(1 + p^2 + q^2) for the
    centered derivative p by Newton iteration (q is the xi-derivative along
    the equator, taken from current boundary-row values).  The iteration is
    monotone since |cos(theta)| < 1.
    """
    ct = np.cos(theta)
    # same 3-point xi-stencil as the geometry kernels, so the enforced
    # condition matches the geometry's boundary gradient exactly
    q = kernels.stencil_d_xi(phi[-1:], grid)[0]  # sin(beta)=1 on the equator
    one_q2 = 1.0 + q * q
    p = ct * np.sqrt(one_q2)  # first Newton step from p = 0
    iters = 0
    for _ in range(_NEWTON_MAX_ITER):
        root = np.sqrt(one_q2 + p * p)
        g = p - ct * root
        iters += 1
        if np.max(np.abs(g)) <= BC_TOLERANCE:
            break
        gp = 1.0 - ct * p / root
        p = p - g / gp
    else:
        raise BoundaryNewtonError(
            f"contact-angle ghost solve did not reach {BC_TOLERANCE:g} in "
            f"{_NEWTON_MAX_ITER} iterations (theta={theta:g})"
        )
    ghost = phi[-2] + 2.0 * grid.dbeta * p
    residual = float(np.max(np.abs(p - ct * np.sqrt(one_q2 + p * p))))
    return ghost, residual, iters


def make_radial_field(phi, theta: float, grid: HalfSphereGrid) -> RadialField:
    """Validate phi, enforce the boundary condition, return the state."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != grid.shape:
        raise ValueError(f"phi shape {phi.shape} does not match grid {grid.shape}")
    if not np.all(np.isfinite(phi)):
        raise ValueError("phi has non-finite entries")
    if not 0.0 < theta < np.pi:
        raise ValueError(f"contact angle theta={theta} outside (0, pi)")
    ghost, residual, iters = solve_boundary_ghost(phi, theta, grid)
    return RadialField(
        phi=phi,
        theta=float(theta),
        grid=grid,
        ghost=ghost,
        bc_residual=residual,
        bc_iterations=iters,
    )


def _boundary_geometry(phi_boundary: np.ndarray, grid: HalfSphereGrid) -> BoundaryGeometry:
    rho = np.exp(phi_boundary)
    if np.any(rho <= 0.0):
        raise ValueError("boundary curve radius must be positive")
    K = grid.n_xi
    if K == 1:
        r = float(rho[0])
        return BoundaryGeometry(
            rho=rho,
            curvature=np.full(1, 1.0 / r),
            ds=np.full(1, 2.0 * np.pi * r),
            length=2.0 * np.pi * r,
            enclosed_area=np.pi * r * r,
        )
    # spectral derivatives of the closed curve: rho is smooth and periodic
    m = np.fft.rfftfreq(K, d=1.0 / K)
    spec = np.fft.rfft(rho)
    drho = np.fft.irfft(1j * m * spec, K)
    d2rho = np.fft.irfft(-(m**2) * spec, K)
    g2 = rho**2 + drho**2
    curvature = (rho**2 + 2.0 * drho**2 - rho * d2rho) / g2**1.5
    ds = np.sqrt(g2) * grid.dxi
    length = float(np.sum(ds))
    enclosed_area = float(0.5 * np.sum(rho**2) * grid.dxi)
    return BoundaryGeometry(rho=rho, curvature=curvature, ds=ds, length=length, enclosed_area=enclosed_area)


def geometry_from_phi(state: RadialField) -> GeometricState:
    """Populate the full extrinsic geometry of the graph surface."""
    if state._geometry is not None:
        return state._geometry
    if state.ghost is None:
        raise ValueError("radial field has no enforced boundary ghost row")
    grid = state.grid
    out = kernels.geometry_core(state.phi, state.ghost, grid)
    gb, gx, v, nu_vert, support, kappa1, kappa2, w11, w12, w21, w22 = out

    for name, arr in (("gradient", gb), ("curvature", kappa2)):
        if not np.all(np.isfinite(arr)):
            j, k = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(
                f"non-finite {name} at node (beta-row {j}, xi-col {k}); "
                "the radial field is not a valid graph"
            )

    weingarten = np.stack(
        [np.stack([w11, w12], axis=-1), np.stack([w21, w22], axis=-1)], axis=-2
    )
    area_weight = np.exp(2.0 * state.phi) * v * grid.weights
    geometry = GeometricState(
        grid=grid,
        theta=state.theta,
        n=2,
        phi=state.phi,
        ghost=state.ghost,
        grad_beta=gb,
        grad_xi=gx,
        v=v,
        nu_vert=nu_vert,
        support=support,
        kappa1=kappa1,
        kappa2=kappa2,
        weingarten=weingarten,
        area_weight=area_weight,
        boundary=_boundary_geometry(state.phi[-1], grid),
        bc_residual=state.bc_residual,
    )
    state._geometry = geometry
    return geometry


def boundary_geometry(state: GeometricState) -> BoundaryGeometry:
    """Boundary curve summary: length, enclosed planar area, curvature."""
    return state.boundary


def check_cone(state: GeometricState, l: int) -> None:
    """Raise ConeViolationError at the first node outside Gamma_+^l."""
    h1 = state.kappa1 + state.kappa2
    if l == 1:
        bad = h1 <= 0.0
    elif l == 2:
        bad = (h1 <= 0.0) | (state.kappa1 * state.kappa2 <= 0.0)
    else:
        raise ValueError(f"l={l} out of range 1..{state.n}")
    if np.any(bad):
        j, k = np.argwhere(bad)[0]
        raise ConeViolationError((j, k), (state.kappa1[j, k], state.kappa2[j, k]), l)


def capillary_speed(state: GeometricState, l: int | None = None) -> np.ndarray:
    """Flow speed f = (1 + cos(theta) <nu,e>) / F - <x,nu> with F = H_l/H_{l-1}.

    Vanishes (to grid accuracy) exactly on the static spherical caps.  The
    curvature vector must lie in Gamma_+^l at every node.
    """
    l = state.n if l is None else int(l)
    check_cone(state, l)
    F = state.curvature_ratio(l)
    weight = 1.0 - np.cos(state.theta) * state.nu_vert  # 1 + cos(theta)<nu,e>
    return weight / F - state.support
