"""Initial data generators and the Monte-Carlo volume oracle.

Caps: the spherical cap of radius r and contact angle theta around the
downward axis has polar equation

    rho(beta) = r * (-cos(theta) cos(beta) + sqrt(1 - cos^2(theta) sin^2(beta)))

(the positive root of |x - r cos(theta) e| = r), which satisfies the
contact-angle condition exactly in the continuum.

Perturbations: phi = phi_cap + A * eta(beta) * cos(m * xi) with the window

    eta(beta) = sin^2(pi/2 - beta) * S(2 beta / pi)^p,   S(t) = t^2 (3 - 2t),

so eta and eta' vanish at the equator (the boundary gradient is untouched
and the contact-angle condition survives) and eta = O(beta^{2p}) at the pole
(regularity of the cos(m xi) factor for m <= 2p).  The default p = 2 keeps
mode-2 perturbations of small-angle caps comfortably convex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from capflow.halfsphere import HalfSphereGrid
from capflow.surface import GeometricState, RadialField, geometry_from_phi, make_radial_field


@dataclass(frozen=True)
class CapSpec:
    """Spherical cap: radius r > 0 and contact angle theta in (0, pi)."""

    r: float
    theta: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("cap radius must be positive")
        if not 0.0 < self.theta < np.pi:
            raise ValueError("contact angle must lie in (0, pi)")


@dataclass(frozen=True)
class PerturbationSpec:
    """Boundary-condition-preserving perturbation of a cap profile."""

    amplitude: float
    xi_mode: int = 2
    beta_profile: int = 2  # exponent p of the smoothstep window
    seed: int | None = None  # adds a random-phase secondary mode when set


def cap_rho(spec: CapSpec, beta: np.ndarray) -> np.ndarray:
    """Polar radius of the cap at colatitude beta."""
    ct = np.cos(spec.theta)
    return spec.r * (-ct * np.cos(beta) + np.sqrt(1.0 - ct**2 * np.sin(beta) ** 2))


def cap_phi(spec: CapSpec, grid: HalfSphereGrid) -> RadialField:
    """Exact cap profile sampled on the grid."""
    rho = cap_rho(spec, grid.beta)
    phi = np.repeat(np.log(rho)[:, None], grid.n_xi, axis=1)
    return make_radial_field(phi, spec.theta, grid)


def perturbation_window(beta: np.ndarray, p: int = 2) -> np.ndarray:
    """The window eta(beta); eta(pi/2) = eta'(pi/2) = 0 and eta = O(beta^{2p})."""
    t = 2.0 * beta / np.pi
    smooth = t * t * (3.0 - 2.0 * t)
    return np.sin(np.pi / 2 - beta) ** 2 * smooth**p


def perturbed_cap(
    spec: CapSpec,
    pert: PerturbationSpec,
    grid: HalfSphereGrid,
    max_halvings: int = 20,
) -> RadialField:
    """Cap plus a convexity-checked angular perturbation.

    The amplitude is halved (up to ``max_halvings`` times) until the state is
    strictly convex; the construction never touches boundary-row values or
    gradients, so the discrete contact-angle condition is preserved exactly.
    """
    base = np.log(cap_rho(spec, grid.beta))[:, None]
    eta = perturbation_window(grid.beta, pert.beta_profile)[:, None]
    angular = np.cos(pert.xi_mode * grid.xi)[None, :]
    bump = eta * angular
    if pert.seed is not None:
        rng = np.random.default_rng(pert.seed)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        secondary = rng.uniform(0.2, 0.4)
        bump = bump + secondary * eta * np.cos((pert.xi_mode + 1) * grid.xi + phase)[None, :]

    amplitude = float(pert.amplitude)
    for _ in range(max_halvings + 1):
        state = make_radial_field(base + amplitude * bump, spec.theta, grid)
        geom = geometry_from_phi(state)
        if geom.kappa_min > 0.0:
            return state
        amplitude *= 0.5
    raise ValueError(
        f"could not reach a strictly convex state from amplitude {pert.amplitude} "
        f"within {max_halvings} halvings (theta={spec.theta:g}, mode={pert.xi_mode})"
    )


def mc_volume(
    state: GeometricState, samples: int, seed: int = 0, batch: int = 262144
) -> tuple[float, float]:
    """Monte-Carlo volume of the enclosed domain, with standard error.

    Uniform points in the bounding box of the domain are classified by
    comparing their radius against the bilinearly interpolated exp(phi) in
    the point's spherical direction; the estimate is unbiased for the
    interpolated surface and deterministic given (samples, seed).
    """
    samples = int(samples)
    if samples <= 0:
        raise ValueError("samples must be positive")
    grid = state.grid
    if np.any(state.support <= 0.0):
        raise ValueError("Monte-Carlo oracle requires a star-shaped state")

    radius = np.exp(state.phi)
    r_xy = float(np.max(radius * grid.sin_beta[:, None])) * (1.0 + 1e-9)
    height = float(np.max(radius * grid.cos_beta[:, None])) * (1.0 + 1e-9)
    box_volume = (2.0 * r_xy) ** 2 * height

    rng = np.random.default_rng(seed)
    hits = 0
    remaining = samples
    while remaining > 0:
        m = min(batch, remaining)
        remaining -= m
        x = rng.uniform(-r_xy, r_xy, m)
        y = rng.uniform(-r_xy, r_xy, m)
        z = rng.uniform(0.0, height, m)
        r = np.sqrt(x * x + y * y + z * z)
        beta = np.arccos(np.clip(z / np.maximum(r, 1e-300), -1.0, 1.0))
        xi = np.mod(np.arctan2(y, x), 2.0 * np.pi)
        hits += int(np.sum(r <= _interp_radius(state.phi, grid, beta, xi)))

    p = hits / samples
    estimate = box_volume * p
    stderr = box_volume * np.sqrt(max(p * (1.0 - p), 0.0) / samples)
    return float(estimate), float(stderr)


def _interp_radius(phi: np.ndarray, grid: HalfSphereGrid, beta, xi) -> np.ndarray:
    """Bilinear interpolation of exp(phi) in spherical direction (beta, xi).

    Below the first latitude row the pole closure (half-rotation in xi) is
    used; the equator row is exact since a node sits on it.
    """
    J, K = grid.shape
    db = grid.dbeta
    # extended ladder: pole ghost at -dbeta/2, rows, equator at pi/2
    jf = beta / db - 0.5 + 1.0  # +1 for the ghost row offset
    jf = np.clip(jf, 0.0, J)  # top ghost not needed: beta <= pi/2 maps to <= J
    j0 = np.minimum(jf.astype(int), J - 1)
    tj = jf - j0

    if K == 1:
        col = phi[:, 0]
        ext = np.concatenate(([col[0]], col))
        return np.exp(ext[j0] * (1.0 - tj) + ext[j0 + 1] * tj)

    ext = np.vstack([np.roll(phi[0], K // 2), phi])
    kf = xi / grid.dxi
    k0 = np.minimum(kf.astype(int), K - 1)
    tk = kf - k0
    k1 = (k0 + 1) % K
    # the ghost row lives at xi + pi; interpolate it at the rotated columns
    f00 = ext[j0, k0]
    f01 = ext[j0, k1]
    f10 = ext[j0 + 1, k0]
    f11 = ext[j0 + 1, k1]
    vals = (
        f00 * (1 - tj) * (1 - tk)
        + f01 * (1 - tj) * tk
        + f10 * tj * (1 - tk)
        + f11 * tj * tk
    )
    return np.exp(vals)
