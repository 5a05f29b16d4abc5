"""Finite-difference calculus on the closed upper half-sphere (n = 2).

The grid is a latitude-longitude lattice in coordinates (beta, xi) with
beta in (0, pi/2] measured from the pole and xi in [0, 2*pi) periodic.
Latitude nodes are cell-centered, beta_j = (j + 1/2) * dbeta with
dbeta = pi / (2*n_beta - 1), so no node sits on the coordinate pole and the
last node lands exactly on the equator beta = pi/2, which carries the
contact-angle boundary condition.

Pole closure: a value at (-beta_0, xi) equals the value at (beta_0, xi+pi),
so stencils that reach below the first row use the half-rotated first row.
At the equator row, plain operators fall back to one-sided second-order
stencils; callers that maintain a ghost row beyond the equator (the flow
boundary condition does) get centered stencils everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class HalfSphereGrid:
    """Cell-centered lat-long discretization of the closed half-sphere."""

    n_beta: int
    n_xi: int
    axisymmetric: bool
    beta: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)
    dbeta: float = 0.0
    dxi: float = 0.0
    sin_beta: np.ndarray = field(default=None, repr=False)
    cos_beta: np.ndarray = field(default=None, repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_beta, self.n_xi)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape)


def make_grid(n_beta: int, n_xi: int | None = None, axisymmetric: bool = False) -> HalfSphereGrid:
    """Build a grid; n_xi defaults to n_beta // 2 (or 1 in axisymmetric mode)."""
    n_beta = int(n_beta)
    if axisymmetric:
        n_xi = 1
    elif n_xi is None:
        n_xi = max(4, n_beta // 2)
    n_xi = int(n_xi)
    if n_beta < 16:
        raise ValueError("n_beta must be at least 16")
    if axisymmetric:
        if n_xi != 1:
            raise ValueError("axisymmetric grids have n_xi = 1")
    else:
        if n_xi < 4:
            raise ValueError("n_xi must be at least 4 (or 1 in axisymmetric mode)")
        if n_xi % 2 != 0:
            raise ValueError("n_xi must be even so the pole half-rotation maps nodes to nodes")

    dbeta = np.pi / (2 * n_beta - 1)
    beta = (np.arange(n_beta) + 0.5) * dbeta
    # last node is exactly the equator
    beta[-1] = np.pi / 2
    if axisymmetric:
        dxi = 2 * np.pi
        xi = np.zeros(1)
    else:
        dxi = 2 * np.pi / n_xi
        xi = np.arange(n_xi) * dxi

    # exact cell masses of sin(beta) d(beta); the equator node owns the final
    # half cell [pi/2 - dbeta/2, pi/2]
    edges = np.minimum(np.arange(n_beta + 1) * dbeta, np.pi / 2)
    w_beta = np.cos(edges[:-1]) - np.cos(edges[1:])
    weights = np.repeat(w_beta[:, None] * dxi, n_xi, axis=1)

    return HalfSphereGrid(
        n_beta=n_beta,
        n_xi=n_xi,
        axisymmetric=axisymmetric,
        beta=beta,
        xi=xi,
        dbeta=float(dbeta),
        dxi=float(dxi),
        sin_beta=np.sin(beta),
        cos_beta=np.cos(beta),
        weights=weights,
    )


def _check_field(field_values, grid: HalfSphereGrid) -> np.ndarray:
    f = np.asarray(field_values, dtype=float)
    if f.shape != grid.shape:
        raise ValueError(f"field shape {f.shape} does not match grid {grid.shape}")
    return f


def pole_ghost_row(f: np.ndarray, depth: int = 0) -> np.ndarray:
    """Row at beta = -(depth + 1/2) dbeta: row `depth` rotated by pi in xi."""
    return np.roll(f[depth], f.shape[1] // 2)


def _pole_extended(f: np.ndarray) -> np.ndarray:
    """f with two antipodal ghost rows prepended (indices shift by +2)."""
    return np.vstack([pole_ghost_row(f, 1), pole_ghost_row(f, 0), f])


def d_beta(f: np.ndarray, grid: HalfSphereGrid, ghost: np.ndarray | None = None) -> np.ndarray:
    """First beta-derivative.

    Fourth-order centered stencils away from the equator (the pole closure
    supplies ghost rows, and the extra order prevents the cot(beta)
    amplification of truncation error in covariant combinations near the
    pole); 3-point centered on the penultimate row and one-sided
    second-order on the equator row unless a boundary ghost is supplied.
    """
    db = grid.dbeta
    ext = _pole_extended(f)
    out = np.empty_like(f)
    out[:-2] = (-ext[4:] + 8 * ext[3:-1] - 8 * ext[1:-3] + ext[:-4]) / (12 * db)
    out[-2] = (f[-1] - f[-3]) / (2 * db)
    if ghost is not None:
        out[-1] = (ghost - f[-2]) / (2 * db)
    else:
        out[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * db)
    return out


def d2_beta(f: np.ndarray, grid: HalfSphereGrid, ghost: np.ndarray | None = None) -> np.ndarray:
    db2 = grid.dbeta**2
    ext = _pole_extended(f)
    out = np.empty_like(f)
    out[:-2] = (-ext[4:] + 16 * ext[3:-1] - 30 * ext[2:-2] + 16 * ext[1:-3] - ext[:-4]) / (12 * db2)
    out[-2] = (f[-1] - 2 * f[-2] + f[-3]) / db2
    if ghost is not None:
        out[-1] = (ghost - 2 * f[-1] + f[-2]) / db2
    else:
        out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / db2
    return out


def d_xi(f: np.ndarray, grid: HalfSphereGrid) -> np.ndarray:
    """Periodic xi-derivative, spectral (exact on resolved modes)."""
    if grid.n_xi == 1:
        return np.zeros_like(f)
    m = np.fft.rfftfreq(grid.n_xi, d=1.0 / grid.n_xi)
    return np.fft.irfft(1j * m * np.fft.rfft(f, axis=1), grid.n_xi, axis=1)


def d2_xi(f: np.ndarray, grid: HalfSphereGrid) -> np.ndarray:
    if grid.n_xi == 1:
        return np.zeros_like(f)
    m = np.fft.rfftfreq(grid.n_xi, d=1.0 / grid.n_xi)
    return np.fft.irfft(-(m**2) * np.fft.rfft(f, axis=1), grid.n_xi, axis=1)


def grad_sphere(field_values, grid: HalfSphereGrid, ghost: np.ndarray | None = None):
    """Covariant gradient in the orthonormal frame (d_beta, (1/sin beta) d_xi).

    Returns the pair of component fields.  Second-order accurate in the
    interior and one-sided second-order on the equator row.
    """
    f = _check_field(field_values, grid)
    fb = d_beta(f, grid, ghost)
    fx = d_xi(f, grid) / grid.sin_beta[:, None]
    return fb, fx


def hess_sphere(field_values, grid: HalfSphereGrid, ghost: np.ndarray | None = None):
    """Covariant Hessian in coordinates (beta, xi) on the round metric.

    Returns (f_bb, f_bx, f_xx) with the Christoffel corrections of
    d(beta)^2 + sin^2(beta) d(xi)^2:

        f_bb = d2_beta f
        f_bx = d_xi d_beta f - cot(beta) * d_xi f
        f_xx = d2_xi f + sin(beta) cos(beta) * d_beta f
    """
    f = _check_field(field_values, grid)
    sb = grid.sin_beta[:, None]
    cb = grid.cos_beta[:, None]
    fb = d_beta(f, grid, ghost)
    fx = d_xi(f, grid)
    f_bb = d2_beta(f, grid, ghost)
    f_bx = d_xi(fb, grid) - (cb / sb) * fx
    f_xx = d2_xi(f, grid) + sb * cb * fb
    return f_bb, f_bx, f_xx


def laplace_sphere(field_values, grid: HalfSphereGrid, ghost: np.ndarray | None = None) -> np.ndarray:
    """Laplace-Beltrami operator: trace of the covariant Hessian."""
    f_bb, _, f_xx = hess_sphere(field_values, grid, ghost)
    return f_bb + f_xx / grid.sin_beta[:, None] ** 2


def integrate(field_values, grid: HalfSphereGrid) -> float:
    """Quadrature of the field against the round area element sin(beta) db dxi."""
    f = _check_field(field_values, grid)
    return float(np.sum(f * grid.weights))


def boundary_integrate(boundary_values, grid: HalfSphereGrid) -> float:
    """Periodic quadrature over the equator row (unit line element there)."""
    vals = np.asarray(boundary_values, dtype=float)
    if vals.shape != (grid.n_xi,):
        raise ValueError(f"boundary values must have shape ({grid.n_xi},)")
    return float(np.sum(vals) * grid.dxi)
