"""Hot per-node geometry kernels, in two interchangeable lanes.

The default lane compiles a fused per-node loop with numba; the fallback
lane computes the same fields with vectorized numpy.  Set the environment
variable CAPFLOW_PURE_NUMPY=1 before import (or call ``set_lane``) to force
the numpy lane.  ``benchmarks/kernel_bench.py`` compares the two.

Both lanes take the log-radial field phi on the half-sphere grid plus the
equator ghost row and return, per node:

    gb, gx         gradient of phi in the orthonormal round frame
    v              graph factor sqrt(1 + |grad phi|^2)
    nu_vert        vertical normal component <nu, e_{n+1}>
    support        support function <x, nu> = exp(phi)/v
    kappa1, kappa2 principal curvatures (sorted ascending)
    w11..w22       shape operator in the orthonormal round frame

The shape operator is (I - P Hess) / (exp(phi) v) with P = I - g g^T / v^2;
its eigenvalues equal the generalized eigenvalues of the symmetric pencil
(M - Hess, M), M = I + g g^T, divided by exp(phi) v, which is how kappa is
extracted (quadratic formula on the pencil, stable since det M = v^2 >= 1).
"""

from __future__ import annotations

import os
import warnings

import numpy as np

from capflow import halfsphere

_ENV_FLAG = "CAPFLOW_PURE_NUMPY"

try:
    if os.environ.get(_ENV_FLAG, "") not in ("", "0"):
        raise ImportError("numpy lane forced by environment")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap


ACTIVE_LANE = "numba" if HAVE_NUMBA else "numpy"


def set_lane(lane: str) -> None:
    """Switch between the 'numba' and 'numpy' implementations."""
    global ACTIVE_LANE
    if lane not in ("numba", "numpy"):
        raise ValueError("lane must be 'numba' or 'numpy'")
    if lane == "numba" and not HAVE_NUMBA:
        warnings.warn("numba unavailable; staying on the numpy lane")
        lane = "numpy"
    ACTIVE_LANE = lane


def geometry_core(phi, ghost, grid, lane: str | None = None):
    """Dispatch the per-node geometry evaluation to the active lane."""
    lane = ACTIVE_LANE if lane is None else lane
    if lane == "numba" and HAVE_NUMBA:
        return _geometry_numba(
            np.ascontiguousarray(phi),
            np.ascontiguousarray(ghost),
            grid.sin_beta,
            grid.cos_beta,
            grid.dbeta,
            grid.dxi,
        )
    return _geometry_numpy(phi, ghost, grid)


def stencil_d_beta(phi, grid, ghost):
    """3-point centered beta-derivative with pole and boundary ghosts."""
    db = grid.dbeta
    out = np.empty_like(phi)
    out[1:-1] = (phi[2:] - phi[:-2]) / (2 * db)
    out[0] = (phi[1] - halfsphere.pole_ghost_row(phi)) / (2 * db)
    out[-1] = (ghost - phi[-2]) / (2 * db)
    return out


def stencil_d2_beta(phi, grid):
    """3-point second beta-derivative, one-sided on the equator row."""
    db2 = grid.dbeta**2
    out = np.empty_like(phi)
    out[1:-1] = (phi[2:] - 2 * phi[1:-1] + phi[:-2]) / db2
    out[0] = (phi[1] - 2 * phi[0] + halfsphere.pole_ghost_row(phi)) / db2
    out[-1] = (2 * phi[-1] - 5 * phi[-2] + 4 * phi[-3] - phi[-4]) / db2
    return out


def stencil_d_xi(f, grid):
    if grid.n_xi == 1:
        return np.zeros_like(f)
    return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2 * grid.dxi)


def stencil_d2_xi(f, grid):
    if grid.n_xi == 1:
        return np.zeros_like(f)
    return (np.roll(f, -1, axis=1) - 2 * f + np.roll(f, 1, axis=1)) / grid.dxi**2


def _geometry_numpy(phi, ghost, grid):
    sb = grid.sin_beta[:, None]
    cb = grid.cos_beta[:, None]
    fb = stencil_d_beta(phi, grid, ghost)
    fx_c = stencil_d_xi(phi, grid)
    gb = fb
    gx = fx_c / sb

    # the ghost enters only through the first derivative it was solved for;
    # the boundary-row second derivative stays one-sided so its truncation
    # is O(h^2) rather than O(h) from the ghost shift
    h_bb = stencil_d2_beta(phi, grid)
    h_bx = stencil_d_xi(fb, grid) - (cb / sb) * fx_c
    h_xx = stencil_d2_xi(phi, grid) + sb * cb * fb
    H11 = h_bb
    H12 = h_bx / sb
    H22 = h_xx / sb**2

    v2 = 1.0 + gb**2 + gx**2
    v = np.sqrt(v2)

    M11 = 1.0 + gb**2
    M12 = gb * gx
    M22 = 1.0 + gx**2
    A11 = M11 - H11
    A12 = M12 - H12
    A22 = M22 - H22

    a = v2
    s = A11 * M22 + A22 * M11 - 2.0 * A12 * M12
    d = A11 * A22 - A12**2
    disc = np.sqrt(np.maximum(s**2 - 4.0 * a * d, 0.0))
    scale = np.exp(phi) * v
    kappa1 = (s - disc) / (2.0 * a) / scale
    kappa2 = (s + disc) / (2.0 * a) / scale

    P11 = 1.0 - gb**2 / v2
    P12 = -gb * gx / v2
    P22 = 1.0 - gx**2 / v2
    w11 = (1.0 - (P11 * H11 + P12 * H12)) / scale
    w12 = -(P11 * H12 + P12 * H22) / scale
    w21 = -(P12 * H11 + P22 * H12) / scale
    w22 = (1.0 - (P12 * H12 + P22 * H22)) / scale

    nu_vert = (cb + sb * gb) / v
    support = np.exp(phi) / v
    return gb, gx, v, nu_vert, support, kappa1, kappa2, w11, w12, w21, w22


@njit(cache=True)
def _geometry_numba(phi, ghost, sin_beta, cos_beta, dbeta, dxi):  # pragma: no cover - numba
    J, K = phi.shape
    half = K // 2
    gb = np.empty((J, K))
    gx = np.empty((J, K))
    v_out = np.empty((J, K))
    nu_vert = np.empty((J, K))
    support = np.empty((J, K))
    kappa1 = np.empty((J, K))
    kappa2 = np.empty((J, K))
    w11 = np.empty((J, K))
    w12 = np.empty((J, K))
    w21 = np.empty((J, K))
    w22 = np.empty((J, K))

    for j in range(J):
        sbj = sin_beta[j]
        cbj = cos_beta[j]
        for k in range(K):
            km = (k - 1) % K
            kp = (k + 1) % K
            p0 = phi[j, k]
            if j == 0:
                pm = phi[0, (k + half) % K]
                pmm = phi[0, (km + half) % K]
                pmp = phi[0, (kp + half) % K]
            else:
                pm = phi[j - 1, k]
                pmm = phi[j - 1, km]
                pmp = phi[j - 1, kp]
            if j == J - 1:
                pp = ghost[k]
                ppm = ghost[km]
                ppp = ghost[kp]
            else:
                pp = phi[j + 1, k]
                ppm = phi[j + 1, km]
                ppp = phi[j + 1, kp]

            fb = (pp - pm) / (2.0 * dbeta)
            if j == J - 1:
                # one-sided: the ghost satisfies the contact-angle condition
                # for the first derivative but would shift fbb at O(dbeta)
                fbb = (2.0 * p0 - 5.0 * phi[j - 1, k] + 4.0 * phi[j - 2, k] - phi[j - 3, k]) / dbeta**2
            else:
                fbb = (pp - 2.0 * p0 + pm) / dbeta**2
            if K == 1:
                fx_c = 0.0
                fxx_c = 0.0
                fbx_c = 0.0
            else:
                fx_c = (phi[j, kp] - phi[j, km]) / (2.0 * dxi)
                fxx_c = (phi[j, kp] - 2.0 * p0 + phi[j, km]) / dxi**2
                fbx_c = (ppp - ppm - pmp + pmm) / (4.0 * dbeta * dxi)

            gxv = fx_c / sbj
            H11 = fbb
            H12 = (fbx_c - (cbj / sbj) * fx_c) / sbj
            H22 = (fxx_c + sbj * cbj * fb) / sbj**2

            v2 = 1.0 + fb * fb + gxv * gxv
            v = np.sqrt(v2)

            M11 = 1.0 + fb * fb
            M12 = fb * gxv
            M22 = 1.0 + gxv * gxv
            A11 = M11 - H11
            A12 = M12 - H12
            A22 = M22 - H22

            s = A11 * M22 + A22 * M11 - 2.0 * A12 * M12
            dpen = A11 * A22 - A12 * A12
            disc = s * s - 4.0 * v2 * dpen
            if disc < 0.0:
                disc = 0.0
            root = np.sqrt(disc)
            scale = np.exp(p0) * v
            kappa1[j, k] = (s - root) / (2.0 * v2) / scale
            kappa2[j, k] = (s + root) / (2.0 * v2) / scale

            P11 = 1.0 - fb * fb / v2
            P12 = -fb * gxv / v2
            P22 = 1.0 - gxv * gxv / v2
            w11[j, k] = (1.0 - (P11 * H11 + P12 * H12)) / scale
            w12[j, k] = -(P11 * H12 + P12 * H22) / scale
            w21[j, k] = -(P12 * H11 + P22 * H12) / scale
            w22[j, k] = (1.0 - (P12 * H12 + P22 * H22)) / scale

            gb[j, k] = fb
            gx[j, k] = gxv
            v_out[j, k] = v
            nu_vert[j, k] = (cbj + sbj * fb) / v
            support[j, k] = np.exp(p0) / v

    return gb, gx, v_out, nu_vert, support, kappa1, kappa2, w11, w12, w21, w22
