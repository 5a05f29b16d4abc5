"""Elementary symmetric function calculus on principal curvature vectors.

Conventions: for kappa = (kappa_1, ..., kappa_n), sigma_k is the k-th
elementary symmetric polynomial with sigma_0 = 1 and sigma_{n+1} = 0, and
H_k = sigma_k / binom(n, k) is its normalization.  The positivity cones are
Gamma_+^k = {kappa : H_j(kappa) > 0 for all 1 <= j <= k}, with strict
inequalities (open cones; callers wanting slack apply their own margin).
"""

from __future__ import annotations

import math

import numpy as np


def _as_kappa(kappa) -> np.ndarray:
    kappa = np.asarray(kappa, dtype=float)
    if kappa.ndim != 1 or kappa.size < 1:
        raise ValueError("curvature vector must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(kappa)):
        raise ValueError("curvature vector has non-finite entries")
    return kappa


def sigma_all(kappa) -> np.ndarray:
    """All sigma_0 .. sigma_n in one pass.

    Uses the stable coefficient recurrence for prod_i (1 + t*kappa_i), which
    is O(n^2) and avoids the catastrophic cancellation of subset enumeration.
    """
    kappa = _as_kappa(kappa)
    n = kappa.size
    e = np.zeros(n + 1)
    e[0] = 1.0
    for i in range(n):
        top = min(i + 1, n)
        for j in range(top, 0, -1):
            e[j] += kappa[i] * e[j - 1]
    return e


def sigma_k(kappa, k: int) -> float:
    """sigma_k(kappa) for 0 <= k <= n+1 (sigma_0 = 1, sigma_{n+1} = 0)."""
    kappa = _as_kappa(kappa)
    n = kappa.size
    if not 0 <= k <= n + 1:
        raise ValueError(f"k={k} out of range 0..{n + 1}")
    if k == n + 1:
        return 0.0
    return float(sigma_all(kappa)[k])


def normalized_H(kappa, k: int) -> float:
    """H_k = sigma_k / binom(n, k) for 0 <= k <= n."""
    kappa = _as_kappa(kappa)
    n = kappa.size
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range 0..{n}")
    return sigma_k(kappa, k) / math.comb(n, k)


def sigma_k_drop(kappa, i: int, k: int) -> float:
    """sigma_k of kappa with the i-th entry removed."""
    kappa = _as_kappa(kappa)
    reduced = np.delete(kappa, i)
    if reduced.size == 0:
        return 1.0 if k == 0 else 0.0
    if k > reduced.size:
        return 0.0
    return float(sigma_all(reduced)[k]) if k >= 0 else 0.0


def cone_member(kappa, k: int) -> bool:
    """True iff H_j(kappa) > 0 strictly for all 1 <= j <= k."""
    kappa = _as_kappa(kappa)
    n = kappa.size
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    e = sigma_all(kappa)
    return bool(np.all(e[1 : k + 1] > 0.0))


def curvature_ratio_F(kappa, l: int) -> float:
    """The speed ratio F = H_l / H_{l-1}, defined on Gamma_+^l.

    For kappa = c*(1,...,1) this returns c.  Raises if kappa is outside
    Gamma_+^l, which signals loss of l-convexity to callers.
    """
    kappa = _as_kappa(kappa)
    n = kappa.size
    if not 1 <= l <= n:
        raise ValueError(f"l={l} out of range 1..{n}")
    if not cone_member(kappa, l):
        raise ValueError(
            f"curvature vector {tuple(kappa)} is outside Gamma_+^{l}; "
            "H_l/H_{l-1} is undefined there"
        )
    return normalized_H(kappa, l) / normalized_H(kappa, l - 1)


def newton_tensor(W, k: int) -> np.ndarray:
    """Newton tensor d(sigma_k)/d(h^i_j) evaluated at a symmetric matrix W.

    Computed by eigen-decomposition: in the eigenbasis the tensor is diagonal
    with entries sigma_{k-1}(lambda | i), then rotated back.  Exact on
    symmetric inputs; non-symmetric matrices are rejected.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("W must be a square matrix")
    n = W.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    scale = max(1.0, float(np.max(np.abs(W))))
    if np.max(np.abs(W - W.T)) > 1e-12 * scale:
        raise ValueError("W must be symmetric")
    lam, Q = np.linalg.eigh(W)
    diag = np.array([sigma_k_drop(lam, i, k - 1) for i in range(n)])
    return (Q * diag) @ Q.T
