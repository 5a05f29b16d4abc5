import numpy as np
import pytest

from capflow import symfun


def test_sigma_k_direct_expansion():
    assert symfun.sigma_k([1.0, 2.0, 3.0], 2) == pytest.approx(11.0, abs=1e-14)
    assert symfun.sigma_k([1.0, 2.0, 3.0], 0) == 1.0
    assert symfun.sigma_k([1.0, 2.0, 3.0], 4) == 0.0


def test_sigma_k_range_errors():
    with pytest.raises(ValueError):
        symfun.sigma_k([1.0, 2.0], 5)
    with pytest.raises(ValueError):
        symfun.sigma_k([1.0, 2.0], -1)
    with pytest.raises(ValueError):
        symfun.sigma_k([1.0, np.inf], 1)


def test_deletion_identity_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = rng.integers(2, 7)
        kappa = rng.normal(size=n) * rng.uniform(0.5, 3)
        e = symfun.sigma_all(kappa)
        scale = 1.0 + float(np.max(np.abs(e)))
        for i in range(n):
            for k in range(1, n + 1):
                lhs = e[k]
                rhs = symfun.sigma_k_drop(kappa, i, k) + kappa[i] * symfun.sigma_k_drop(kappa, i, k - 1)
                assert abs(lhs - rhs) <= 1e-12 * scale


def test_weighted_sum_identities():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = rng.integers(2, 7)
        kappa = rng.normal(size=n) * 2
        e = symfun.sigma_all(kappa)
        e = np.append(e, 0.0)  # sigma_{n+1} = 0
        scale = 1.0 + float(np.max(np.abs(e))) * (1.0 + float(np.max(np.abs(kappa))) ** 2)
        for k in range(1, n + 1):
            drop_k = np.array([symfun.sigma_k_drop(kappa, i, k) for i in range(n)])
            drop_km1 = np.array([symfun.sigma_k_drop(kappa, i, k - 1) for i in range(n)])
            assert abs(np.sum(drop_k) - (n - k) * e[k]) <= 1e-12 * scale
            assert abs(np.sum(kappa * drop_km1) - k * e[k]) <= 1e-12 * scale
            lhs = np.sum(kappa**2 * drop_km1)
            rhs = e[1] * e[k] - (k + 1) * e[k + 1]
            assert abs(lhs - rhs) <= 1e-12 * scale


def test_normalized_H_examples():
    assert symfun.normalized_H([1.0, 2.0, 3.0], 2) == pytest.approx(11.0 / 3.0, rel=1e-15)
    t = 0.37
    kappa = [t] * 5
    for k in range(6):
        assert symfun.normalized_H(kappa, k) == pytest.approx(t**k, rel=1e-13)


def test_newton_maclaurin_and_equality_case():
    rng = np.random.default_rng(5)
    for _ in range(300):
        n = rng.integers(2, 7)
        kappa = rng.uniform(0.05, 4.0, size=n)
        H = [symfun.normalized_H(kappa, k) for k in range(n + 1)]
        for l in range(2, n + 1):
            for k in range(1, l):
                assert H[k] * H[l - 1] - H[k - 1] * H[l] >= -1e-12 * (1 + H[k] * H[l - 1])
    kappa = np.full(4, 1.7)
    H = [symfun.normalized_H(kappa, k) for k in range(5)]
    for l in range(2, 5):
        for k in range(1, l):
            assert abs(H[k] * H[l - 1] - H[k - 1] * H[l]) <= 1e-12


def test_cone_member():
    assert symfun.cone_member([1.0, 1.0, 1.0], 3)
    assert symfun.cone_member([-1.0, 2.0, 3.0], 1)  # H_1 = 4/3 > 0
    assert not symfun.cone_member([-1.0, 2.0, 3.0], 3)  # sigma_3 = -6 < 0


def test_curvature_ratio_F():
    assert symfun.curvature_ratio_F([2.5, 2.5, 2.5], 2) == pytest.approx(2.5, rel=1e-14)
    assert symfun.curvature_ratio_F([1.0, 2.0], 2) == pytest.approx(4.0 / 3.0, rel=1e-14)
    with pytest.raises(ValueError):
        symfun.curvature_ratio_F([-1.0, 2.0, 3.0], 3)


def test_F_midpoint_concavity_on_matrices():
    rng = np.random.default_rng(6)
    for _ in range(100):
        n = rng.integers(2, 5)
        l = rng.integers(1, n + 1)

        def random_spd():
            A = rng.normal(size=(n, n))
            W = A @ A.T + 0.1 * np.eye(n)
            return W

        W1, W2 = random_spd(), random_spd()

        def F_of(W):
            lam = np.linalg.eigvalsh(W)
            return symfun.curvature_ratio_F(lam, l)

        mid = F_of(0.5 * (W1 + W2))
        assert mid >= 0.5 * (F_of(W1) + F_of(W2)) - 1e-12


def test_newton_tensor_diagonal_and_traces():
    T = symfun.newton_tensor(np.diag([3.0, 5.0]), 2)
    assert np.allclose(T, np.diag([5.0, 3.0]), atol=1e-13)

    rng = np.random.default_rng(7)
    for _ in range(50):
        n = rng.integers(2, 6)
        A = rng.normal(size=(n, n))
        W = 0.5 * (A + A.T)
        lam = np.linalg.eigvalsh(W)
        e = np.append(symfun.sigma_all(lam), 0.0)
        for k in range(1, n + 1):
            T = symfun.newton_tensor(W, k)
            scale = 1.0 + abs(k * e[k])
            assert abs(np.trace(T @ W) - k * e[k]) <= 1e-11 * scale
            assert abs(np.trace(T) - (n - k + 1) * e[k - 1]) <= 1e-11 * scale


def test_newton_tensor_rejects_non_symmetric():
    with pytest.raises(ValueError):
        symfun.newton_tensor(np.array([[1.0, 2.0], [0.0, 1.0]]), 1)


def test_newton_tensor_matches_finite_differences():
    rng = np.random.default_rng(8)
    h = 1e-6
    for _ in range(25):
        n = rng.integers(2, 5)
        A = rng.normal(size=(n, n))
        W = 0.5 * (A + A.T)

        for k in range(1, n + 1):
            T = symfun.newton_tensor(W, k)

            def sig(M):
                return symfun.sigma_k(np.linalg.eigvalsh(M), k)

            fd = np.zeros((n, n))
            for i in range(n):
                for j in range(n):
                    E = np.zeros((n, n))
                    E[i, j] += 0.5
                    E[j, i] += 0.5
                    if i == j:
                        E[i, i] = 1.0
                    fd[i, j] = (sig(W + h * E) - sig(W - h * E)) / (2 * h)
            scale = max(1.0, float(np.max(np.abs(T))))
            assert np.max(np.abs(fd - T)) <= 1e-6 * scale
