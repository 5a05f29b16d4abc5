import numpy as np
import pytest

from capflow import make_grid
from capflow.quermass import (
    cap_constants,
    gauss_bonnet_check,
    minkowski_residual,
    quermass_all,
    sin_power_integral,
    sphere_area,
)
from capflow.scenarios import CapSpec, PerturbationSpec, cap_phi, mc_volume, perturbed_cap
from capflow.surface import geometry_from_phi, make_radial_field


def test_sphere_area_values():
    assert sphere_area(1) == pytest.approx(2 * np.pi, rel=1e-14)
    assert sphere_area(2) == pytest.approx(4 * np.pi, rel=1e-14)
    assert sphere_area(3) == pytest.approx(2 * np.pi**2, rel=1e-14)


def test_sin_power_integral_closed_forms():
    for theta in (0.3, np.pi / 2, 2.0, 3.0):
        assert sin_power_integral(1, theta) == pytest.approx(1 - np.cos(theta), rel=1e-13)
        exact3 = 2 / 3 - np.cos(theta) + np.cos(theta) ** 3 / 3
        assert sin_power_integral(3, theta) == pytest.approx(exact3, rel=1e-13)


@pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2, 2.0])
def test_cap_constants_closed_form_n2(theta):
    c = cap_constants(theta, 2)
    closed = (np.pi / 3) * (2 - 3 * np.cos(theta) + np.cos(theta) ** 3)
    assert c.b_theta == pytest.approx(closed, rel=1e-12)
    assert c.omega_theta == pytest.approx(3 * c.b_theta, rel=1e-15)
    assert c.cap_area == pytest.approx(2 * np.pi * (1 - np.cos(theta)), rel=1e-12)


def test_cap_constants_half_ball_limit():
    for n in (2, 3, 4):
        c = cap_constants(np.pi / 2, n)
        assert c.b_theta == pytest.approx(c.omega_n / (2 * (n + 1)), rel=1e-12)


def test_cap_constants_rejects_bad_theta():
    with pytest.raises(ValueError):
        cap_constants(0.0)
    with pytest.raises(ValueError):
        cap_constants(np.pi)


def test_hemisphere_quermass_all_equal():
    grid = make_grid(64, 16)
    geom = geometry_from_phi(cap_phi(CapSpec(1.0, np.pi / 2), grid))
    qv = quermass_all(geom)
    for k in range(4):
        assert qv.V[k] == pytest.approx(2 * np.pi / 3, rel=1e-12)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_cap_quermass_scaling_law(r):
    theta = np.pi / 3
    grid = make_grid(64, 16)
    geom = geometry_from_phi(cap_phi(CapSpec(r, theta), grid))
    qv = quermass_all(geom)
    b = cap_constants(theta).b_theta
    for k in range(4):
        assert qv.V[k] == pytest.approx(r ** (3 - k) * b, rel=5e-4)


def test_exact_scaling_invariance_of_integrator():
    # V_k(scaled cap)/V_k(cap) = lambda^(3-k) to near machine precision
    theta, lam = np.pi / 4, 1.7
    grid = make_grid(48, 16)
    state = cap_phi(CapSpec(1.0, theta), grid)
    scaled = make_radial_field(state.phi + np.log(lam), theta, grid)
    qv1 = quermass_all(geometry_from_phi(state))
    qv2 = quermass_all(geometry_from_phi(scaled))
    for k in range(4):
        assert qv2.V[k] / qv1.V[k] == pytest.approx(lam ** (3 - k), rel=1e-10)


def test_quermass_reassembly_consistency():
    grid = make_grid(48, 24)
    state = perturbed_cap(CapSpec(1.0, np.pi / 3), PerturbationSpec(0.05, 2), grid)
    qv = quermass_all(geometry_from_phi(state))
    assert np.max(np.abs(qv.V - qv.reassemble())) <= 1e-12 * np.max(np.abs(qv.V))


def test_minkowski_residual_hemisphere_near_zero():
    grid = make_grid(64, 16)
    geom = geometry_from_phi(cap_phi(CapSpec(1.0, np.pi / 2), grid))
    assert abs(minkowski_residual(geom, k=1)) <= 1e-10
    assert abs(minkowski_residual(geom, k=2)) <= 1e-10


@pytest.mark.parametrize("kind", ["cap", "perturbed"])
@pytest.mark.parametrize("k", [1, 2])
def test_minkowski_residual_second_order(kind, k):
    errs = []
    for nb in (32, 64):
        grid = make_grid(nb, nb // 2)
        if kind == "cap":
            state = cap_phi(CapSpec(1.0, np.pi / 3), grid)
        else:
            state = perturbed_cap(CapSpec(1.0, np.pi / 3), PerturbationSpec(0.05, 2), grid)
        errs.append(abs(minkowski_residual(geometry_from_phi(state), k=k)))
    assert errs[1] <= 1e-4
    assert errs[0] / errs[1] > 3.0


def test_minkowski_residual_k_range():
    grid = make_grid(32, 8)
    geom = geometry_from_phi(cap_phi(CapSpec(1.0, np.pi / 3), grid))
    with pytest.raises(ValueError):
        minkowski_residual(geom, k=3)


@pytest.mark.parametrize("theta,r", [(np.pi / 2, 1.0), (np.pi / 3, 2.0)])
def test_gauss_bonnet_residual(theta, r):
    grid = make_grid(64, 32)
    geom = geometry_from_phi(cap_phi(CapSpec(r, theta), grid))
    rel = gauss_bonnet_check(geom) / cap_constants(theta).cap_area
    assert abs(rel) <= 5e-4


def test_volume_against_monte_carlo():
    grid = make_grid(64, 32)
    state = perturbed_cap(CapSpec(1.0, np.pi / 3), PerturbationSpec(0.05, 2), grid)
    geom = geometry_from_phi(state)
    qv = quermass_all(geom)
    est, se = mc_volume(geom, 400_000, seed=11)
    assert abs(est - qv.V[0]) <= 3 * se
