import numpy as np
import pytest

from capflow import halfsphere as hs


def fit_slope(sizes, errors):
    """Least-squares slope of log(error) against log(h)."""
    h = 1.0 / np.asarray(sizes, dtype=float)
    return np.polyfit(np.log(h), np.log(errors), 1)[0]


def generic_field(g):
    """Smooth test field whose equator derivatives do not degenerate."""
    cb, sb = np.cos(g.beta)[:, None], np.sin(g.beta)[:, None]
    cx = np.cos(g.xi)[None, :]
    f = np.cos(2 * g.beta)[:, None] + cb**3 + sb * cx
    fb = -2 * np.sin(2 * g.beta)[:, None] - 3 * cb**2 * sb + cb * cx
    fx = -np.sin(g.xi)[None, :]
    hbb = -4 * np.cos(2 * g.beta)[:, None] - 3 * cb**3 + 6 * cb * sb**2 - sb * cx
    hbx = np.zeros_like(f)
    hxx = -sb * cx + sb * cb * fb
    return f, fb, fx, hbb, hbx, hxx


def test_grid_construction_invariants():
    g = hs.make_grid(64, 32)
    assert g.beta[-1] == pytest.approx(np.pi / 2, abs=1e-15)
    assert np.all(np.diff(g.beta) > 0)
    assert np.allclose(np.diff(g.beta), g.dbeta, rtol=1e-12)
    assert abs(np.sum(g.weights) - 2 * np.pi) <= 1e-12 * 2 * np.pi
    assert g.beta[0] > 0


def test_grid_validation():
    with pytest.raises(ValueError):
        hs.make_grid(8)
    with pytest.raises(ValueError):
        hs.make_grid(32, 3)
    with pytest.raises(ValueError):
        hs.make_grid(32, 7)
    g = hs.make_grid(32, axisymmetric=True)
    assert g.n_xi == 1
    assert abs(np.sum(g.weights) - 2 * np.pi) <= 1e-12 * 2 * np.pi


def test_integrate_exact_constant():
    g = hs.make_grid(32, 8)
    assert hs.integrate(np.ones(g.shape), g) == pytest.approx(2 * np.pi, rel=1e-13)


@pytest.mark.parametrize("field,exact", [("cosb", np.pi), ("cos2b", 2 * np.pi / 3)])
def test_integrate_smooth_fields(field, exact):
    errs = []
    for nb in (32, 64, 128):
        g = hs.make_grid(nb, 8)
        f = np.cos(g.beta)[:, None] * np.ones((1, g.n_xi))
        if field == "cos2b":
            f = f**2
        errs.append(abs(hs.integrate(f, g) - exact))
    assert errs[-1] <= 3e-4
    assert 1.8 <= fit_slope((32, 64, 128), errs) <= 2.2


def test_boundary_integrate():
    g = hs.make_grid(32, 64)
    assert hs.boundary_integrate(np.ones(64), g) == pytest.approx(2 * np.pi, rel=1e-13)
    assert abs(hs.boundary_integrate(np.cos(g.xi), g)) <= 1e-12
    assert hs.boundary_integrate(np.cos(g.xi) ** 2, g) == pytest.approx(np.pi, rel=1e-12)


def test_grad_constant_field_is_zero():
    g = hs.make_grid(32, 16)
    fb, fx = hs.grad_sphere(np.full(g.shape, 2.2), g)
    assert np.max(np.abs(fb)) <= 1e-13
    assert np.max(np.abs(fx)) <= 1e-13


def test_grad_cosb_value():
    g = hs.make_grid(64, 8)
    f = np.repeat(np.cos(g.beta)[:, None], g.n_xi, axis=1)
    fb, fx = hs.grad_sphere(f, g)
    assert np.max(np.abs(fb + np.sin(g.beta)[:, None])) <= 1e-3
    assert np.max(np.abs(fx)) <= 1e-13


def test_grad_norm_closed_form_value():
    # f = sin(beta) cos(xi): |grad f|^2 = cos^2(beta) cos^2(xi) + sin^2(xi)
    g = hs.make_grid(64, 128)
    f = np.sin(g.beta)[:, None] * np.cos(g.xi)[None, :]
    fb, fx = hs.grad_sphere(f, g)
    exact = (np.cos(g.beta)[:, None] * np.cos(g.xi)[None, :]) ** 2 + np.sin(g.xi)[None, :] ** 2
    assert np.max(np.abs(fb**2 + fx**2 - exact)) <= 1e-6


def test_hess_cosb_is_minus_cosb_metric():
    # cos(beta) is a first spherical harmonic: Hessian = -cos(beta) x metric
    g = hs.make_grid(64, 8)
    f = np.repeat(np.cos(g.beta)[:, None], g.n_xi, axis=1)
    hbb, hbx, hxx = hs.hess_sphere(f, g)
    sb, cb = np.sin(g.beta)[:, None], np.cos(g.beta)[:, None]
    assert np.max(np.abs(hbb + cb)) <= 2e-4
    assert np.max(np.abs(hbx)) <= 1e-12
    assert np.max(np.abs(hxx + cb * sb**2)) <= 2e-5


def test_hess_constant_zero():
    g = hs.make_grid(32, 8)
    for part in hs.hess_sphere(np.full(g.shape, -1.3), g):
        assert np.max(np.abs(part)) <= 1e-11  # one-sided stencil roundoff


def test_laplacian_degree_one_harmonic_value():
    g = hs.make_grid(64, 128)
    f = np.sin(g.beta)[:, None] * np.cos(g.xi)[None, :]
    assert np.max(np.abs(hs.laplace_sphere(f, g) + 2 * f)) <= 5e-3


@pytest.mark.parametrize("op", ["grad", "hess", "laplace"])
def test_convergence_order_window(op):
    errs = []
    for nb in (32, 64, 128):
        g = hs.make_grid(nb, 2 * nb)
        f, fb_e, fx_e, hbb_e, hbx_e, hxx_e = generic_field(g)
        if op == "grad":
            fb, fx = hs.grad_sphere(f, g)
            errs.append(max(np.max(np.abs(fb - fb_e)), np.max(np.abs(fx - fx_e))))
        elif op == "hess":
            hbb, hbx, hxx = hs.hess_sphere(f, g)
            errs.append(
                max(
                    np.max(np.abs(hbb - hbb_e)),
                    np.max(np.abs(hbx - hbx_e)),
                    np.max(np.abs(hxx - hxx_e)),
                )
            )
        else:
            sb = np.sin(g.beta)[:, None]
            lap = hs.laplace_sphere(f, g)
            errs.append(np.max(np.abs(lap - (hbb_e + hxx_e / sb**2))))
    assert 1.8 <= fit_slope((32, 64, 128), errs) <= 2.2


def test_axisymmetric_path_matches_full_grid():
    nb = 48
    g1 = hs.make_grid(nb, axisymmetric=True)
    g2 = hs.make_grid(nb, 16)
    prof = 0.3 * np.cos(2 * g1.beta) + 0.1 * np.cos(4 * g1.beta)
    f1 = prof[:, None]
    f2 = np.repeat(prof[:, None], 16, axis=1)
    fb1, fx1 = hs.grad_sphere(f1, g1)
    fb2, fx2 = hs.grad_sphere(f2, g2)
    assert np.max(np.abs(fb2 - fb1)) <= 1e-12
    assert np.max(np.abs(fx2)) <= 1e-12
    for a, b in zip(hs.hess_sphere(f1, g1), hs.hess_sphere(f2, g2)):
        assert np.max(np.abs(b - a)) <= 1e-12
    assert hs.integrate(f2, g2) == pytest.approx(hs.integrate(f1, g1), rel=1e-13)


def test_discrete_integration_by_parts():
    # int f Lap w - int w Lap f equals the boundary flux up to O(h^2)
    residuals = []
    for nb in (32, 64, 128):
        g = hs.make_grid(nb, 2 * nb)
        f = np.cos(g.beta)[:, None] + 0.3 * np.sin(g.beta)[:, None] ** 2 * np.cos(2 * g.xi)[None, :]
        w = np.cos(2 * g.beta)[:, None] * np.ones((1, g.n_xi))
        lhs = hs.integrate(f * hs.laplace_sphere(w, g), g) - hs.integrate(w * hs.laplace_sphere(f, g), g)
        fb_f, _ = hs.grad_sphere(f, g)
        fb_w, _ = hs.grad_sphere(w, g)
        flux = hs.boundary_integrate((f * fb_w - w * fb_f)[-1], g)
        residuals.append(abs(lhs - flux))
    assert residuals[-1] <= 1e-4
    assert 1.8 <= fit_slope((32, 64, 128), residuals) <= 2.2
