import numpy as np
import pytest

from capflow import kernels, make_grid
from capflow.scenarios import CapSpec, PerturbationSpec, cap_phi, perturbed_cap

FIELD_NAMES = ("gb", "gx", "v", "nu_vert", "support", "kappa1", "kappa2", "w11", "w12", "w21", "w22")


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
@pytest.mark.parametrize("axisym", [False, True])
def test_lanes_agree(axisym):
    grid = make_grid(48, 1 if axisym else 24, axisymmetric=axisym)
    state = perturbed_cap(CapSpec(1.3, np.pi / 3), PerturbationSpec(0.04, 0 if axisym else 2), grid)
    out_numba = kernels.geometry_core(state.phi, state.ghost, grid, lane="numba")
    out_numpy = kernels.geometry_core(state.phi, state.ghost, grid, lane="numpy")
    for name, a, b in zip(FIELD_NAMES, out_numba, out_numpy):
        scale = 1.0 + np.max(np.abs(b))
        assert np.max(np.abs(a - b)) <= 1e-12 * scale, name


def test_set_lane_round_trip():
    original = kernels.ACTIVE_LANE
    try:
        kernels.set_lane("numpy")
        assert kernels.ACTIVE_LANE == "numpy"
        grid = make_grid(32, 8)
        state = cap_phi(CapSpec(1.0, np.pi / 4), grid)
        out = kernels.geometry_core(state.phi, state.ghost, grid)
        assert np.all(np.isfinite(out[5]))
    finally:
        kernels.set_lane(original)
    with pytest.raises(ValueError):
        kernels.set_lane("cuda")
