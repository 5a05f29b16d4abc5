import numpy as np
import pytest

from capflow import make_grid
from capflow.flow import FlowConfig, run
from capflow.scenarios import CapSpec, PerturbationSpec, cap_phi, perturbed_cap

ACCEPT_THETAS = {
    "pi/6": np.pi / 6,
    "pi/4": np.pi / 4,
    "pi/3": np.pi / 3,
    "pi/2": np.pi / 2,
}
ACCEPT_AMPLITUDES = (0.02, 0.05, 0.08)


@pytest.fixture(scope="session")
def grid128():
    return make_grid(128, 64)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64, 32)


@pytest.fixture(scope="session")
def main_run():
    """The reference convergence run: theta = pi/3, mode-2 amplitude 0.05."""
    grid = make_grid(128, 64)
    state = perturbed_cap(CapSpec(1.0, np.pi / 3), PerturbationSpec(0.05, 2), grid)
    config = FlowConfig(t_max=30.0, stop_speed=3e-5, sample_every=25)
    return run(state, config)


@pytest.fixture(scope="session")
def suite12(grid128):
    """The 12-cell audit matrix: four contact angles x three amplitudes."""
    states = {}
    for name, theta in ACCEPT_THETAS.items():
        for amp in ACCEPT_AMPLITUDES:
            states[(name, amp)] = perturbed_cap(
                CapSpec(1.0, theta), PerturbationSpec(amp, 2), grid128
            )
    return states


@pytest.fixture(scope="session")
def caps128(grid128):
    return {name: cap_phi(CapSpec(1.0, theta), grid128) for name, theta in ACCEPT_THETAS.items()}
