import numpy as np
import pytest

from capflow import make_grid
from capflow.errors import StateFormatError
from capflow.flow import FlowConfig, run
from capflow.scenarios import CapSpec, PerturbationSpec, cap_phi, perturbed_cap
from capflow.stateio import (
    TRAJECTORY_COLUMNS,
    dump_state,
    dump_trajectory_csv,
    load_state,
    save_state,
)


def test_state_round_trip(tmp_path):
    grid = make_grid(48, 16)
    state = perturbed_cap(CapSpec(1.2, np.pi / 3), PerturbationSpec(0.04, 2), grid)
    path = tmp_path / "state.txt"
    save_state(state, path)
    loaded = load_state(path)
    assert loaded.grid.n_beta == 48
    assert loaded.grid.n_xi == 16
    assert loaded.theta == pytest.approx(np.pi / 3, rel=1e-16)
    assert np.max(np.abs(loaded.phi - state.phi)) <= 1e-15


def test_state_round_trip_axisymmetric(tmp_path):
    grid = make_grid(32, axisymmetric=True)
    state = cap_phi(CapSpec(1.0, np.pi / 4), grid)
    path = tmp_path / "axi.txt"
    save_state(state, path)
    loaded = load_state(path)
    assert loaded.grid.axisymmetric
    assert np.max(np.abs(loaded.phi - state.phi)) <= 1e-15


def test_truncated_state_file_rejected(tmp_path):
    grid = make_grid(32, 8)
    state = cap_phi(CapSpec(1.0, np.pi / 3), grid)
    text = dump_state(state)
    path = tmp_path / "broken.txt"
    path.write_text(text[: len(text) // 2])
    with pytest.raises(StateFormatError, match="columns|node rows"):
        load_state(path)


def test_wrong_magic_rejected(tmp_path):
    path = tmp_path / "junk.txt"
    path.write_text("hello world\n1 2 3\n")
    with pytest.raises(StateFormatError, match="not a capflow state"):
        load_state(path)


def test_mangled_number_rejected(tmp_path):
    grid = make_grid(32, 8)
    state = cap_phi(CapSpec(1.0, np.pi / 3), grid)
    lines = dump_state(state).splitlines()
    lines[10] = lines[10].replace(lines[10].split()[2], "not_a_number")
    path = tmp_path / "bad.txt"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(StateFormatError, match="unparseable"):
        load_state(path)


@pytest.fixture(scope="module")
def tiny_traj():
    grid = make_grid(32, 8)
    state = cap_phi(CapSpec(1.0, np.pi / 3), grid)
    return run(state, FlowConfig(t_max=2e-3, stop_speed=1e-12, sample_every=3))


def test_trajectory_csv_schema(tiny_traj):
    text = dump_trajectory_csv(tiny_traj, cfg_hash="deadbeef")
    lines = text.splitlines()
    assert lines[0] == "# capflow-trajectory 1"
    header_idx = next(i for i, l in enumerate(lines) if not l.startswith("#"))
    assert lines[header_idx] == ",".join(TRAJECTORY_COLUMNS)
    assert "# config-sha256 = deadbeef" in text
    ncols = len(TRAJECTORY_COLUMNS)
    for row in lines[header_idx + 1 :]:
        assert len(row.split(",")) == ncols


def test_trajectory_csv_deterministic(tiny_traj):
    assert dump_trajectory_csv(tiny_traj) == dump_trajectory_csv(tiny_traj)
