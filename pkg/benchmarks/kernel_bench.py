#!/usr/bin/env python3
"""Benchmark the numba geometry kernel against the pure-numpy fallback.

Times the fused per-node geometry evaluation at several grid sizes and a
short flow run on both lanes, printing per-call times and speedups.

    python3 benchmarks/kernel_bench.py [--repeats N]

Set CAPFLOW_PURE_NUMPY=1 to check what the package falls back to when
numba is unavailable (the benchmark itself always drives both lanes
explicitly when it can).
"""

import argparse
import time

import numpy as np

from capflow import kernels, make_grid
from capflow.flow import FlowConfig, run
from capflow.scenarios import CapSpec, PerturbationSpec, perturbed_cap


def time_callable(fn, repeats):
    fn()  # warm up (JIT compile, cache load)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_geometry(repeats):
    print(f"{'grid':>10} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for nb, nx in ((64, 32), (128, 64), (256, 128)):
        grid = make_grid(nb, nx)
        state = perturbed_cap(CapSpec(1.0, np.pi / 3), PerturbationSpec(0.05, 2), grid)
        phi, ghost = state.phi, state.ghost
        t_np = time_callable(lambda: kernels.geometry_core(phi, ghost, grid, lane="numpy"), repeats)
        if kernels.HAVE_NUMBA:
            t_nb = time_callable(lambda: kernels.geometry_core(phi, ghost, grid, lane="numba"), repeats)
            print(f"{nb}x{nx:>5} {t_np * 1e6:>10.1f}us {t_nb * 1e6:>10.1f}us {t_np / t_nb:>7.2f}x")
        else:
            print(f"{nb}x{nx:>5} {t_np * 1e6:>10.1f}us {'n/a':>12} {'':>8}")


def bench_flow():
    grid = make_grid(64, 32)
    config = FlowConfig(t_max=0.05, stop_speed=1e-9, sample_every=100,
                        conservation_budget=0.05, monotonicity_slack=1e-4)

    def one(lane):
        kernels.set_lane(lane)
        state = perturbed_cap(CapSpec(1.0, np.pi / 3), PerturbationSpec(0.05, 2), grid)
        t0 = time.perf_counter()
        traj = run(state, config)
        return time.perf_counter() - t0, traj.steps

    original = kernels.ACTIVE_LANE
    try:
        t_np, steps = one("numpy")
        print(f"\nflow 64x32, {steps} steps: numpy {t_np:.2f}s ({t_np / steps * 1e3:.2f} ms/step)")
        if kernels.HAVE_NUMBA:
            t_nb, steps = one("numba")
            print(f"flow 64x32, {steps} steps: numba {t_nb:.2f}s ({t_nb / steps * 1e3:.2f} ms/step), "
                  f"speedup {t_np / t_nb:.2f}x")
    finally:
        kernels.set_lane(original)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()
    print(f"active lane: {kernels.ACTIVE_LANE} (numba available: {kernels.HAVE_NUMBA})\n")
    bench_geometry(args.repeats)
    bench_flow()


if __name__ == "__main__":
    main()
