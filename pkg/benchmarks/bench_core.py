"""Compiled kernels vs the pure-Python fallback.

    python3 benchmarks/bench_core.py [--quick]

Times the per-slot solver, the reuse grid oracle and a full simulation with
each backend, checks that both return identical results, and prints a table.
"""
import argparse
import time

import numpy as np

from d2dstream import _backend, _pycore
from d2dstream.channel import FadingConfig
from d2dstream.engine import Scenario, run
from d2dstream.oracle import random_instance
from d2dstream.rates import RadioParams, db_to_linear
from d2dstream.trace import synthetic_trace

try:
    from d2dstream import _core
except ImportError:
    _core = None

RADIO = RadioParams(1.0e6, 1.0e-6, db_to_linear(2.0), db_to_linear(0.0))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_solve_slot(core, args_list):
    def go():
        return [core.solve_slot(0, *a) for a in args_list]
    return go


def bench_grid(core, args_list, n):
    def go():
        return [core.grid_reuse_best(*a, 1, n) for a in args_list]
    return go


def bench_run(core, scenario):
    def go():
        _backend.core = core
        return run(scenario).records
    return go


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args()
    if _core is None:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation` first")

    n_slots = 2000 if opts.quick else 20000
    n_grid = 5 if opts.quick else 20
    frames = 500 if opts.quick else 3000
    rng = np.random.default_rng(0)
    args_list = []
    for _ in range(n_slots):
        ch, w = random_instance(rng, RADIO)
        args_list.append((RADIO.B, RADIO.N0, RADIO.P_bmax, RADIO.P_dmax, *ch, *w))
    scenario = Scenario(synthetic_trace(frames, 22000.0, seed=1), synthetic_trace(frames, 22000.0, seed=2),
                        RADIO, FadingConfig(seed=0))

    cases = [
        (f"solve_slot x {n_slots}", bench_solve_slot, (args_list,), n_slots, "call"),
        (f"reuse grid 500x500 x {n_grid}", bench_grid, (args_list[:n_grid], 500), n_grid, "grid"),
        (f"simulation, {frames} slots", bench_run, (scenario,), frames, "slot"),
    ]
    saved = _backend.core
    print(f"{'workload':<30} {'python':>10} {'cython':>10} {'speedup':>8}  per unit (cython)")
    try:
        for label, make, extra, units, unit in cases:
            t_py, out_py = best_of(make(_pycore, *extra), opts.repeat)
            t_cy, out_cy = best_of(make(_core, *extra), opts.repeat)
            if out_py != out_cy:
                raise SystemExit(f"{label}: backends disagree")
            per = t_cy / units * 1e6
            print(f"{label:<30} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>7.1f}x  {per:.1f} us/{unit}")
    finally:
        _backend.core = saved


if __name__ == "__main__":
    main()
