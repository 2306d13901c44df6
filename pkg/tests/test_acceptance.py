"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line with the measured value
and its limit; the lines are repeated in the pytest terminal summary. Run the
file directly (``python3 tests/test_acceptance.py``) to get only the lines.
"""
import filecmp
import sys
import time
from pathlib import Path

import numpy as np
from scipy import stats

from d2dstream import _backend
from d2dstream.batch import compare
from d2dstream.channel import FadingConfig, sample_block
from d2dstream.cli import main as cli_main
from d2dstream.engine import Scenario, lockstep_violations, run
from d2dstream.oracle import (
    grid_cellular_best,
    grid_dedicated_best,
    grid_reuse_best,
    random_instance,
    rel_excess,
)
from d2dstream.optimizer import solve_cellular, solve_dedicated, solve_reuse, solve_reuse_interior
from d2dstream.rates import RadioParams, db_to_linear, rates_reuse
from d2dstream.trace import VideoTrace, advance, build_curves, buffer_bits_for, rate_window, synthetic_trace

LINES = []

RADIO = RadioParams(B=1.0e6, N0=1.0e-6, P_bmax=db_to_linear(2.0), P_dmax=db_to_linear(0.0))


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    LINES.append(line)
    print(line)
    return ok


def test_1_interior_roundtrip():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    solved = 0
    worst = 0.0
    for _ in range(10**5):
        ch, w = random_instance(rng, RADIO)
        p = solve_reuse_interior(RADIO, ch, w)
        if p is None:
            continue
        solved += 1
        r1, r2 = rates_reuse(RADIO, ch, p)
        for r, target in ((r1, w.beta1), (r2, w.beta2)):
            err = abs(r - target) / target if target > 0 else abs(r)
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 10 and solved > 0
    assert report(1, "reuse interior round-trip", ok,
                  f"{solved} of 100000 instances solved, max rel err {worst:.2e} (< 1e-9), "
                  f"{elapsed:.1f} s (< 10 s)")


def test_2_reuse_endpoint_oracle():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    checked = 0
    violations = []
    by_priority = {1: 0, 2: 0, 3: 0}
    while checked < 10**4:
        ch, w = random_instance(rng, RADIO)
        if solve_reuse_interior(RADIO, ch, w) is not None:
            continue
        d = solve_reuse(RADIO, ch, w)
        by_priority[d.priority] += 1
        excess = rel_excess(grid_reuse_best(RADIO, ch, w, d.priority, 500), d.R_tot)
        if excess > 1e-3:
            violations.append((checked, excess, ch, w))
        checked += 1
    elapsed = time.perf_counter() - start
    for v in violations[:5]:
        print(f"    violation: instance {v[0]} grid beats closed form by {v[1]:.3e}, {v[2]}, {v[3]}")
    ok = not violations and elapsed < 60
    assert report(2, "reuse endpoint optimality vs 500x500 grid", ok,
                  f"{checked} boundary instances (priorities {by_priority}), {len(violations)} violations "
                  f"beyond 1e-3 rel, {elapsed:.1f} s (< 60 s)")


def test_3_cellular_dedicated_oracle():
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    worst = 0.0
    bad = 0
    for _ in range(10**4):
        ch, w = random_instance(rng, RADIO)
        for grid, solver in ((grid_cellular_best, solve_cellular), (grid_dedicated_best, solve_dedicated)):
            e = rel_excess(grid(RADIO, ch, w, 500), solver(RADIO, ch, w).R_tot)
            worst = max(worst, e)
            bad += e > 1e-6
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 30
    assert report(3, "cellular/dedicated closed form vs grid", ok,
                  f"10000 instances x 2 modes, {bad} beaten by > 1e-6 rel (max excess {worst:.1e}), "
                  f"{elapsed:.1f} s (< 30 s)")


def test_4_buffer_sandwich():
    rng = np.random.default_rng(404)
    under = over = slots = 0
    for _ in range(10**3):
        L = int(rng.integers(1, 201))
        sizes = np.floor(rng.pareto(2.0, L) * rng.uniform(10, 5000)).astype(np.int64)
        sizes[rng.integers(L)] += 1
        tr = VideoTrace(sizes, float(rng.choice([24.0, 25.0, 30.0, 60.0])))
        c = build_curves(tr, buffer_bits_for(tr, rng.uniform(1.0, 3.0)))
        for t in range(1, L + 1):
            a, b = rate_window(c, t, tr.tau)
            out = advance(c, t, a + rng.random() * (b - a), tr.tau)
            under += out.underflow
            over += out.clipped
            slots += 1
    ok = under == 0 and over == 0
    assert report(4, "buffer sandwich with in-window rates", ok,
                  f"1000 traces, {slots} slots, {under} underflow and {over} overflow events (0 required)")


def test_5_lockstep_dominance():
    start = time.perf_counter()
    sc = Scenario(synthetic_trace(10**4, 22000.0, seed=51), synthetic_trace(10**4, 22000.0, seed=52),
                  RADIO, FadingConfig(seed=5))
    res = run(sc)
    bad = lockstep_violations(res)
    worse = sum(r.priority > min(r.pri_cellular, r.pri_dedicated, r.pri_reuse) for r in res.records)
    elapsed = time.perf_counter() - start
    ok = not bad and worse == 0 and len(res.records) == 10**4
    assert report(5, "per-slot selection dominance (lockstep)", ok,
                  f"{len(res.records)} slots, {worse} slots with priority above a single mode, "
                  f"{len(bad)} not max R_tot in the minimal class, {elapsed:.1f} s")


def test_6_underflow_table_ordering():
    start = time.perf_counter()
    sc = Scenario(synthetic_trace(5000, 22000.0, seed=11), synthetic_trace(5000, 22000.0, seed=12),
                  RADIO, FadingConfig(), buffer_factor=1.5)
    groups = compare(sc, range(32))
    elapsed = time.perf_counter() - start
    table = {name: [np.mean([r.summary["receivers"][rx]["underflow_probability"] for r in rs])
                    for rx in ("C1", "D2")]
             for name, rs in groups.items()}
    ok = elapsed < 120
    parts = []
    for i, rx in enumerate(("C1", "D2")):
        best_single = min(table[m][i] for m in ("cellular", "dedicated", "reuse"))
        ok &= table["selection"][i] <= best_single + 0.005
        parts.append(f"{rx} selection {table['selection'][i]:.5f} vs best single {best_single:.5f}")
    for name, (p1, p2) in table.items():
        print(f"    {name:>10}: C1 {p1:.5f}  D2 {p2:.5f}")
    assert report(6, "underflow probability ordering, 32 shared seeds, L=5000", ok,
                  "; ".join(parts) + f" (margin 0.005), {elapsed:.1f} s (< 120 s)")


def test_7_fading_statistics():
    start = time.perf_counter()
    cfg = FadingConfig(seed=7)
    z = sample_block(cfg, 1, 10**6)
    rel = np.abs(z.mean(axis=0) / cfg.means - 1.0)
    pvals = [stats.kstest(z[:, k], "expon", args=(0.0, g)).pvalue for k, g in enumerate(cfg.means)]
    elapsed = time.perf_counter() - start
    ok = bool((rel < 0.01).all()) and min(pvals) > 0.01 and elapsed < 10
    assert report(7, "fading means and KS at N=1e6", ok,
                  f"max mean error {rel.max() * 100:.3f}% (< 1%), min KS p-value {min(pvals):.3f} (> 0.01), "
                  f"{elapsed:.1f} s (< 10 s)")


def test_8_compare_determinism(tmp_path):
    for role, seed in (("cu", 81), ("du", 82)):
        assert cli_main(["make-trace", "-o", str(tmp_path / f"{role}.txt"), "--frames", "1500",
                         "--seed", str(seed)]) == 0
    (tmp_path / "s.toml").write_text('[traces]\ncu = "cu.txt"\ndu = "du.txt"\n'
                                     "[output]\nzoom_start = 100\nzoom_end = 140\n")
    args = ["--quiet", "compare", "--config", str(tmp_path / "s.toml"), "--seeds", "4"]
    assert cli_main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli_main(args + ["--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    ok = not mismatch and not errors and len(match) == 13
    assert report(8, "compare output is byte-identical across runs", ok,
                  f"{len(match)} of {len(names)} files identical (serial vs 2 workers), "
                  f"differing: {mismatch or 'none'}")


if __name__ == "__main__":
    import tempfile

    print(f"kernels: {_backend.NAME}")
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
