"""Seed sweeps and the four-strategy comparison."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterable, List, Optional

import numpy as np

from .engine import Scenario, SimulationResult, run, strategy_name
from .optimizer import Mode

STRATEGIES = (Mode.CELLULAR, Mode.DEDICATED, Mode.REUSE, None)


def fading_seed(seed: int, strategy: Optional[Mode], decouple: bool) -> int:
    """Seed used by one strategy. Shared across strategies unless ``decouple``."""
    if not decouple:
        return seed
    index = 0 if strategy is None else int(strategy)
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def run_many(scenarios: Iterable[Scenario], workers: int = 1) -> List[SimulationResult]:
    """Run scenarios in order; with ``workers > 1`` in separate processes."""
    scenarios = list(scenarios)
    if workers <= 1 or len(scenarios) <= 1:
        return [run(s) for s in scenarios]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, scenarios))


def run_seeds(scenario: Scenario, seeds: Iterable[int], workers: int = 1) -> List[SimulationResult]:
    return run_many((scenario.with_seed(s) for s in seeds), workers)


def compare(scenario: Scenario, seeds: Iterable[int], decouple: bool = False,
            workers: int = 1) -> Dict[str, List[SimulationResult]]:
    """Each forced mode plus mode selection, over the same seeds."""
    seeds = list(seeds)
    jobs = [scenario.forced(m).with_seed(fading_seed(s, m, decouple))
            for m in STRATEGIES for s in seeds]
    results = run_many(jobs, workers)
    # keep the user-facing seed, not the derived one
    for r, s in zip(results, seeds * len(STRATEGIES)):
        r.seed = r.summary["seed"] = s
    out = {}
    for i, m in enumerate(STRATEGIES):
        out[strategy_name(m)] = results[i * len(seeds):(i + 1) * len(seeds)]
    return out


def mean_ci(values) -> dict:
    """Mean with a normal-approximation 95% half-width."""
    v = np.asarray(values, dtype=np.float64)
    mean = float(v.mean())
    half = float(1.96 * v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return {"mean": mean, "ci95": half}


def aggregate(results: List[SimulationResult]) -> dict:
    metrics = {
        "mean_R_tot": [r.summary["mean_R_tot"] for r in results],
        "mean_priority": [r.summary["mean_priority"] for r in results],
    }
    for rx in ("C1", "D2"):
        for key in ("underflow_probability", "overflow_clips", "mean_buffer_utilization"):
            metrics[f"{rx}.{key}"] = [r.summary["receivers"][rx][key] for r in results]
    return {name: mean_ci(vals) for name, vals in metrics.items()}
