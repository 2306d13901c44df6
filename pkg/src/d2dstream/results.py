"""CSV and JSON output for simulation results.

Floats are written with ``repr`` (shortest string that round-trips), booleans
as 0/1, and missing values as empty cells.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .batch import aggregate
from .engine import RECEIVERS, SLOT_FIELDS, SimulationResult, buffer_utilization, lockstep_violations

INT_FIELDS = {"t", "mode", "priority", "U1", "O1", "U2", "O2",
              "pri_cellular", "pri_dedicated", "pri_reuse"}
BOOL_FIELDS = {"underflow1", "underflow2", "clip1", "clip2"}


class ResultsError(OSError):
    pass


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(name: str, text: str):
    if text == "":
        return None
    if name in BOOL_FIELDS:
        return text == "1"
    if name in INT_FIELDS or name == "seed":
        return int(text)
    if name == "strategy":
        return text
    return float(text)


def _open(path: Path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise ResultsError(f"cannot write {path}: {exc.strerror}") from None


def write_slots_csv(path: Path, results: List[SimulationResult]) -> Path:
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(("strategy", "seed") + SLOT_FIELDS)
        for res in results:
            for rec in res.records:
                w.writerow([res.strategy, res.seed] + [fmt(getattr(rec, f)) for f in SLOT_FIELDS])
    return path


def read_slots_csv(path: Path) -> List[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [{k: _parse(k, v) for k, v in row.items()} for row in csv.DictReader(fh)]


def _zoom_bounds(zoom: Optional[Tuple[int, int]], n: int) -> Tuple[int, int]:
    if zoom is None:
        return 1, n
    lo, hi = zoom
    if hi < lo or lo < 1:
        raise ValueError("empty export range")
    if hi > n:
        raise ValueError(f"export range {lo}..{hi} exceeds the {n} simulated slots")
    return lo, hi


def write_curves_csv(path: Path, results: List[SimulationResult],
                     zoom: Optional[Tuple[int, int]] = None) -> Path:
    """Long format: one row per (seed, receiver, slot) inside the zoom range."""
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(("strategy", "seed", "receiver", "t", "U", "A", "O"))
        for res in results:
            lo, hi = _zoom_bounds(zoom, len(res.records))
            for i, rx in enumerate(RECEIVERS):
                k = str(i + 1)
                for rec in res.records[lo - 1:hi]:
                    w.writerow((res.strategy, res.seed, rx, rec.t, getattr(rec, "U" + k),
                                fmt(getattr(rec, "A" + k)), getattr(rec, "O" + k)))
    return path


def write_utilization_csv(path: Path, results: List[SimulationResult]) -> Path:
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(("strategy", "seed", "t", "C1_raw", "C1", "D2_raw", "D2"))
        for res in results:
            raw = buffer_utilization(res.records, res.buffer_bits, clamp=False)
            clamped = buffer_utilization(res.records, res.buffer_bits)
            for rec, r, c in zip(res.records, raw.tolist(), clamped.tolist()):
                w.writerow((res.strategy, res.seed, rec.t, fmt(r[0]), fmt(c[0]), fmt(r[1]), fmt(c[1])))
    return path


def build_summary(groups: Dict[str, List[SimulationResult]], config=None) -> dict:
    strategies = list(groups)
    seeds = [r.seed for r in next(iter(groups.values()))]
    agg = {name: aggregate(rs) for name, rs in groups.items()}
    summary = {
        "strategies": strategies,
        "seeds": seeds,
        "underflow_probability": {
            rx: {name: agg[name][f"{rx}.underflow_probability"]["mean"] for name in strategies}
            for rx in RECEIVERS
        },
        "aggregate": agg,
        "runs": {name: [r.summary for r in rs] for name, rs in groups.items()},
    }
    if "selection" in groups:
        viol = [v for r in groups["selection"] for v in lockstep_violations(r)]
        summary["lockstep"] = {
            "slots_checked": sum(len(r.records) for r in groups["selection"]),
            "violations": len(viol),
        }
    if config is not None:
        summary["config"] = config.echo()
    return summary


def emit_results(groups: Dict[str, List[SimulationResult]], config=None,
                 out_dir: Optional[Path] = None) -> List[Path]:
    """Write per-strategy slot, curve and utilisation CSVs plus ``summary.json``."""
    out_dir = Path(out_dir if out_dir is not None else config.output_dir)
    zoom = getattr(config, "zoom", None)
    for rs in groups.values():
        for r in rs:
            _zoom_bounds(zoom, len(r.records))
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ResultsError(f"cannot create {out_dir}: {exc.strerror}") from None
    written = []
    for name, rs in groups.items():
        written.append(write_slots_csv(out_dir / f"slots_{name}.csv", rs))
        written.append(write_curves_csv(out_dir / f"curves_{name}.csv", rs, zoom))
        written.append(write_utilization_csv(out_dir / f"utilization_{name}.csv", rs))
    path = out_dir / "summary.json"
    with _open(path) as fh:
        json.dump(build_summary(groups, config), fh, indent=2)
        fh.write("\n")
    written.append(path)
    return written
