"""Run configuration: a TOML document with one table per concern.

Powers are given in dB and converted to linear units here, once. Every problem
found is collected so ``validate`` can list them all.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import FadingConfig
from .engine import Scenario
from .optimizer import Mode
from .rates import RadioParams, db_to_linear
from .trace import TraceError, read_trace

DEFAULT_P_BMAX_DB = 2.0
DEFAULT_P_DMAX_DB = 0.0
DEFAULT_BUFFER_FACTOR = 1.5

# table -> key -> (type, default); default None means required
SCHEMA = {
    "traces": {"cu": (str, None), "du": (str, None)},
    "radio": {
        "bandwidth_hz": (float, 1.0e6),
        "noise_psd": (float, 1.0e-6),
        "p_bmax_db": (float, DEFAULT_P_BMAX_DB),
        "p_dmax_db": (float, DEFAULT_P_DMAX_DB),
    },
    "fading": {
        "g11": (float, 1.0),
        "g12": (float, 0.5),
        "g21": (float, 0.1),
        "g22": (float, 2.0),
        "g23": (float, 0.5),
        "seed": (int, 0),
    },
    "simulation": {
        "buffer_factor": (float, DEFAULT_BUFFER_FACTOR),
        "prefetch_slots": (int, 0),
        "forced_mode": (str, ""),
        "seeds": (int, 1),
        "decouple_fading": (bool, False),
        "workers": (int, 1),
    },
    "output": {
        "directory": (str, "results"),
        "zoom_start": (int, 0),
        "zoom_end": (int, 0),
    },
}


class ConfigError(ValueError):
    def __init__(self, problems: List[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class RunConfig:
    cu_trace: Path
    du_trace: Path
    radio: RadioParams
    p_bmax_db: float
    p_dmax_db: float
    fading: FadingConfig
    buffer_factor: float = DEFAULT_BUFFER_FACTOR
    prefetch_slots: int = 0
    forced_mode: Optional[Mode] = None
    seed: int = 0
    n_seeds: int = 1
    decouple_fading: bool = False
    workers: int = 1
    output_dir: Path = Path("results")
    zoom: Optional[Tuple[int, int]] = None
    source: Optional[Path] = field(default=None, compare=False)

    @property
    def seeds(self) -> List[int]:
        return [self.seed + i for i in range(self.n_seeds)]

    def scenario(self) -> Scenario:
        return Scenario(
            trace_cu=read_trace(self.cu_trace),
            trace_du=read_trace(self.du_trace),
            radio=self.radio,
            fading=self.fading,
            buffer_factor=self.buffer_factor,
            prefetch_slots=self.prefetch_slots,
            forced_mode=self.forced_mode,
        )

    def echo(self) -> dict:
        """Parameters as they went into the run, for the results summary."""
        return {
            "traces": {"cu": self.cu_trace.name, "du": self.du_trace.name},
            "radio": {
                "bandwidth_hz": self.radio.B,
                "noise_psd": self.radio.N0,
                "p_bmax_db": self.p_bmax_db,
                "p_dmax_db": self.p_dmax_db,
                "p_bmax": self.radio.P_bmax,
                "p_dmax": self.radio.P_dmax,
            },
            "fading": {
                "g11": self.fading.G11, "g12": self.fading.G12, "g21": self.fading.G21,
                "g22": self.fading.G22, "g23": self.fading.G23,
            },
            "simulation": {
                "buffer_factor": self.buffer_factor,
                "prefetch_slots": self.prefetch_slots,
                "decouple_fading": self.decouple_fading,
            },
        }


def _coerce(table, key, value, typ, problems):
    where = f"[{table}] {key}"
    if typ is bool:
        if not isinstance(value, bool):
            problems.append(f"{where}: expected true/false, got {value!r}")
            return None
        return value
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append(f"{where}: expected an integer, got {value!r}")
            return None
        return value
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append(f"{where}: expected a number, got {value!r}")
            return None
        value = float(value)
        if not math.isfinite(value):
            problems.append(f"{where}: must be finite, got {value!r}")
            return None
        return value
    if not isinstance(value, str):
        problems.append(f"{where}: expected a string, got {value!r}")
        return None
    return value


def parse_config(text: str, base_dir: Path = Path(".")) -> RunConfig:
    """Parse and check a config document; relative paths resolve against ``base_dir``."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"not valid TOML: {exc}"]) from None

    problems: List[str] = []
    values = {}
    for table in doc:
        if table not in SCHEMA:
            problems.append(f"unknown section [{table}]")
        elif not isinstance(doc[table], dict):
            problems.append(f"{table} must be a table")
    for table, keys in SCHEMA.items():
        given = doc.get(table, {})
        if not isinstance(given, dict):
            given = {}
        for key in given:
            if key not in keys:
                problems.append(f"unknown key [{table}] {key}")
        for key, (typ, default) in keys.items():
            if key in given:
                values[table, key] = _coerce(table, key, given[key], typ, problems)
            elif default is None:
                problems.append(f"missing required key [{table}] {key}")
                values[table, key] = None
            else:
                values[table, key] = default

    def get(table, key):
        return values.get((table, key))

    paths = {}
    for role in ("cu", "du"):
        raw = get("traces", role)
        if raw is None:
            continue
        p = Path(raw)
        if not p.is_absolute():
            p = base_dir / p
        if not p.is_file():
            problems.append(f"trace file not found: {p}")
        paths[role] = p

    radio = None
    B, N0 = get("radio", "bandwidth_hz"), get("radio", "noise_psd")
    pb_db, pd_db = get("radio", "p_bmax_db"), get("radio", "p_dmax_db")
    if None not in (B, N0, pb_db, pd_db):
        try:
            radio = RadioParams(B=B, N0=N0, P_bmax=db_to_linear(pb_db), P_dmax=db_to_linear(pd_db))
        except ValueError as exc:
            problems.append(f"[radio] {exc}")

    fading = None
    keys = ("g11", "g12", "g21", "g22", "g23")
    gs = [get("fading", k) for k in keys]
    for k, g in zip(keys, gs):
        if g is not None and not g > 0:
            problems.append(f"[fading] {k} must be a positive mean gain, got {g!r}")
    seed = get("fading", "seed")
    if seed is not None and not 0 <= seed < 2 ** 64:
        problems.append("[fading] seed must fit in an unsigned 64-bit integer")
    if not problems and None not in gs and seed is not None:
        try:
            fading = FadingConfig(*gs, seed=seed)
        except ValueError as exc:
            problems.append(f"[fading] {exc}")

    buffer_factor = get("simulation", "buffer_factor")
    if buffer_factor is not None and not buffer_factor > 0:
        problems.append("[simulation] buffer_factor must be positive")
    prefetch = get("simulation", "prefetch_slots")
    if prefetch is not None and prefetch < 0:
        problems.append("[simulation] prefetch_slots must be nonnegative")
    n_seeds = get("simulation", "seeds")
    if n_seeds is not None and n_seeds < 1:
        problems.append("[simulation] seeds must be at least 1")
    workers = get("simulation", "workers")
    if workers is not None and workers < 1:
        problems.append("[simulation] workers must be at least 1")
    forced = None
    if get("simulation", "forced_mode"):
        try:
            forced = Mode.parse(get("simulation", "forced_mode"))
        except ValueError as exc:
            problems.append(f"[simulation] forced_mode: {exc}")

    zoom = None
    z0, z1 = get("output", "zoom_start"), get("output", "zoom_end")
    if z0 or z1:
        if z0 is None or z1 is None or z0 < 1 or z1 < z0:
            problems.append("[output] zoom_start..zoom_end is an empty export range")
        else:
            zoom = (z0, z1)

    if problems:
        raise ConfigError(problems)
    out = Path(get("output", "directory"))
    return RunConfig(
        cu_trace=paths["cu"],
        du_trace=paths["du"],
        radio=radio,
        p_bmax_db=pb_db,
        p_dmax_db=pd_db,
        fading=fading,
        buffer_factor=buffer_factor,
        prefetch_slots=prefetch,
        forced_mode=forced,
        seed=seed,
        n_seeds=n_seeds,
        decouple_fading=get("simulation", "decouple_fading"),
        workers=workers,
        output_dir=out if out.is_absolute() else base_dir / out,
        zoom=zoom,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {exc.strerror}"]) from None
    cfg = parse_config(text, base_dir=path.parent)
    cfg.source = path
    return cfg


def lint(cfg: RunConfig) -> List[str]:
    """Problems that need the traces loaded: parse errors, frame rates, zoom range."""
    problems = []
    traces = []
    for p in (cfg.cu_trace, cfg.du_trace):
        try:
            traces.append(read_trace(p))
        except (TraceError, OSError) as exc:
            problems.append(str(exc))
    if len(traces) == 2:
        if traces[0].frame_rate != traces[1].frame_rate:
            problems.append(f"frame rates differ: {traces[0].frame_rate} vs {traces[1].frame_rate}")
        horizon = max(t.L for t in traces) + cfg.prefetch_slots
        if cfg.zoom and cfg.zoom[1] > horizon:
            problems.append(f"[output] zoom range {cfg.zoom[0]}..{cfg.zoom[1]} exceeds the {horizon} simulated slots")
    return problems
