"""Slot-by-slot simulation of one CU video and one D2D video."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, fields, replace
from typing import Dict, List, Optional

import numpy as np

from . import _backend
from .channel import FadingConfig, sample_block
from .optimizer import Mode
from .rates import RadioParams
from .trace import BufferCurves, VideoTrace, advance, build_curves, buffer_bits_for, rate_window

RECEIVERS = ("C1", "D2")


@dataclass(frozen=True)
class Scenario:
    trace_cu: VideoTrace
    trace_du: VideoTrace
    radio: RadioParams
    fading: FadingConfig
    buffer_factor: float = 1.5
    prefetch_slots: int = 0
    forced_mode: Optional[Mode] = None

    def __post_init__(self):
        if not self.buffer_factor > 0:
            raise ValueError("buffer_factor must be positive")
        if self.prefetch_slots < 0:
            raise ValueError("prefetch_slots must be nonnegative")
        if self.trace_cu.frame_rate != self.trace_du.frame_rate:
            raise ValueError("both traces must share one frame rate (slots are frame intervals)")
        if self.forced_mode is not None:
            object.__setattr__(self, "forced_mode", Mode.parse(self.forced_mode))

    @property
    def tau(self) -> float:
        return self.trace_cu.tau

    @property
    def traces(self):
        return (self.trace_cu, self.trace_du)

    @property
    def buffer_bits(self):
        return tuple(buffer_bits_for(tr, self.buffer_factor) for tr in self.traces)

    @property
    def horizon(self) -> int:
        return max(tr.L for tr in self.traces) + self.prefetch_slots

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, fading=replace(self.fading, seed=seed))

    def forced(self, mode: Optional[Mode]) -> "Scenario":
        return replace(self, forced_mode=mode)


@dataclass
class SlotRecord:
    t: int
    mode: int
    priority: int
    P_b1: float
    P_b2: float
    P_d: float
    R1: float
    R2: float
    alpha1: float
    beta1: float
    alpha2: float
    beta2: float
    U1: int
    O1: int
    A1: float
    U2: int
    O2: int
    A2: float
    underflow1: bool
    underflow2: bool
    clip1: bool
    clip2: bool
    clipped_bits1: float
    clipped_bits2: float
    # every mode's priority and R_tot on this slot's state (selection runs only)
    pri_cellular: Optional[int] = None
    pri_dedicated: Optional[int] = None
    pri_reuse: Optional[int] = None
    rtot_cellular: Optional[float] = None
    rtot_dedicated: Optional[float] = None
    rtot_reuse: Optional[float] = None

    @property
    def R_tot(self) -> float:
        return self.R1 + self.R2


SLOT_FIELDS = tuple(f.name for f in fields(SlotRecord))


@dataclass
class SimulationResult:
    strategy: str
    seed: int
    records: List[SlotRecord]
    frames: tuple
    buffer_bits: tuple
    summary: Dict = field(default_factory=dict)

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def strategy_name(mode: Optional[Mode]) -> str:
    return "selection" if mode is None else Mode(mode).label


def run(scenario: Scenario) -> SimulationResult:
    """Simulate slots ``1 .. max(L1, L2) + prefetch`` and summarise.

    A receiver whose video has ended gets the window (0, 0), which forces its
    link power to zero in every mode.
    """
    tau = scenario.tau
    radio = scenario.radio
    curves: List[BufferCurves] = [
        build_curves(tr, b, scenario.prefetch_slots)
        for tr, b in zip(scenario.traces, scenario.buffer_bits)
    ]
    horizon = scenario.horizon
    gains = sample_block(scenario.fading, 1, horizon).tolist()
    forced = 0 if scenario.forced_mode is None else int(scenario.forced_mode)
    solve_slot = _backend.core.solve_slot
    c1, c2 = curves
    records = []
    for t in range(1, horizon + 1):
        live1 = t <= c1.horizon
        live2 = t <= c2.horizon
        a1, b1 = rate_window(c1, t, tau) if live1 else (0.0, 0.0)
        a2, b2 = rate_window(c2, t, tau) if live2 else (0.0, 0.0)
        # only reachable with buffers smaller than the largest frame
        a1 = min(a1, b1)
        a2 = min(a2, b2)
        z11, z12, z21, z22, z23 = gains[t - 1]
        mode, *cands = solve_slot(forced, radio.B, radio.N0, radio.P_bmax, radio.P_dmax,
                                  z11, z12, z21, z22, z23, a1, b1, a2, b2)
        pri, pb1, pb2, pd, r1, r2 = cands[mode - 1]
        if live1:
            o1 = advance(c1, t, r1, tau)
            U1, O1, A1 = int(c1.U[t]), int(c1.O[t]), float(c1.A[t])
        else:
            o1 = None
            U1, O1, A1 = int(c1.U[-1]), int(c1.O[-1]), float(c1.A[c1.horizon])
        if live2:
            o2 = advance(c2, t, r2, tau)
            U2, O2, A2 = int(c2.U[t]), int(c2.O[t]), float(c2.A[t])
        else:
            o2 = None
            U2, O2, A2 = int(c2.U[-1]), int(c2.O[-1]), float(c2.A[c2.horizon])
        rec = SlotRecord(
            t, mode, pri, pb1, pb2, pd, r1, r2, a1, b1, a2, b2,
            U1, O1, A1, U2, O2, A2,
            bool(o1 and o1.underflow), bool(o2 and o2.underflow),
            bool(o1 and o1.clipped), bool(o2 and o2.clipped),
            o1.clipped_bits if o1 else 0.0, o2.clipped_bits if o2 else 0.0,
        )
        if forced == 0:
            rec.pri_cellular, rec.pri_dedicated, rec.pri_reuse = (c[0] for c in cands)
            rec.rtot_cellular, rec.rtot_dedicated, rec.rtot_reuse = (c[4] + c[5] for c in cands)
        records.append(rec)

    result = SimulationResult(
        strategy=strategy_name(scenario.forced_mode),
        seed=scenario.fading.seed,
        records=records,
        frames=tuple(tr.L for tr in scenario.traces),
        buffer_bits=scenario.buffer_bits,
    )
    result.summary = summarize(result)
    return result


def buffer_utilization(records: List[SlotRecord], buffer_bits, clamp: bool = True) -> np.ndarray:
    """``(A_m(t) - U_m(t)) / b_m`` per slot, shape ``(T, 2)``.

    Negative values mean the receiver is in underflow; ``clamp`` limits the
    reported series to ``[0, 1]``.
    """
    A = np.array([(r.A1, r.A2) for r in records], dtype=np.float64)
    U = np.array([(r.U1, r.U2) for r in records], dtype=np.float64)
    util = (A - U) / np.asarray(buffer_bits, dtype=np.float64)
    if clamp:
        util = np.clip(util, 0.0, 1.0)
    return util


def summarize(result: SimulationResult) -> Dict:
    recs = result.records
    util = buffer_utilization(recs, result.buffer_bits)
    hist = Counter(Mode(r.mode).label for r in recs)
    out = {
        "strategy": result.strategy,
        "seed": result.seed,
        "slots": len(recs),
        "mode_histogram": {m.label: hist.get(m.label, 0) for m in Mode},
        "mean_R_tot": float(np.mean([r.R_tot for r in recs])) if recs else 0.0,
        "mean_priority": float(np.mean([r.priority for r in recs])) if recs else 0.0,
        "receivers": {},
    }
    for i, name in enumerate(RECEIVERS):
        k = str(i + 1)
        under = sum(getattr(r, "underflow" + k) for r in recs)
        clips = sum(getattr(r, "clip" + k) for r in recs)
        out["receivers"][name] = {
            "frames": result.frames[i],
            "buffer_bits": result.buffer_bits[i],
            "underflow_events": int(under),
            "underflow_probability": under / result.frames[i],
            "overflow_clips": int(clips),
            "clipped_bits": float(sum(getattr(r, "clipped_bits" + k) for r in recs)),
            "mean_buffer_utilization": float(util[:, i].mean()) if recs else 0.0,
        }
    return out


def lockstep_violations(result: SimulationResult, rel_tol: float = 1e-12) -> List[dict]:
    """Slots where the selected decision is not minimal-priority / max-R_tot.

    Needs a selection run, which records every mode's solution on the shared
    pre-slot state.
    """
    bad = []
    for r in result.records:
        pris = (r.pri_cellular, r.pri_dedicated, r.pri_reuse)
        if None in pris:
            raise ValueError("lockstep check needs a mode-selection run")
        rtots = (r.rtot_cellular, r.rtot_dedicated, r.rtot_reuse)
        best_pri = min(pris)
        best_rtot = max(v for p, v in zip(pris, rtots) if p == best_pri)
        if r.priority != best_pri or r.R_tot < best_rtot * (1 - rel_tol):
            bad.append({"t": r.t, "priority": r.priority, "mode_priorities": pris,
                        "R_tot": r.R_tot, "best_R_tot": best_rtot})
    return bad

