"""Per-slot power control for each transmission mode, and mode selection.

Each solver maximises the sum rate R1 + R2 within the peak-power caps and the
receivers' rate windows ``[alpha_m, beta_m]``, and reports a priority level:
1 when both receivers get a rate inside their window, 2 when only one does,
3 when neither does. :func:`select_mode` keeps the lowest priority, then the
highest sum rate.

The numerics live in the compiled core (or its pure-Python twin, see
:mod:`d2dstream._backend`); this module wraps them in typed values.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from . import _backend
from .channel import ChannelState
from .rates import PowerVector, RadioParams


class Mode(enum.IntEnum):
    CELLULAR = 1
    DEDICATED = 2
    REUSE = 3

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(value)
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown mode {value!r}; expected cellular, dedicated or reuse") from None

    @property
    def label(self) -> str:
        return self.name.lower()


class BoundaryCase(enum.IntEnum):
    """Which transmitter is pinned at its peak power on the reuse-mode edge."""

    BS_AT_PEAK = 1
    D2D_AT_PEAK = 2


class RateWindowPair(NamedTuple):
    alpha1: float
    beta1: float
    alpha2: float
    beta2: float


@dataclass(frozen=True)
class PowerDecision:
    mode: Mode
    powers: PowerVector
    priority: int
    R1: float
    R2: float

    @property
    def R_tot(self) -> float:
        return self.R1 + self.R2

    @classmethod
    def from_tuple(cls, mode, t) -> "PowerDecision":
        pri, pb1, pb2, pd, r1, r2 = t
        return cls(Mode(mode), PowerVector(pb1, pb2, pd), int(pri), r1, r2)


def _args(params: RadioParams, ch: ChannelState, w: RateWindowPair):
    return (params.B, params.N0, params.P_bmax, params.P_dmax,
            ch.z11, ch.z12, ch.z21, ch.z22, ch.z23,
            w.alpha1, w.beta1, w.alpha2, w.beta2)


def solve_cellular(params: RadioParams, ch: ChannelState, windows: RateWindowPair) -> PowerDecision:
    """BS-C1 direct, D1 relayed through the BS; each hop on a third of the band."""
    t = _backend.core.solve_cellular(*_args(params, ch, windows))
    return PowerDecision.from_tuple(Mode.CELLULAR, t)


def solve_dedicated(params: RadioParams, ch: ChannelState, windows: RateWindowPair) -> PowerDecision:
    t = _backend.core.solve_dedicated(*_args(params, ch, windows))
    return PowerDecision.from_tuple(Mode.DEDICATED, t)


def solve_reuse_interior(params: RadioParams, ch: ChannelState,
                         windows: RateWindowPair) -> Optional[PowerVector]:
    """Powers that put both reuse-mode rates exactly at ``beta1`` and ``beta2``.

    Solves the two SINR equations as a 2x2 linear system. Returns ``None`` when
    the targets are jointly unattainable or need more than the peak powers.
    """
    res = _backend.core.solve_reuse_interior(*_args(params, ch, windows))
    if res is None:
        return None
    return PowerVector(res[0], 0.0, res[1])


def solve_reuse_boundary(params: RadioParams, ch: ChannelState, windows: RateWindowPair,
                         fixed: BoundaryCase) -> PowerDecision:
    """Best reuse-mode point with one transmitter pinned at its peak power.

    The free power's window-feasible set is the intersection of two intervals,
    one per receiver. Along the edge the sum rate is quasi-convex in the free
    power, so only interval endpoints are evaluated: the two ends of the
    intersection when it is nonempty (priority 1), the ends of whichever
    single interval is nonempty otherwise (priority 2), and ``{0, cap}`` when
    neither receiver can be served (priority 3).
    """
    t = _backend.core.solve_reuse_boundary(*_args(params, ch, windows), int(BoundaryCase(fixed)))
    return PowerDecision.from_tuple(Mode.REUSE, t)


def solve_reuse(params: RadioParams, ch: ChannelState, windows: RateWindowPair) -> PowerDecision:
    t = _backend.core.solve_reuse(*_args(params, ch, windows))
    return PowerDecision.from_tuple(Mode.REUSE, t)


SOLVERS = {Mode.CELLULAR: solve_cellular, Mode.DEDICATED: solve_dedicated, Mode.REUSE: solve_reuse}


def select_mode(d_cell: PowerDecision, d_ded: PowerDecision, d_reuse: PowerDecision) -> PowerDecision:
    """Lowest priority wins, then highest R_tot; ties keep the earlier mode.

    Sum rates within a relative 1e-12 of each other count as tied.
    """
    best = d_cell
    for d in (d_ded, d_reuse):
        if d.priority < best.priority or (
                d.priority == best.priority and _backend.core.exceeds(d.R_tot, best.R_tot)):
            best = d
    return best


def solve_slot(params: RadioParams, ch: ChannelState, windows: RateWindowPair,
               forced: Optional[Mode] = None):
    """Selected decision plus the per-mode candidates (``None`` where not computed)."""
    mode, *cands = _backend.core.solve_slot(0 if forced is None else int(forced),
                                            *_args(params, ch, windows))
    decisions: Sequence[Optional[PowerDecision]] = [
        None if c is None else PowerDecision.from_tuple(i + 1, c) for i, c in enumerate(cands)
    ]
    return decisions[mode - 1], tuple(decisions)
