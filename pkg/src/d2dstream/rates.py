"""Shannon rates per link for the cellular, dedicated and reuse modes.

Rates are in bits/s (base-2 logarithm). Cellular mode splits the band in three,
dedicated mode in two, and reuse mode shares the whole band between the BS-C1
and D1-D2 links.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .channel import ChannelState

LN2 = math.log(2.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class RadioParams:
    B: float
    N0: float
    P_bmax: float
    P_dmax: float

    def __post_init__(self):
        if not (self.B > 0 and math.isfinite(self.B)):
            raise ValueError("bandwidth B must be positive")
        if not (self.N0 > 0 and math.isfinite(self.N0)):
            raise ValueError("noise density N0 must be positive")
        if not (self.P_bmax >= 0 and self.P_dmax >= 0):
            raise ValueError("peak powers must be nonnegative")

    @property
    def B_c(self) -> float:
        return self.B / 3.0

    @property
    def B_d(self) -> float:
        return self.B / 2.0

    @property
    def B_r(self) -> float:
        return self.B


class PowerVector(NamedTuple):
    P_b1: float
    P_b2: float
    P_d: float


def shannon_rate(bw: float, snr: float) -> float:
    return bw * math.log1p(snr) / LN2


def required_snr(rate: float, bw: float) -> float:
    """Inverse of :func:`shannon_rate`: 2**(rate/bw) - 1."""
    return math.expm1(rate * LN2 / bw)


def rates_cellular(params: RadioParams, ch: ChannelState, p: PowerVector):
    """(R1, R2); R2 is the bottleneck of the D1-BS uplink and BS-D2 downlink."""
    bw = params.B_c
    noise = params.N0 * bw
    r1 = shannon_rate(bw, p.P_b1 * ch.z11 / noise)
    uplink = shannon_rate(bw, p.P_d * ch.z23 / noise)
    downlink = shannon_rate(bw, p.P_b2 * ch.z12 / noise)
    return r1, min(uplink, downlink)


def rates_dedicated(params: RadioParams, ch: ChannelState, p: PowerVector):
    bw = params.B_d
    noise = params.N0 * bw
    return (shannon_rate(bw, p.P_b1 * ch.z11 / noise),
            shannon_rate(bw, p.P_d * ch.z22 / noise))


def rates_reuse(params: RadioParams, ch: ChannelState, p: PowerVector):
    bw = params.B_r
    noise = params.N0 * bw
    r1 = shannon_rate(bw, p.P_b1 * ch.z11 / (p.P_d * ch.z21 + noise))
    r2 = shannon_rate(bw, p.P_d * ch.z22 / (p.P_b1 * ch.z12 + noise))
    return r1, r2


RATE_FUNCTIONS = {1: rates_cellular, 2: rates_dedicated, 3: rates_reuse}
