"""Seeded Rayleigh block fading for the five links.

Gains are drawn from a counter-based generator (Philox keyed by the seed, with
the counter set from the slot index), so the state of any slot can be produced
without generating the slots before it, and a block of slots is bit-identical
to the same slots sampled one by one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

LINKS = ("z11", "z12", "z21", "z22", "z23")

# Each slot owns two Philox counter values, i.e. 8 raw 64-bit words; the five
# links take the first five.
_WORDS_PER_SLOT = 8
_COUNTERS_PER_SLOT = 2
_TWO_NEG_53 = 2.0 ** -53


class ChannelState(NamedTuple):
    """Instantaneous power gains for BS-C1, BS-D2, D1-C1, D1-D2 and D1-BS."""

    z11: float
    z12: float
    z21: float
    z22: float
    z23: float


@dataclass(frozen=True)
class FadingConfig:
    """Mean path gains per link and the seed.

    The defaults are artifact choices (the D2D link strongest, the cross links
    weakest); nothing here is a published value.
    """

    G11: float = 1.0
    G12: float = 0.5
    G21: float = 0.1
    G22: float = 2.0
    G23: float = 0.5
    seed: int = 0

    def __post_init__(self):
        for name in ("G11", "G12", "G21", "G22", "G23"):
            g = getattr(self, name)
            if not (math.isfinite(g) and g > 0):
                raise ValueError(f"{name} must be a positive finite mean gain, got {g!r}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")

    @property
    def means(self) -> np.ndarray:
        return np.array([self.G11, self.G12, self.G21, self.G22, self.G23])


def sample_block(config: FadingConfig, t_first: int, count: int) -> np.ndarray:
    """Gains for slots ``t_first .. t_first + count - 1`` as a ``(count, 5)`` array."""
    if t_first < 1:
        raise ValueError("slots are numbered from 1")
    if count <= 0:
        return np.empty((0, 5))
    gen = np.random.Philox(key=int(config.seed), counter=_COUNTERS_PER_SLOT * t_first)
    raw = gen.random_raw(_WORDS_PER_SLOT * count).reshape(count, _WORDS_PER_SLOT)[:, :5]
    u = (raw >> np.uint64(11)).astype(np.float64) * _TWO_NEG_53
    return -np.log1p(-u) * config.means


def sample_slot(config: FadingConfig, t: int) -> ChannelState:
    return ChannelState(*sample_block(config, t, 1)[0].tolist())
