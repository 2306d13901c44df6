"""Brute-force grid searches used to check the closed-form solvers.

These never call the solvers; they sweep an evenly spaced power grid and keep
the best sum rate among points that meet the stated constraints.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .channel import ChannelState
from .optimizer import RateWindowPair, _args
from .rates import RadioParams, shannon_rate

GRID = 500


def random_instance(rng: np.random.Generator, params: RadioParams, zero_alpha: float = 0.2):
    """Exp(1) gains and windows scaled around each receiver's reuse-mode peak rate.

    ``beta_m`` is drawn up to 1.5x the interference-free rate at peak power, so
    windows range from easy to unattainable; each ``alpha_m`` is zero with
    probability ``zero_alpha`` and otherwise uniform in ``[0, beta_m]``.
    """
    z = rng.exponential(1.0, 5)
    ch = ChannelState(*z.tolist())
    noise = params.N0 * params.B_r
    peak1 = shannon_rate(params.B_r, params.P_bmax * ch.z11 / noise)
    peak2 = shannon_rate(params.B_r, params.P_dmax * ch.z22 / noise)
    u = rng.random(6)
    b1 = u[0] * 1.5 * peak1
    b2 = u[1] * 1.5 * peak2
    a1 = 0.0 if u[2] < zero_alpha else u[3] * b1
    a2 = 0.0 if u[4] < zero_alpha else u[5] * b2
    return ch, RateWindowPair(a1, b1, a2, b2)


def rel_excess(grid_value: float, value: float) -> float:
    """How far a grid optimum exceeds the closed form, relative to the closed form."""
    if not math.isfinite(grid_value) or grid_value <= value:
        return 0.0
    return (grid_value - value) / max(abs(value), 1e-300)


def grid_reuse_best(params: RadioParams, ch: ChannelState, windows: RateWindowPair,
                    priority: int, n: int = GRID) -> float:
    """Best reuse-mode R_tot over ``[0, P_bmax] x [0, P_dmax]`` among points of one priority class.

    A point's class counts the receivers whose rate lies in ``[alpha_m, beta_m]``.
    Returns ``-inf`` when no grid point is in the class.
    """
    return _backend.core.grid_reuse_best(*_args(params, ch, windows), int(priority), int(n))


def grid_cellular_best(params: RadioParams, ch: ChannelState, windows: RateWindowPair,
                       n: int = GRID) -> float:
    """Best cellular-mode R_tot under the caps and ``R_m <= beta_m``.

    R1 depends only on ``P_b1`` and R2 only on ``(P_b2, P_d)``, so the 3-D grid
    max splits into a 1-D sweep plus an ``n`` x ``n`` sweep.
    """
    return _backend.core.grid_cellular_best(*_args(params, ch, windows), int(n))


def grid_dedicated_best(params: RadioParams, ch: ChannelState, windows: RateWindowPair,
                        n: int = GRID) -> float:
    """Best dedicated-mode R_tot over an ``n`` x ``n`` grid of ``(P_b1, P_d)``."""
    return _backend.core.grid_dedicated_best(*_args(params, ch, windows), int(n))
