import math

import numpy as np
import pytest

from d2dstream.channel import ChannelState
from d2dstream.rates import (
    PowerVector,
    RadioParams,
    db_to_linear,
    rates_cellular,
    rates_dedicated,
    rates_reuse,
    required_snr,
    shannon_rate,
)

ONES = ChannelState(1.0, 1.0, 1.0, 1.0, 1.0)


def params_with_band_noise(split):
    """Radio whose per-link bandwidth ``B / split`` is 1 Hz, so noise N0 * bw is 1."""
    return RadioParams(B=float(split), N0=1.0, P_bmax=10.0, P_dmax=10.0)


def test_db_to_linear():
    assert db_to_linear(0.0) == 1.0
    assert db_to_linear(2.0) == pytest.approx(1.5848931924611136, rel=1e-15)


def test_bandwidth_split():
    p = RadioParams(B=6.0, N0=1.0, P_bmax=1.0, P_dmax=1.0)
    assert (p.B_c, p.B_d, p.B_r) == (2.0, 3.0, 6.0)


@pytest.mark.parametrize("fn", [rates_cellular, rates_dedicated, rates_reuse])
def test_zero_power_zero_rate(fn):
    assert fn(params_with_band_noise(3), ONES, PowerVector(0, 0, 0)) == (0.0, 0.0)


def test_cellular_direct_link():
    p = params_with_band_noise(3)
    r1, _ = rates_cellular(p, ChannelState(3.0, 1, 1, 1, 1), PowerVector(1.0, 0, 0))
    assert r1 == pytest.approx(2.0, rel=1e-15)


def test_cellular_relay_bottleneck():
    p = params_with_band_noise(3)
    # uplink SNR 3, downlink SNR 1
    _, r2 = rates_cellular(p, ChannelState(1, 1.0, 1, 1, 3.0), PowerVector(0, 1.0, 1.0))
    assert r2 == pytest.approx(1.0, rel=1e-15)


def test_dedicated_d2d_link():
    p = params_with_band_noise(2)
    _, r2 = rates_dedicated(p, ONES, PowerVector(0, 5.0, 3.0))
    assert r2 == pytest.approx(2.0, rel=1e-15)


def test_dedicated_ignores_pb2():
    p = params_with_band_noise(2)
    assert rates_dedicated(p, ONES, PowerVector(1, 0, 1)) == rates_dedicated(p, ONES, PowerVector(1, 9, 1))


def test_dedicated_power_noise_scaling():
    ch = ChannelState(0.7, 1, 1, 1, 1)
    a = rates_dedicated(RadioParams(2.0, 0.3, 1, 1), ch, PowerVector(0.4, 0, 0))[0]
    c = 17.0
    b = rates_dedicated(RadioParams(2.0, 0.3 * c, 1, 1), ch, PowerVector(0.4 * c, 0, 0))[0]
    assert b == pytest.approx(a, rel=1e-14)


def test_reuse_without_interferer_matches_full_band_formula():
    p = RadioParams(B=2.0, N0=0.5, P_bmax=5, P_dmax=5)
    ch = ChannelState(0.8, 0.3, 0.6, 1.2, 0.4)
    r1, r2 = rates_reuse(p, ch, PowerVector(2.0, 0, 0))
    assert r1 == pytest.approx(shannon_rate(p.B_r, 2.0 * 0.8 / (p.N0 * p.B_r)), rel=1e-15)
    assert r2 == 0.0


def test_reuse_sinr():
    p = RadioParams(B=1.0, N0=1.0, P_bmax=5, P_dmax=5)
    r1, _ = rates_reuse(p, ChannelState(1.0, 1.0, 1.0, 1.0, 1.0), PowerVector(3.0, 0, 2.0))
    assert r1 == pytest.approx(1.0, rel=1e-15)


def test_reuse_monotonicity_grid():
    p = RadioParams(B=1e6, N0=1e-6, P_bmax=2, P_dmax=2)
    ch = ChannelState(1.1, 0.4, 0.3, 1.7, 0.5)
    grid = np.linspace(0, 2, 201)
    r1 = [rates_reuse(p, ch, PowerVector(1.0, 0, x))[0] for x in grid]
    r2 = [rates_reuse(p, ch, PowerVector(1.0, 0, x))[1] for x in grid]
    assert all(a > b for a, b in zip(r1, r1[1:]))  # strictly decreasing in the interferer
    assert all(a < b for a, b in zip(r2, r2[1:]))
    r1_own = [rates_reuse(p, ch, PowerVector(x, 0, 1.0))[0] for x in grid]
    r2_int = [rates_reuse(p, ch, PowerVector(x, 0, 1.0))[1] for x in grid]
    assert all(a < b for a, b in zip(r1_own, r1_own[1:]))
    assert all(a > b for a, b in zip(r2_int, r2_int[1:]))


def test_rate_power_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(2000):
        bw = rng.uniform(1e3, 1e7)
        r = rng.uniform(0, 30) * bw
        back = shannon_rate(bw, required_snr(r, bw))
        assert math.isclose(back, r, rel_tol=1e-12)


def test_rate_positive_iff_signal():
    assert shannon_rate(1.0, 0.0) == 0.0
    assert shannon_rate(1.0, 1e-300) > 0.0


@pytest.mark.parametrize("kwargs", [
    dict(B=0, N0=1, P_bmax=1, P_dmax=1),
    dict(B=1, N0=0, P_bmax=1, P_dmax=1),
    dict(B=1, N0=1, P_bmax=-1, P_dmax=1),
    dict(B=float("inf"), N0=1, P_bmax=1, P_dmax=1),
])
def test_radio_validation(kwargs):
    with pytest.raises(ValueError):
        RadioParams(**kwargs)
