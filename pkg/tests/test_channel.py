import numpy as np
import pytest
from scipy import stats

from d2dstream.channel import FadingConfig, sample_block, sample_slot


def test_same_seed_and_slot_reproduce():
    cfg = FadingConfig(seed=42)
    assert sample_slot(cfg, 7) == sample_slot(cfg, 7)


def test_block_matches_slot_by_slot():
    cfg = FadingConfig(seed=9)
    block = sample_block(cfg, 1, 50)
    for t in (1, 2, 17, 50):
        assert tuple(block[t - 1]) == tuple(sample_slot(cfg, t))
    # a block starting mid-sequence lines up with the long one
    assert np.array_equal(sample_block(cfg, 20, 10), block[19:29])


def test_seeds_differ():
    assert sample_slot(FadingConfig(seed=1), 1) != sample_slot(FadingConfig(seed=2), 1)


def test_nonnegative_and_scaled_by_mean():
    z = sample_block(FadingConfig(seed=3), 1, 1000)
    assert (z >= 0).all()
    doubled = sample_block(FadingConfig(G11=2.0, G12=1.0, G21=0.2, G22=4.0, G23=1.0, seed=3), 1, 1000)
    assert np.allclose(doubled, 2 * z, rtol=1e-15)


@pytest.mark.slow
def test_unit_means_at_one_million():
    cfg = FadingConfig(1.0, 1.0, 1.0, 1.0, 1.0, seed=5)
    z = sample_block(cfg, 1, 10**6)
    assert np.all(np.abs(z.mean(axis=0) - 1.0) < 0.01)


@pytest.mark.slow
def test_mean_ratio():
    cfg = FadingConfig(G11=1.0, G22=2.0, seed=6)
    z = sample_block(cfg, 1, 10**6)
    assert z[:, 3].mean() / z[:, 0].mean() == pytest.approx(2.0, rel=0.02)


@pytest.mark.slow
def test_lag_one_autocorrelation():
    z = sample_block(FadingConfig(seed=8), 1, 10**6)
    for k in range(5):
        x = z[:, k] - z[:, k].mean()
        rho = np.dot(x[:-1], x[1:]) / np.dot(x, x)
        assert abs(rho) < 0.01


def test_ks_against_exponential():
    cfg = FadingConfig(seed=10)
    z = sample_block(cfg, 1, 10**5)
    for k, g in enumerate(cfg.means):
        assert stats.kstest(z[:, k], "expon", args=(0, g)).pvalue > 0.01


def test_cross_link_independence():
    z = sample_block(FadingConfig(seed=12), 1, 200000)
    c = np.corrcoef(z.T)
    assert np.all(np.abs(c[np.triu_indices(5, 1)]) < 0.01)


@pytest.mark.parametrize("kwargs", [{"G11": 0.0}, {"G22": -1.0}, {"G12": float("nan")}, {"seed": -1}, {"seed": 2**64}])
def test_rejects_bad_config(kwargs):
    with pytest.raises(ValueError):
        FadingConfig(**kwargs)


def test_rejects_slot_zero():
    with pytest.raises(ValueError):
        sample_slot(FadingConfig(), 0)
