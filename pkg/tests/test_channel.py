import math

import numpy as np
import pytest
from scipy.stats import norm

from rmrpa.channel import LLR_CLAMP, ChannelParams, awgn_llr, bsc_llr, ebn0_to_sigma, transmit


def test_awgn_llr_values():
    assert awgn_llr(0.0, 1.3) == 0.0
    assert awgn_llr(1.0, 1.0) == pytest.approx(2.0)
    assert awgn_llr(1e6, 0.1) == LLR_CLAMP


def test_bsc_llr_value():
    assert bsc_llr(0, 0.11) == pytest.approx(2.0907410969337694, abs=1e-12)
    assert bsc_llr(1, 0.11) == pytest.approx(-2.0907410969337694, abs=1e-12)


@pytest.mark.parametrize(
    "ebn0, rate, sigma",
    [(0.0, 0.5, 1.0), (3.0103, 0.5, 0.707106777656652), (0.0, 1.0, 1 / math.sqrt(2))],
)
def test_ebn0_to_sigma(ebn0, rate, sigma):
    assert ebn0_to_sigma(ebn0, rate) == pytest.approx(sigma, rel=1e-12)


@pytest.mark.parametrize("rate", [0.0, -0.5, 1.5])
def test_ebn0_to_sigma_bad_rate(rate):
    with pytest.raises(ValueError):
        ebn0_to_sigma(1.0, rate)


@pytest.mark.parametrize("kw", [dict(kind="awgn", sigma=0.0), dict(kind="bsc", p=0.7), dict(kind="qam")])
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        ChannelParams(**kw)


def _binomial_ok(errors, n, p):
    return abs(errors - n * p) <= 3 * math.sqrt(n * p * (1 - p))


def test_awgn_hard_decision_error_rate():
    sigma = 0.8
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, 10**6).astype(np.uint8)
    L = transmit(bits, ChannelParams.awgn(sigma), rng)
    errors = int(((L < 0) != bits).sum())
    assert _binomial_ok(errors, bits.size, norm.sf(1 / sigma))


def test_bsc_error_rate_and_constant_magnitude():
    p = 0.07
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, 10**6).astype(np.uint8)
    L = transmit(bits, ChannelParams.bsc(p), rng)
    assert np.allclose(np.abs(L), math.log((1 - p) / p))
    assert _binomial_ok(int(((L < 0) != bits).sum()), bits.size, p)


def test_noiseless_is_clamped():
    L = transmit(np.array([0, 1, 1, 0], dtype=np.uint8), ChannelParams("noiseless"), None)
    assert L.tolist() == [LLR_CLAMP, -LLR_CLAMP, -LLR_CLAMP, LLR_CLAMP]
