"""Binary-input channels and their LLR outputs (positive LLR favours bit 0)."""

from __future__ import annotations

from dataclasses import dataclass
from math import log, sqrt

import numpy as np
from scipy.special import ndtr

LLR_CLAMP = 40.0

KINDS = ("awgn", "bsc", "noiseless")


@dataclass(frozen=True)
class ChannelParams:
    """``awgn``: BPSK (bit b -> 1 - 2b) plus N(0, sigma^2) noise.
    ``bsc``: crossover probability ``p``.
    ``noiseless``: clamped, error-free LLRs (the sigma -> 0 limit).
    """

    kind: str
    sigma: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind == "awgn" and not (self.sigma is not None and self.sigma > 0):
            raise ValueError("awgn channel needs sigma > 0")
        # p = 1/2 is allowed as the degenerate zero-capacity channel
        if self.kind == "bsc" and not (self.p is not None and 0 < self.p <= 0.5):
            raise ValueError("bsc channel needs 0 < p <= 1/2")

    @classmethod
    def awgn(cls, sigma: float) -> "ChannelParams":
        return cls("awgn", sigma=sigma)

    @classmethod
    def bsc(cls, p: float) -> "ChannelParams":
        return cls("bsc", p=p)

    @property
    def raw_error_probability(self) -> float:
        if self.kind == "awgn":
            return float(ndtr(-1.0 / self.sigma))
        if self.kind == "bsc":
            return self.p
        return 0.0


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    if not rate > 0 or rate > 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    return sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def awgn_llr(y, sigma: float) -> np.ndarray:
    return np.clip(2.0 * np.asarray(y, dtype=float) / sigma**2, -LLR_CLAMP, LLR_CLAMP)


def bsc_llr(received, p: float) -> np.ndarray:
    mag = min(log((1.0 - p) / p), LLR_CLAMP)
    return (1.0 - 2.0 * np.asarray(received, dtype=float)) * mag


def transmit(cw, ch: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    bits = np.asarray(cw, dtype=np.uint8)
    if ch.kind == "awgn":
        y = (1.0 - 2.0 * bits) + ch.sigma * rng.standard_normal(bits.shape)
        return awgn_llr(y, ch.sigma)
    if ch.kind == "bsc":
        flips = (rng.random(bits.shape) < ch.p).astype(np.uint8)
        return bsc_llr(bits ^ flips, ch.p)
    return (1.0 - 2.0 * bits) * LLR_CLAMP
