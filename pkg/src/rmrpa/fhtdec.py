"""Fast Hadamard transform and ML decoding of first-order RM codes."""

from __future__ import annotations

import numpy as np

from .rmcode import RmCode


def _log2_len(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"length {n} is not a power of two")
    return n.bit_length() - 1


def fht(v) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis.

    ``out[w] = sum_z (-1)**popcount(w & z) * v[z]``.
    """
    x = np.array(v, dtype=float)
    n = x.shape[-1]
    _log2_len(n)
    lead = x.shape[:-1]
    h = 1
    while h < n:
        x = x.reshape(*lead, n // (2 * h), 2, h)
        a = x[..., 0, :]
        b = x[..., 1, :]
        x = np.stack((a + b, a - b), axis=-2)
        h *= 2
    return x.reshape(*lead, n)


def parity_rows(w: np.ndarray, n: int) -> np.ndarray:
    """Bits ``<w, z>`` for every ``z < n``; one row per entry of ``w``."""
    z = np.arange(n, dtype=np.int64)
    return (np.bitwise_count(np.asarray(w, dtype=np.int64)[..., None] & z) & 1).astype(np.uint8)


def decode_first_order_llr(L) -> np.ndarray:
    """ML first-order codeword(s) for LLR rows, without a code object.

    Ties go to the smallest transform index, then to the uncomplemented word.
    """
    L = np.asarray(L, dtype=float)
    n = L.shape[-1]
    t = fht(L)
    w = np.argmax(np.abs(t), axis=-1)
    peak = np.take_along_axis(t, w[..., None], axis=-1)[..., 0]
    bits = parity_rows(w, n)
    return bits ^ (peak < 0).astype(np.uint8)[..., None]


def decode_first_order(code: RmCode, L) -> np.ndarray:
    if code.r != 1:
        raise ValueError(f"FHT decoding needs a first-order code, got r={code.r}")
    L = np.asarray(L, dtype=float)
    if L.shape[-1] != code.n:
        raise ValueError(f"LLR length {L.shape[-1]} != n={code.n}")
    return decode_first_order_llr(L)
