"""CRC-3-GSM (generator x^3 + x + 1).

Bits are processed MSB-first (the first bit is the highest-degree coefficient)
with a zero initial register, no reflection and no final XOR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CrcSpec:
    poly: int = 0b1011
    width: int = 3

    def remainder(self, bits) -> int:
        """Remainder of ``bits(x) * x**width`` modulo the generator."""
        reg = 0
        top = 1 << self.width
        for b in _as_bits(bits):
            reg = (reg << 1) | int(b)
            if reg & top:
                reg ^= self.poly
        for _ in range(self.width):
            reg <<= 1
            if reg & top:
                reg ^= self.poly
        return reg

    def append(self, payload) -> np.ndarray:
        payload = _as_bits(payload)
        rem = self.remainder(payload)
        tail = [(rem >> (self.width - 1 - i)) & 1 for i in range(self.width)]
        return np.concatenate([payload, np.array(tail, dtype=np.uint8)])

    def check(self, frame) -> bool:
        frame = _as_bits(frame)
        if len(frame) < self.width:
            raise ValueError(f"frame shorter than {self.width} bits")
        reg = 0
        top = 1 << self.width
        for b in frame:
            reg = (reg << 1) | int(b)
            if reg & top:
                reg ^= self.poly
        return reg == 0


CRC3_GSM = CrcSpec()


def _as_bits(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits if c in "01"]
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if np.any(arr > 1):
        raise ValueError("bits must be 0 or 1")
    return arr


def crc_append(payload, spec: CrcSpec = CRC3_GSM) -> np.ndarray:
    return spec.append(payload)


def crc_check(frame, spec: CrcSpec = CRC3_GSM) -> bool:
    return spec.check(frame)
