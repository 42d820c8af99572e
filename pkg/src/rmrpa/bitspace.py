"""Index-space machinery over F_2^m.

An index ``z`` is an integer in ``[0, 2**m)``; bit ``i - 1`` of the integer is
coordinate ``z_i`` (``z_1`` is the least significant bit).  A one-dimensional
subspace ``{0, g}`` pairs every index ``z`` with ``z ^ g``.  Cosets are ordered
by their representative, the smaller member of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def _check_dim(m: int) -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"invalid dimension m={m}; need m >= 1")


@dataclass(frozen=True)
class Subspace1D:
    """The subspace ``{0, generator}`` of F_2^m."""

    generator: int
    m: int

    def __post_init__(self):
        _check_dim(self.m)
        if not 0 < self.generator < (1 << self.m):
            raise ValueError(f"generator must lie in [1, 2**{self.m}), got {self.generator}")

    @property
    def top_bit(self) -> int:
        return self.generator.bit_length() - 1


@dataclass(frozen=True)
class CosetTable:
    """Cosets of a :class:`Subspace1D`.

    ``reps[j]`` and ``partners[j]`` are the two members of coset ``j``
    (``reps[j] < partners[j]``); ``ordinal[z]`` is the coset holding ``z``.
    """

    subspace: Subspace1D
    reps: np.ndarray
    partners: np.ndarray
    ordinal: np.ndarray

    def __len__(self):
        return len(self.reps)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.reps.tolist(), self.partners.tolist()))


def all_subspaces(m: int) -> list[Subspace1D]:
    _check_dim(m)
    return [Subspace1D(g, m) for g in range(1, 1 << m)]


def _reps_for(generators: np.ndarray, m: int) -> np.ndarray:
    # The smaller member of {z, z ^ g} is the one with a 0 at g's top bit, so
    # the j-th representative is j with a zero bit inserted at that position.
    g = np.asarray(generators, dtype=np.int64)[..., None]
    h = _top_bit(g)
    j = np.arange(1 << (m - 1), dtype=np.int64)
    low = j & ((1 << h) - 1)
    return ((j >> h) << (h + 1)) | low


def _ordinals_for(generators: np.ndarray, m: int) -> np.ndarray:
    g = np.asarray(generators, dtype=np.int64)[..., None]
    h = _top_bit(g)
    z = np.arange(1 << m, dtype=np.int64)
    rep = np.where((z >> h) & 1, z ^ g, z)
    return ((rep >> (h + 1)) << h) | (rep & ((1 << h) - 1))


def _top_bit(g: np.ndarray) -> np.ndarray:
    return np.frexp(g)[1].astype(np.int64) - 1


def coset_table(b: Subspace1D) -> CosetTable:
    reps = _reps_for(np.array(b.generator), b.m)
    ordinal = _ordinals_for(np.array(b.generator), b.m)
    return CosetTable(b, reps, reps ^ b.generator, ordinal)


def coset_of(b: Subspace1D, z: int) -> int:
    if not 0 <= z < (1 << b.m):
        raise IndexError(f"index {z} out of range for m={b.m}")
    h = b.top_bit
    rep = z ^ b.generator if (z >> h) & 1 else z
    return ((rep >> (h + 1)) << h) | (rep & ((1 << h) - 1))


@dataclass(frozen=True)
class FullTables:
    """Stacked coset tables for every nonzero generator, row ``g - 1``."""

    reps: np.ndarray  # (n - 1, n // 2)
    partners: np.ndarray  # (n - 1, n // 2)
    ordinal: np.ndarray  # (n - 1, n)
    shifted: np.ndarray  # (n - 1, n), z ^ g


@lru_cache(maxsize=16)
def full_tables(m: int) -> FullTables:
    """Coset tables for all ``2**m - 1`` subspaces, cached per dimension."""
    _check_dim(m)
    gens = np.arange(1, 1 << m, dtype=np.int64)
    reps = _reps_for(gens, m).astype(np.intp)
    partners = reps ^ gens[:, None]
    ordinal = _ordinals_for(gens, m).astype(np.intp)
    shifted = np.arange(1 << m, dtype=np.intp)[None, :] ^ gens[:, None]
    for arr in (reps, partners, ordinal, shifted):
        arr.setflags(write=False)
    return FullTables(reps, partners, ordinal, shifted)
