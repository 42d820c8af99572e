"""Reed-Muller codes built from monomial evaluations."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

MAX_M = 14


class NotACodewordError(ValueError):
    """Raised when a vector is not a codeword of the code it is checked against."""


def evaluate_monomial(A: tuple[int, ...], m: int) -> np.ndarray:
    """Evaluate ``prod_{i in A} z_i`` at every index of F_2^m (``z_1`` = LSB)."""
    z = np.arange(1 << m)
    out = np.ones(1 << m, dtype=np.uint8)
    for i in A:
        out &= ((z >> (i - 1)) & 1).astype(np.uint8)
    return out


def gf2_rank_pivots(M: np.ndarray) -> list[int]:
    """Pivot columns of ``M`` over GF(2), in order of discovery."""
    M = (np.array(M, dtype=np.uint8) & 1).copy()
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(M[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        below = np.nonzero(M[:, c])[0]
        below = below[below != r]
        M[below] ^= M[r]
        pivots.append(c)
        r += 1
    return pivots


def gf2_inv(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=np.uint8) & 1
    k = M.shape[0]
    if M.shape != (k, k):
        raise ValueError("matrix must be square")
    aug = np.concatenate([M, np.eye(k, dtype=np.uint8)], axis=1)
    for c in range(k):
        hits = np.nonzero(aug[c:, c])[0]
        if hits.size == 0:
            raise ValueError("matrix is singular over GF(2)")
        p = c + hits[0]
        if p != c:
            aug[[c, p]] = aug[[p, c]]
        others = np.nonzero(aug[:, c])[0]
        others = others[others != c]
        aug[others] ^= aug[c]
    return aug[:, k:]


@dataclass(frozen=True, eq=False)
class RmCode:
    """The code RM(m, r).

    ``monomials[j]`` is the variable set (1-based) whose evaluation is
    generator row ``j``; rows are ordered by degree, then lexicographically.
    ``info_set`` holds ``k`` columns on which the generator is invertible and
    ``info_inverse`` is that inverse.
    """

    m: int
    r: int
    monomials: tuple[tuple[int, ...], ...]
    generator: np.ndarray = field(repr=False)
    info_set: np.ndarray = field(repr=False)
    info_inverse: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return len(self.monomials)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def __repr__(self):
        return f"RmCode(m={self.m}, r={self.r}, n={self.n}, k={self.k})"


def dimension(m: int, r: int) -> int:
    return sum(comb(m, i) for i in range(r + 1))


@lru_cache(maxsize=32)
def build_code(m: int, r: int) -> RmCode:
    if not (0 <= r <= m):
        raise ValueError(f"need 0 <= r <= m, got m={m}, r={r}")
    if m > MAX_M:
        raise ValueError(f"m={m} exceeds the supported maximum {MAX_M}")
    monomials = tuple(A for d in range(r + 1) for A in combinations(range(1, m + 1), d))
    G = np.stack([evaluate_monomial(A, m) for A in monomials])
    info_set = np.array(gf2_rank_pivots(G), dtype=np.intp)
    if len(info_set) != len(monomials):
        raise AssertionError("generator rows are not independent")
    inv = gf2_inv(G[:, info_set])
    for a in (G, info_set, inv):
        a.setflags(write=False)
    return RmCode(m, r, monomials, G, info_set, inv)


def encode(code: RmCode, msg) -> np.ndarray:
    """Encode one message (shape ``(k,)``) or a batch (shape ``(B, k)``)."""
    msg = np.asarray(msg)
    if msg.shape[-1] != code.k:
        raise ValueError(f"message length {msg.shape[-1]} != k={code.k}")
    return ((msg.astype(np.int64) & 1) @ code.generator.astype(np.int64) & 1).astype(np.uint8)


def recover_message(code: RmCode, cw) -> np.ndarray:
    """Invert :func:`encode`; raises :class:`NotACodewordError` for non-codewords."""
    cw = np.asarray(cw)
    if cw.shape[-1] != code.n:
        raise ValueError(f"codeword length {cw.shape[-1]} != n={code.n}")
    cw = cw.astype(np.int64) & 1
    msg = (cw[..., code.info_set] @ code.info_inverse.astype(np.int64) & 1).astype(np.uint8)
    if not np.array_equal(encode(code, msg), cw):
        raise NotACodewordError(f"vector is not a codeword of RM({code.m},{code.r})")
    return msg


def codeword_mask(code: RmCode, words) -> np.ndarray:
    """Boolean membership of each row of ``words`` in the code."""
    w = np.atleast_2d(np.asarray(words)).astype(np.int64) & 1
    msg = w[:, code.info_set] @ code.info_inverse.astype(np.int64) & 1
    return np.all(encode(code, msg) == w, axis=1)


def is_codeword(code: RmCode, cw) -> bool:
    try:
        recover_message(code, cw)
    except NotACodewordError:
        return False
    return True


def min_distance(code: RmCode) -> int:
    return 1 << (code.m - code.r)


def all_codewords(code: RmCode) -> np.ndarray:
    """Every codeword, row ``u`` encoding the bits of integer ``u`` (small k only)."""
    if code.k > 20:
        raise ValueError("refusing to enumerate more than 2**20 codewords")
    u = np.arange(1 << code.k)
    msgs = ((u[:, None] >> np.arange(code.k)) & 1).astype(np.uint8)
    return encode(code, msgs)
