"""Recursive projection-aggregation decoding.

Everything here works on batches: an LLR array of shape ``(B, n)`` is decoded
row by row, but all projections at a recursion level are stacked into a single
array so the first-order base case runs as one batched FHT.  The same engine
drives full RPA and the sparse decoders in :mod:`rmrpa.srpa`; a decoder is
described by one :class:`Level` per recursion depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitspace import CosetTable, Subspace1D, coset_table, full_tables
from .budget import BudgetReport
from .fhtdec import decode_first_order_llr
from .rmcode import RmCode

NORMALIZATIONS = ("n", "votes")


def boxplus(a, b) -> np.ndarray:
    """LLR of the XOR of two independent bits with LLRs ``a`` and ``b``.

    Exact rewrite of ``ln(e^(a+b) + 1) - ln(e^a + e^b)`` that never
    exponentiates a positive number.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (
        np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )


def boxplus_literal(a, b) -> np.ndarray:
    """Direct evaluation of the projection formula; overflows for large LLRs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.log(np.exp(a + b) + 1.0) - np.log(np.exp(a) + np.exp(b))


def project_hard(y, b: Subspace1D) -> np.ndarray:
    y = np.asarray(y, dtype=np.uint8)
    t = coset_table(b)
    _check_len(y, b.m)
    return y[..., t.reps] ^ y[..., t.partners]


def project_soft(L, b: Subspace1D) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    t = coset_table(b)
    _check_len(L, b.m)
    return boxplus(L[..., t.reps], L[..., t.partners])


def _check_len(v: np.ndarray, m: int) -> None:
    if v.shape[-1] != 1 << m:
        raise ValueError(f"vector length {v.shape[-1]} != 2**{m}")


def aggregate(L, votes, normalization: str = "auto") -> np.ndarray:
    """Re-estimate every LLR from decoded projections.

    ``votes`` is a list of ``(Subspace1D, bits)`` with ``bits`` in coset order.
    ``normalization``: ``"n"`` divides by the block length, ``"votes"`` by the
    number of votes, and ``"auto"`` picks ``"n"`` when every one of the
    ``n - 1`` subspaces voted and ``"votes"`` otherwise.
    """
    L = np.asarray(L, dtype=float)
    if not votes:
        raise ValueError("aggregation needs at least one vote")
    n = L.shape[-1]
    if normalization == "auto":
        normalization = "n" if len(votes) == n - 1 else "votes"
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    z = np.arange(n)
    acc = np.zeros_like(L)
    for b, bits in votes:
        _check_len(L, b.m)
        t: CosetTable = coset_table(b)
        sign = 1.0 - 2.0 * np.asarray(bits, dtype=float)[..., t.ordinal]
        acc += sign * L[..., z ^ b.generator]
    return acc / (n if normalization == "n" else len(votes))


@dataclass(frozen=True)
class Level:
    """How one recursion depth is decoded.

    ``projections=None`` uses all ``n - 1`` subspaces in generator order;
    otherwise each row draws ``projections`` distinct generators afresh every
    iteration.  ``decoders > 1`` runs that many independent copies and keeps
    the one best correlated with the level's input LLRs.
    """

    iterations: int
    projections: int | None = None
    decoders: int = 1
    epsilon: float | None = None
    normalization: str = "votes"


@dataclass(frozen=True)
class RpaConfig:
    """Full RPA: all subspaces, at most floor(m'/2) iterations at dimension m'.

    ``normalization="n"`` divides the vote sum by the block length; ``"votes"``
    divides by the vote count ``n - 1``.
    """

    epsilon: float = 0.05
    early_stopping: bool = True
    normalization: str = "n"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def levels(self, m: int, r: int) -> list[Level]:
        eps = self.epsilon if self.early_stopping else None
        return [
            Level(iterations=max(1, (m - i) // 2), epsilon=eps, normalization=self.normalization)
            for i in range(r - 1)
        ]


def draw_generators(rng: np.random.Generator, rows: int, m: int, q: int) -> np.ndarray:
    """``rows`` independent uniform draws of ``q`` distinct nonzero generators."""
    total = (1 << m) - 1
    if not 1 <= q <= total:
        raise ValueError(f"projections per iteration must lie in [1, {total}], got {q}")
    keys = rng.random((rows, total))
    if q == total:
        return np.argsort(keys, axis=1) + 1
    return np.argpartition(keys, q - 1, axis=1)[:, :q] + 1


@dataclass
class _Engine:
    levels: list[Level]
    rng: np.random.Generator | None
    budget: BudgetReport = field(default_factory=BudgetReport)

    def decode(self, L: np.ndarray, r: int, depth: int = 0) -> np.ndarray:
        """Hard decisions for every row of ``L`` (a word of an order-``r`` code)."""
        if r == 1:
            self.budget.fht_calls += L.shape[0]
            return decode_first_order_llr(L)
        spec = self.levels[depth]
        if spec.decoders == 1:
            return self.iterate(L, r, depth)[0]
        B, n = L.shape
        d = spec.decoders
        bits, _ = self.iterate(np.repeat(L, d, axis=0), r, depth)
        bits = bits.reshape(B, d, n)
        return select_most_likely(bits, L)

    def iterate(self, L: np.ndarray, r: int, depth: int, plan: np.ndarray | None = None):
        """Project / decode / aggregate loop for one decoder per row.

        ``plan`` optionally fixes the generators per iteration, shape ``(t, q)``.
        Returns hard decisions and the final aggregated LLRs.
        """
        spec = self.levels[depth]
        B, n = L.shape
        m = n.bit_length() - 1
        tables = full_tables(m)
        cur = np.array(L, dtype=float)
        active = np.arange(B)
        iterations = spec.iterations if plan is None else len(plan)
        for it in range(iterations):
            X = cur[active]
            Ba = X.shape[0]
            if plan is not None:
                gens = np.asarray(plan[it])[None, :]
            elif spec.projections is None:
                gens = np.arange(1, n)[None, :]
            else:
                gens = draw_generators(self.rng, Ba, m, spec.projections)
            q = gens.shape[1]
            g0 = gens - 1
            rows = np.arange(Ba)[:, None, None]

            proj = boxplus(X[rows, tables.reps[g0]], X[rows, tables.partners[g0]])
            self.budget.projections += Ba * q
            sub = self.decode(proj.reshape(Ba * q, n // 2), r - 1, depth + 1).reshape(Ba, q, n // 2)

            cols = np.arange(q)[None, :, None]
            sign = 1.0 - 2.0 * sub[rows, cols, tables.ordinal[g0]]
            Lhat = (sign * X[rows, tables.shifted[g0]]).sum(axis=1)
            Lhat /= n if spec.normalization == "n" else q
            self.budget.aggregations += Ba * q

            cur[active] = Lhat
            if spec.epsilon is not None:
                done = np.max(np.abs(Lhat - X), axis=1) <= spec.epsilon
                active = active[~done]
                if active.size == 0:
                    break
        return (cur < 0).astype(np.uint8), cur


def correlation(bits: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Bipolar correlation ``sum_z (1 - 2 c(z)) L(z)`` along the last axis."""
    return np.einsum("...n,...n->...", 1.0 - 2.0 * bits, L)


def select_most_likely(candidates: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Per row, the candidate (axis 1) best correlated with ``L``; ties -> lowest index."""
    corr = correlation(candidates, L[:, None, :])
    best = np.argmax(corr, axis=1)
    return candidates[np.arange(candidates.shape[0]), best]


def _as_batch(code: RmCode, L) -> tuple[np.ndarray, bool]:
    L = np.asarray(L, dtype=float)
    single = L.ndim == 1
    L2 = L[None, :] if single else L
    if L2.ndim != 2 or L2.shape[1] != code.n:
        raise ValueError(f"expected LLRs of length n={code.n}, got shape {L.shape}")
    return L2, single


def rpa_decode_soft(code: RmCode, L, cfg: RpaConfig | None = None, budget: BudgetReport | None = None):
    """Like :func:`rpa_decode` but also returns the final aggregated LLRs."""
    cfg = cfg or RpaConfig()
    if code.r < 1:
        raise ValueError("RPA decoding needs r >= 1")
    L2, single = _as_batch(code, L)
    eng = _Engine(cfg.levels(code.m, code.r), rng=None)
    if code.r == 1:
        bits, soft = eng.decode(L2, 1), L2.copy()
    else:
        bits, soft = eng.iterate(L2, code.r, 0)
    if budget is not None:
        budget += eng.budget
    return (bits[0], soft[0]) if single else (bits, soft)


def rpa_decode(code: RmCode, L, cfg: RpaConfig | None = None, budget: BudgetReport | None = None) -> np.ndarray:
    """Decode one LLR vector (or a batch of rows) with full RPA."""
    return rpa_decode_soft(code, L, cfg, budget)[0]
