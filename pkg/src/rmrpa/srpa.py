"""Sparse multi-decoder RPA.

A sparse decoder keeps only ``q`` randomly drawn projections per iteration and
runs a fixed number of iterations.  ``k`` such decoders run side by side and
one candidate is kept, either the best correlated with the channel LLRs or the
best correlated among those whose message passes a CRC.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .budget import BudgetReport
from .crc3 import CRC3_GSM, CrcSpec
from .rmcode import NotACodewordError, RmCode, recover_message
from .rpa import Level, _Engine, correlation, draw_generators

__all__ = [
    "BudgetReport",
    "LevelParams",
    "SparsePlan",
    "SrpaConfig",
    "budget_formula",
    "full_rpa_levels",
    "sample_plan",
    "select_candidate",
    "srpa_multi_decode",
    "srpa_single_decode",
]

SELECTIONS = ("most-likely", "crc")


@dataclass(frozen=True)
class SparsePlan:
    """Retained generators, row ``i`` for iteration ``i``: shape ``(t, q)``."""

    generators: np.ndarray
    m: int

    def __post_init__(self):
        g = np.asarray(self.generators)
        if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
            raise ValueError("plan must have shape (t, q) with t, q >= 1")
        if g.min() < 1 or g.max() >= 1 << self.m:
            raise ValueError("plan generators must be nonzero indices below 2**m")
        if any(len(set(row)) != len(row) for row in g.tolist()):
            raise ValueError("generators within an iteration must be distinct")

    @property
    def t(self) -> int:
        return self.generators.shape[0]

    @property
    def q(self) -> int:
        return self.generators.shape[1]


def sample_plan(m: int, q: int, t: int, rng: np.random.Generator) -> SparsePlan:
    if t < 1:
        raise ValueError("a plan needs at least one iteration")
    return SparsePlan(draw_generators(rng, t, m, q), m)


@dataclass(frozen=True)
class LevelParams:
    """Decoders ``d``, iterations ``t`` and projections ``q`` at one depth."""

    d: int
    t: int
    q: int


@dataclass(frozen=True)
class SrpaConfig:
    """Parameters of a k-SRPA decoder.

    ``levels[i]`` applies to the sub-code RM(m - i, r - i); ``levels[0].d`` is
    the number ``k`` of top-level decoders.  Levels whose sub-code is first
    order are not listed (the FHT decoder is exact).
    """

    levels: tuple[LevelParams, ...]
    selection: str = "crc"
    crc: CrcSpec | None = field(default=CRC3_GSM)
    soft_selection: bool = False
    freeze_plans: bool = False
    master_seed: int = 0

    def __post_init__(self):
        if not self.levels:
            raise ValueError("need parameters for at least one level")
        if self.selection not in SELECTIONS:
            raise ValueError(f"selection must be one of {SELECTIONS}")
        if (self.selection == "crc") != (self.crc is not None):
            raise ValueError("a CRC is required exactly when selection='crc'")
        for lv in self.levels:
            if lv.d < 1 or lv.t < 1 or lv.q < 1:
                raise ValueError(f"level parameters must be positive: {lv}")

    @property
    def k(self) -> int:
        return self.levels[0].d

    @classmethod
    def default(
        cls,
        m: int,
        r: int,
        k: int = 2,
        inner_decoders: int = 4,
        ratio: float = 1 / 8,
        selection: str = "crc",
        **kw,
    ) -> "SrpaConfig":
        """Defaults: ``q = ratio * 2**(m-i)``, ``t = floor((m-i)/2)``, ``k`` decoders
        at the top and ``inner_decoders`` at every deeper non-first-order level."""
        if r < 2:
            raise ValueError("sparse decoding needs r >= 2")
        levels = []
        for i in range(r - 1):
            mi = m - i
            q = min(max(1, round(ratio * (1 << mi))), (1 << mi) - 1)
            levels.append(LevelParams(d=k if i == 0 else inner_decoders, t=max(1, mi // 2), q=q))
        crc = kw.pop("crc", CRC3_GSM if selection == "crc" else None)
        return cls(tuple(levels), selection=selection, crc=crc, **kw)

    def validate(self, code: RmCode) -> None:
        if len(self.levels) != code.r - 1:
            raise ValueError(f"RM({code.m},{code.r}) needs {code.r - 1} level(s), got {len(self.levels)}")
        for i, lv in enumerate(self.levels):
            if lv.q > (1 << (code.m - i)) - 1:
                raise ValueError(f"level {i}: q={lv.q} exceeds {(1 << (code.m - i)) - 1}")
        if self.crc is not None and code.k <= self.crc.width:
            raise ValueError("code dimension too small to carry the CRC")

    def engine_levels(self) -> list[Level]:
        return [Level(iterations=lv.t, projections=lv.q, decoders=lv.d) for lv in self.levels]


def full_rpa_levels(m: int, r: int) -> tuple[LevelParams, ...]:
    """Level parameters describing full RPA without early stopping."""
    return tuple(LevelParams(d=1, t=max(1, (m - i) // 2), q=(1 << (m - i)) - 1) for i in range(r - 1))


def _plan_array(plan: SparsePlan, code: RmCode) -> np.ndarray:
    if plan.m != code.m:
        raise ValueError(f"plan is for m={plan.m}, code has m={code.m}")
    return np.asarray(plan.generators)


def srpa_single_decode(
    code: RmCode,
    L,
    plan: SparsePlan,
    cfg: SrpaConfig,
    budget: BudgetReport | None = None,
    rng: np.random.Generator | None = None,
    return_soft: bool = False,
):
    """One sparse decoder following ``plan`` at the top level.

    Deeper levels draw their own projections from ``rng`` and combine
    ``d_i`` decoders by correlation.
    """
    cfg.validate(code)
    L = np.asarray(L, dtype=float)
    if L.shape != (code.n,):
        raise ValueError(f"expected one LLR vector of length {code.n}")
    rng = rng if rng is not None else np.random.default_rng(cfg.master_seed)
    eng = _Engine(cfg.engine_levels(), rng)
    bits, soft = eng.iterate(L[None, :], code.r, 0, plan=_plan_array(plan, code))
    if budget is not None:
        budget += eng.budget
    return (bits[0], soft[0]) if return_soft else bits[0]


def crc_passes(code: RmCode, bits: np.ndarray, crc: CrcSpec) -> bool:
    try:
        msg = recover_message(code, bits)
    except NotACodewordError:
        return False
    return crc.check(msg)


def srpa_multi_decode(
    code: RmCode,
    L,
    cfg: SrpaConfig,
    budget: BudgetReport | None = None,
    rng: np.random.Generator | None = None,
    plans: list[SparsePlan] | None = None,
) -> tuple[np.ndarray, int]:
    """Run the ``k`` sparse decoders and return ``(codeword, chosen index)``.

    Fresh plans are drawn from ``rng`` (default: seeded by ``cfg.master_seed``)
    unless ``plans`` fixes the top-level plan of each decoder.
    """
    cfg.validate(code)
    L = np.asarray(L, dtype=float)
    if L.shape != (code.n,):
        raise ValueError(f"expected one LLR vector of length {code.n}")
    k = cfg.k
    rng = rng if rng is not None else np.random.default_rng(cfg.master_seed)
    eng = _Engine(cfg.engine_levels(), rng)
    if plans is None:
        bits, soft = eng.iterate(np.repeat(L[None, :], k, axis=0), code.r, 0)
    else:
        if len(plans) != k:
            raise ValueError(f"need {k} plans, got {len(plans)}")
        out = [eng.iterate(L[None, :], code.r, 0, plan=_plan_array(p, code)) for p in plans]
        bits = np.concatenate([b for b, _ in out])
        soft = np.concatenate([s for _, s in out])
    if budget is not None:
        budget += eng.budget

    scores = np.einsum("kn,n->k", soft, L) if cfg.soft_selection else None
    best = select_candidate(code, bits, L, cfg.crc if cfg.selection == "crc" else None, scores)
    return bits[best], best


def select_candidate(
    code: RmCode,
    candidates: np.ndarray,
    L: np.ndarray,
    crc: CrcSpec | None = None,
    scores: np.ndarray | None = None,
) -> int:
    """Index of the chosen candidate.

    Highest score wins (default score: bipolar correlation with ``L``), first
    index on ties.  With ``crc``, only candidates whose recovered message
    passes the check compete, unless none does.
    """
    if len(candidates) == 0:
        raise ValueError("no candidates to select from")
    scores = correlation(candidates, L) if scores is None else np.asarray(scores)
    pool = np.arange(len(candidates))
    if crc is not None:
        ok = np.array([crc_passes(code, c, crc) for c in candidates])
        if ok.any():
            pool = pool[ok]
    return int(pool[np.argmax(scores[pool])])


def budget_formula(code: RmCode, cfg: SrpaConfig | None = None) -> BudgetReport:
    """Predicted operation counts; ``cfg=None`` means full RPA without early stopping.

    With ``P_j = prod_{i<=j} d_i t_i q_i``: FHTs = ``P_{r-2}`` and
    projections = aggregations = ``sum_j P_j``.
    """
    if code.r < 2:
        raise ValueError("budget formula applies to codes of order r >= 2")
    levels = full_rpa_levels(code.m, code.r) if cfg is None else cfg.levels
    if len(levels) != code.r - 1:
        raise ValueError(f"RM({code.m},{code.r}) needs {code.r - 1} level(s)")
    prod = 1
    proj = 0
    for lv in levels:
        prod *= lv.d * lv.t * lv.q
        proj += prod
    return BudgetReport(fht_calls=prod, projections=proj, aggregations=proj)
