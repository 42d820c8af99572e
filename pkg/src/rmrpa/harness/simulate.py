"""Monte-Carlo block-error-rate simulation."""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.special import ndtr
from scipy.stats import beta

from ..budget import BudgetReport
from ..channel import ChannelParams, ebn0_to_sigma, transmit
from ..crc3 import CRC3_GSM
from ..rmcode import RmCode, build_code, encode
from ..rpa import RpaConfig, rpa_decode
from ..srpa import LevelParams, SparsePlan, SrpaConfig, budget_formula, sample_plan, srpa_multi_decode

log = logging.getLogger(__name__)

WORKERS_ENV = "RMRPA_WORKERS"
RATE_CONVENTIONS = ("auto", "code", "payload")


def default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


@dataclass(frozen=True)
class DecoderSpec:
    """A decoder under test.

    ``kind="rpa"`` uses ``epsilon``/``early_stopping``/``normalization``;
    ``kind="srpa"`` uses the remaining fields.  ``projections`` and
    ``iterations`` override the per-level defaults derived from ``ratio``.
    """

    name: str
    kind: str = "rpa"
    epsilon: float = 0.05
    early_stopping: bool = True
    normalization: str = "n"
    decoders: int = 2
    inner_decoders: int = 4
    ratio: float = 1 / 8
    projections: tuple[int, ...] | None = None
    iterations: tuple[int, ...] | None = None
    selection: str = "crc"
    soft_selection: bool = False
    freeze_plans: bool = False

    def __post_init__(self):
        if self.kind not in ("rpa", "srpa"):
            raise ValueError(f"unknown decoder kind {self.kind!r}")
        for name in ("projections", "iterations"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, tuple):
                object.__setattr__(self, name, tuple(int(x) for x in v))

    @property
    def uses_crc(self) -> bool:
        return self.kind == "srpa" and self.selection == "crc"

    def rpa_config(self) -> RpaConfig:
        return RpaConfig(self.epsilon, self.early_stopping, self.normalization)

    def srpa_config(self, m: int, r: int, seed: int = 0) -> SrpaConfig:
        base = SrpaConfig.default(
            m, r, k=self.decoders, inner_decoders=self.inner_decoders, ratio=self.ratio,
            selection=self.selection, soft_selection=self.soft_selection,
            freeze_plans=self.freeze_plans, master_seed=seed,
        )
        levels = list(base.levels)
        for i, lv in enumerate(levels):
            q = self.projections[i] if self.projections and i < len(self.projections) else lv.q
            t = self.iterations[i] if self.iterations and i < len(self.iterations) else lv.t
            levels[i] = LevelParams(lv.d, t, q)
        return replace(base, levels=tuple(levels))

    def predicted_budget(self, code: RmCode) -> BudgetReport:
        if self.kind == "rpa":
            return budget_formula(code)
        return budget_formula(code, self.srpa_config(code.m, code.r))


def make_decoder(spec: DecoderSpec, code: RmCode, seed: int = 0) -> Callable:
    """``decode(L, rng, budget) -> bits`` for one LLR vector."""
    if spec.kind == "rpa":
        cfg = spec.rpa_config()
        return lambda L, rng, budget: rpa_decode(code, L, cfg, budget)
    cfg = spec.srpa_config(code.m, code.r, seed)
    cfg.validate(code)
    plans = None
    if cfg.freeze_plans:
        plan_rng = np.random.default_rng(seed)
        lv = cfg.levels[0]
        plans = [sample_plan(code.m, lv.q, lv.t, plan_rng) for _ in range(lv.d)]
    return lambda L, rng, budget: srpa_multi_decode(code, L, cfg, budget, rng, plans)[0]


@dataclass(frozen=True)
class SimConfig:
    m: int
    r: int
    decoders: tuple[DecoderSpec, ...]
    ebn0_db: tuple[float, ...]
    seed: int
    channel: str = "awgn"
    crossover: tuple[float, ...] | None = None
    max_trials: int = 10_000
    min_block_errors: int = 100
    min_trials: int = 0
    chunk_size: int = 250
    rate_convention: str = "auto"
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db", tuple(float(x) for x in self.ebn0_db))
        object.__setattr__(self, "decoders", tuple(self.decoders))
        if not self.ebn0_db:
            raise ValueError("ebn0_db must be non-empty")
        if not self.decoders:
            raise ValueError("at least one decoder is required")
        if len({d.name for d in self.decoders}) != len(self.decoders):
            raise ValueError("decoder names must be unique")
        if self.max_trials < 1 or self.min_block_errors < 1 or self.chunk_size < 1:
            raise ValueError("max_trials, min_block_errors and chunk_size must be >= 1")
        if self.rate_convention not in RATE_CONVENTIONS:
            raise ValueError(f"rate_convention must be one of {RATE_CONVENTIONS}")
        if self.channel not in ("awgn", "bsc", "noiseless"):
            raise ValueError(f"unknown channel {self.channel!r}")
        if self.crossover is not None:
            object.__setattr__(self, "crossover", tuple(float(p) for p in self.crossover))
            if len(self.crossover) != len(self.ebn0_db):
                raise ValueError("crossover list must match ebn0_db in length")
        code = build_code(self.m, self.r)
        if self.r < 2:
            raise ValueError("simulation supports codes of order r >= 2")
        for d in self.decoders:
            if d.kind == "srpa":
                d.srpa_config(self.m, self.r).validate(code)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["decoders"] = [asdict(x) for x in self.decoders]
        return d


@dataclass
class PointResult:
    decoder: str
    ebn0_db: float
    trials: int
    errors: int
    budget: BudgetReport
    wall_time: float
    ci_low: float = field(init=False)
    ci_high: float = field(init=False)

    def __post_init__(self):
        self.ci_low, self.ci_high = binomial_ci(self.errors, self.trials)

    @property
    def bler(self) -> float:
        return self.errors / self.trials

    @property
    def mean_fht(self) -> float:
        return self.budget.fht_calls / self.trials


@dataclass
class SweepResult:
    config: SimConfig
    points: list[PointResult]

    def point(self, decoder: str, ebn0_db: float) -> PointResult:
        for p in self.points:
            if p.decoder == decoder and p.ebn0_db == ebn0_db:
                return p
        raise KeyError((decoder, ebn0_db))


def binomial_ci(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval."""
    a = (1 - level) / 2
    lo = 0.0 if errors == 0 else float(beta.ppf(a, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(beta.ppf(1 - a, errors + 1, trials - errors))
    return lo, hi


def trial_streams(seed: int, point: int, trial: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (channel, decoder) generators for one trial."""
    ss = np.random.SeedSequence(seed, spawn_key=(point, trial))
    a, b = ss.spawn(2)
    return np.random.default_rng(a), np.random.default_rng(b)


def _rate(cfg: SimConfig, spec: DecoderSpec, code: RmCode) -> float:
    conv = cfg.rate_convention
    if conv == "auto":
        conv = "payload" if spec.uses_crc else "code"
    return (code.k - CRC3_GSM.width) / code.n if conv == "payload" else code.rate


def channel_for(cfg: SimConfig, spec: DecoderSpec, point: int) -> ChannelParams:
    code = build_code(cfg.m, cfg.r)
    if cfg.channel == "noiseless":
        return ChannelParams("noiseless")
    if cfg.channel == "bsc" and cfg.crossover is not None:
        return ChannelParams.bsc(cfg.crossover[point])
    sigma = ebn0_to_sigma(cfg.ebn0_db[point], _rate(cfg, spec, code))
    if cfg.channel == "bsc":
        return ChannelParams.bsc(float(ndtr(-1.0 / sigma)))
    return ChannelParams.awgn(sigma)


def draw_message(code: RmCode, rng: np.random.Generator, with_crc: bool) -> np.ndarray:
    msg = rng.integers(0, 2, code.k, dtype=np.uint8)
    if with_crc:
        msg = CRC3_GSM.append(msg[: code.k - CRC3_GSM.width])
    return msg


def run_chunk(cfg: SimConfig, dec: int, point: int, start: int, stop: int) -> tuple[int, int, BudgetReport]:
    """Trials ``[start, stop)`` of one (decoder, point); returns (trials, errors, budget)."""
    code = build_code(cfg.m, cfg.r)
    spec = cfg.decoders[dec]
    decode = make_decoder(spec, code, cfg.seed + dec)
    ch = channel_for(cfg, spec, point)
    budget = BudgetReport()
    errors = 0
    for trial in range(start, stop):
        chan_rng, dec_rng = trial_streams(cfg.seed, point, trial)
        cw = encode(code, draw_message(code, chan_rng, spec.uses_crc))
        L = transmit(cw, ch, chan_rng)
        errors += int(np.any(decode(L, dec_rng, budget) != cw))
    return stop - start, errors, budget


def _done(cfg: SimConfig, trials: int, errors: int) -> bool:
    if trials >= cfg.max_trials:
        return True
    return trials >= cfg.min_trials and errors >= cfg.min_block_errors


def run_point(cfg: SimConfig, dec: int, point: int, pool: ProcessPoolExecutor | None = None, workers: int = 1) -> PointResult:
    t0 = time.perf_counter()
    trials = errors = 0
    budget = BudgetReport()
    nxt = 0
    while not _done(cfg, trials, errors):
        wave = []
        for _ in range(workers):
            if nxt >= cfg.max_trials:
                break
            end = min(nxt + cfg.chunk_size, cfg.max_trials)
            wave.append((nxt, end))
            nxt = end
        if pool is None:
            results = (run_chunk(cfg, dec, point, a, b) for a, b in wave)
        else:
            futs = [pool.submit(run_chunk, cfg, dec, point, a, b) for a, b in wave]
            results = (f.result() for f in futs)
        # accumulate in chunk order and stop at the first boundary that satisfies the rule
        for n_t, n_e, b in results:
            if _done(cfg, trials, errors):
                break
            trials += n_t
            errors += n_e
            budget += b
    spec = cfg.decoders[dec]
    res = PointResult(spec.name, cfg.ebn0_db[point], trials, errors, budget, time.perf_counter() - t0)
    log.info("%s @ %.2f dB: %d/%d errors (BLER %.3g)", spec.name, res.ebn0_db, errors, trials, res.bler)
    return res


def run_sweep(cfg: SimConfig, workers: int | None = None, skip: set | None = None) -> SweepResult:
    """Simulate every (decoder, Eb/N0) pair; ``skip`` holds pairs to leave out."""
    workers = default_workers() if workers is None else max(1, int(workers))
    points = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for dec, spec in enumerate(cfg.decoders):
            for p, ebn0 in enumerate(cfg.ebn0_db):
                if skip and (spec.name, ebn0) in skip:
                    continue
                points.append(run_point(cfg, dec, p, pool, workers))
    finally:
        if pool is not None:
            pool.shutdown()
    return SweepResult(cfg, points)


@dataclass
class BudgetRow:
    decoder: str
    predicted_fht: int
    measured_fht: float | None
    savings_pct: int


def compare_budget(
    code: RmCode,
    decoders: list[DecoderSpec],
    measure_trials: int = 0,
    ebn0_db: float = 6.0,
    seed: int = 0,
) -> list[BudgetRow]:
    """FHT budgets against full RPA without early stopping.

    With ``measure_trials > 0`` each decoder is also run that many times at
    ``ebn0_db`` and the mean instrumented FHT count is reported.
    """
    full = budget_formula(code).fht_calls
    rows = []
    for dec, spec in enumerate(decoders):
        predicted = spec.predicted_budget(code).fht_calls
        measured = None
        if measure_trials > 0:
            decode = make_decoder(spec, code, seed + dec)
            ch = ChannelParams.awgn(ebn0_to_sigma(ebn0_db, code.rate))
            budget = BudgetReport()
            for trial in range(measure_trials):
                chan_rng, dec_rng = trial_streams(seed, 0, trial)
                cw = encode(code, draw_message(code, chan_rng, spec.uses_crc))
                decode(transmit(cw, ch, chan_rng), dec_rng, budget)
            measured = budget.fht_calls / measure_trials
        rows.append(BudgetRow(spec.name, predicted, measured, round(100 * (1 - predicted / full))))
    return rows
