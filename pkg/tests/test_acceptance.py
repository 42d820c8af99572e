"""Exit criteria for the package, one test per criterion.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
lists one PASS/FAIL line per criterion.  Criteria 5-7 are Monte-Carlo runs
of several minutes on a single core.
"""

import itertools
from pathlib import Path

import numpy as np
import pytest
import yaml

from rmrpa.bitspace import all_subspaces
from rmrpa.budget import BudgetReport
from rmrpa.channel import LLR_CLAMP, ChannelParams, ebn0_to_sigma, transmit
from rmrpa.cli import main as cli_main
from rmrpa.crc3 import crc_append, crc_check
from rmrpa.fhtdec import decode_first_order
from rmrpa.harness.simulate import DecoderSpec, SimConfig, compare_budget, run_sweep, trial_streams
from rmrpa.rmcode import all_codewords, build_code, codeword_mask, encode
from rmrpa.rpa import RpaConfig, boxplus, boxplus_literal, project_hard, rpa_decode
from rmrpa.srpa import SrpaConfig, budget_formula, srpa_multi_decode

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def criterion(record_property):
    def record(name, detail=""):
        record_property("criterion", name)
        record_property("detail", detail)

    return record


def _overlap(a, b):
    return a.ci_low <= b.ci_high and b.ci_low <= a.ci_high


def _not_worse(a, b):
    """``a.bler <= b.bler`` unless their confidence intervals overlap."""
    return a.bler <= b.bler or _overlap(a, b)


BUDGETS = [(7, 2, 381, 96, 75), (8, 2, 1020, 256, 75), (9, 2, 2044, 512, 75), (8, 3, 388620, 49152, 87)]


def test_c1_budget_exactness(criterion):
    criterion("C1 budget exactness, full rounds and 2-SRPA")
    got = []
    for m, r, full, sparse, pct in BUDGETS:
        code = build_code(m, r)
        cfg = SrpaConfig.default(m, r)
        rng = np.random.default_rng(m * 10 + r)
        cw = encode(code, crc_append(rng.integers(0, 2, code.k - 3)))
        L = transmit(cw, ChannelParams.awgn(ebn0_to_sigma(6.0, code.rate)), rng)

        measured_full, measured_sparse = BudgetReport(), BudgetReport()
        rpa_decode(code, L, RpaConfig(early_stopping=False), measured_full)
        srpa_multi_decode(code, L, cfg, measured_sparse, rng)
        rows = compare_budget(code, [DecoderSpec("full", "rpa"), DecoderSpec("2-srpa", "srpa")])

        got.append(
            (
                m, r,
                budget_formula(code).fht_calls, measured_full.fht_calls,
                budget_formula(code, cfg).fht_calls, measured_sparse.fht_calls,
                rows[1].savings_pct,
            )
        )
    expected = [(m, r, full, full, sparse, sparse, pct) for m, r, full, sparse, pct in BUDGETS]
    assert got == expected


def test_c2_rm73_discrepancy_documented(criterion):
    criterion("C2 RM(7,3) budget discrepancy documented")
    code = build_code(7, 3)
    assert budget_formula(code).fht_calls == 72009
    assert budget_formula(code, SrpaConfig.default(7, 3)).fht_calls == 9216
    readme = (ROOT / "README.md").read_text()
    for value in ("72009", "9216", "73728", "13824"):
        assert value in readme


def _closure_words(code, rng):
    if code.k <= 16:
        return all_codewords(code)
    # projection is linear, so checking the generator rows covers every codeword;
    # random codewords are added as a direct spot check
    return np.concatenate([code.generator, encode(code, rng.integers(0, 2, (4000, code.k)))])


def test_c3_projection_closure(criterion):
    criterion("C3 projection closure, m <= 5, r in {1,2,3}")
    rng = np.random.default_rng(3)
    checked = 0
    for m in range(1, 6):
        for r in (1, 2, 3):
            if r > m:
                continue
            code, sub = build_code(m, r), build_code(m - 1, r - 1)
            words = _closure_words(code, rng)
            for b in all_subspaces(m):
                assert codeword_mask(sub, project_hard(words, b)).all(), (m, r, b.generator)
                checked += len(words)
    assert checked > 0


def test_c4_fht_ml_equivalence(criterion):
    criterion("C4 FHT decoding equals brute-force ML, m <= 5")
    rng = np.random.default_rng(4)
    compared = 0
    for m in range(1, 6):
        code = build_code(m, 1)
        words = all_codewords(code)
        L = rng.normal(scale=2.0, size=(1000, code.n))
        corr = L @ (1.0 - 2.0 * words).T
        top2 = np.sort(corr, axis=1)[:, -2:]
        unique = top2[:, 1] - top2[:, 0] > 1e-9
        ml = words[np.argmax(corr, axis=1)]
        out = decode_first_order(code, L)
        assert (out[unique] == ml[unique]).all()
        compared += int(unique.sum())
    assert compared > 4500


def test_c5_near_ml_rm42(criterion):
    code = build_code(4, 2)
    words = all_codewords(code)
    bipolar = 1.0 - 2.0 * words
    ch = ChannelParams.awgn(ebn0_to_sigma(3.0, code.rate))
    trials, ml_err, rpa_err = 10_000, 0, 0
    for t in range(trials):
        rng, _ = trial_streams(5, 0, t)
        cw = encode(code, rng.integers(0, 2, code.k))
        L = transmit(cw, ch, rng)
        ml_err += int(np.any(words[np.argmax(bipolar @ L)] != cw))
        rpa_err += int(np.any(rpa_decode(code, L) != cw))
    from rmrpa.harness.simulate import binomial_ci

    lo, hi = binomial_ci(ml_err, trials)
    criterion("C5 near-ML on RM(4,2) at 3 dB", f"ML {ml_err}/{trials} CI [{lo:.4f},{hi:.4f}], RPA {rpa_err}/{trials}")
    assert lo <= rpa_err / trials <= hi


@pytest.mark.slow
def test_c6_sparsity_ordering(criterion):
    sparse = dict(kind="srpa", decoders=1, selection="most-likely")
    cfg = SimConfig(
        m=7, r=2, ebn0_db=(2.0,), seed=6, max_trials=10_000, min_block_errors=10**9, chunk_size=500,
        decoders=(
            DecoderSpec("rpa", "rpa"),
            DecoderSpec("sparse-1/2", ratio=1 / 2, **sparse),
            DecoderSpec("sparse-1/4", ratio=1 / 4, **sparse),
        ),
    )
    res = run_sweep(cfg, workers=1)
    full, half, quarter = (res.point(d.name, 2.0) for d in cfg.decoders)
    criterion(
        "C6 BLER ordering full <= q=n/2 <= q=n/4 on RM(7,2) at 2 dB",
        f"errors {full.errors}/{half.errors}/{quarter.errors} of {full.trials}",
    )
    assert full.trials == half.trials == quarter.trials == 10_000
    assert _not_worse(full, half) and _not_worse(half, quarter)


@pytest.mark.slow
def test_c7_multi_decoder_proximity(criterion):
    cfg = SimConfig(
        m=7, r=2, ebn0_db=(2.5,), seed=7, max_trials=30_000, min_block_errors=10**9, chunk_size=1000,
        rate_convention="payload",
        decoders=(
            DecoderSpec("rpa", "rpa"),
            DecoderSpec("2-srpa", "srpa", decoders=2, projections=(16,), iterations=(3,), selection="crc"),
            DecoderSpec("8-srpa", "srpa", decoders=8, projections=(16,), iterations=(3,), selection="crc"),
        ),
    )
    res = run_sweep(cfg, workers=1)
    rpa, two, eight = (res.point(d.name, 2.5) for d in cfg.decoders)
    criterion(
        "C7 2-SRPA <= 2x RPA and 8-SRPA <= 2-SRPA on RM(7,2) at 2.5 dB",
        f"errors rpa {rpa.errors}, 2-srpa {two.errors}, 8-srpa {eight.errors} of {rpa.trials}",
    )
    assert rpa.trials == two.trials == eight.trials == 30_000
    assert two.bler <= 2 * rpa.bler
    assert _not_worse(eight, two)


def test_c8_crc_properties(criterion):
    criterion("C8 CRC-3 append/check, single flips, bursts <= 3")
    rng = np.random.default_rng(8)
    payloads = [p for n in range(13) for p in itertools.product((0, 1), repeat=n)]
    payloads += [tuple(rng.integers(0, 2, n)) for n in range(13, 17) for _ in range(500)]
    for p in payloads:
        frame = crc_append(p)
        assert crc_check(frame)
    for length in range(3, 65):
        frame = crc_append(rng.integers(0, 2, length - 3))
        for start in range(length):
            for pattern in ([1], [1, 1], [1, 0, 1], [1, 1, 1]):
                if start + len(pattern) > length:
                    continue
                bad = frame.copy()
                bad[start : start + len(pattern)] ^= np.array(pattern, dtype=np.uint8)
                assert not crc_check(bad)


def test_c9_simulate_is_deterministic(criterion, tmp_path):
    criterion("C9 simulate csv byte-identical for 1 and 8 workers")
    doc = {
        "code": {"m": 6, "r": 2},
        "channel": {"kind": "awgn", "ebn0_db": [0.5, 1.5]},
        "stop": {"max_trials": 400, "min_block_errors": 15, "chunk_size": 40},
        "decoders": [{"name": "rpa", "kind": "rpa"}, {"name": "2-srpa", "kind": "srpa"}],
    }
    cfg = tmp_path / "sim.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    outputs = []
    for workers in (1, 8):
        out = tmp_path / f"w{workers}.csv"
        cli_main(["simulate", str(cfg), "--seed", "99", "--workers", str(workers), "--output", str(out)])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert len(outputs[0].splitlines()) == 5


def test_c10_boxplus_stability(criterion):
    rng = np.random.default_rng(10)
    a, b = rng.uniform(-30, 30, (2, 10**6))
    err = float(np.max(np.abs(boxplus(a, b) - boxplus_literal(a, b))))
    criterion("C10 stable box-plus vs literal formula", f"max abs diff {err:.2e}")
    assert err <= 1e-9
    edge = boxplus([LLR_CLAMP, LLR_CLAMP, -LLR_CLAMP, 0.0], [LLR_CLAMP, -LLR_CLAMP, -LLR_CLAMP, LLR_CLAMP])
    assert np.isfinite(edge).all()
