"""Command-line interface: ``rmrpa {encode,decode,simulate,budget,plot}``."""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

import numpy as np

from .budget import BudgetReport
from .crc3 import CRC3_GSM
from .harness.config import ConfigError, load_config
from .harness.output import completed_points, emit_results, read_csv, write_svg
from .harness.simulate import DecoderSpec, compare_budget, default_workers, run_sweep
from .rmcode import build_code, encode
from .rpa import RpaConfig, rpa_decode
from .srpa import SrpaConfig, srpa_multi_decode


def _bits(s: str) -> np.ndarray:
    s = re.sub(r"[\s,]", "", s)
    if not s or set(s) - {"0", "1"}:
        raise argparse.ArgumentTypeError("expected a string of 0/1 bits")
    return np.array([int(c) for c in s], dtype=np.uint8)


def _bitstr(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def read_llrs(path) -> np.ndarray:
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    return np.array([float(x) for x in re.split(r"[\s,]+", text.strip()) if x], dtype=float)


def cmd_encode(args) -> int:
    code = build_code(args.m, args.r)
    msg = args.message
    if args.crc:
        msg = CRC3_GSM.append(msg)
    if len(msg) != code.k:
        raise SystemExit(f"message must have {code.k - 3 if args.crc else code.k} bits, got {len(args.message)}")
    print(_bitstr(encode(code, msg)))
    return 0


def cmd_decode(args) -> int:
    code = build_code(args.m, args.r)
    L = read_llrs(args.llr_file)
    if len(L) != code.n:
        raise SystemExit(f"expected {code.n} LLRs, got {len(L)}")
    budget = BudgetReport()
    if args.decoder == "rpa":
        cw = rpa_decode(code, L, RpaConfig(epsilon=args.epsilon), budget)
    else:
        cfg = SrpaConfig.default(
            code.m, code.r, k=args.k, ratio=args.ratio,
            selection="crc" if args.crc else "most-likely", master_seed=args.seed,
        )
        cw, _ = srpa_multi_decode(code, L, cfg, budget)
    print(_bitstr(cw))
    if args.verbose:
        print(f"fht_calls={budget.fht_calls} projections={budget.projections}", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(
            args.config, seed=args.seed, output=args.output, max_trials=args.max_trials,
            min_block_errors=args.min_errors,
            ebn0_db=tuple(args.ebn0) if args.ebn0 else None,
        )
    except ConfigError as exc:
        raise SystemExit(f"config error: {exc}")
    out = cfg.output or "results.csv"
    skip = completed_points(out, cfg.m, cfg.r, cfg.seed) if args.resume else None
    res = run_sweep(cfg, workers=args.workers, skip=skip)
    if res.points:
        emit_results(res, out, "csv")
    for p in res.points:
        print(
            f"{p.decoder:>12} {p.ebn0_db:6.2f} dB  trials={p.trials:<7d} errors={p.errors:<6d} "
            f"BLER={p.bler:.3e} [{p.ci_low:.2e}, {p.ci_high:.2e}] FHT/decode={p.mean_fht:.1f}"
        )
    return 0


def cmd_budget(args) -> int:
    code = build_code(args.m, args.r)
    decoders = [
        DecoderSpec("rpa-full", "rpa", early_stopping=False),
        DecoderSpec(f"{args.k}-srpa", "srpa", decoders=args.k, inner_decoders=args.inner_decoders, ratio=args.ratio),
    ]
    rows = compare_budget(code, decoders, args.measure, args.ebn0, args.seed)
    print(f"RM({code.m},{code.r})")
    print(f"{'decoder':<12} {'predicted':>10} {'measured':>10} {'savings':>8}")
    for row in rows:
        meas = "-" if row.measured_fht is None else f"{row.measured_fht:.1f}"
        print(f"{row.decoder:<12} {row.predicted_fht:>10d} {meas:>10} {row.savings_pct:>7d}%")
    return 0


def cmd_plot(args) -> int:
    rows = read_csv(args.input)
    if not rows:
        raise SystemExit(f"{args.input}: no data rows")
    write_svg(rows, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rmrpa", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def code_args(sp):
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--r", type=int, required=True)

    sp = sub.add_parser("encode", help="encode a message")
    code_args(sp)
    sp.add_argument("message", type=_bits)
    sp.add_argument("--crc", action="store_true", help="append CRC-3 before encoding")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode an LLR vector read from a file ('-' for stdin)")
    code_args(sp)
    sp.add_argument("llr_file")
    sp.add_argument("--decoder", choices=["rpa", "srpa"], default="rpa")
    sp.add_argument("--epsilon", type=float, default=0.05)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--ratio", type=float, default=1 / 8)
    sp.add_argument("--crc", action="store_true", help="select SRPA candidates by CRC-3")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("simulate", help="run a BLER sweep from a YAML config")
    sp.add_argument("config")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=default_workers())
    sp.add_argument("--output")
    sp.add_argument("--max-trials", type=int)
    sp.add_argument("--min-errors", type=int)
    sp.add_argument("--ebn0", type=float, nargs="+")
    sp.add_argument("--resume", action="store_true", help="skip points already in the output csv")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("budget", help="FHT budget of k-SRPA against full RPA")
    code_args(sp)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--inner-decoders", type=int, default=4)
    sp.add_argument("--ratio", type=float, default=1 / 8)
    sp.add_argument("--measure", type=int, default=0, metavar="TRIALS")
    sp.add_argument("--ebn0", type=float, default=6.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_budget)

    sp = sub.add_parser("plot", help="render a results csv as an SVG chart")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
