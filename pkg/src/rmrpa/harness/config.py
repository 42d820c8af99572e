"""YAML sweep configuration.

Schema (every key except ``code`` and ``decoders`` is optional)::

    code: {m: 7, r: 2}
    channel:
      kind: awgn            # awgn | bsc | noiseless
      ebn0_db: [1.0, 2.0]
      crossover: null       # bsc only: explicit p per point
      rate_convention: auto # auto | code | payload
    stop: {max_trials: 10000, min_block_errors: 100, min_trials: 0, chunk_size: 250}
    decoders:
      - {name: rpa, kind: rpa, epsilon: 0.05}
      - {name: 2-srpa, kind: srpa, decoders: 2, ratio: 0.125, selection: crc}
    seed: 1
    output: results.csv
"""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path

import yaml

from .simulate import DecoderSpec, SimConfig

_DECODER_KEYS = {f.name for f in fields(DecoderSpec)}


class ConfigError(ValueError):
    pass


def parse_decoder(d: dict) -> DecoderSpec:
    unknown = set(d) - _DECODER_KEYS
    if unknown:
        raise ConfigError(f"unknown decoder keys: {sorted(unknown)}")
    if "name" not in d:
        raise ConfigError("every decoder needs a name")
    return DecoderSpec(**d)


def config_from_dict(doc: dict, **overrides) -> SimConfig:
    doc = doc or {}
    try:
        code = doc["code"]
        channel = doc.get("channel", {}) or {}
        stop = doc.get("stop", {}) or {}
        kw = dict(
            m=int(code["m"]),
            r=int(code["r"]),
            decoders=tuple(parse_decoder(d) for d in doc["decoders"]),
            ebn0_db=tuple(channel.get("ebn0_db", [])),
            channel=channel.get("kind", "awgn"),
            crossover=channel.get("crossover"),
            rate_convention=channel.get("rate_convention", "auto"),
            seed=doc.get("seed"),
            output=doc.get("output"),
            **{k: int(v) for k, v in stop.items()},
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed configuration: {exc!r}") from exc
    kw.update({k: v for k, v in overrides.items() if v is not None})
    if kw.get("seed") is None:
        raise ConfigError("a seed is required")
    kw["seed"] = int(kw["seed"])
    try:
        return SimConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, **overrides) -> SimConfig:
    return config_from_dict(yaml.safe_load(Path(path).read_text()), **overrides)
