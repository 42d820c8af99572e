"""CSV persistence and SVG BLER charts."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from pathlib import Path
from xml.sax.saxutils import escape

import yaml

from .simulate import SweepResult

CSV_COLUMNS = (
    "code_m", "code_r", "decoder", "ebn0_db", "trials", "errors",
    "bler", "ci_low", "ci_high", "mean_fht", "seed",
)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def result_rows(res: SweepResult) -> list[dict]:
    cfg = res.config
    return [
        {
            "code_m": cfg.m,
            "code_r": cfg.r,
            "decoder": p.decoder,
            "ebn0_db": _fmt(p.ebn0_db),
            "trials": p.trials,
            "errors": p.errors,
            "bler": _fmt(p.bler),
            "ci_low": _fmt(p.ci_low),
            "ci_high": _fmt(p.ci_high),
            "mean_fht": _fmt(p.mean_fht),
            "seed": cfg.seed,
        }
        for p in res.points
    ]


def write_csv(res: SweepResult, path) -> Path:
    """Append the sweep's rows, writing the header only to a new or empty file.

    A sidecar ``<path>.config.yaml`` records the configuration that produced them.
    """
    if not res.points:
        raise ValueError("no results to write")
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        if fresh:
            w.writeheader()
        w.writerows(result_rows(res))
    sidecar = path.with_name(path.name + ".config.yaml")
    sidecar.write_text(yaml.safe_dump(res.config.as_dict(), sort_keys=True))
    return path


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and tuple(rows[0].keys()) != CSV_COLUMNS:
        raise ValueError(f"{path}: unexpected columns {list(rows[0].keys())}")
    return rows


def completed_points(path, m: int, r: int, seed: int) -> set[tuple[str, float]]:
    """``(decoder, ebn0_db)`` pairs already present in a results file."""
    path = Path(path)
    if not path.exists() or path.stat().st_size == 0:
        return set()
    return {
        (row["decoder"], float(row["ebn0_db"]))
        for row in read_csv(path)
        if int(row["code_m"]) == m and int(row["code_r"]) == r and int(row["seed"]) == seed
    }


def write_svg(rows: list[dict], path, width: int = 640, height: int = 440) -> Path:
    """Log-scale BLER against Eb/N0, one polyline per (code, decoder).

    Zero-error points are drawn on the bottom edge of the plot.
    """
    if not rows:
        raise ValueError("no results to plot")
    series: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for row in rows:
        label = f"RM({row['code_m']},{row['code_r']}) {row['decoder']}"
        series[label].append((float(row["ebn0_db"]), float(row["bler"])))

    xs = [x for pts in series.values() for x, _ in pts]
    positive = [y for pts in series.values() for _, y in pts if y > 0]
    x0, x1 = min(xs), max(xs)
    if x0 == x1:
        x0, x1 = x0 - 0.5, x1 + 0.5
    y1 = 0 if not positive else math.ceil(math.log10(max(positive)))
    y0 = y1 - 1 if not positive else min(math.floor(math.log10(min(positive))), y1 - 1)

    left, right, top, bottom = 70, 170, 20, 50
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        ly = y0 if y <= 0 else max(math.log10(y), y0)
        return top + (y1 - ly) / (y1 - y0) * ph

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for e in range(y0, y1 + 1):
        y = top + (y1 - e) / (y1 - y0) * ph
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    for x in sorted(set(xs)):
        out.append(f'<text x="{px(x):.2f}" y="{top + ph + 16}" text-anchor="middle">{_fmt(x)}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">Eb/N0 [dB]</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2}" text-anchor="middle" transform="rotate(-90 16 {top + ph / 2})">BLER</text>'
    )
    for i, (label, pts) in enumerate(series.items()):
        color = palette[i % len(palette)]
        pts = sorted(pts)
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = top + 14 + 16 * i
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" stroke="{color}"/>')
        out.append(f'<text x="{left + pw + 34}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(out) + "\n")
    return path


def emit_results(res: SweepResult, path, fmt: str = "csv") -> Path:
    if not res.points:
        raise ValueError("no results to emit")
    if fmt == "csv":
        return write_csv(res, path)
    if fmt == "svg":
        return write_svg(result_rows(res), path)
    raise ValueError(f"unknown format {fmt!r}")
