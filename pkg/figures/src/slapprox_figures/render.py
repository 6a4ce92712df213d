"""Static figures from the measurement harness's CSV files.

Three figure kinds cover the three CSV consumers: density-column overlays
from the qualitative table, mean±std distance curves over the sample ladder
from aggregates, and grouped per-factor bars from multi-product aggregates.
Inputs are validated against the exact harness schemas; rendering never
mutates them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# stable ids inside SVG output so identical inputs render identical bytes
plt.rcParams["svg.hashsalt"] = "slapprox-figures"

DENSITY_HEADER = ("z", "kde", "sl", "gauss_mc", "beta_mc", "gauss_an", "beta_an")
AGGREGATES_HEADER = (
    "operator", "start", "n_samples", "l_factors", "approximant",
    "mean", "std", "reps", "rejections", "bias_gate_ok",
)

KINDS = ("density-overlay", "distance-curve", "multiproduct-bars")


class SchemaError(ValueError):
    """The input CSV does not match the harness schema the figure needs."""


class EmptyInputError(ValueError):
    """The input CSV has a header but no data rows."""


@dataclass(frozen=True)
class FigureSpec:
    """What to read, which figure to draw, and where to write it."""

    input_path: str
    kind: str
    output_path: str
    title: str | None = None


def _read_rows(path, expected_header) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path} is empty") from None
        if tuple(header) != tuple(expected_header):
            raise SchemaError(
                f"{path} header {header} does not match expected {list(expected_header)}"
            )
        rows = [dict(zip(header, row)) for row in reader]
    if not rows:
        raise EmptyInputError(f"{path} has no data rows")
    return rows


def _save(fig, spec: FigureSpec) -> None:
    Path(spec.output_path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output_path, metadata={"Date": None}
                if spec.output_path.endswith(".svg") else None)
    plt.close(fig)


def render_density_overlay(spec: FigureSpec) -> None:
    """One curve per populated density column over the grid."""
    rows = _read_rows(spec.input_path, DENSITY_HEADER)
    z = np.array([float(r["z"]) for r in rows])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in DENSITY_HEADER[1:]:
        values = [r[name] for r in rows]
        if all(v == "" for v in values):
            continue  # analytic columns stay empty for fusion runs
        ax.plot(z, np.array([float(v) for v in values]), label=name, linewidth=1.2)
    ax.set_xlabel("z")
    ax.set_ylabel("density")
    ax.set_title(spec.title or "density approximations")
    ax.legend()
    _save(fig, spec)


def _float(row, key):
    try:
        return float(row[key])
    except ValueError:
        raise SchemaError(f"column {key!r} holds non-numeric value {row[key]!r}") from None


def render_distance_curve(spec: FigureSpec) -> None:
    """Mean ± std distance per approximant over the sample ladder, log-10 x axis."""
    rows = _read_rows(spec.input_path, AGGREGATES_HEADER)
    starts = {r["start"] for r in rows}
    series: dict[str, list] = {}
    for r in rows:
        label = r["approximant"] if len(starts) == 1 else f"{r['approximant']} ({r['start']})"
        series.setdefault(label, []).append(
            (int(r["n_samples"]), _float(r, "mean"), _float(r, "std"))
        )
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label in sorted(series):
        points = sorted(series[label])
        n = [p[0] for p in points]
        mean = [p[1] for p in points]
        std = [p[2] for p in points]
        style = "o-" if len(points) > 1 else "o"
        ax.errorbar(n, mean, yerr=std, fmt=style, capsize=3, label=label)
    ax.set_xscale("log", base=10)
    ax.set_xlabel("MC samples N")
    ax.set_ylabel("integral distance to reference")
    ax.set_title(spec.title or "distance vs sample count")
    ax.legend()
    _save(fig, spec)


def render_multiproduct_bars(spec: FigureSpec) -> None:
    """Grouped bars of mean distance per factor count, std whiskers."""
    rows = _read_rows(spec.input_path, AGGREGATES_HEADER)
    if any(r["l_factors"] == "" for r in rows):
        raise SchemaError(f"{spec.input_path}: l_factors column must be populated")
    factors = sorted({int(r["l_factors"]) for r in rows})
    approximants = sorted({r["approximant"] for r in rows})
    fig, ax = plt.subplots(figsize=(7, 4.5))
    width = 0.8 / len(approximants)
    for i, name in enumerate(approximants):
        by_l = {int(r["l_factors"]): r for r in rows if r["approximant"] == name}
        mean = [_float(by_l[l], "mean") if l in by_l else 0.0 for l in factors]
        std = [_float(by_l[l], "std") if l in by_l else 0.0 for l in factors]
        offsets = [l + (i - (len(approximants) - 1) / 2) * width for l in factors]
        ax.bar(offsets, mean, width=width, yerr=std, capsize=3, label=name)
    ax.set_xticks(factors)
    ax.set_xlabel("number of factors L")
    ax.set_ylabel("mean integral distance")
    ax.set_title(spec.title or "distance vs factor count")
    ax.legend()
    _save(fig, spec)


_RENDERERS = {
    "density-overlay": render_density_overlay,
    "distance-curve": render_distance_curve,
    "multiproduct-bars": render_multiproduct_bars,
}


def render(spec: FigureSpec) -> None:
    """Dispatch to the renderer for ``spec.kind``."""
    if spec.kind not in _RENDERERS:
        raise ValueError(f"kind must be one of {KINDS}, got {spec.kind!r}")
    _RENDERERS[spec.kind](spec)
