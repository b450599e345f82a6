"""Render figures from the sweep CSV outputs.

All figures aggregate over seeds with an arithmetic mean, shade a plus or
minus one standard deviation band where more than one seed is present, and
annotate the seed count. Rendering is read-only over its inputs and writes
the same bytes on every rerun of the same spec.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = ("convergence", "vs_n", "vs_delta")

_STYLE = {"figure.figsize": (6.4, 4.2), "figure.dpi": 120,
          "axes.grid": True, "grid.alpha": 0.3, "font.size": 10,
          "svg.hashsalt": "pawpcn-plots"}
_X_LABELS = {"convergence": "iteration",
             "vs_n": "number of antennas N",
             "vs_delta": "power split delta"}
_Y_LABEL = "sum rate [bits]"


class MissingColumnError(ValueError):
    """An input CSV lacks a column the figure needs."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    group_keys: tuple[str, ...] = ("protocol", "algo")

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"choose from {FIGURE_KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass(frozen=True)
class SeriesSummary:
    label: str
    n_seeds: int
    peak_x: float
    peak_y: float


@dataclass(frozen=True)
class RenderResult:
    output: Path
    series: tuple[SeriesSummary, ...] = field(default_factory=tuple)


def _read_csv(path: str, required: tuple[str, ...]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MissingColumnError(
                    f"missing column {column!r} in {path}")
        return list(reader)


def _group_label(row: dict, keys: tuple[str, ...]) -> str:
    return "/".join(row[k] for k in keys) if keys else "all"


def _mean_band(ax, x, mean, std, label):
    ax.plot(x, mean, marker="o", markersize=3, label=label)
    if np.any(std > 0):
        ax.fill_between(x, mean - std, mean + std, alpha=0.2)


def _sweep_series(spec: FigureSpec):
    """Per-group (x, mean, std, n_seeds) from a results.csv input."""
    required = ("value", "seed", "status", "sum_rate_bits") + spec.group_keys
    rows = [r for r in _read_csv(spec.inputs[0], required)
            if r["status"] == "ok"]
    groups: dict[str, dict[float, list[float]]] = {}
    for row in rows:
        label = _group_label(row, spec.group_keys)
        x = float(row["value"])
        groups.setdefault(label, {}).setdefault(x, []).append(
            float(row["sum_rate_bits"]))
    out = []
    for label in sorted(groups):
        by_x = groups[label]
        xs = np.array(sorted(by_x))
        mean = np.array([np.mean(by_x[x]) for x in xs])
        std = np.array([np.std(by_x[x]) for x in xs])
        n_seeds = max(len(v) for v in by_x.values())
        out.append((label, xs, mean, std, n_seeds))
    return out


def _convergence_series(spec: FigureSpec):
    """Per-group (iterations, mean, std, n_runs) from trace.csv, with an
    optional results.csv second input supplying the group labels."""
    rows = _read_csv(spec.inputs[0], ("run_id", "ao_iter", "sum_rate_bits"))
    labels: dict[str, str] = {}
    if len(spec.inputs) > 1:
        meta = _read_csv(spec.inputs[1], ("run_id",) + spec.group_keys)
        labels = {r["run_id"]: _group_label(r, spec.group_keys) for r in meta}
    traces: dict[str, dict[str, dict[int, float]]] = {}
    for row in rows:
        label = labels.get(row["run_id"], f"run {row['run_id']}"
                           if not labels else None)
        if label is None:
            continue  # trace rows without metadata are dropped with labels on
        traces.setdefault(label, {}).setdefault(row["run_id"], {})[
            int(row["ao_iter"])] = float(row["sum_rate_bits"])
    out = []
    for label in sorted(traces):
        runs = traces[label]
        iters = sorted({i for run in runs.values() for i in run})
        xs = np.array(iters, dtype=float)
        # runs may stop early; average each iteration over the runs present
        cols = [[run[i] for run in runs.values() if i in run] for i in iters]
        mean = np.array([np.mean(c) for c in cols])
        std = np.array([np.std(c) for c in cols])
        out.append((label, xs, mean, std, len(runs)))
    return out


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure; returns the output path and per-series peaks."""
    if spec.kind == "convergence":
        series = _convergence_series(spec)
    else:
        series = _sweep_series(spec)

    summaries = []
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        max_seeds = 0
        for label, xs, mean, std, n_seeds in series:
            if xs.size == 0:
                warnings.warn(f"series {label!r} has no data rows; skipped")
                continue
            _mean_band(ax, xs, mean, std, label)
            peak = int(np.argmax(mean))
            if spec.kind == "vs_delta":
                ax.plot(xs[peak], mean[peak], marker="*", markersize=14,
                        color="black", zorder=5)
                ax.annotate(f"max at {xs[peak]:g}",
                            (xs[peak], mean[peak]),
                            textcoords="offset points", xytext=(6, 6))
            summaries.append(SeriesSummary(label=label, n_seeds=n_seeds,
                                           peak_x=float(xs[peak]),
                                           peak_y=float(mean[peak])))
            max_seeds = max(max_seeds, n_seeds)
        if not summaries:
            warnings.warn(f"no plottable series for {spec.output}")
        ax.set_xlabel(_X_LABELS[spec.kind])
        ax.set_ylabel(_Y_LABEL)
        note = "runs" if spec.kind == "convergence" else "seeds"
        ax.set_title(f"{spec.kind} (mean over {max_seeds} {note}, "
                     "band: +/- 1 std dev)")
        if summaries:
            ax.legend()
        out = Path(spec.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, metadata=_no_timestamp_metadata(out))
        plt.close(fig)
    return RenderResult(output=out, series=tuple(summaries))


def _no_timestamp_metadata(path: Path) -> dict:
    """Strip the writer fields that vary between reruns."""
    if path.suffix.lower() == ".svg":
        return {"Date": None}
    return {"Software": None}
