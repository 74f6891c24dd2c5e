"""Render experiment result CSVs into per-policy mean-incentive charts.

Everything here works from the delimited files alone; no simulation code is
imported or re-run. Each chart plots the swept parameter against the mean
incentive per policy with standard-error bars, in a fixed color and marker
per policy so series are comparable across figures.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

RESULT_FIELDS = (
    "experiment", "seed", "n", "radius", "p", "v", "policy",
    "total_cost", "mean_incentive", "num_A", "iterations", "wall_time", "error",
)

# x-axis column and label per experiment id
EXPERIMENT_AXES = {
    "uniform_vs_targeted": ("n", "network size"),
    "size_sweep": ("n", "network size"),
    "connectivity": ("radius", "connection radius"),
    "variance": ("v", "payoff variance"),
}

POLICY_LABELS = {
    "rand": "rand",
    "deg": "deg",
    "iro": "IRO",
    "ipo": "IPO",
    "ime": "IME",
    "ipro": "IPRO",
    "opt": "opt",
    "uniform": "uniform",
}

POLICY_STYLE = {
    "rand": ("tab:gray", "x"),
    "deg": ("tab:orange", "s"),
    "iro": ("tab:green", "^"),
    "ipo": ("tab:red", "v"),
    "ime": ("tab:purple", "D"),
    "ipro": ("tab:blue", "o"),
    "opt": ("black", "*"),
    "uniform": ("tab:brown", "P"),
}


class SchemaError(ValueError):
    """The CSV does not match the expected result-row layout."""


@dataclass(frozen=True)
class SeriesPoint:
    x: float
    mean: float
    stderr: float
    count: int


def load_rows(csv_path: str | Path) -> list[dict]:
    """Read result rows, insisting on the full column set."""
    with open(csv_path, newline="") as handle:
        reader = csv.DictReader(handle)
        columns = reader.fieldnames or []
        missing = [field for field in RESULT_FIELDS if field not in columns]
        if missing:
            raise SchemaError(
                f"{csv_path}: missing columns: {', '.join(missing)}"
            )
        return list(reader)


def check_opt_dominance(rows: list[dict]) -> None:
    """When an opt column is present it must undercut every heuristic row-wise."""
    by_seed: dict[str, dict[str, float]] = defaultdict(dict)
    for row in rows:
        if row["error"]:
            continue
        by_seed[row["seed"]][row["policy"]] = float(row["total_cost"])
    for seed, costs in by_seed.items():
        if "opt" not in costs:
            continue
        for policy, cost in costs.items():
            if policy in ("opt", "uniform"):
                continue
            if costs["opt"] > cost:
                raise ValueError(
                    f"instance {seed}: opt cost {costs['opt']} exceeds "
                    f"{policy} cost {cost}"
                )


def aggregate(rows: list[dict], x_column: str) -> dict[str, list[SeriesPoint]]:
    """Group valid rows into per-policy series of (x, mean, stderr)."""
    buckets: dict[tuple[str, float], list[float]] = defaultdict(list)
    for row in rows:
        if row["error"]:
            continue
        buckets[(row["policy"], float(row[x_column]))].append(
            float(row["mean_incentive"])
        )
    series: dict[str, list[SeriesPoint]] = defaultdict(list)
    for (policy, x), values in sorted(buckets.items()):
        mean = sum(values) / len(values)
        if len(values) > 1:
            var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
            stderr = math.sqrt(var / len(values))
        else:
            stderr = 0.0
        series[policy].append(
            SeriesPoint(x=x, mean=mean, stderr=stderr, count=len(values))
        )
    return dict(series)


def plot_experiment(
    csv_path: str | Path, experiment: str, out_base: str | Path
) -> dict[str, list[SeriesPoint]]:
    """Render one experiment chart as PNG and SVG; returns the series drawn."""
    if experiment not in EXPERIMENT_AXES:
        raise ValueError(
            f"unknown experiment {experiment!r}; expected one of "
            f"{', '.join(EXPERIMENT_AXES)}"
        )
    rows = [row for row in load_rows(csv_path) if row["experiment"] == experiment]
    if not rows:
        raise SchemaError(f"{csv_path}: no rows for experiment {experiment!r}")
    check_opt_dominance(rows)
    x_column, x_label = EXPERIMENT_AXES[experiment]
    series = aggregate(rows, x_column)
    if not series:
        raise SchemaError(f"{csv_path}: no policies with valid rows")

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for policy in sorted(series, key=_policy_order):
        points = series[policy]
        color, marker = POLICY_STYLE.get(policy, ("tab:cyan", "."))
        ax.errorbar(
            [p.x for p in points],
            [p.mean for p in points],
            yerr=[p.stderr for p in points],
            label=POLICY_LABELS.get(policy, policy),
            color=color,
            marker=marker,
            capsize=3,
            linewidth=1.4,
            markersize=5,
        )
    ax.set_xlabel(x_label)
    ax.set_ylabel("mean incentive")
    ax.set_title(experiment.replace("_", " "))
    ax.legend(loc="best", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save_both(fig, out_base)
    plt.close(fig)
    return series


def _policy_order(policy: str) -> int:
    order = list(POLICY_STYLE)
    return order.index(policy) if policy in order else len(order)


def _save_both(fig, out_base: str | Path) -> tuple[Path, Path]:
    base = Path(out_base)
    if base.suffix in (".png", ".svg"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    png = base.with_suffix(".png")
    svg = base.with_suffix(".svg")
    fig.savefig(png, dpi=150)
    fig.savefig(svg)
    return png, svg


def plot_summary_table(
    csv_paths: list[str | Path], out_base: str | Path
) -> list[list[str]]:
    """Render a mean-incentive table (policies x experiments) as an image."""
    cells: dict[tuple[str, str], list[float]] = defaultdict(list)
    experiments: list[str] = []
    for path in csv_paths:
        for row in load_rows(path):
            if row["error"]:
                continue
            if row["experiment"] not in experiments:
                experiments.append(row["experiment"])
            cells[(row["policy"], row["experiment"])].append(
                float(row["mean_incentive"])
            )
    if not cells:
        raise SchemaError("no valid rows in any input CSV")
    policies = sorted({policy for policy, _ in cells}, key=_policy_order)
    table = [["policy"] + experiments]
    for policy in policies:
        row = [POLICY_LABELS.get(policy, policy)]
        for experiment in experiments:
            values = cells.get((policy, experiment))
            row.append(f"{sum(values) / len(values):.3f}" if values else "-")
        table.append(row)

    fig, ax = plt.subplots(
        figsize=(1.8 + 1.4 * len(experiments), 0.6 + 0.35 * len(policies))
    )
    ax.axis("off")
    rendered = ax.table(
        cellText=table[1:], colLabels=table[0], loc="center", cellLoc="center"
    )
    rendered.scale(1.0, 1.3)
    fig.tight_layout()
    _save_both(fig, out_base)
    plt.close(fig)
    return table
