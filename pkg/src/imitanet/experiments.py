"""Desk-scale experiment sweeps over random instances, with CSV output.

A sweep is a cartesian product of (n, connectivity, payoff variance)
settings; every instance gets one row per policy. Instance seeds derive from
(config seed, setting index, instance index), so runs reproduce byte for
byte regardless of the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import GenerationError, ImitanetError, InternalInvariantError
from .netgen import radius_for_mean_degree, random_control_instance
from .targeted import (
    TargetingPolicy,
    budgeted_control,
    exhaustive_optimal,
    targeted_control,
)
from .uniform import search_uniform_reward

EXPERIMENT_IDS = (
    "uniform_vs_targeted",
    "size_sweep",
    "connectivity",
    "variance",
    "table1",
)

HEURISTIC_POLICIES = ("rand", "deg", "iro", "ipo", "ime", "ipro")

RESULT_FIELDS = (
    "experiment",
    "seed",
    "n",
    "radius",
    "p",
    "v",
    "policy",
    "total_cost",
    "mean_incentive",
    "num_A",
    "iterations",
    "wall_time",
    "error",
)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_values: tuple[int, ...] = (20,)
    deg_exp_values: tuple[float, ...] | None = (4.0,)
    radius_values: tuple[float, ...] | None = None
    p: float = 1.0
    v_values: tuple[float, ...] = (0.5,)
    instances: int = 100
    policies: tuple[str, ...] = HEURISTIC_POLICIES
    seed: int = 0
    epsilon: float = 1e-9
    alpha: float = 1.0
    beta: float = 1.0
    budget: float | None = None
    timeout: float = 60.0
    timings: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_IDS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.instances < 1:
            raise ValueError("instances must be >= 1")
        if not self.n_values or not self.v_values or not self.policies:
            raise ValueError("parameter lists must be nonempty")
        if (self.deg_exp_values is None) == (self.radius_values is None):
            raise ValueError("specify exactly one of deg_exp_values or radius_values")


_DEFAULTS: dict[str, dict] = {
    "uniform_vs_targeted": dict(
        n_values=(10, 20, 30, 40), instances=100, policies=("uniform", "ipro")
    ),
    "size_sweep": dict(n_values=(10, 20, 30, 40), instances=100),
    "connectivity": dict(
        n_values=(20,),
        deg_exp_values=(2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0),
        instances=10,
        policies=HEURISTIC_POLICIES + ("opt",),
    ),
    "variance": dict(
        n_values=(20,), v_values=(0.1, 0.25, 0.5, 0.75, 1.0), instances=50
    ),
}


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    base = dict(_DEFAULTS.get(experiment, {}))
    base.update(overrides)
    return ExperimentConfig(experiment=experiment, **base)


def config_from_json(text: str) -> ExperimentConfig:
    payload = json.loads(text)
    experiment = payload.pop("experiment")
    for key in ("n_values", "deg_exp_values", "radius_values", "v_values", "policies"):
        if key in payload and payload[key] is not None:
            payload[key] = tuple(payload[key])
    return default_config(experiment, **payload)


@dataclass
class ResultRow:
    experiment: str
    seed: int
    n: int
    radius: float
    p: float
    v: float
    policy: str
    total_cost: float | None = None
    mean_incentive: float | None = None
    num_a: int | None = None
    iterations: int | None = None
    wall_time: float | None = None
    error: str = ""

    def as_csv_values(self) -> list:
        blank = lambda x: "" if x is None else x
        return [
            self.experiment, self.seed, self.n, self.radius, self.p, self.v,
            self.policy, blank(self.total_cost), blank(self.mean_incentive),
            blank(self.num_a), blank(self.iterations), blank(self.wall_time),
            self.error,
        ]


def _policy_for(name: str, config: ExperimentConfig, instance_seed: int) -> TargetingPolicy:
    if name == "rand":
        return TargetingPolicy("rand", seed=instance_seed)
    if name == "ipro":
        return TargetingPolicy("ipro", alpha=config.alpha, beta=config.beta)
    return TargetingPolicy(name)


def _instance_seed(config_seed: int, setting_index: int, instance_index: int) -> int:
    ss = np.random.SeedSequence([config_seed, setting_index, instance_index])
    return int(ss.generate_state(1, np.uint64)[0] >> 1)


def _run_one_policy(
    game, x0, policy_name, config: ExperimentConfig, instance_seed: int
) -> tuple[float, int, int]:
    """Returns (total_cost, num_A, iterations) for one policy run."""
    deadline = (
        time.monotonic() + config.timeout if config.timeout > 0 else None
    )
    if policy_name == "uniform":
        found = search_uniform_reward(game, x0)
        return found.r0_star * game.n, game.n, found.simulations
    if policy_name == "opt":
        outcome = exhaustive_optimal(game, x0, config.epsilon, deadline=deadline)
        return outcome.total_cost, outcome.num_a, outcome.iterations
    policy = _policy_for(policy_name, config, instance_seed)
    if config.budget is not None:
        outcome = budgeted_control(game, x0, policy, config.budget, config.epsilon)
    else:
        outcome = targeted_control(game, x0, policy, config.epsilon)
    return outcome.total_cost, outcome.num_a, outcome.iterations


def _run_instance(task: tuple) -> tuple[list[ResultRow], dict]:
    config, experiment, setting_index, instance_index, n, radius, v = task
    seed = _instance_seed(config.seed, setting_index, instance_index)
    rows: list[ResultRow] = []
    base = dict(
        experiment=experiment, seed=seed, n=n, radius=radius, p=config.p, v=v
    )
    try:
        game, x0, meta = random_control_instance(
            n, radius=radius, p=config.p, v=v, seed=seed
        )
    except GenerationError as exc:
        for policy_name in config.policies:
            rows.append(ResultRow(policy=policy_name, error=str(exc), **base))
        return rows, {"seed": seed, "components": None}
    costs: dict[str, float] = {}
    for policy_name in config.policies:
        started = time.perf_counter()
        try:
            total, num_a, iterations = _run_one_policy(
                game, x0, policy_name, config, seed
            )
        except TimeoutError:
            rows.append(ResultRow(policy=policy_name, error="timeout", **base))
            continue
        except ImitanetError as exc:
            rows.append(ResultRow(policy=policy_name, error=str(exc), **base))
            continue
        elapsed = time.perf_counter() - started
        costs[policy_name] = total
        rows.append(
            ResultRow(
                policy=policy_name,
                total_cost=total,
                mean_incentive=total / n,
                num_a=num_a,
                iterations=iterations,
                wall_time=round(elapsed, 6) if config.timings else None,
                **base,
            )
        )
    if "opt" in costs:
        for policy_name, cost in costs.items():
            if policy_name in ("opt", "uniform"):
                continue
            if costs["opt"] > cost:
                raise InternalInvariantError(
                    f"exhaustive cost {costs['opt']!r} exceeds "
                    f"{policy_name} cost {cost!r} on instance seed={seed}"
                )
    return rows, {"seed": seed, "components": meta["components"]}


def _settings(config: ExperimentConfig) -> list[tuple[int, float, float]]:
    out = []
    for n in config.n_values:
        if config.radius_values is not None:
            radii = config.radius_values
        else:
            radii = tuple(
                radius_for_mean_degree(n, d) for d in config.deg_exp_values
            )
        for radius in radii:
            for v in config.v_values:
                out.append((n, radius, v))
    return out


def run_experiment(config: ExperimentConfig) -> tuple[list[ResultRow], dict]:
    """Run all instances of a sweep; returns rows plus run metadata.

    The table1 experiment expands into the three sweeps its summary columns
    aggregate. Rows come back in deterministic (setting, instance, policy)
    order; metadata records component counts per instance.
    """
    if config.experiment == "table1":
        rows: list[ResultRow] = []
        meta = {"experiments": []}
        for sub in ("size_sweep", "connectivity", "variance"):
            sub_config = default_config(
                sub,
                seed=config.seed,
                epsilon=config.epsilon,
                instances=config.instances,
                timeout=config.timeout,
                timings=config.timings,
            )
            sub_rows, sub_meta = run_experiment(sub_config)
            rows.extend(sub_rows)
            meta["experiments"].append(sub_meta)
        return rows, meta

    settings = _settings(config)
    tasks = [
        (config, config.experiment, si, ii, n, radius, v)
        for si, (n, radius, v) in enumerate(settings)
        for ii in range(config.instances)
    ]
    workers = int(os.environ.get("IMITANET_THREADS", "1"))
    results: list[tuple[list[ResultRow], dict]] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance, tasks, chunksize=1))
    else:
        results = [_run_instance(task) for task in tasks]
    rows = [row for instance_rows, _ in results for row in instance_rows]
    meta = {
        "experiment": config.experiment,
        "settings": [
            {"n": n, "radius": radius, "v": v} for n, radius, v in settings
        ],
        "instances": [info for _, info in results],
    }
    return rows, meta


def rows_to_csv(rows: list[ResultRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RESULT_FIELDS)
    for row in rows:
        writer.writerow(row.as_csv_values())
    return buffer.getvalue()


def rows_from_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    missing = [f for f in RESULT_FIELDS if f not in (reader.fieldnames or [])]
    if missing:
        raise ValueError(f"CSV is missing columns: {', '.join(missing)}")
    return list(reader)


@dataclass(frozen=True)
class SummaryCell:
    experiment: str
    policy: str
    mean: float
    stderr: float
    count: int
    excluded: int


def summarize(rows: list[dict]) -> list[SummaryCell]:
    """Mean and standard error of mean_incentive per (experiment, policy)."""
    if not rows:
        raise ValueError("no rows to summarize")
    groups: dict[tuple[str, str], list[float]] = {}
    excluded: dict[tuple[str, str], int] = {}
    for row in rows:
        key = (row["experiment"], row["policy"])
        if row.get("error"):
            excluded[key] = excluded.get(key, 0) + 1
            continue
        groups.setdefault(key, []).append(float(row["mean_incentive"]))
        excluded.setdefault(key, 0)
    cells = []
    for key in sorted(groups):
        values = np.asarray(groups[key])
        stderr = (
            float(values.std(ddof=1) / np.sqrt(len(values)))
            if len(values) > 1
            else 0.0
        )
        cells.append(
            SummaryCell(
                experiment=key[0],
                policy=key[1],
                mean=float(values.mean()),
                stderr=stderr,
                count=len(values),
                excluded=excluded.get(key, 0),
            )
        )
    return cells


def summary_to_csv(cells: list[SummaryCell]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["experiment", "policy", "mean_incentive", "stderr", "count", "excluded"])
    for cell in cells:
        writer.writerow(
            [cell.experiment, cell.policy, cell.mean, cell.stderr, cell.count, cell.excluded]
        )
    return buffer.getvalue()


def summary_text(cells: list[SummaryCell]) -> str:
    """Aligned text table, policies as rows and experiments as columns."""
    experiments = sorted({c.experiment for c in cells})
    policies = sorted({c.policy for c in cells})
    by_key = {(c.experiment, c.policy): c for c in cells}
    width = max(12, *(len(e) + 2 for e in experiments))
    header = "policy".ljust(10) + "".join(e.rjust(width) for e in experiments)
    lines = [header]
    for policy in policies:
        line = policy.ljust(10)
        for experiment in experiments:
            cell = by_key.get((experiment, policy))
            line += (
                f"{cell.mean:.4f}±{cell.stderr:.4f}".rjust(width)
                if cell
                else "-".rjust(width)
            )
        lines.append(line)
    return "\n".join(lines) + "\n"
