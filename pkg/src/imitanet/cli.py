"""Command-line interface: gen, simulate, uniform, target, verify, experiment, summarize."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments, netgen, verify
from .dynamics import (
    IMITATION,
    RandomUniform,
    RoundRobin,
    relax_switchers_only,
    simulate,
)
from .errors import ImitanetError
from .game import RewardVector, game_from_json, game_to_json, state_letters
from .netgen import child_rng
from .targeted import (
    TargetingPolicy,
    budgeted_control,
    exhaustive_optimal,
    targeted_control,
)
from .uniform import search_uniform_reward


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_game(path: str):
    return game_from_json(Path(path).read_text())


def cmd_gen(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    radius = args.radius
    for index in range(args.count):
        game, x0, meta = netgen.random_control_instance(
            args.n,
            deg_exp=None if radius is not None else args.deg_exp,
            radius=radius,
            p=args.p,
            v=args.v,
            seed=_derived_seed(args.seed, index),
            require_connected=args.require_connected,
        )
        path = out_dir / f"game_{index:03d}.json"
        path.write_text(game_to_json(game, x0) + "\n")
        print(
            json.dumps(
                {
                    "path": str(path),
                    "n": game.n,
                    "edges": len(game.graph.edges),
                    "components": meta["components"],
                }
            )
        )
    return 0


def _derived_seed(seed: int, index: int) -> int:
    return int(
        np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0] >> 1
    )


def cmd_simulate(args) -> int:
    game, x0 = _load_game(args.game)
    sequence = (
        RoundRobin() if args.sequence == "roundrobin" else RandomUniform(args.seed)
    )
    traj = simulate(
        IMITATION, game, x0, sequence, max_activations=args.max_activations
    )
    _write_output(traj.to_jsonl(), args.out)
    if args.out:
        print(
            json.dumps(
                {
                    "converged": traj.converged,
                    "switches": len(traj.events),
                    "final": state_letters(traj.final),
                }
            )
        )
    return 0


def cmd_uniform(args) -> int:
    game, x0 = _load_game(args.game)
    if args.pre_relax:
        x0 = relax_switchers_only(IMITATION, game, x0)
    found = search_uniform_reward(game, x0)
    payload = {
        "r0_star": found.r0_star,
        "candidates": found.candidates,
        "simulations": found.simulations,
    }
    _write_output(json.dumps(payload) + "\n", args.out)
    return 0


def cmd_target(args) -> int:
    game, x0 = _load_game(args.game)
    if args.pre_relax:
        x0 = relax_switchers_only(IMITATION, game, x0)
    if args.policy == "opt":
        outcome = exhaustive_optimal(game, x0, args.epsilon)
    else:
        policy = TargetingPolicy(
            args.policy, alpha=args.alpha, beta=args.beta, seed=args.seed
        )
        if args.budget is not None:
            outcome = budgeted_control(game, x0, policy, args.budget, args.epsilon)
        else:
            outcome = targeted_control(game, x0, policy, args.epsilon)
    _write_output(json.dumps(outcome.to_json_dict()) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    suites = (
        ["acoord", "monotone", "unique", "candidates"]
        if args.suite == "all"
        else [args.suite]
    )
    report: dict = {"suites": {}, "passed": True}
    rng = child_rng(args.seed)
    for suite in suites:
        suite_reports = []
        for index in range(args.instances):
            seed = _derived_seed(args.seed, index)
            n = int(rng.integers(args.n_min, args.n_max + 1))
            game, x0 = netgen.random_theory_instance(
                n,
                deg_exp=args.deg_exp,
                p=args.p,
                v=args.v,
                seed=seed,
                forbid_all_b_components=(suite == "candidates"),
            )
            if suite == "acoord":
                result = verify.check_a_coordinating(
                    IMITATION, game, samples=args.samples, rng=child_rng(seed, 1),
                    exhaustive=n <= 4,
                )
            elif suite in ("monotone", "unique"):
                reward_rng = child_rng(seed, 2)
                rewards = _random_rewards(game.n, reward_rng)
                check = (
                    verify.check_a_monotone
                    if suite == "monotone"
                    else verify.check_unique_convergence
                )
                result = check(
                    game, x0, rewards, sequences=args.sequences, rng=child_rng(seed, 3)
                )
            else:
                result = verify.check_candidate_membership(game, x0)
            entry = result.to_json_dict()
            entry["instance_seed"] = seed
            suite_reports.append(entry)
            if not result.passed:
                report["passed"] = False
        report["suites"][suite] = suite_reports
    _write_output(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["passed"] else 1


def _random_rewards(n: int, rng: np.random.Generator) -> RewardVector:
    values = tuple(
        float(rng.uniform(0.0, 1.0)) if rng.random() < 0.5 else 0.0 for _ in range(n)
    )
    return RewardVector(values)


def cmd_experiment(args) -> int:
    if args.config:
        config = experiments.config_from_json(Path(args.config).read_text())
    else:
        overrides: dict = {}
        if args.n:
            overrides["n_values"] = tuple(int(x) for x in args.n.split(","))
        if args.deg_exp:
            overrides["deg_exp_values"] = tuple(
                float(x) for x in args.deg_exp.split(",")
            )
            overrides["radius_values"] = None
        if args.v:
            overrides["v_values"] = tuple(float(x) for x in args.v.split(","))
        if args.policies:
            overrides["policies"] = tuple(args.policies.split(","))
        if args.instances:
            overrides["instances"] = args.instances
        overrides["seed"] = args.seed
        overrides["epsilon"] = args.epsilon
        overrides["timeout"] = args.timeout
        overrides["timings"] = args.timings
        config = experiments.default_config(args.experiment, **overrides)
    rows, meta = experiments.run_experiment(config)
    csv_text = experiments.rows_to_csv(rows)
    Path(args.out).write_text(csv_text)
    meta_path = Path(args.out).with_suffix(Path(args.out).suffix + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2) + "\n")
    print(json.dumps({"rows": len(rows), "out": args.out, "meta": str(meta_path)}))
    return 0


def cmd_summarize(args) -> int:
    rows: list[dict] = []
    for path in args.csv:
        rows.extend(experiments.rows_from_csv(Path(path).read_text()))
    cells = experiments.summarize(rows)
    _write_output(experiments.summary_to_csv(cells), args.out)
    if args.text:
        sys.stdout.write(experiments.summary_text(cells))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imitanet",
        description="Asynchronous imitation dynamics on networks and "
        "payoff-incentive control.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate random game instances")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--deg-exp", type=float, default=4.0)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--v", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--require-connected", action="store_true")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("simulate", help="simulate imitation dynamics to equilibrium")
    p.add_argument("game")
    p.add_argument("--sequence", choices=("random", "roundrobin"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-activations", type=int, default=100_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("uniform", help="optimal uniform reward for all-A")
    p.add_argument("game")
    p.add_argument("--pre-relax", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_uniform)

    p = sub.add_parser("target", help="targeted reward control")
    p.add_argument("game")
    p.add_argument(
        "--policy",
        choices=("rand", "deg", "ime", "ipo", "iro", "ipro", "opt"),
        default="ipro",
    )
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--budget", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pre-relax", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_target)

    p = sub.add_parser("verify", help="run property suites on random instances")
    p.add_argument(
        "--suite",
        choices=("acoord", "monotone", "unique", "candidates", "all"),
        default="all",
    )
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--sequences", type=int, default=10)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--deg-exp", type=float, default=4.0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--v", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run an experiment sweep to CSV")
    p.add_argument(
        "--experiment", choices=experiments.EXPERIMENT_IDS, default="size_sweep"
    )
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--n", default=None, help="comma-separated sizes")
    p.add_argument("--deg-exp", default=None, help="comma-separated mean degrees")
    p.add_argument("--v", default=None, help="comma-separated payoff variances")
    p.add_argument("--policies", default=None, help="comma-separated policies")
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("summarize", help="aggregate result CSVs")
    p.add_argument("csv", nargs="+")
    p.add_argument("--text", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_summarize)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ImitanetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
