"""Executable property suites for the dynamics' structural guarantees.

Each check samples or enumerates scenarios and reports violations with
replayable witnesses instead of proving anything symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    IMITATION,
    RandomUniform,
    RoundRobin,
    RuleOutcome,
    UpdateRule,
    relax_switchers_only,
    simulate,
)
from .game import (
    NetworkGame,
    RewardVector,
    Strategy,
    StrategyState,
    apply_rewards,
    state_letters,
)
from .uniform import candidate_rewards, optimal_uniform_reward, succeeds_all_A


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of one property check over a number of tested scenarios."""

    name: str
    instances: int
    violations: tuple[tuple[str, str], ...]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "instances": self.instances,
            "passed": self.passed,
            "violations": [
                {"instance": label, "witness": witness}
                for label, witness in self.violations
            ],
        }


def _dominates(y: StrategyState, z: StrategyState) -> bool:
    return all(zi is Strategy.A for yi, zi in zip(y, z) if yi is Strategy.A)


def _check_pair(
    rule: UpdateRule,
    game: NetworkGame,
    y: StrategyState,
    z: StrategyState,
    label: str,
    violations: list,
) -> None:
    for i in range(game.n):
        fy = rule.evaluate(game, y, i)
        if fy is RuleOutcome.ONLY_B:
            continue
        fz = rule.evaluate(game, z, i)
        if fy is RuleOutcome.ONLY_A and fz is not RuleOutcome.ONLY_A:
            violations.append(
                (label,
                 f"agent {i}: f(y)=A but f(z)={fz.value} for "
                 f"y={state_letters(y)} z={state_letters(z)}")
            )
        elif fy is RuleOutcome.BOTH and fz is RuleOutcome.ONLY_B:
            violations.append(
                (label,
                 f"agent {i}: f(y)=AB but A not in f(z) for "
                 f"y={state_letters(y)} z={state_letters(z)}")
            )


def check_a_coordinating(
    rule: UpdateRule,
    game: NetworkGame,
    samples: int,
    rng: np.random.Generator,
    *,
    exhaustive: bool = False,
) -> PropertyReport:
    """Turning B-players to A must never remove A from an update outcome.

    Checks, for state pairs (y, z) with z dominating y in A-players, that an
    A-only outcome stays A-only and a tied outcome keeps A available.
    Exhaustive mode enumerates all 3^n dominance-ordered pairs (small n only).
    """
    n = game.n
    violations: list[tuple[str, str]] = []
    tested = 0
    if exhaustive:
        if n > 12:
            raise ValueError("exhaustive mode is limited to n <= 12")
        for y in itertools.product((Strategy.A, Strategy.B), repeat=n):
            b_positions = [i for i, s in enumerate(y) if s is Strategy.B]
            for flips in itertools.chain.from_iterable(
                itertools.combinations(b_positions, k)
                for k in range(len(b_positions) + 1)
            ):
                z = tuple(
                    Strategy.A if (s is Strategy.A or i in flips) else Strategy.B
                    for i, s in enumerate(y)
                )
                tested += 1
                _check_pair(rule, game, y, z, f"pair#{tested}", violations)
    else:
        for k in range(samples):
            y = tuple(
                Strategy.A if b else Strategy.B for b in rng.integers(0, 2, size=n)
            )
            flips = rng.integers(0, 2, size=n)
            z = tuple(
                Strategy.A if (s is Strategy.A or flips[i]) else Strategy.B
                for i, s in enumerate(y)
            )
            tested += 1
            _check_pair(rule, game, y, z, f"sample#{k}", violations)
    return PropertyReport(
        name="a_coordinating", instances=tested, violations=tuple(violations)
    )


def check_a_monotone(
    game: NetworkGame,
    x0: StrategyState,
    rewards: RewardVector,
    sequences: int,
    rng: np.random.Generator,
) -> PropertyReport:
    """After incentives at equilibrium, no trajectory may switch A to B."""
    rewarded = apply_rewards(game, rewards)
    violations: list[tuple[str, str]] = []
    budget = 500 * game.n + 2000
    for s in range(sequences):
        seed = int(rng.integers(np.iinfo(np.int64).max))
        traj = simulate(
            IMITATION, rewarded, x0, RandomUniform(seed), max_activations=budget
        )
        label = f"seq#{s}(seed={seed})"
        if not traj.converged:
            violations.append((label, "did not reach equilibrium within budget"))
        for e in traj.events:
            if e.old is Strategy.A:
                violations.append(
                    (label, f"agent {e.agent} switched A->B at t={e.t}")
                )
    return PropertyReport(
        name="a_monotone", instances=sequences, violations=tuple(violations)
    )


def check_unique_convergence(
    game: NetworkGame,
    x0: StrategyState,
    rewards: RewardVector,
    sequences: int,
    rng: np.random.Generator,
) -> PropertyReport:
    """All activation sequences must reach one equilibrium within n switches."""
    rewarded = apply_rewards(game, rewards)
    violations: list[tuple[str, str]] = []
    budget = 500 * game.n + 2000
    finals: list[tuple[str, StrategyState]] = []
    for s in range(sequences):
        seed = int(rng.integers(np.iinfo(np.int64).max))
        traj = simulate(
            IMITATION, rewarded, x0, RandomUniform(seed), max_activations=budget
        )
        label = f"seq#{s}(seed={seed})"
        if not traj.converged:
            violations.append((label, "did not reach equilibrium within budget"))
        if len(traj.events) > game.n:
            violations.append(
                (label, f"{len(traj.events)} switches exceed n={game.n}")
            )
        finals.append((label, traj.final))
    rr = simulate(IMITATION, rewarded, x0, RoundRobin(), max_activations=budget)
    if not rr.converged:
        violations.append(("round_robin", "did not reach equilibrium within budget"))
    finals.append(("round_robin", rr.final))
    finals.append(("switchers_only", relax_switchers_only(IMITATION, rewarded, x0)))
    reference_label, reference = finals[0]
    for label, final in finals[1:]:
        if final != reference:
            violations.append(
                (label,
                 f"equilibrium {state_letters(final)} differs from "
                 f"{reference_label}={state_letters(reference)}")
            )
    return PropertyReport(
        name="unique_convergence",
        instances=len(finals),
        violations=tuple(violations),
    )


def check_candidate_membership(game: NetworkGame, x0: StrategyState) -> PropertyReport:
    """The optimal uniform reward must be a candidate and a sharp threshold.

    Also scans every non-negative candidate nudged both ways by a quarter of
    the minimum candidate gap: success must hold strictly above the optimum
    and fail strictly below it.
    """
    violations: list[tuple[str, str]] = []
    cands = candidate_rewards(game, x0)
    r0_star = optimal_uniform_reward(game, x0)
    tested = 1
    if r0_star not in cands.values:
        violations.append(("membership", f"r0*={r0_star!r} not in candidate set"))
    if len(cands) > 1:
        gaps = [b - a for a, b in zip(cands.values, cands.values[1:])]
        delta = min(gaps) / 4.0
        for c in cands.values:
            if c < 0.0:
                continue
            for point in (c - delta, c + delta):
                if point < 0.0 or point == r0_star:
                    continue
                tested += 1
                ok = succeeds_all_A(game, x0, point)
                if point > r0_star and not ok:
                    violations.append(
                        ("threshold", f"reward {point!r} > r0*={r0_star!r} failed")
                    )
                elif point < r0_star and ok:
                    violations.append(
                        ("threshold", f"reward {point!r} < r0*={r0_star!r} succeeded")
                    )
    return PropertyReport(
        name="candidate_membership", instances=tested, violations=tuple(violations)
    )
