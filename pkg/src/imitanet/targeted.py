"""Targeted payoff-incentive construction.

Iteratively offers each chosen agent the minimum reward that makes one of
its B-playing neighbors switch, relaxes to the unique new equilibrium, and
repeats until all agents play A (or a budget runs out). Selection policies
range from random to a potential-to-reward greedy; an exhaustive search over
target sequences provides the optimal baseline on small networks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dynamics import IMITATION, is_equilibrium, relax_switchers_only
from .errors import InternalInvariantError, PreconditionError, StateError
from .game import (
    NetworkGame,
    RewardVector,
    Strategy,
    StrategyState,
    agent_payoff,
    all_opponent_coordinating,
    apply_rewards,
    count_a_neighbors,
)

POLICY_KINDS = ("rand", "deg", "ime", "ipo", "iro", "ipro")


@dataclass(frozen=True)
class TargetingPolicy:
    """Which agent to reward at each iteration.

    The ratio family maximizes dphi^alpha / r_check^beta; "ipo" and "iro"
    are the (1, 0) and (0, 1) corners of "ipro", whose default is (1, 1).
    """

    kind: str
    alpha: float = 1.0
    beta: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if self.alpha < 0.0 or self.beta < 0.0:
            raise ValueError("alpha and beta must be >= 0")

    def exponents(self) -> tuple[float, float]:
        if self.kind == "ipo":
            return 1.0, 0.0
        if self.kind == "iro":
            return 0.0, 1.0
        return self.alpha, self.beta


DEG = TargetingPolicy("deg")
IME = TargetingPolicy("ime")
IPO = TargetingPolicy("ipo")
IRO = TargetingPolicy("iro")
IPRO = TargetingPolicy("ipro")


def rand_policy(seed: int) -> TargetingPolicy:
    return TargetingPolicy("rand", seed=seed)


def ipro_policy(alpha: float = 1.0, beta: float = 1.0) -> TargetingPolicy:
    return TargetingPolicy("ipro", alpha=alpha, beta=beta)


@dataclass(frozen=True)
class ControlOutcome:
    """Reward vector, resulting equilibrium, and bookkeeping for one run."""

    rewards: RewardVector
    final_state: StrategyState
    total_cost: float
    num_a: int
    iterations: int
    targeted_order: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "rewards": list(self.rewards.values),
            "final_state": [s.value for s in self.final_state],
            "total_cost": self.total_cost,
            "num_A": self.num_a,
            "iterations": self.iterations,
            "targeted_order": [i + 1 for i in self.targeted_order],
        }


def eligible_set(game: NetworkGame, xbar: StrategyState) -> tuple[int, ...]:
    """A-playing agents with at least one B-playing neighbor, ascending."""
    adjacency = game.graph.adjacency
    return tuple(
        i
        for i in range(game.n)
        if xbar[i] is Strategy.A
        and any(xbar[j] is Strategy.B for j in adjacency[i])
    )


def potential(game: NetworkGame, state: StrategyState) -> int:
    """Sum over agents of their A-playing neighbor counts.

    Equals the total degree of A-players; strictly increases whenever an
    agent switches B to A, and is bounded by twice the edge count.
    """
    return sum(count_a_neighbors(game, state, i) for i in range(game.n))


def min_switch_reward(game: NetworkGame, xbar: StrategyState, i: int) -> float:
    """Payoff gap agent i must close so a B-playing neighbor will switch.

    Maximum, over i's B-playing neighbors j, of the best payoff earned in
    j's self-inclusive B-playing neighborhood, minus i's own payoff. The
    game passed in is the current (already rewarded) one.
    """
    if i not in eligible_set(game, xbar):
        raise ValueError(f"agent {i} is not eligible (A-playing with a B-neighbor)")
    adjacency = game.graph.adjacency
    payoff_cache: dict[int, float] = {}

    def u(k: int) -> float:
        if k not in payoff_cache:
            payoff_cache[k] = agent_payoff(game, xbar, k)
        return payoff_cache[k]

    best = None
    for j in adjacency[i]:
        if xbar[j] is not Strategy.B:
            continue
        for k in (j, *adjacency[j]):
            if xbar[k] is not Strategy.B:
                continue
            if best is None or u(k) > best:
                best = u(k)
    if best is None:
        raise InternalInvariantError("eligible agent has no B-playing neighborhood")
    return best - u(i)


def evaluate_candidate(
    game: NetworkGame,
    rewards: RewardVector,
    xbar: StrategyState,
    j: int,
    epsilon: float,
) -> tuple[float, int, StrategyState]:
    """Tentatively reward agent j and relax; nothing is committed.

    Returns (r_check, delta_phi, new_equilibrium) where r_check is j's
    minimum switch reward on the currently rewarded game and delta_phi the
    potential gain of the relaxed state over xbar.
    """
    rewarded = apply_rewards(game, rewards)
    r_check = min_switch_reward(rewarded, xbar, j)
    trial = apply_rewards(game, rewards.with_added(j, r_check + epsilon))
    xprime = relax_switchers_only(IMITATION, trial, xbar)
    return r_check, potential(game, xprime) - potential(game, xbar), xprime


def _ratio_argmax(
    evals: list[tuple[int, float, int]], alpha: float, beta: float
) -> int:
    """Pick the agent maximizing dphi^alpha / r_check^beta.

    Zero-reward candidates dominate any finite ratio (ties broken by larger
    potential gain, then lowest id). If no candidate moves the potential at
    all, commit the cheapest one so repeated accumulation makes progress.
    """
    if all(dphi == 0 for _, _, dphi in evals):
        return min(evals, key=lambda e: (e[1], e[0]))[0]
    infinite = [
        (j, r_check, dphi)
        for j, r_check, dphi in evals
        if r_check == 0.0 and beta > 0.0 and (alpha == 0.0 or dphi > 0)
    ]
    if infinite:
        return min(infinite, key=lambda e: (-e[2], e[0]))[0]
    scored = [
        (j, (float(dphi) ** alpha) / (r_check**beta)) for j, r_check, dphi in evals
    ]
    return min(scored, key=lambda e: (-e[1], e[0]))[0]


def select_target(
    policy: TargetingPolicy,
    game: NetworkGame,
    rewards: RewardVector,
    xbar: StrategyState,
    rng: np.random.Generator | None = None,
    candidates: tuple[int, ...] | None = None,
    epsilon: float = 1e-9,
) -> int:
    """Choose the next agent to reward from the eligible (or given) set."""
    elig = candidates if candidates is not None else eligible_set(game, xbar)
    if not elig:
        raise StateError("no eligible agent to target")
    if policy.kind == "rand":
        if rng is None:
            rng = np.random.default_rng(policy.seed)
        return elig[int(rng.integers(len(elig)))]
    if policy.kind == "deg":
        degrees = game.graph.degrees
        return min(elig, key=lambda i: (-degrees[i], i))
    if policy.kind == "ime":
        rewarded = apply_rewards(game, rewards)
        return min(elig, key=lambda i: (-agent_payoff(rewarded, xbar, i), i))
    alpha, beta = policy.exponents()
    evals = []
    for j in elig:
        r_check, dphi, _ = evaluate_candidate(game, rewards, xbar, j, epsilon)
        evals.append((j, r_check, dphi))
    return _ratio_argmax(evals, alpha, beta)


def _validate_control_inputs(game: NetworkGame, x0: StrategyState) -> None:
    if not all_opponent_coordinating(game):
        raise PreconditionError("all agents must be opponent-coordinating")
    if all(s is Strategy.B for s in x0):
        raise PreconditionError("initial state is all-B; all-A is unreachable")
    if not is_equilibrium(IMITATION, game, x0):
        raise PreconditionError("x0 is not an equilibrium of the unrewarded game")


def _check_a_monotone(old: StrategyState, new: StrategyState) -> None:
    for i, (o, m) in enumerate(zip(old, new)):
        if o is Strategy.A and m is not Strategy.A:
            raise InternalInvariantError(
                f"agent {i} switched away from A after an incentive"
            )


def _outcome(
    game: NetworkGame,
    rewards: RewardVector,
    final: StrategyState,
    order: list[int],
) -> ControlOutcome:
    if not is_equilibrium(IMITATION, apply_rewards(game, rewards), final):
        raise InternalInvariantError("final state is not an equilibrium")
    return ControlOutcome(
        rewards=rewards,
        final_state=final,
        total_cost=sum(rewards.values),
        num_a=sum(1 for s in final if s is Strategy.A),
        iterations=len(order),
        targeted_order=tuple(order),
    )


def targeted_control(
    game: NetworkGame,
    x0: StrategyState,
    policy: TargetingPolicy,
    epsilon: float = 1e-9,
) -> ControlOutcome:
    """Iterate reward-and-relax until every agent plays A.

    Rewards accumulate when an agent is targeted repeatedly; the reported
    cost includes every epsilon bump.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    _validate_control_inputs(game, x0)
    n = game.n
    rewards = RewardVector.zero(n)
    xbar = tuple(x0)
    order: list[int] = []
    rng = np.random.default_rng(policy.seed) if policy.kind == "rand" else None
    guard = n * n
    while any(s is Strategy.B for s in xbar):
        j = select_target(policy, game, rewards, xbar, rng=rng, epsilon=epsilon)
        r_check = min_switch_reward(apply_rewards(game, rewards), xbar, j)
        rewards = rewards.with_added(j, r_check + epsilon)
        new_xbar = relax_switchers_only(IMITATION, apply_rewards(game, rewards), xbar)
        _check_a_monotone(xbar, new_xbar)
        xbar = new_xbar
        order.append(j)
        if len(order) > guard:
            raise InternalInvariantError(
                f"targeting did not terminate within {guard} iterations"
            )
    return _outcome(game, rewards, xbar, order)


def budgeted_control(
    game: NetworkGame,
    x0: StrategyState,
    policy: TargetingPolicy,
    rho: float,
    epsilon: float = 1e-9,
) -> ControlOutcome:
    """As targeted_control, but stop when no eligible agent is affordable.

    An agent is affordable when committing its reward keeps the running total
    within rho; the final state may still contain B-players.
    """
    if rho < 0.0:
        raise ValueError("budget must be >= 0")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    _validate_control_inputs(game, x0)
    n = game.n
    rewards = RewardVector.zero(n)
    xbar = tuple(x0)
    order: list[int] = []
    rng = np.random.default_rng(policy.seed) if policy.kind == "rand" else None
    guard = n * n
    while any(s is Strategy.B for s in xbar) and sum(rewards.values) < rho:
        rewarded = apply_rewards(game, rewards)
        affordable = []
        for i in eligible_set(game, xbar):
            increment = min_switch_reward(rewarded, xbar, i) + epsilon
            # Affordability sums the committed vector exactly the way
            # total_cost does, so a budget equal to an unbudgeted run's total
            # admits that run's entire sequence bit for bit.
            if sum(rewards.with_added(i, increment).values) <= rho:
                affordable.append(i)
        if not affordable:
            break
        j = select_target(
            policy, game, rewards, xbar,
            rng=rng, candidates=tuple(affordable), epsilon=epsilon,
        )
        increment = min_switch_reward(rewarded, xbar, j) + epsilon
        rewards = rewards.with_added(j, increment)
        new_xbar = relax_switchers_only(IMITATION, apply_rewards(game, rewards), xbar)
        _check_a_monotone(xbar, new_xbar)
        xbar = new_xbar
        order.append(j)
        if len(order) > guard:
            raise InternalInvariantError(
                f"targeting did not terminate within {guard} iterations"
            )
    return _outcome(game, rewards, xbar, order)


def exhaustive_optimal(
    game: NetworkGame,
    x0: StrategyState,
    epsilon: float = 1e-9,
    *,
    deadline: float | None = None,
) -> ControlOutcome:
    """Minimum-cost reward vector over every sequence of targeted agents.

    Depth-first search over the choice of target at each iteration, with the
    eligible set recomputed at every node as the state evolves. The incumbent
    starts at the best deterministic heuristic solution; branches are pruned
    against it and against the cheapest known cost of reaching each
    equilibrium state. Practical for roughly n <= 20.

    `deadline` is an absolute time.monotonic() instant; exceeding it raises
    TimeoutError.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    _validate_control_inputs(game, x0)
    n = game.n
    if all(s is Strategy.A for s in x0):
        return _outcome(game, RewardVector.zero(n), tuple(x0), [])

    best_cost = float("inf")
    best: tuple[RewardVector, StrategyState, list[int]] | None = None
    for policy in (DEG, IME, IPO, IRO, IPRO):
        outcome = targeted_control(game, x0, policy, epsilon)
        if outcome.total_cost < best_cost:
            best_cost = outcome.total_cost
            best = (outcome.rewards, outcome.final_state, list(outcome.targeted_order))

    def mask(state: StrategyState) -> int:
        return sum(1 << i for i, s in enumerate(state) if s is Strategy.A)

    memo: dict[int, float] = {}

    def dfs(
        xbar: StrategyState, rewards: RewardVector, cost: float, order: list[int]
    ) -> None:
        nonlocal best_cost, best
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("exhaustive search exceeded its deadline")
        key = mask(xbar)
        if memo.get(key, float("inf")) <= cost:
            return
        memo[key] = cost
        if key == (1 << n) - 1:
            if cost < best_cost:
                best_cost = cost
                best = (rewards, xbar, list(order))
            return
        if cost >= best_cost:
            return
        children = []
        for j in eligible_set(game, xbar):
            r_check, dphi, xprime = evaluate_candidate(game, rewards, xbar, j, epsilon)
            increment = r_check + epsilon
            children.append((dphi / increment, j, increment, xprime))
        children.sort(key=lambda ch: (-ch[0], ch[1]))
        for _, j, increment, xprime in children:
            child_cost = cost + increment
            if child_cost >= best_cost:
                continue
            order.append(j)
            dfs(xprime, rewards.with_added(j, increment), child_cost, order)
            order.pop()

    dfs(tuple(x0), RewardVector.zero(n), 0.0, [])
    assert best is not None
    rewards, final, order = best
    return _outcome(game, rewards, final, order)
