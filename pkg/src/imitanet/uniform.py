"""Infimum uniform reward that drives an equilibrium network to all-A.

The search space is a finite set of payoff-difference quotients that is
guaranteed to contain the infimum; a binary search over that set plus one
midpoint probe pins down which bracket endpoint is the infimum.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import IMITATION, is_equilibrium, relax_switchers_only
from .errors import InternalInvariantError, PreconditionError
from .game import (
    NetworkGame,
    RewardVector,
    Strategy,
    StrategyState,
    all_opponent_coordinating,
    apply_rewards,
    count_a_neighbors,
)


@dataclass(frozen=True)
class PayoffSupport:
    """Payoffs an agent can possibly earn while playing A (resp. B).

    Enumerated over the number of additional neighbors that may have turned
    to A since the initial state; deduplicated and sorted.
    """

    a_payoffs: tuple[float, ...]
    b_payoffs: tuple[float, ...]


@dataclass(frozen=True)
class CandidateRewards:
    """Sorted distinct candidate infimum rewards; always contains 0."""

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(self.values)
        if list(values) != sorted(set(values)):
            raise ValueError("candidate values must be sorted and distinct")
        if 0.0 not in values:
            raise ValueError("candidate set must contain 0")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def payoff_support(game: NetworkGame, x0: StrategyState, i: int) -> PayoffSupport:
    """Possible A- and B-payoffs of agent i as B-neighbors flip to A."""
    pm = game.payoffs[i]
    deg = game.graph.degrees[i]
    n_a0 = count_a_neighbors(game, x0, i)
    a_vals = set()
    b_vals = set()
    for delta in range(deg - n_a0 + 1):
        n_a = n_a0 + delta
        n_b = deg - n_a
        a_vals.add(pm.a * n_a + pm.b * n_b)
        b_vals.add(pm.c * n_a + pm.d * n_b)
    return PayoffSupport(
        a_payoffs=tuple(sorted(a_vals)), b_payoffs=tuple(sorted(b_vals))
    )


def candidate_rewards(game: NetworkGame, x0: StrategyState) -> CandidateRewards:
    """All candidate infimum rewards for driving x0 to all-A.

    Quotients (y_B - y_A) / deg_j over every initially-B agent s, every
    neighbor j of s, and every initially-B agent i in s's closed
    neighborhood, with y_B and y_A ranging over the payoff supports of i
    and j. Negative values are dominated but retained.
    """
    n = game.n
    if all(s is Strategy.B for s in x0):
        raise PreconditionError("initial state is all-B; all-A is unreachable")
    supports = [payoff_support(game, x0, i) for i in range(n)]
    adjacency = game.graph.adjacency
    closed = game.graph.closed_neighborhoods
    degrees = game.graph.degrees
    values = {0.0}
    for s in range(n):
        if x0[s] is not Strategy.B:
            continue
        for j in adjacency[s]:
            deg_j = degrees[j]
            a_vals = supports[j].a_payoffs
            for i in closed[s]:
                if x0[i] is not Strategy.B:
                    continue
                for y_b in supports[i].b_payoffs:
                    for y_a in a_vals:
                        values.add((y_b - y_a) / deg_j)
    return CandidateRewards(values=tuple(sorted(values)))


def _all_a(state: StrategyState) -> bool:
    return all(s is Strategy.A for s in state)


def _succeeds_unchecked(game: NetworkGame, x0: StrategyState, r0: float) -> bool:
    rewarded = apply_rewards(game, RewardVector.uniform(game.n, r0))
    final = relax_switchers_only(IMITATION, rewarded, x0)
    return _all_a(final)


def succeeds_all_A(game: NetworkGame, x0: StrategyState, r0: float) -> bool:
    """Whether the uniform reward r0, offered at equilibrium x0, yields all-A."""
    if r0 < 0.0:
        raise ValueError(f"uniform reward must be >= 0, got {r0}")
    if not is_equilibrium(IMITATION, game, x0):
        raise PreconditionError("x0 is not an equilibrium of the unrewarded game")
    return _succeeds_unchecked(game, x0, r0)


@dataclass(frozen=True)
class UniformSearchResult:
    r0_star: float
    candidates: int
    simulations: int


def _validate_uniform_inputs(game: NetworkGame, x0: StrategyState) -> None:
    if not all_opponent_coordinating(game):
        raise PreconditionError("all agents must be opponent-coordinating")
    if all(s is Strategy.B for s in x0):
        raise PreconditionError("initial state is all-B; all-A is unreachable")
    if not is_equilibrium(IMITATION, game, x0):
        raise PreconditionError(
            "x0 is not an equilibrium of the unrewarded game; relax it first"
        )


def search_uniform_reward(game: NetworkGame, x0: StrategyState) -> UniformSearchResult:
    """Binary search over the candidate set for the infimum uniform reward.

    The search brackets the threshold between consecutive candidates and then
    probes their midpoint: simulation exactly at the threshold fails the
    strict switching inequality, so a succeeding midpoint means the lower
    endpoint is the infimum, a failing one means the upper endpoint is.
    """
    _validate_uniform_inputs(game, x0)
    cands = candidate_rewards(game, x0)
    sims = 0

    def succeeds(r0: float) -> bool:
        nonlocal sims
        sims += 1
        return _succeeds_unchecked(game, x0, r0)

    def result(r0: float) -> UniformSearchResult:
        return UniformSearchResult(
            r0_star=r0, candidates=len(cands), simulations=sims
        )

    if succeeds(0.0):
        return result(0.0)
    values = cands.values
    lo = values.index(0.0)
    hi = len(values) - 1
    if lo == hi or not succeeds(values[hi]):
        # No candidate above the threshold succeeds: the infimum is the top
        # candidate itself, which fails only through the strict inequality.
        if not succeeds(values[hi] + 1.0):
            raise InternalInvariantError(
                "no uniform reward above the candidate set succeeds"
            )
        return result(values[hi])
    while hi - lo > 1:
        mid = (lo + hi + 1) // 2
        if succeeds(values[mid]):
            hi = mid
        else:
            lo = mid
    midpoint = (values[lo] + values[hi]) / 2.0
    return result(values[lo] if succeeds(midpoint) else values[hi])


def optimal_uniform_reward(game: NetworkGame, x0: StrategyState) -> float:
    """The infimum uniform reward r0* such that every r0 > r0* reaches all-A."""
    return search_uniform_reward(game, x0).r0_star


def brute_force_uniform_oracle(game: NetworkGame, x0: StrategyState) -> float:
    """Linear-scan reference for optimal_uniform_reward; O(|R| n m), tests only.

    Tests every non-negative candidate and every candidate plus half the
    minimum gap, then returns the smallest candidate v such that every tested
    point strictly above v succeeded.
    """
    _validate_uniform_inputs(game, x0)
    values = candidate_rewards(game, x0).values
    if len(values) == 1:
        return 0.0
    eta = min(b - a for a, b in zip(values, values[1:])) / 2.0
    nonneg = [v for v in values if v >= 0.0]
    tested: list[tuple[float, bool]] = []
    for v in nonneg:
        tested.append((v, _succeeds_unchecked(game, x0, v)))
        tested.append((v + eta, _succeeds_unchecked(game, x0, v + eta)))
    for v in nonneg:
        if all(ok for point, ok in tested if point > v):
            return v
    raise InternalInvariantError("no candidate dominates all tested points")
