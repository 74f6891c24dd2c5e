"""Asynchronous update rules, activation sequences, and equilibrium search.

The generic rule interface maps (game, state, agent) to the set of strategies
the agent may adopt; the imitation rule is the one concrete instance shipped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import NonConvergenceError
from .game import (
    NetworkGame,
    Strategy,
    StrategyState,
    _check_agent,
    agent_payoff,
)


class RuleOutcome(Enum):
    """Which strategies an active agent may adopt: only A, only B, or either."""

    ONLY_A = "A"
    ONLY_B = "B"
    BOTH = "AB"


class TiePolicy(Enum):
    """How an agent resolves a BOTH outcome: keep current, or fix to A or B."""

    KEEP = "keep"
    FIX_A = "fix_a"
    FIX_B = "fix_b"


def imitation_outcome(game: NetworkGame, state: StrategyState, i) -> RuleOutcome:
    """Strategies earning the maximum payoff in i's closed neighborhood.

    An isolated agent is its own sole maximum earner, so the outcome is the
    agent's current strategy. Payoff comparisons are exact float comparisons;
    the maximizer set collects every agent attaining the maximum.
    """
    i = _check_agent(game.n, i)
    best = None
    has_a = has_b = False
    for j in game.graph.closed_neighborhoods[i]:
        u = agent_payoff(game, state, j)
        if best is None or u > best:
            best = u
            has_a = state[j] is Strategy.A
            has_b = not has_a
        elif u == best:
            if state[j] is Strategy.A:
                has_a = True
            else:
                has_b = True
    if has_a and not has_b:
        return RuleOutcome.ONLY_A
    if has_b and not has_a:
        return RuleOutcome.ONLY_B
    return RuleOutcome.BOTH


@dataclass(frozen=True)
class UpdateRule:
    """A deterministic outcome function plus per-agent tie policies."""

    evaluate: Callable[[NetworkGame, StrategyState, int], RuleOutcome]
    tie_policy: TiePolicy | tuple[TiePolicy, ...] = TiePolicy.KEEP

    def tie_for(self, i: int) -> TiePolicy:
        if isinstance(self.tie_policy, TiePolicy):
            return self.tie_policy
        return self.tie_policy[i]


IMITATION = UpdateRule(evaluate=imitation_outcome)


@dataclass(frozen=True)
class RandomUniform:
    """I.i.d. uniform agent activations from a seeded PCG64 generator."""

    seed: int


@dataclass(frozen=True)
class RoundRobin:
    """Agents activate cyclically in ascending id order."""


@dataclass(frozen=True)
class Explicit:
    """A finite, explicitly listed activation order."""

    agents: tuple[int, ...]


ActivationSequence = RandomUniform | RoundRobin | Explicit


@dataclass(frozen=True)
class SwitchEvent:
    t: int
    agent: int
    old: Strategy
    new: Strategy


@dataclass(frozen=True)
class Trajectory:
    """Initial state, recorded switches, final state, and convergence flag."""

    initial: StrategyState
    events: tuple[SwitchEvent, ...]
    final: StrategyState
    converged: bool

    def to_jsonl(self) -> str:
        """One JSON record per switch event, with 1-based agent ids."""
        lines = [
            json.dumps(
                {"t": e.t, "agent": e.agent + 1, "from": e.old.value, "to": e.new.value}
            )
            for e in self.events
        ]
        return "\n".join(lines) + ("\n" if lines else "")


def _activations(seq: ActivationSequence, n: int, limit: int) -> Iterator[int]:
    if isinstance(seq, RandomUniform):
        rng = np.random.default_rng(seq.seed)
        produced = 0
        while produced < limit:
            chunk = rng.integers(0, n, size=min(512, limit - produced))
            for v in chunk:
                yield int(v)
            produced += len(chunk)
    elif isinstance(seq, RoundRobin):
        for t in range(limit):
            yield t % n
    elif isinstance(seq, Explicit):
        for i in seq.agents[:limit]:
            yield _check_agent(n, i)
    else:
        raise TypeError(f"unknown activation sequence {seq!r}")


def _is_keep_imitation(rule: UpdateRule) -> bool:
    if rule.evaluate is not imitation_outcome:
        return False
    if isinstance(rule.tie_policy, TiePolicy):
        return rule.tie_policy is TiePolicy.KEEP
    return all(t is TiePolicy.KEEP for t in rule.tie_policy)


class _ImitationEngine:
    """Incremental evaluator for keep-on-tie imitation over one game.

    Maintains per-agent A-neighbor counts and a dirty set of agents whose
    last evaluated outcome may be stale; payoffs are recomputed on demand
    from the counts, matching agent_payoff bit for bit.
    """

    __slots__ = (
        "n", "adj", "closed", "two_hop", "deg",
        "row_aa", "row_ab", "row_ba", "row_bb",
        "is_a", "n_a", "dirty",
    )

    def __init__(self, game: NetworkGame, state: StrategyState):
        g = game.graph
        self.n = g.n
        self.adj = g.adjacency
        self.closed = g.closed_neighborhoods
        self.two_hop = g.two_hop_neighborhoods
        self.deg = g.degrees
        self.row_aa = [pm.a for pm in game.payoffs]
        self.row_ab = [pm.b for pm in game.payoffs]
        self.row_ba = [pm.c for pm in game.payoffs]
        self.row_bb = [pm.d for pm in game.payoffs]
        self.is_a = [s is Strategy.A for s in state]
        self.n_a = [
            sum(1 for j in self.adj[i] if self.is_a[j]) for i in range(self.n)
        ]
        self.dirty = set(range(self.n))

    def payoff(self, j: int) -> float:
        n_a = self.n_a[j]
        n_b = self.deg[j] - n_a
        if self.is_a[j]:
            return self.row_aa[j] * n_a + self.row_ab[j] * n_b
        return self.row_ba[j] * n_a + self.row_bb[j] * n_b

    def desired(self, i: int) -> bool:
        """Target strategy (as is-A) under imitation with keep-on-tie."""
        best = None
        has_a = has_b = False
        is_a = self.is_a
        for j in self.closed[i]:
            u = self.payoff(j)
            if best is None or u > best:
                best = u
                has_a = is_a[j]
                has_b = not has_a
            elif u == best:
                if is_a[j]:
                    has_a = True
                else:
                    has_b = True
        if has_a != has_b:
            return has_a
        return is_a[i]

    def activate(self, i: int) -> bool:
        """Let agent i revise; returns True iff it switched strategy."""
        if i not in self.dirty:
            return False
        if self.desired(i) == self.is_a[i]:
            self.dirty.discard(i)
            return False
        self._flip(i)
        return True

    def _flip(self, i: int) -> None:
        was_a = self.is_a[i]
        self.is_a[i] = not was_a
        delta = -1 if was_a else 1
        for j in self.adj[i]:
            self.n_a[j] += delta
        self.dirty.update(self.two_hop[i])

    def at_equilibrium(self) -> bool:
        """Drain the dirty set; result is independent of drain order."""
        dirty = self.dirty
        while dirty:
            i = next(iter(dirty))
            if self.desired(i) != self.is_a[i]:
                return False
            dirty.discard(i)
        return True

    def state(self) -> StrategyState:
        return tuple(Strategy.A if a else Strategy.B for a in self.is_a)


def update_agent(rule: UpdateRule, game: NetworkGame, state: StrategyState, i) -> Strategy:
    """The strategy agent i adopts when it activates at this state."""
    i = _check_agent(game.n, i)
    outcome = rule.evaluate(game, state, i)
    if outcome is RuleOutcome.ONLY_A:
        return Strategy.A
    if outcome is RuleOutcome.ONLY_B:
        return Strategy.B
    tie = rule.tie_for(i)
    if tie is TiePolicy.FIX_A:
        return Strategy.A
    if tie is TiePolicy.FIX_B:
        return Strategy.B
    return state[i]


def step(
    rule: UpdateRule, game: NetworkGame, state: StrategyState, i
) -> tuple[StrategyState, bool]:
    """Activate agent i once; returns the new state and whether it switched."""
    i = _check_agent(game.n, i)
    new = update_agent(rule, game, state, i)
    if new is state[i]:
        return state, False
    out = list(state)
    out[i] = new
    return tuple(out), True


def is_equilibrium(rule: UpdateRule, game: NetworkGame, state: StrategyState) -> bool:
    """True iff no agent would switch under its own update rule."""
    if _is_keep_imitation(rule):
        return _ImitationEngine(game, state).at_equilibrium()
    return all(
        update_agent(rule, game, state, i) is state[i] for i in range(game.n)
    )


def simulate(
    rule: UpdateRule,
    game: NetworkGame,
    state: StrategyState,
    sequence: ActivationSequence,
    max_activations: int = 100_000,
) -> Trajectory:
    """Activate agents per the sequence until equilibrium or the budget ends.

    Equilibrium is checked initially and after each switch; non-switching
    activations are no-ops. The converged flag reports whether the final
    state is an equilibrium.
    """
    if max_activations <= 0:
        raise ValueError("max_activations must be positive")
    initial = tuple(state)
    if _is_keep_imitation(rule):
        engine = _ImitationEngine(game, initial)
        events: list[SwitchEvent] = []
        converged = engine.at_equilibrium()
        if not converged:
            for t, i in enumerate(_activations(sequence, game.n, max_activations)):
                if engine.activate(i):
                    new = Strategy.A if engine.is_a[i] else Strategy.B
                    old = Strategy.B if new is Strategy.A else Strategy.A
                    events.append(SwitchEvent(t=t, agent=i, old=old, new=new))
                    if engine.at_equilibrium():
                        converged = True
                        break
        return Trajectory(
            initial=initial,
            events=tuple(events),
            final=engine.state(),
            converged=converged,
        )

    current = initial
    events = []
    converged = is_equilibrium(rule, game, current)
    if not converged:
        for t, i in enumerate(_activations(sequence, game.n, max_activations)):
            new_state, switched = step(rule, game, current, i)
            if switched:
                events.append(
                    SwitchEvent(t=t, agent=i, old=current[i], new=new_state[i])
                )
                current = new_state
                if is_equilibrium(rule, game, current):
                    converged = True
                    break
    return Trajectory(
        initial=initial, events=tuple(events), final=current, converged=converged
    )


def relax_switchers_only(
    rule: UpdateRule, game: NetworkGame, state: StrategyState
) -> StrategyState:
    """Scan agents in ascending id, activating only those that would switch.

    Intended for post-incentive relaxation from an equilibrium of a game
    where only B-to-A switches can occur, in which case it fixes within n
    switches; otherwise the scan is bounded by n^2 total switches and raises
    NonConvergenceError beyond that.
    """
    n = game.n
    cap = n * n
    if _is_keep_imitation(rule):
        engine = _ImitationEngine(game, state)
        switches = 0
        while True:
            changed = False
            for i in range(n):
                if engine.activate(i):
                    switches += 1
                    if switches > cap:
                        raise NonConvergenceError(
                            f"more than {cap} switches; dynamics are not settling"
                        )
                    changed = True
            if not changed:
                return engine.state()

    current = tuple(state)
    switches = 0
    while True:
        changed = False
        for i in range(n):
            new_state, switched = step(rule, game, current, i)
            if switched:
                switches += 1
                if switches > cap:
                    raise NonConvergenceError(
                        f"more than {cap} switches; dynamics are not settling"
                    )
                current = new_state
                changed = True
        if not changed:
            return current


def replay_events(initial: StrategyState, events: Sequence[SwitchEvent]) -> StrategyState:
    """Apply recorded switches to the initial state (test utility)."""
    out = list(initial)
    for e in events:
        if out[e.agent] is not e.old:
            raise ValueError(f"event {e} does not match state during replay")
        out[e.agent] = e.new
    return tuple(out)
