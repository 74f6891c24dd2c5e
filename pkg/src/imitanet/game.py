"""Network coordination games: graph, per-agent 2x2 payoffs, states, rewards.

Agents are indexed 0..n-1 in the API; all JSON I/O uses 1-based ids.
All types are immutable values after construction.
"""

from __future__ import annotations

import json
import math
import operator
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable


class Strategy(Enum):
    """The two pure strategies; A is the strategy control drives toward."""

    A = "A"
    B = "B"


StrategyState = tuple[Strategy, ...]


def all_a_state(n: int) -> StrategyState:
    return (Strategy.A,) * n


def all_b_state(n: int) -> StrategyState:
    return (Strategy.B,) * n


def state_from_letters(text: str) -> StrategyState:
    """Parse e.g. "ABB" into a strategy tuple."""
    return tuple(Strategy(ch) for ch in text)


def state_letters(state: StrategyState) -> str:
    return "".join(s.value for s in state)


def count_a(state: StrategyState) -> int:
    return sum(1 for s in state if s is Strategy.A)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph over n agents, stored as sorted adjacency lists."""

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from 0-based endpoint pairs, validating simplicity."""
        if n < 1:
            raise ValueError("graph needs at least one agent")
        seen: set[tuple[int, int]] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for raw_i, raw_j in edges:
            i, j = int(raw_i), int(raw_j)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop at agent {i}")
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            adj[i].append(j)
            adj[j].append(i)
        return cls(
            n=n,
            edges=tuple(sorted(seen)),
            adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adj),
            degrees=tuple(len(nbrs) for nbrs in adj),
        )

    @cached_property
    def closed_neighborhoods(self) -> tuple[tuple[int, ...], ...]:
        """N_i together with i itself, per agent."""
        return tuple(
            tuple(sorted((i, *self.adjacency[i]))) for i in range(self.n)
        )

    @cached_property
    def two_hop_neighborhoods(self) -> tuple[tuple[int, ...], ...]:
        """Agents whose closed neighborhood intersects i's closed neighborhood."""
        out = []
        for i in range(self.n):
            acc = set(self.closed_neighborhoods[i])
            for j in self.adjacency[i]:
                acc.update(self.adjacency[j])
            out.append(tuple(sorted(acc)))
        return tuple(out)


def connected_components(graph: Graph) -> tuple[tuple[int, ...], ...]:
    """Connected components in discovery order, each sorted ascending."""
    seen = [False] * graph.n
    comps = []
    for start in range(graph.n):
        if seen[start]:
            continue
        queue = deque([start])
        seen[start] = True
        members = []
        while queue:
            i = queue.popleft()
            members.append(i)
            for j in graph.adjacency[i]:
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
        comps.append(tuple(sorted(members)))
    return tuple(comps)


@dataclass(frozen=True)
class PayoffMatrix:
    """Row player's 2x2 payoffs: a = A vs A, b = A vs B, c = B vs A, d = B vs B."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"payoff entry {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def entry(self, mine: Strategy, theirs: Strategy) -> float:
        if mine is Strategy.A:
            return self.a if theirs is Strategy.A else self.b
        return self.c if theirs is Strategy.A else self.d

    def as_list(self) -> list[float]:
        return [self.a, self.b, self.c, self.d]


def is_opponent_coordinating(pm: PayoffMatrix) -> bool:
    """Each row's diagonal strictly beats its off-diagonal (a > b and d > c)."""
    return pm.a > pm.b and pm.d > pm.c


@dataclass(frozen=True)
class NetworkGame:
    """A network of agents with per-agent payoff matrices."""

    graph: Graph
    payoffs: tuple[PayoffMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "payoffs", tuple(self.payoffs))
        if len(self.payoffs) != self.graph.n:
            raise ValueError(
                f"{len(self.payoffs)} payoff matrices for {self.graph.n} agents"
            )

    @property
    def n(self) -> int:
        return self.graph.n


def all_opponent_coordinating(game: NetworkGame) -> bool:
    return all(is_opponent_coordinating(pm) for pm in game.payoffs)


@dataclass(frozen=True)
class RewardVector:
    """Per-agent non-negative incentives added to the A-row of payoff matrices."""

    values: tuple[float, ...]

    def __post_init__(self):
        coerced = []
        for i, value in enumerate(self.values):
            value = float(value)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"reward for agent {i} must be >= 0, got {value!r}")
            coerced.append(value)
        object.__setattr__(self, "values", tuple(coerced))

    @classmethod
    def zero(cls, n: int) -> "RewardVector":
        return cls((0.0,) * n)

    @classmethod
    def uniform(cls, n: int, r0: float) -> "RewardVector":
        return cls((float(r0),) * n)

    def with_added(self, i: int, amount: float) -> "RewardVector":
        values = list(self.values)
        values[i] = values[i] + amount
        return RewardVector(tuple(values))

    def total(self) -> float:
        return sum(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]


def _check_agent(n: int, i) -> int:
    try:
        idx = operator.index(i)
    except TypeError:
        raise ValueError(f"agent id must be an integer, got {i!r}") from None
    if not 0 <= idx < n:
        raise ValueError(f"agent id {idx} out of range for n={n}")
    return idx


def count_a_neighbors(game: NetworkGame, state: StrategyState, i) -> int:
    """Number of i's neighbors currently playing A."""
    i = _check_agent(game.n, i)
    return sum(1 for j in game.graph.adjacency[i] if state[j] is Strategy.A)


def agent_payoff(game: NetworkGame, state: StrategyState, i) -> float:
    """Total payoff of agent i against all neighbors at the given state.

    The sum over neighbors is grouped by neighbor strategy so that equal
    states always produce bit-identical payoffs regardless of edge order.
    Isolated agents earn 0.
    """
    i = _check_agent(game.n, i)
    pm = game.payoffs[i]
    n_a = sum(1 for j in game.graph.adjacency[i] if state[j] is Strategy.A)
    n_b = game.graph.degrees[i] - n_a
    if state[i] is Strategy.A:
        return pm.a * n_a + pm.b * n_b
    return pm.c * n_a + pm.d * n_b


def apply_rewards(game: NetworkGame, rewards: RewardVector) -> NetworkGame:
    """Return a new game whose agent-i matrix is (a+r_i, b+r_i, c, d).

    The input game is unmodified; the graph object is shared.
    """
    if len(rewards) != game.n:
        raise ValueError(f"{len(rewards)} rewards for {game.n} agents")
    new_payoffs = tuple(
        PayoffMatrix(pm.a + r, pm.b + r, pm.c, pm.d)
        for pm, r in zip(game.payoffs, rewards.values)
    )
    return NetworkGame(graph=game.graph, payoffs=new_payoffs)


def game_to_json(game: NetworkGame, state: StrategyState) -> str:
    """Serialize a game and state; edges are 1-based pairs with i < j."""
    payload = {
        "n": game.n,
        "edges": [[i + 1, j + 1] for i, j in game.graph.edges],
        "payoffs": [pm.as_list() for pm in game.payoffs],
        "state": [s.value for s in state],
    }
    return json.dumps(payload)


def game_from_json(text: str) -> tuple[NetworkGame, StrategyState]:
    """Parse the JSON produced by game_to_json, validating shapes."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid game JSON: {exc}") from None
    for key in ("n", "edges", "payoffs", "state"):
        if key not in payload:
            raise ValueError(f"game JSON missing key {key!r}")
    n = int(payload["n"])
    graph = Graph.from_edges(n, [(i - 1, j - 1) for i, j in payload["edges"]])
    payoffs = tuple(PayoffMatrix(*entry) for entry in payload["payoffs"])
    state = tuple(Strategy(s) for s in payload["state"])
    if len(state) != n:
        raise ValueError(f"state length {len(state)} for n={n}")
    return NetworkGame(graph=graph, payoffs=payoffs), state
