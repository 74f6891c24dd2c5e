"""Random geometric instances with heterogeneous coordination payoffs.

All generation is pure given a seed: child generators are derived from
(seed, index) tuples through numpy's SeedSequence, so batches reproduce
bit-identically and may be generated in any order.
"""

from __future__ import annotations

import math
import numpy as np

from .dynamics import IMITATION, RandomUniform, simulate
from .errors import GenerationError
from .game import (
    Graph,
    NetworkGame,
    PayoffMatrix,
    Strategy,
    StrategyState,
    connected_components,
)


def child_rng(*entropy: int) -> np.random.Generator:
    """Deterministic child generator for an entropy tuple such as (seed, i)."""
    return np.random.default_rng(np.random.SeedSequence([int(e) for e in entropy]))


def radius_for_mean_degree(n: int, deg_exp: float) -> float:
    """Connection radius giving roughly the requested mean degree.

    sqrt((1 + deg_exp) / (pi n)); boundary clipping pulls the realized mean
    slightly below deg_exp + 1, landing near deg_exp for moderate n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.sqrt((1.0 + deg_exp) / (math.pi * n))


def geometric_random_graph(n: int, radius: float, rng: np.random.Generator) -> Graph:
    """Drop n points uniformly in the unit square; connect pairs within radius."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    points = rng.random((n, 2))
    deltas = points[:, None, :] - points[None, :, :]
    dist2 = (deltas**2).sum(axis=2)
    close = dist2 <= radius * radius
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if close[i, j]
    ]
    return Graph.from_edges(n, edges)


def random_payoffs(
    n: int, p: float, v: float, rng: np.random.Generator
) -> tuple[PayoffMatrix, ...]:
    """Per-agent matrices p*I + v*W with W entries i.i.d. uniform on [0, 1].

    For p >= 1 and v <= 1 every matrix is opponent-coordinating: diagonals
    are at least p >= 1 while off-diagonals are at most v <= 1, and ties are
    measure-zero.
    """
    if p < 1.0:
        raise ValueError("coordination level p must be >= 1")
    if not 0.0 <= v <= 1.0:
        raise ValueError("payoff variance v must be in [0, 1]")
    w = rng.random((n, 4))
    return tuple(
        PayoffMatrix(p + v * w[i, 0], v * w[i, 1], v * w[i, 2], p + v * w[i, 3])
        for i in range(n)
    )


def _relax_random_state(
    game: NetworkGame, rng: np.random.Generator
) -> StrategyState | None:
    n = game.n
    bits = rng.integers(0, 2, size=n)
    start = tuple(Strategy.A if b else Strategy.B for b in bits)
    seed = int(rng.integers(np.iinfo(np.int64).max))
    traj = simulate(
        IMITATION, game, start, RandomUniform(seed), max_activations=500 * n + 2000
    )
    return traj.final if traj.converged else None


def random_equilibrium_state(
    game: NetworkGame, rng: np.random.Generator, max_attempts: int = 1000
) -> StrategyState:
    """A mixed equilibrium reached from a uniform random state.

    Samples a uniform state, relaxes it under imitation with a random
    activation sequence, and rejects all-A and all-B results. Dense graphs
    may not admit mixed equilibria at all, in which case this raises.
    """
    n = game.n
    for _ in range(max_attempts):
        final = _relax_random_state(game, rng)
        if final is None:
            continue
        n_a = sum(1 for s in final if s is Strategy.A)
        if 0 < n_a < n:
            return final
    raise GenerationError(
        f"no mixed equilibrium found in {max_attempts} attempts"
    )


def random_theory_instance(
    n: int,
    *,
    deg_exp: float = 4.0,
    p: float = 1.0,
    v: float = 0.5,
    seed: int = 0,
    forbid_all_b_components: bool = False,
    max_attempts: int = 200,
) -> tuple[NetworkGame, StrategyState]:
    """Random opponent-coordinating game at an arbitrary equilibrium.

    Unlike random_control_instance this accepts consensus equilibria, so it
    works on dense graphs where no mixed equilibrium exists. With
    forbid_all_b_components, states containing an all-B component (including
    global all-B) are rejected so that all-A stays reachable.
    """
    radius = radius_for_mean_degree(n, deg_exp)
    for attempt in range(max_attempts):
        rng = child_rng(seed, attempt)
        graph = geometric_random_graph(n, radius, rng)
        game = NetworkGame(graph=graph, payoffs=random_payoffs(n, p, v, rng))
        x0 = _relax_random_state(game, rng)
        if x0 is None:
            continue
        if forbid_all_b_components and any(
            all(x0[i] is Strategy.B for i in comp)
            for comp in connected_components(graph)
        ):
            continue
        return game, x0
    raise GenerationError(f"no usable equilibrium found in {max_attempts} attempts")


def random_control_instance(
    n: int,
    *,
    deg_exp: float | None = None,
    radius: float | None = None,
    p: float = 1.0,
    v: float = 0.5,
    seed: int = 0,
    require_connected: bool = False,
    max_attempts: int = 1000,
) -> tuple[NetworkGame, StrategyState, dict]:
    """Generate a (game, equilibrium) pair on which all-A is reachable.

    Rejects initial equilibria containing a component with no A-player, since
    no incentive can ever flip such a component under imitation. Returns the
    instance plus metadata (component count, attempts used).
    """
    if (deg_exp is None) == (radius is None):
        raise ValueError("specify exactly one of deg_exp or radius")
    r = radius if radius is not None else radius_for_mean_degree(n, deg_exp)
    for attempt in range(max_attempts):
        rng = child_rng(seed, attempt)
        graph = geometric_random_graph(n, r, rng)
        components = connected_components(graph)
        if require_connected and len(components) > 1:
            continue
        game = NetworkGame(graph=graph, payoffs=random_payoffs(n, p, v, rng))
        try:
            x0 = random_equilibrium_state(game, rng, max_attempts=50)
        except GenerationError:
            continue
        if any(
            all(x0[i] is Strategy.B for i in comp) for comp in components
        ):
            continue
        meta = {"components": len(components), "attempts": attempt + 1, "radius": r}
        return game, x0, meta
    raise GenerationError(
        f"no viable control instance found in {max_attempts} attempts"
    )
