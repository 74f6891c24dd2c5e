"""Shared test fixtures and hypothesis strategies."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from imitanet import Graph, NetworkGame, PayoffMatrix, Strategy

finite_payoff = st.floats(
    min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False
)


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [pair for pair, keep in zip(pairs, mask) if keep]
    return Graph.from_edges(n, edges)


@st.composite
def payoff_matrices(draw, opponent_coordinating=False):
    if opponent_coordinating:
        a = draw(st.floats(min_value=1.0, max_value=2.0, allow_nan=False))
        d = draw(st.floats(min_value=1.0, max_value=2.0, allow_nan=False))
        b = draw(st.floats(min_value=0.0, max_value=0.99, allow_nan=False))
        c = draw(st.floats(min_value=0.0, max_value=0.99, allow_nan=False))
        return PayoffMatrix(a, b, c, d)
    return PayoffMatrix(
        draw(finite_payoff), draw(finite_payoff), draw(finite_payoff), draw(finite_payoff)
    )


@st.composite
def games(draw, min_n=1, max_n=6, opponent_coordinating=False):
    graph = draw(graphs(min_n=min_n, max_n=max_n))
    payoffs = tuple(
        draw(payoff_matrices(opponent_coordinating=opponent_coordinating))
        for _ in range(graph.n)
    )
    return NetworkGame(graph=graph, payoffs=payoffs)


@st.composite
def games_with_state(draw, min_n=1, max_n=6, opponent_coordinating=False):
    game = draw(games(min_n=min_n, max_n=max_n, opponent_coordinating=opponent_coordinating))
    state = tuple(
        Strategy.A if draw(st.booleans()) else Strategy.B for _ in range(game.n)
    )
    return game, state
