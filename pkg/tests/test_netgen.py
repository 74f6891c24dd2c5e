"""Random graph, payoff, and initial-state generation."""

import math

import numpy as np
import pytest

from imitanet import (
    GenerationError,
    NetworkGame,
    Strategy,
    child_rng,
    connected_components,
    geometric_random_graph,
    is_equilibrium,
    is_opponent_coordinating,
    radius_for_mean_degree,
    random_control_instance,
    random_equilibrium_state,
    random_payoffs,
    random_theory_instance,
)
from imitanet.dynamics import IMITATION


class TestRadiusFormula:
    def test_n100_deg4(self):
        assert radius_for_mean_degree(100, 4.0) == pytest.approx(
            math.sqrt(5.0 / (100.0 * math.pi))
        )

    def test_unit_radius_algebra(self):
        n = 10
        deg_exp = math.pi * n - 1.0
        assert radius_for_mean_degree(n, deg_exp) == pytest.approx(1.0)

    def test_monotone_decreasing_in_n(self):
        radii = [radius_for_mean_degree(n, 4.0) for n in (10, 50, 100, 500)]
        assert radii == sorted(radii, reverse=True)


class TestGeometricGraph:
    def test_large_radius_gives_complete_graph(self):
        g = geometric_random_graph(8, math.sqrt(2.0), child_rng(1))
        assert len(g.edges) == 8 * 7 // 2

    def test_tiny_radius_gives_empty_graph(self):
        g = geometric_random_graph(50, 1e-9, child_rng(2))
        assert g.edges == ()

    def test_mean_degree_matches_formula(self):
        # Monte-Carlo check of the area formula at n=100, target degree 4
        radius = radius_for_mean_degree(100, 4.0)
        total = 0.0
        samples = 500
        for k in range(samples):
            g = geometric_random_graph(100, radius, child_rng(3, k))
            total += sum(g.degrees) / g.n
        mean_degree = total / samples
        assert abs(mean_degree - 4.0) <= 0.5

    def test_deterministic_given_seed(self):
        a = geometric_random_graph(30, 0.3, child_rng(4))
        b = geometric_random_graph(30, 0.3, child_rng(4))
        assert a == b

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            geometric_random_graph(0, 0.5, child_rng(0))
        with pytest.raises(ValueError):
            geometric_random_graph(5, 0.0, child_rng(0))


class TestRandomPayoffs:
    def test_zero_variance_is_pure_coordination(self):
        payoffs = random_payoffs(5, 1.5, 0.0, child_rng(5))
        for pm in payoffs:
            assert (pm.a, pm.b, pm.c, pm.d) == (1.5, 0.0, 0.0, 1.5)

    def test_always_opponent_coordinating(self):
        for seed in range(20):
            for pm in random_payoffs(20, 1.0, 1.0, child_rng(6, seed)):
                assert is_opponent_coordinating(pm)

    def test_matches_reference_settings(self):
        # the experiments run at coordination level 1 and variance one half
        payoffs = random_payoffs(10, 1.0, 0.5, child_rng(7))
        for pm in payoffs:
            assert 1.0 <= pm.a <= 1.5 and 0.0 <= pm.b <= 0.5
            assert 0.0 <= pm.c <= 0.5 and 1.0 <= pm.d <= 1.5

    def test_validates_ranges(self):
        with pytest.raises(ValueError):
            random_payoffs(3, 0.5, 0.5, child_rng(0))
        with pytest.raises(ValueError):
            random_payoffs(3, 1.0, 1.5, child_rng(0))


class TestRandomEquilibriumState:
    def test_output_is_mixed_equilibrium(self):
        for seed in range(10):
            game, _ = random_theory_instance(15, deg_exp=4.0, seed=seed)
            x0 = random_equilibrium_state(game, child_rng(8, seed))
            assert is_equilibrium(IMITATION, game, x0)
            n_a = sum(1 for s in x0 if s is Strategy.A)
            assert 0 < n_a < game.n

    def test_deterministic_given_seed(self):
        game, _ = random_theory_instance(15, deg_exp=4.0, seed=3)
        assert random_equilibrium_state(game, child_rng(9)) == (
            random_equilibrium_state(game, child_rng(9))
        )

    def test_raises_when_no_mixed_equilibrium_exists(self):
        # a complete graph relaxes to consensus from every random start
        from imitanet import Graph

        n = 5
        graph = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
        game = NetworkGame(
            graph=graph, payoffs=random_payoffs(n, 1.0, 0.5, child_rng(10))
        )
        with pytest.raises(GenerationError):
            random_equilibrium_state(game, child_rng(11), max_attempts=50)


class TestRandomControlInstance:
    def test_viability(self):
        for seed in range(10):
            game, x0, meta = random_control_instance(12, deg_exp=4.0, seed=seed)
            assert is_equilibrium(IMITATION, game, x0)
            assert meta["components"] == len(connected_components(game.graph))
            for comp in connected_components(game.graph):
                assert any(x0[i] is Strategy.A for i in comp)

    def test_require_connected(self):
        game, _, meta = random_control_instance(
            12, deg_exp=4.0, seed=0, require_connected=True
        )
        assert meta["components"] == 1

    def test_deterministic(self):
        a = random_control_instance(10, deg_exp=4.0, seed=5)
        b = random_control_instance(10, deg_exp=4.0, seed=5)
        assert a[0] == b[0] and a[1] == b[1]

    def test_radius_and_deg_exp_are_exclusive(self):
        with pytest.raises(ValueError):
            random_control_instance(10, seed=0)
        with pytest.raises(ValueError):
            random_control_instance(10, deg_exp=4.0, radius=0.3, seed=0)
