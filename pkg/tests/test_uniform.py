"""Uniform reward candidate sets, binary search, and the brute-force oracle."""

import pytest

from imitanet import (
    Graph,
    InternalInvariantError,
    NetworkGame,
    PayoffMatrix,
    PreconditionError,
    all_a_state,
    all_b_state,
    brute_force_uniform_oracle,
    candidate_rewards,
    optimal_uniform_reward,
    payoff_support,
    random_control_instance,
    search_uniform_reward,
    state_from_letters,
    succeeds_all_A,
)


def make_game(n, edges, matrices):
    return NetworkGame(
        graph=Graph.from_edges(n, edges),
        payoffs=tuple(PayoffMatrix(*m) for m in matrices),
    )


@pytest.fixture
def two_node():
    """Single edge, both matrices 2*identity, initial state (A, B)."""
    return make_game(2, [(0, 1)], [(2, 0, 0, 2)] * 2), state_from_letters("AB")


class TestPayoffSupport:
    def test_degree_one_b_neighbor(self):
        game = make_game(2, [(0, 1)], [(1, 0, 0, 1)] * 2)
        support = payoff_support(game, all_b_state(2), 0)
        assert support.a_payoffs == (0.0, 1.0)
        assert support.b_payoffs == (0.0, 1.0)

    def test_all_a_neighbors_collapse_delta(self):
        game = make_game(3, [(0, 1), (0, 2)], [(1.5, 0, 0.5, 1)] * 3)
        support = payoff_support(game, all_a_state(3), 0)
        assert support.a_payoffs == (3.0,)
        assert support.b_payoffs == (1.0,)

    def test_two_node_example(self, two_node):
        game, x0 = two_node
        # the A-player's neighbor starts at B, so both delta values appear
        assert payoff_support(game, x0, 0).a_payoffs == (0.0, 2.0)
        # the B-player's only neighbor already plays A: a single value each
        support1 = payoff_support(game, x0, 1)
        assert support1.a_payoffs == (2.0,)
        assert support1.b_payoffs == (0.0,)

    def test_size_before_dedup(self):
        game, x0, _ = random_control_instance(10, deg_exp=4.0, seed=3)
        for i in range(game.n):
            deg = game.graph.degrees[i]
            from imitanet import count_a_neighbors

            slots = deg - count_a_neighbors(game, x0, i) + 1
            support = payoff_support(game, x0, i)
            assert len(support.a_payoffs) <= slots
            assert len(support.b_payoffs) <= slots


class TestCandidateRewards:
    def test_all_a_initial_gives_only_zero(self):
        game = make_game(2, [(0, 1)], [(1, 0, 0, 1)] * 2)
        assert candidate_rewards(game, all_a_state(2)).values == (0.0,)

    def test_two_node_example(self, two_node):
        game, x0 = two_node
        # quotients (y_B - y_A) / deg over the single B-player's neighborhood
        assert candidate_rewards(game, x0).values == (-2.0, 0.0)

    def test_all_b_rejected(self, two_node):
        game, _ = two_node
        with pytest.raises(PreconditionError):
            candidate_rewards(game, all_b_state(2))

    def test_counting_bound(self):
        game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=5)
        from imitanet import Strategy

        supports = [payoff_support(game, x0, i) for i in range(game.n)]
        bound = 1
        for s in range(game.n):
            if x0[s] is not Strategy.B:
                continue
            for j in game.graph.adjacency[s]:
                for i in game.graph.closed_neighborhoods[s]:
                    if x0[i] is Strategy.B:
                        bound += len(supports[i].b_payoffs) * len(
                            supports[j].a_payoffs
                        )
        assert len(candidate_rewards(game, x0)) <= bound


class TestSucceedsAllA:
    def test_two_node_threshold(self, two_node):
        game, x0 = two_node
        assert not succeeds_all_A(game, x0, 0.0)
        for r0 in (1e-9, 0.5, 2.0):
            assert succeeds_all_A(game, x0, r0)

    def test_dominant_reward_always_succeeds(self):
        game, x0, _ = random_control_instance(10, deg_exp=4.0, seed=7)
        # payoffs live in [0, 1.5 * deg]; a huge uniform reward dominates
        assert succeeds_all_A(game, x0, 100.0)

    def test_monotone_over_grid(self):
        game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=9)
        results = [
            succeeds_all_A(game, x0, r0 * 0.1) for r0 in range(50)
        ]
        assert results == sorted(results)  # False prefix then True suffix

    def test_rejects_negative_and_non_equilibrium(self, two_node):
        game, x0 = two_node
        with pytest.raises(ValueError):
            succeeds_all_A(game, x0, -1.0)
        # path (A,A,B) with a=d=2 is not an equilibrium: agent 2 would switch
        path = make_game(3, [(0, 1), (1, 2)], [(2, 0, 0, 2)] * 3)
        with pytest.raises(PreconditionError):
            succeeds_all_A(path, state_from_letters("AAB"), 1.0)


class TestOptimalUniformReward:
    def test_all_a_initial_is_free(self):
        game = make_game(2, [(0, 1)], [(1, 0, 0, 1)] * 2)
        assert optimal_uniform_reward(game, all_a_state(2)) == 0.0

    def test_two_node_example(self, two_node):
        game, x0 = two_node
        assert optimal_uniform_reward(game, x0) == 0.0
        assert brute_force_uniform_oracle(game, x0) == 0.0

    def test_matches_oracle_on_random_instances(self):
        for seed in range(25):
            game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=100 + seed)
            r0 = optimal_uniform_reward(game, x0)
            assert r0 == brute_force_uniform_oracle(game, x0)
            assert r0 in candidate_rewards(game, x0).values

    def test_search_result_counts(self, two_node):
        game, x0 = two_node
        found = search_uniform_reward(game, x0)
        assert found.r0_star == 0.0
        assert found.candidates == 2
        assert found.simulations >= 2

    def test_requires_opponent_coordination(self):
        game = make_game(2, [(0, 1)], [(0, 1, 0, 1)] * 2)
        with pytest.raises(PreconditionError):
            optimal_uniform_reward(game, state_from_letters("AB"))

    def test_unreachable_all_a_is_internal_error(self):
        # isolated B-player can never switch: contradiction surfaces loudly
        game = make_game(3, [(0, 1)], [(1, 0, 0, 1)] * 3)
        x0 = state_from_letters("AAB")
        with pytest.raises(InternalInvariantError):
            optimal_uniform_reward(game, x0)

    def test_oracle_returns_candidate(self):
        game, x0, _ = random_control_instance(10, deg_exp=3.0, seed=77)
        value = brute_force_uniform_oracle(game, x0)
        assert value in candidate_rewards(game, x0).values
