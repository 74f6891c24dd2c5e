"""Targeted reward construction: heuristics, budgets, exhaustive baseline."""

import pytest
from hypothesis import given, settings

from imitanet import (
    DEG,
    IME,
    IPO,
    IPRO,
    IRO,
    Graph,
    NetworkGame,
    PayoffMatrix,
    PreconditionError,
    RewardVector,
    StateError,
    Strategy,
    TargetingPolicy,
    all_a_state,
    all_b_state,
    apply_rewards,
    budgeted_control,
    child_rng,
    eligible_set,
    evaluate_candidate,
    exhaustive_optimal,
    ipro_policy,
    is_equilibrium,
    min_switch_reward,
    optimal_uniform_reward,
    potential,
    rand_policy,
    random_control_instance,
    select_target,
    state_from_letters,
    targeted_control,
)
from imitanet.dynamics import IMITATION
from imitanet.targeted import _ratio_argmax

from conftest import games_with_state


def make_game(n, edges, matrices):
    return NetworkGame(
        graph=Graph.from_edges(n, edges),
        payoffs=tuple(PayoffMatrix(*m) for m in matrices),
    )


@pytest.fixture
def path_abb():
    """Path 0-1-2 at (A,B,B) where every agent earns exactly 1."""
    game = make_game(
        3, [(0, 1), (1, 2)], [(3, 1, 0, 1), (2, 0, 0, 1), (2, 0, 0, 1)]
    )
    return game, state_from_letters("ABB")


class TestEligibleSet:
    def test_consensus_states_are_empty(self, path_abb):
        game, _ = path_abb
        assert eligible_set(game, all_a_state(3)) == ()
        assert eligible_set(game, all_b_state(3)) == ()

    def test_path_abb(self, path_abb):
        game, x = path_abb
        assert eligible_set(game, x) == (0,)


class TestMinSwitchReward:
    def test_path_abb_zero_gap(self, path_abb):
        game, x = path_abb
        assert min_switch_reward(game, x, 0) == 0.0

    def test_star_example(self):
        # center plays A earning 2, three B-leaves each earn 5
        game = make_game(
            4,
            [(0, 1), (0, 2), (0, 3)],
            [(1, 2 / 3, 0, 1), (1, 0, 5, 6), (1, 0, 5, 6), (1, 0, 5, 6)],
        )
        x = state_from_letters("ABBB")
        assert min_switch_reward(game, x, 0) == pytest.approx(3.0)

    def test_rejects_ineligible(self, path_abb):
        game, x = path_abb
        with pytest.raises(ValueError):
            min_switch_reward(game, x, 2)

    def test_nonnegative_at_equilibria(self):
        for seed in range(15):
            game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=400 + seed)
            for i in eligible_set(game, x0):
                assert min_switch_reward(game, x0, i) >= 0.0


class TestPotential:
    def test_extremes(self, path_abb):
        game, _ = path_abb
        assert potential(game, all_a_state(3)) == 2 * len(game.graph.edges)
        assert potential(game, all_b_state(3)) == 0

    @given(games_with_state())
    @settings(max_examples=60, deadline=None)
    def test_closed_form_oracle(self, game_state):
        # sum of per-agent A-neighbor counts equals total degree of A-players
        game, state = game_state
        oracle = sum(
            game.graph.degrees[i]
            for i in range(game.n)
            if state[i] is Strategy.A
        )
        assert potential(game, state) == oracle


class TestEvaluateCandidate:
    def test_path_abb(self, path_abb):
        game, x = path_abb
        r_check, dphi, xprime = evaluate_candidate(
            game, RewardVector.zero(3), x, 0, 1e-9
        )
        assert r_check == 0.0
        assert xprime == all_a_state(3)
        assert dphi == 4 - 1

    def test_no_commit(self, path_abb):
        game, x = path_abb
        rewards = RewardVector.zero(3)
        evaluate_candidate(game, rewards, x, 0, 1e-9)
        assert rewards == RewardVector.zero(3)

    def test_positive_gain_when_anyone_switches(self):
        for seed in range(10):
            game, x0, _ = random_control_instance(10, deg_exp=4.0, seed=500 + seed)
            for j in eligible_set(game, x0):
                _, dphi, xprime = evaluate_candidate(
                    game, RewardVector.zero(game.n), x0, j, 1e-9
                )
                if xprime != x0:
                    assert dphi > 0


class TestSelectTarget:
    def test_singleton_for_every_policy(self, path_abb):
        game, x = path_abb
        rewards = RewardVector.zero(3)
        for policy in (rand_policy(0), DEG, IME, IPO, IRO, IPRO):
            assert select_target(policy, game, rewards, x, rng=child_rng(0)) == 0

    def test_ratio_arithmetic(self):
        # IRO ignores potential: min reward wins
        assert _ratio_argmax([(0, 0.5, 3), (1, 0.2, 1)], 0.0, 1.0) == 1
        # IPRO(1,1): 3/1.0 < 2/0.5
        assert _ratio_argmax([(0, 1.0, 3), (1, 0.5, 2)], 1.0, 1.0) == 1
        # IPO ignores reward: max potential gain wins
        assert _ratio_argmax([(0, 1.0, 3), (1, 0.5, 2)], 1.0, 0.0) == 0
        # zero-reward candidates beat any finite ratio, larger gain first
        assert _ratio_argmax([(0, 0.0, 1), (1, 0.0, 4), (2, 0.1, 9)], 1.0, 1.0) == 1
        # all-zero potential gain: cheapest candidate, lowest id on ties
        assert _ratio_argmax([(0, 0.7, 0), (1, 0.4, 0), (2, 0.4, 0)], 1.0, 1.0) == 1

    def test_empty_eligible_raises(self, path_abb):
        game, _ = path_abb
        with pytest.raises(StateError):
            select_target(IPRO, game, RewardVector.zero(3), all_b_state(3))

    def test_deg_and_ime_tie_break_lowest_id(self):
        game = make_game(
            4,
            [(0, 2), (1, 3)],
            [(1, 0, 0, 1)] * 4,
        )
        x = state_from_letters("AABB")
        rewards = RewardVector.zero(4)
        assert select_target(DEG, game, rewards, x) == 0
        assert select_target(IME, game, rewards, x) == 0


class TestTargetedControl:
    def test_all_a_start_costs_nothing(self, path_abb):
        game, _ = path_abb
        out = targeted_control(game, all_a_state(3), IPRO)
        assert out.total_cost == 0.0 and out.iterations == 0
        assert out.final_state == all_a_state(3)

    def test_path_abb_single_iteration(self, path_abb):
        game, x = path_abb
        out = targeted_control(game, x, IPRO, epsilon=1e-9)
        assert out.targeted_order == (0,)
        assert out.iterations == 1
        assert out.final_state == all_a_state(3)
        assert out.total_cost == pytest.approx(1e-9)

    def test_policy_invariance_on_forced_instances(self, path_abb):
        game, x = path_abb
        results = {
            name: targeted_control(game, x, policy).total_cost
            for name, policy in (
                ("rand", rand_policy(1)), ("deg", DEG), ("ime", IME),
                ("ipo", IPO), ("iro", IRO), ("ipro", IPRO),
            )
        }
        assert len(set(results.values())) == 1

    def test_final_state_is_rewarded_equilibrium(self):
        for seed in range(10):
            game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=800 + seed)
            out = targeted_control(game, x0, IPRO)
            assert out.final_state == all_a_state(game.n)
            assert out.num_a == game.n
            assert is_equilibrium(
                IMITATION, apply_rewards(game, out.rewards), out.final_state
            )
            assert out.total_cost == sum(out.rewards.values)

    def test_never_worse_than_uniform_total(self):
        for seed in range(15):
            game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=900 + seed)
            n = game.n
            r0 = optimal_uniform_reward(game, x0)
            out = targeted_control(game, x0, IPRO, epsilon=1e-9)
            assert out.total_cost <= n * r0 + n * 1e-9

    def test_deterministic_given_policy(self):
        game, x0, _ = random_control_instance(14, deg_exp=4.0, seed=1000)
        first = targeted_control(game, x0, ipro_policy(1.0, 1.0))
        second = targeted_control(game, x0, ipro_policy(1.0, 1.0))
        assert first == second

    def test_precondition_errors(self, path_abb):
        game, x = path_abb
        with pytest.raises(PreconditionError):
            targeted_control(game, all_b_state(3), IPRO)
        bad = make_game(3, [(0, 1), (1, 2)], [(0, 1, 0, 1)] * 3)
        with pytest.raises(PreconditionError):
            targeted_control(bad, x, IPRO)
        with pytest.raises(ValueError):
            targeted_control(game, x, IPRO, epsilon=0.0)


class TestBudgetedControl:
    def test_zero_budget_changes_nothing(self):
        game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=1100)
        out = budgeted_control(game, x0, IPRO, rho=0.0)
        assert out.total_cost == 0.0
        assert out.final_state == x0
        assert out.num_a == sum(1 for s in x0 if s is Strategy.A)

    def test_full_budget_replays_unbudgeted(self):
        for seed in range(10):
            game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=1200 + seed)
            unbudgeted = targeted_control(game, x0, IPRO)
            replay = budgeted_control(game, x0, IPRO, rho=unbudgeted.total_cost)
            assert replay == unbudgeted

    def test_nested_budgets_monotone(self):
        for seed in range(10):
            game, x0, _ = random_control_instance(12, deg_exp=4.0, seed=1300 + seed)
            total = targeted_control(game, x0, IPRO).total_cost
            previous = -1
            for fraction in (0.0, 0.25, 0.5, 0.75, 1.0):
                out = budgeted_control(game, x0, IPRO, rho=fraction * total)
                assert out.num_a >= previous
                previous = out.num_a
            assert previous == game.n

    def test_rejects_negative_budget(self, ):
        game, x0, _ = random_control_instance(10, deg_exp=4.0, seed=1400)
        with pytest.raises(ValueError):
            budgeted_control(game, x0, IPRO, rho=-1.0)


class TestExhaustiveOptimal:
    def test_no_branching_equals_heuristics(self, path_abb):
        game, x = path_abb
        assert (
            exhaustive_optimal(game, x).total_cost
            == targeted_control(game, x, IPRO).total_cost
        )

    def test_dominates_every_heuristic(self):
        for seed in range(15):
            game, x0, _ = random_control_instance(10, deg_exp=4.0, seed=1500 + seed)
            opt = exhaustive_optimal(game, x0)
            assert opt.final_state == all_a_state(game.n)
            for policy in (rand_policy(seed), DEG, IME, IPO, IRO, IPRO):
                assert (
                    opt.total_cost <= targeted_control(game, x0, policy).total_cost
                )

    def test_deadline_raises(self):
        game, x0, _ = random_control_instance(14, deg_exp=4.0, seed=1600)
        import time

        with pytest.raises(TimeoutError):
            exhaustive_optimal(game, x0, deadline=time.monotonic() - 1.0)


class TestPolicyType:
    def test_corner_exponents(self):
        assert IPO.exponents() == (1.0, 0.0)
        assert IRO.exponents() == (0.0, 1.0)
        assert IPRO.exponents() == (1.0, 1.0)
        assert ipro_policy(2.0, 0.5).exponents() == (2.0, 0.5)

    def test_validation(self):
        with pytest.raises(ValueError):
            TargetingPolicy("bogus")
        with pytest.raises(ValueError):
            TargetingPolicy("ipro", alpha=-1.0)
