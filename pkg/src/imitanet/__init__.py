"""Asynchronous imitation dynamics on networks and payoff-incentive control."""

from .dynamics import (
    IMITATION,
    ActivationSequence,
    Explicit,
    RandomUniform,
    RoundRobin,
    RuleOutcome,
    SwitchEvent,
    TiePolicy,
    Trajectory,
    UpdateRule,
    imitation_outcome,
    is_equilibrium,
    relax_switchers_only,
    simulate,
    step,
    update_agent,
)
from .errors import (
    GenerationError,
    ImitanetError,
    InternalInvariantError,
    NonConvergenceError,
    PreconditionError,
    StateError,
)
from .game import (
    Graph,
    NetworkGame,
    PayoffMatrix,
    RewardVector,
    Strategy,
    StrategyState,
    agent_payoff,
    all_a_state,
    all_b_state,
    all_opponent_coordinating,
    apply_rewards,
    connected_components,
    count_a_neighbors,
    game_from_json,
    game_to_json,
    is_opponent_coordinating,
    state_from_letters,
    state_letters,
)
from .netgen import (
    child_rng,
    geometric_random_graph,
    radius_for_mean_degree,
    random_control_instance,
    random_equilibrium_state,
    random_payoffs,
    random_theory_instance,
)
from .targeted import (
    DEG,
    IME,
    IPO,
    IPRO,
    IRO,
    ControlOutcome,
    TargetingPolicy,
    budgeted_control,
    eligible_set,
    evaluate_candidate,
    exhaustive_optimal,
    ipro_policy,
    min_switch_reward,
    potential,
    rand_policy,
    select_target,
    targeted_control,
)
from .uniform import (
    CandidateRewards,
    PayoffSupport,
    brute_force_uniform_oracle,
    candidate_rewards,
    optimal_uniform_reward,
    payoff_support,
    search_uniform_reward,
    succeeds_all_A,
)
from .verify import (
    PropertyReport,
    check_a_coordinating,
    check_a_monotone,
    check_candidate_membership,
    check_unique_convergence,
)

__version__ = "0.1.0"
