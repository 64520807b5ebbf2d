"""Solving, recovery, and the two verification drivers."""

from fractions import Fraction as F

import pytest

from smpg.errors import (
    CombinatorialLimitExceeded,
    DeterminacyViolation,
    InconsistentValues,
    InvalidBeta,
    NoConsistentStrategy,
    UnknownState,
)
from smpg.evaluate import ValueVector, mean_values
from smpg.game import MAX, MIN, induced_chain
from smpg.generate import GeneratorConfig, generate_game
from smpg.solvers import (
    Certificate,
    DISCOUNTED,
    MEAN,
    Solution,
    brute_force_solve,
    evaluate_pair,
    greedy_recovery_discounted,
    reference_recovery_oracle,
    strategic_via_recovery,
    strategy_iteration_discounted,
    verify_star,
    verify_star2,
)
from smpg.transforms import beta_recurrent, mirror

from .conftest import pair_of


def test_brute_force_loop_choice_mean(g1b):
    sol = brute_force_solve(g1b, MEAN)
    assert sol.values.as_dict() == {"s0": F(4)}
    assert sol.optimal_pair.max_strategy.choices == {"s0": "A"}
    assert sol.certificate.lower == sol.certificate.upper == (F(4),)


def test_brute_force_loop_choice_discounted(g1b):
    sol = brute_force_solve(g1b, DISCOUNTED, beta=F(1, 2))
    assert sol.values.as_dict() == {"s0": F(4)}
    assert sol.beta == F(1, 2)


def test_brute_force_two_cycle(g2):
    assert brute_force_solve(g2, MEAN).values.values == (F(0), F(0))
    sol = brute_force_solve(g2, DISCOUNTED, beta=F(1, 2))
    assert sol.values.as_dict() == {"a": F(1, 3), "b": F(-1, 3)}


def test_brute_force_requires_beta_for_discounted(g2):
    with pytest.raises(InvalidBeta):
        brute_force_solve(g2, DISCOUNTED)


def test_brute_force_respects_pair_cap(g1b):
    with pytest.raises(CombinatorialLimitExceeded):
        brute_force_solve(g1b, MEAN, cap=1)


def test_solution_rejects_mismatched_certificate(g1b):
    values = ValueVector(("s0",), (F(4),))
    pair = pair_of({"s0": "A"}, {})
    cert = Certificate(("s0",), (F(3),), (F(4),))
    with pytest.raises(DeterminacyViolation):
        Solution(MEAN, None, values, pair, cert)


def test_evaluate_pair_dispatches_and_validates(g1b):
    pair = pair_of({"s0": "B"}, {})
    assert evaluate_pair(g1b, pair, MEAN).values == (F(0),)
    assert evaluate_pair(g1b, pair, DISCOUNTED, beta=F(1, 2)).values == (F(0),)
    with pytest.raises(InvalidBeta):
        evaluate_pair(g1b, pair, DISCOUNTED)
    with pytest.raises(ValueError):
        evaluate_pair(g1b, pair, "average")


def test_strategy_iteration_on_fixtures(g1b, g2):
    sol = strategy_iteration_discounted(g1b, F(1, 2))
    assert sol.values.as_dict() == {"s0": F(4)}
    assert sol.optimal_pair.max_strategy.choices == {"s0": "A"}
    sol2 = strategy_iteration_discounted(g2, F(1, 2))
    assert sol2.values.as_dict() == {"a": F(1, 3), "b": F(-1, 3)}


def test_strategy_iteration_matches_brute_force_on_seeded_games():
    for seed in range(40, 55):
        cfg = GeneratorConfig(
            states=(seed % 4) + 1,
            actions_per_state=(1, 3),
            transitions_per_action=(1, 3),
            reward_bound=4,
            denominator_bound=4,
            max_states_fraction=F(1, 2),
            seed=seed,
        )
        g = generate_game(cfg)
        for beta in (F(1, 2), F(9, 10)):
            si = strategy_iteration_discounted(g, beta)
            bf = brute_force_solve(g, DISCOUNTED, beta=beta)
            assert si.values.values == bf.values.values


def test_greedy_recovery_picks_improving_loop(g1b):
    claimed = ValueVector(("s0",), (F(4),))
    pair = greedy_recovery_discounted(g1b, F(1, 2), claimed)
    assert pair.max_strategy.choices == {"s0": "A"}
    assert pair.min_strategy.choices == {}


def test_greedy_recovery_rejects_wrong_values(g1b):
    with pytest.raises(InconsistentValues):
        greedy_recovery_discounted(g1b, F(1, 2), ValueVector(("s0",), (F(3),)))


def test_greedy_recovery_rejects_unknown_state(g1b):
    with pytest.raises(UnknownState):
        greedy_recovery_discounted(g1b, F(1, 2), ValueVector(("zz",), (F(4),)))


def test_greedy_recovery_reproduces_optimal_play_on_seeded_games():
    for seed in range(60, 72):
        cfg = GeneratorConfig(
            states=(seed % 3) + 1,
            actions_per_state=(1, 3),
            transitions_per_action=(1, 3),
            reward_bound=4,
            denominator_bound=4,
            max_states_fraction=F(1, 2),
            seed=seed,
        )
        g = generate_game(cfg)
        bf = brute_force_solve(g, DISCOUNTED, beta=F(2, 3))
        pair = greedy_recovery_discounted(g, F(2, 3), bf.values)
        got = evaluate_pair(g, pair, DISCOUNTED, beta=F(2, 3))
        assert got.values == bf.values.values


def test_reference_oracle_finds_first_consistent_pair(g1b):
    pair = reference_recovery_oracle(g1b, ValueVector(("s0",), (F(4),)))
    assert pair.max_strategy.choices == {"s0": "A"}


def test_reference_oracle_rejects_unattained_values(g1b):
    with pytest.raises(NoConsistentStrategy):
        reference_recovery_oracle(g1b, ValueVector(("s0",), (F(7),)))


def test_reference_oracle_requires_a_saddle_point(g1b):
    # In the doubled loop-choice game the pair (A, B') attains mean 2
    # everywhere, but MIN improves by switching to A', so a claim of 2 has
    # a value-matching pair and still no equilibrium witness.
    gb, tm = beta_recurrent(g1b, F(1, 2), "s0")
    doubled, _ = mirror(gb, tm)
    attained = mean_values(induced_chain(
        doubled, pair_of({"s01": "A"}, {"s02": "B'"}))).values
    assert attained == (F(2), F(2))
    with pytest.raises(NoConsistentStrategy):
        reference_recovery_oracle(doubled,
                                  ValueVector(doubled.state_order, attained))


def test_verify_star_two_cycle(g2):
    report = verify_star(g2, F(1, 2), "a")
    assert report.pairs_checked == 1
    assert report.violations == ()
    assert report.value == F(1, 3)
    assert report.ok


def test_verify_star_respects_cap(g1b):
    with pytest.raises(CombinatorialLimitExceeded):
        verify_star(g1b, F(1, 2), "s0", cap=1)


def test_verify_star2_two_cycle(g2):
    gb, tm = beta_recurrent(g2, F(1, 2), "a")
    report = verify_star2(gb, tm)
    assert report.pairs_checked == 1
    assert report.violations == ()
    assert report.value == F(0)


def test_strategic_via_recovery_on_fixtures(g1b, g2):
    sol = strategic_via_recovery(g1b, F(1, 2), reference_recovery_oracle)
    assert sol.criterion == MEAN
    assert sol.beta == F(1, 2)
    assert sol.values.as_dict() == {"s0": F(4)}
    assert sol.optimal_pair.max_strategy.choices == {"s0": "A"}
    # the recovered pair is reported with its mean payoff, which for the
    # two-cycle is zero from both ends
    sol2 = strategic_via_recovery(g2, F(1, 2), reference_recovery_oracle)
    assert sol2.values.as_dict() == {"a": F(0), "b": F(0)}
    assert sol2.values.values == brute_force_solve(g2, MEAN).values.values


def test_strategic_via_recovery_reports_each_stage(g2):
    seen = []

    def spy(state, reset_game, reset_map, doubled, mirror_map, witness, value):
        seen.append((state, len(doubled.state_order), value))

    strategic_via_recovery(g2, F(1, 2), reference_recovery_oracle,
                           on_stage=spy)
    assert [(s, n) for s, n, _ in seen] == [("a", 4), ("b", 4)]
    assert [v for _, _, v in seen] == [F(1, 3), F(-1, 3)]
