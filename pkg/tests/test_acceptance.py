"""Acceptance suite.

One test per acceptance criterion, each over a frozen seeded instance set.
Every check is exact rational arithmetic except the Monte Carlo agreement
criterion, which uses its stated statistical band.  Run with ``-s`` to see
the per-criterion summary lines; the test names themselves give one
pass/fail line per criterion under ``-v``.
"""

import json
import time
from fractions import Fraction as F

from smpg.cli import main
from smpg.evaluate import mean_values, simulate_mean_payoff
from smpg.game import MAX, MIN, enumerate_strategies, induced_chain
from smpg.generate import GeneratorConfig, generate_game
from smpg.solvers import (
    DISCOUNTED,
    MEAN,
    brute_force_solve,
    reference_recovery_oracle,
    strategic_via_recovery,
    strategy_iteration_discounted,
    verify_star,
    verify_star2,
)
from smpg.transforms import beta_recurrent, decompose_mirror_strategies, mirror

from .conftest import pair_of, raw_g2


def _cfg(seed, states, actions, fanout, reward_bound, denominator_bound):
    return GeneratorConfig(
        states=states,
        actions_per_state=actions,
        transitions_per_action=fanout,
        reward_bound=reward_bound,
        denominator_bound=denominator_bound,
        max_states_fraction=F(1, 2),
        seed=seed,
    )


def small_games():
    """Instance set for the reset-transform identity: 100 games, 3 betas."""
    for seed in range(100):
        yield generate_game(_cfg(seed, (seed % 4) + 1, (1, 2), (1, 3), 4, 4))


_MIRROR_BETAS = (F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(9, 10))
_mirror_cache = None


def mirror_instances():
    """50 reset games with their mirrored doubles, shared by criteria 2-4."""
    global _mirror_cache
    if _mirror_cache is None:
        rows = []
        for seed in range(100, 150):
            g = generate_game(_cfg(seed, (seed % 3) + 1, (1, 2), (1, 2), 3, 3))
            beta = _MIRROR_BETAS[seed % 5]
            s0 = g.state_order[seed % len(g.state_order)]
            gb, tm = beta_recurrent(g, beta, s0)
            doubled, mm = mirror(gb, tm)
            rows.append((gb, tm, doubled, mm))
        _mirror_cache = rows
    return _mirror_cache


def test_criterion_1_reset_identity_exact_on_seed_sweep():
    started = time.monotonic()
    pairs = violations = 0
    for g in small_games():
        for beta in (F(1, 3), F(1, 2), F(9, 10)):
            for s0 in g.state_order:
                report = verify_star(g, beta, s0)
                pairs += report.pairs_checked
                violations += len(report.violations)
    elapsed = time.monotonic() - started
    assert violations == 0
    assert elapsed < 120
    print(f"ACCEPTANCE 1 PASS: reset identity exact on {pairs} strategy "
          f"pairs across 100 games x 3 betas x every start ({elapsed:.1f}s)")


def test_criterion_2_mirror_identities_exact():
    started = time.monotonic()
    pairs = violations = 0
    for gb, tm, _, _ in mirror_instances():
        report = verify_star2(gb, tm)
        pairs += report.pairs_checked
        violations += len(report.violations)
    elapsed = time.monotonic() - started
    assert violations == 0
    assert elapsed < 120
    print(f"ACCEPTANCE 2 PASS: mirror value and occupation identities exact "
          f"on {pairs} pairs across 50 games ({elapsed:.1f}s)")


def test_criterion_3_mirrored_games_have_value_zero():
    started = time.monotonic()
    checked = 0
    for _, _, doubled, _ in mirror_instances():
        sol = brute_force_solve(doubled, MEAN)
        assert set(sol.values.values) == {F(0)}
        checked += 1
    elapsed = time.monotonic() - started
    print(f"ACCEPTANCE 3 PASS: optimal mean value is 0 at every state of "
          f"{checked} mirrored games ({elapsed:.1f}s)")


def test_criterion_4_restrictions_of_mirror_optima_are_optimal():
    started = time.monotonic()
    checked = 0
    for gb, _, doubled, mm in mirror_instances():
        target = brute_force_solve(gb, MEAN).values.values
        sol = brute_force_solve(doubled, MEAN)
        one, _ = decompose_mirror_strategies(sol.optimal_pair, mm)
        achieved = mean_values(induced_chain(gb, one)).values
        assert achieved == target
        # uniform optimality of each restriction in the reset game
        for smin in enumerate_strategies(gb, MIN):
            against = pair_of(one.max_strategy.choices, smin.choices)
            got = mean_values(induced_chain(gb, against)).values
            assert all(x >= t for x, t in zip(got, target))
        for smax in enumerate_strategies(gb, MAX):
            against = pair_of(smax.choices, one.min_strategy.choices)
            got = mean_values(induced_chain(gb, against)).values
            assert all(x <= t for x, t in zip(got, target))
        checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 120
    print(f"ACCEPTANCE 4 PASS: decomposed restrictions are uniformly optimal "
          f"in all {checked} reset games ({elapsed:.1f}s)")


def test_criterion_5_blackwell_sweep_stabilizes_to_mean_solution():
    started = time.monotonic()
    worst_k = 0
    for seed in range(200, 225):
        g = generate_game(_cfg(seed, (seed % 3) + 1, (1, 2), (1, 2), 3, 3))
        outputs = []
        for k in range(4, 13):
            beta = 1 - F(1, 2 ** k)
            sol = strategic_via_recovery(g, beta, reference_recovery_oracle)
            outputs.append((sol.values.values, sol.optimal_pair))
        stable_from = next(k for k, out in zip(range(4, 13), outputs)
                           if all(later == out for later in outputs[k - 4:]))
        # stabilized well inside the sweep, with repeats confirming it
        assert stable_from <= 10
        worst_k = max(worst_k, stable_from)
        bf = brute_force_solve(g, MEAN)
        assert outputs[-1][0] == bf.values.values
    elapsed = time.monotonic() - started
    assert elapsed < 300
    print(f"ACCEPTANCE 5 PASS: discount sweep output stabilizes by "
          f"k={worst_k} on all 25 games and equals the exact mean solution "
          f"({elapsed:.1f}s)")


def test_criterion_6_strategy_iteration_matches_brute_force():
    started = time.monotonic()
    checked = 0
    for seed in range(600, 650):
        g = generate_game(_cfg(seed, (seed % 4) + 1, (1, 3), (1, 3), 4, 4))
        for beta in (F(1, 2), F(9, 10)):
            si = strategy_iteration_discounted(g, beta)
            bf = brute_force_solve(g, DISCOUNTED, beta=beta)
            assert si.values.values == bf.values.values
            checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 120
    print(f"ACCEPTANCE 6 PASS: strategy iteration equals brute force on "
          f"{checked} discounted instances ({elapsed:.1f}s)")


def test_criterion_7_determinacy_certificates_coincide():
    started = time.monotonic()
    checked = 0
    for g in small_games():
        for criterion, beta in ((MEAN, None), (DISCOUNTED, F(1, 2))):
            sol = brute_force_solve(g, criterion, beta=beta)
            assert sol.certificate is not None
            assert sol.certificate.lower == sol.certificate.upper
            assert sol.certificate.lower == sol.values.values
            checked += 1
    elapsed = time.monotonic() - started
    print(f"ACCEPTANCE 7 PASS: sup-inf and inf-sup certificates coincide on "
          f"{checked} brute-forced instances ({elapsed:.1f}s)")


def test_criterion_8_monte_carlo_agrees_with_exact_values():
    started = time.monotonic()
    hits = total = 0
    for i, seed in enumerate(range(700, 740)):
        g = generate_game(_cfg(seed, (i % 3) + 3, (1, 2), (3, 4), 3, 3))
        pair = pair_of(next(iter(enumerate_strategies(g, MAX))).choices,
                       next(iter(enumerate_strategies(g, MIN))).choices)
        start = g.state_order[0]
        exact = mean_values(induced_chain(g, pair)).at(start)
        res = simulate_mean_payoff(g, pair, start, horizon=10_000, plays=200,
                                   seed=1000 + i)
        total += 1
        if abs(res.estimate - float(exact)) <= 5 * res.stderr:
            hits += 1
    elapsed = time.monotonic() - started
    assert total == 40
    assert hits >= 38
    print(f"ACCEPTANCE 8 PASS: {hits}/{total} simulations within five "
          f"standard errors of the exact mean payoff ({elapsed:.1f}s)")


def test_criterion_9_cli_round_trip_is_byte_exact(tmp_path, capsys):
    g2 = tmp_path / "g2.json"
    g2.write_text(json.dumps(raw_g2()))
    pair = tmp_path / "pair.json"
    pair.write_text(json.dumps({"max": {"a": "X"}, "min": {"b": "Y"}}))
    reset = tmp_path / "reset.json"

    def run(*argv):
        code = main(list(argv))
        out = capsys.readouterr().out
        return code, out

    code, out = run("eval", str(g2), "--strategy", str(pair),
                    "--criterion", "discounted", "--beta", "1/2")
    assert code == 0 and out == '{\n  "a": "1/3",\n  "b": "-1/3"\n}\n'

    code, out = run("verify", "star", str(g2), "--beta", "1/2",
                    "--start", "a")
    assert code == 0
    assert out == ('{\n'
                   '  "pairs_checked": 1,\n'
                   '  "value": "1/3",\n'
                   '  "violations": []\n'
                   '}\n')

    code, out = run("transform", "beta-recurrent", str(g2), "--beta", "1/2",
                    "--start", "a", "--out", str(reset))
    assert code == 0
    code, out = run("eval", str(reset), "--strategy", str(pair),
                    "--criterion", "mean")
    assert code == 0 and out == '{\n  "a": "1/3",\n  "b": "1/3"\n}\n'

    doubled = tmp_path / "doubled.json"
    code, out = run("transform", "mirror", str(reset),
                    "--map", str(tmp_path / "reset.map.json"),
                    "--out", str(doubled))
    assert code == 0
    code, out = run("solve", str(doubled), "--criterion", "mean")
    assert code == 0
    solution = json.loads(out)
    assert solution["values"] == {"a1": "0", "b1": "0", "a2": "0", "b2": "0"}

    code, repeat = run("solve", str(doubled), "--criterion", "mean")
    assert code == 0 and repeat == out
    print("ACCEPTANCE 9 PASS: command line reduction session reproduces the "
          "worked values byte for byte")
