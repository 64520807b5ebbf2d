"""Sweep the discount factor toward one and watch the solution freeze.

For each seeded game the strategic-via-recovery pipeline runs at
beta = 1 - 2^-k for k in a range; the script reports the first k whose
full output (values and strategy pair) never changes again, and whether
that frozen output equals the exact mean-payoff solution.

    python scripts/blackwell_sweep.py --seeds 200 225 --kmax 12
"""

import argparse
from fractions import Fraction

from smpg.generate import GeneratorConfig, generate_game
from smpg.solvers import (
    MEAN,
    brute_force_solve,
    reference_recovery_oracle,
    strategic_via_recovery,
)


def sweep(game, kmin, kmax):
    outputs = []
    for k in range(kmin, kmax + 1):
        beta = 1 - Fraction(1, 2 ** k)
        sol = strategic_via_recovery(game, beta, reference_recovery_oracle)
        outputs.append((sol.values.values, sol.optimal_pair))
    stable_from = next(
        k for k, out in zip(range(kmin, kmax + 1), outputs)
        if all(later == out for later in outputs[k - kmin:]))
    return outputs[-1], stable_from


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", nargs=2, type=int, default=(200, 225),
                        metavar=("FIRST", "LAST"),
                        help="seed range, half open (default 200 225)")
    parser.add_argument("--kmin", type=int, default=4)
    parser.add_argument("--kmax", type=int, default=12)
    parser.add_argument("--states", type=int, default=3,
                        help="state count is (seed %% STATES) + 1")
    args = parser.parse_args()

    print(f"{'seed':>6} {'states':>6} {'stable at k':>12} {'matches exact':>14}")
    worst = args.kmin
    clean = True
    for seed in range(args.seeds[0], args.seeds[1]):
        cfg = GeneratorConfig(
            states=(seed % args.states) + 1,
            actions_per_state=(1, 2),
            transitions_per_action=(1, 2),
            reward_bound=3,
            denominator_bound=3,
            max_states_fraction=Fraction(1, 2),
            seed=seed,
        )
        game = generate_game(cfg)
        (values, _), stable_from = sweep(game, args.kmin, args.kmax)
        exact = brute_force_solve(game, MEAN).values.values
        match = values == exact
        clean = clean and match
        worst = max(worst, stable_from)
        print(f"{seed:>6} {len(game.states):>6} {stable_from:>12} "
              f"{'yes' if match else 'NO':>14}")
    print(f"\nworst stabilization k: {worst}; "
          f"all outputs match the exact mean solution: {'yes' if clean else 'NO'}")
    return 0 if clean else 1


if __name__ == "__main__":
    raise SystemExit(main())
