"""JSON interchange for games, strategies, values, maps and reports.

All rationals serialize as lowest-terms "p/q" (or "n") strings.  Output is
canonical: sorted object keys, two-space indent, trailing newline, so
identical inputs always produce byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .evaluate import Distribution, SimulationResult, ValueVector
from .game import (
    MAX,
    MIN,
    Game,
    PositionalStrategy,
    StrategyPair,
    format_rational,
    game_to_json_dict,
    parse_rational,
    validate_game,
)
from .solvers import Solution, VerificationReport
from .transforms import BETA_RECURRENT, MIRROR, TransformMap, TransitionSplit


def canonical_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_json(path) -> dict:
    try:
        with open(path) as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}", path=str(path)) from exc


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj))


def load_game(path) -> Game:
    return validate_game(load_json(path))


def save_game(path, game: Game) -> None:
    write_json(path, game_to_json_dict(game))


def strategy_pair_to_json_dict(pair: StrategyPair) -> dict:
    return {"max": dict(pair.max_strategy.choices),
            "min": dict(pair.min_strategy.choices)}


def strategy_pair_from_json_dict(raw: dict) -> StrategyPair:
    if not isinstance(raw, dict) or "max" not in raw or "min" not in raw:
        raise ParseError('strategy file needs "max" and "min" objects')
    for side in (MAX, MIN):
        if not isinstance(raw[side], dict):
            raise ParseError(f'strategy "{side}" must be an object of state: action')
    return StrategyPair(
        PositionalStrategy(MAX, {str(s): str(a) for s, a in raw[MAX].items()}),
        PositionalStrategy(MIN, {str(s): str(a) for s, a in raw[MIN].items()}))


def values_to_json_dict(vector: ValueVector) -> dict:
    return {s: format_rational(v) for s, v in vector.as_dict().items()}


def values_from_json_dict(raw: dict, game: Game) -> ValueVector:
    if not isinstance(raw, dict):
        raise ParseError("value file must be an object of state: rational")
    parsed = {str(s): parse_rational(v) for s, v in raw.items()}
    missing = [s for s in game.state_order if s not in parsed]
    if missing:
        raise ParseError(f"value file missing states {missing}", states=missing)
    extra = [s for s in parsed if s not in game.state_index]
    if extra:
        raise ParseError(f"value file has unknown states {extra}", states=extra)
    return ValueVector(game.state_order, tuple(parsed[s] for s in game.state_order))


def distribution_to_json_dict(dist: Distribution) -> dict:
    return {s: format_rational(p) for s, p in zip(dist.state_order, dist.mass)}


def transform_map_to_json_dict(tm: TransformMap) -> dict:
    out = {
        "kind": tm.kind,
        "beta": format_rational(tm.beta),
        "s0": tm.s0,
    }
    if tm.kind == BETA_RECURRENT:
        out["state_map"] = dict(tm.state_map)
        out["action_map"] = dict(tm.action_map)
        out["splits"] = [
            {
                "index": sp.index,
                "from": sp.source,
                "action": sp.action,
                "to": sp.target,
                "first_mass": format_rational(sp.first_mass),
                "second_mass": format_rational(sp.second_mass),
            }
            for sp in tm.splits
        ]
    else:
        out["state_map"] = {s: list(pair) for s, pair in tm.state_map.items()}
        out["action_map"] = {a: list(pair) for a, pair in tm.action_map.items()}
    return out


def transform_map_from_json_dict(raw: dict) -> TransformMap:
    try:
        kind = raw["kind"]
        beta = parse_rational(raw["beta"])
        s0 = str(raw["s0"])
        if kind == BETA_RECURRENT:
            splits = tuple(
                TransitionSplit(
                    index=int(sp["index"]),
                    source=str(sp["from"]),
                    action=str(sp["action"]),
                    target=str(sp["to"]),
                    first_mass=parse_rational(sp["first_mass"]),
                    second_mass=parse_rational(sp["second_mass"]),
                )
                for sp in raw["splits"]
            )
            return TransformMap(
                kind=kind,
                state_map={str(k): str(v) for k, v in raw["state_map"].items()},
                action_map={str(k): str(v) for k, v in raw["action_map"].items()},
                beta=beta, s0=s0, splits=splits)
        if kind == MIRROR:
            return TransformMap(
                kind=kind,
                state_map={str(k): (str(v[0]), str(v[1])) for k, v in raw["state_map"].items()},
                action_map={str(k): (str(v[0]), str(v[1])) for k, v in raw["action_map"].items()},
                beta=beta, s0=s0)
        raise ParseError(f"unknown transform kind {kind!r}", kind=str(kind))
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed transform map: {exc!r}") from exc


def report_to_json_dict(report: VerificationReport) -> dict:
    return {
        "pairs_checked": report.pairs_checked,
        "violations": list(report.violations),
        "value": format_rational(report.value),
    }


def solution_to_json_dict(solution: Solution) -> dict:
    out = {
        "criterion": solution.criterion,
        "values": values_to_json_dict(solution.values),
        "strategy": strategy_pair_to_json_dict(solution.optimal_pair),
    }
    if solution.beta is not None:
        out["beta"] = format_rational(solution.beta)
    if solution.certificate is not None:
        order = solution.certificate.state_order
        out["certificate"] = {
            "lower": {s: format_rational(v) for s, v in zip(order, solution.certificate.lower)},
            "upper": {s: format_rational(v) for s, v in zip(order, solution.certificate.upper)},
        }
    return out


def simulation_to_json_dict(result: SimulationResult) -> dict:
    return {"estimate": result.estimate, "stderr": result.stderr}
