"""Command-line front end.

Every subcommand reads a JSON game document and writes a deterministic
report to stdout (human-readable by default, ``--json`` for machines).
Exit codes: 0 success / positive verdict, 10 negative verdict of a decision
subcommand, 2 input error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import galois, markov, solver
from .boolean import enumerate_lattices
from .errors import (
    GameFormatError,
    GuardExceededError,
    NumericFailureError,
    PreconditionError,
)
from .game import Policy, extract_support, load_game, simulate
from .hypergraph import (
    build_g_minus,
    build_g_plus,
    export_dot,
    hypergraph_to_json,
    merge_primes,
)
from .shapley import apply_shapley, mean_payoff_estimate, value_iteration
from .subsets import Subset

EXIT_OK = 0
EXIT_NEGATIVE = 10
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _parse_vector(text: str, n: int) -> np.ndarray:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise GameFormatError(f"bad vector {text!r}: comma-separated decimals expected")
    if len(values) != n:
        raise GameFormatError(f"vector has {len(values)} entries, game has {n} states")
    return np.asarray(values)


def _parse_set(text: str, labels) -> Subset:
    if text.strip() == "":
        return Subset.empty(len(labels))
    try:
        return Subset.from_labels([part.strip() for part in text.split(",")], labels)
    except ValueError as exc:
        raise GameFormatError(str(exc))


def _emit(args, payload: dict, human_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in human_lines:
            print(line)


def _set_labels(subset: Subset, labels) -> list[str]:
    return subset.labels(labels)


def _cmd_validate(args) -> int:
    game = load_game(args.game)
    support = extract_support(game)
    payload = {
        "command": "validate",
        "states": list(game.states),
        "min_action_pairs": support.m1,
        "transition_rows": support.m2,
        "valid": True,
    }
    _emit(args, payload, [
        f"valid game: {game.n} states, {support.m1} (state, action) pairs, "
        f"{support.m2} transition rows",
    ])
    return EXIT_OK


def _cmd_apply(args) -> int:
    game = load_game(args.game)
    x = _parse_vector(args.vec, game.n)
    y = apply_shapley(game, x)
    payload = {"command": "apply", "input": x.tolist(), "output": y.tolist()}
    _emit(args, payload, ["output: " + ",".join(repr(v) for v in y.tolist())])
    return EXIT_OK


def _cmd_iterate(args) -> int:
    game = load_game(args.game)
    if args.mean_payoff:
        est = mean_payoff_estimate(game, args.k, args.tolerance)
        payload = {
            "command": "iterate",
            "mean_payoff": est.estimate.tolist(),
            "horizon": est.horizon,
            "oscillation": est.oscillation,
            "converged": est.converged,
        }
        _emit(args, payload, [
            "mean payoff estimate: " + ",".join(repr(v) for v in est.estimate.tolist()),
            f"horizon: {est.horizon}  oscillation: {est.oscillation!r}  "
            f"converged: {est.converged}",
        ])
        return EXIT_OK
    x0 = _parse_vector(args.vec, game.n) if args.vec else None
    v = value_iteration(game, args.k, x0)
    payload = {"command": "iterate", "k": args.k, "value": v.tolist()}
    _emit(args, payload, ["value: " + ",".join(repr(val) for val in v.tolist())])
    return EXIT_OK


def _cmd_ergodic(args) -> int:
    game = load_game(args.game)
    support = extract_support(game)
    report = galois.is_ergodic(
        support,
        want_fixed_point=args.witness,
        override_guard=args.guard_override,
        debug_crosscheck=args.debug_crosscheck,
        jobs=args.jobs,
    )
    payload = {
        "command": "ergodic",
        "verdict": report.verdict,
        "witness": None,
        "fixed_point": None,
        "stats": report.stats,
    }
    lines = [f"verdict: {report.verdict}"]
    if report.witness is not None:
        I, J = report.witness
        payload["witness"] = {
            "I": _set_labels(I, game.states),
            "J": _set_labels(J, game.states),
        }
        lines.append(
            f"conjugate pair: I={{{','.join(_set_labels(I, game.states))}}} "
            f"J={{{','.join(_set_labels(J, game.states))}}}"
        )
    if report.fixed_point_witness is not None:
        payload["fixed_point"] = report.fixed_point_witness.tolist()
        lines.append(
            "fixed point: " + ",".join(repr(v) for v in report.fixed_point_witness.tolist())
        )
    lines.append(f"subsets examined: {report.stats['subsets_examined']}")
    _emit(args, payload, lines)
    return EXIT_OK if report.ergodic else EXIT_NEGATIVE


def _cmd_galois(args) -> int:
    game = load_game(args.game)
    support = extract_support(game)
    subset = _parse_set(args.set, game.states)
    if args.dual:
        result = galois.phi_star(support, subset, debug_crosscheck=args.debug_crosscheck)
        name = "phi_star"
    else:
        result = galois.phi(support, subset, debug_crosscheck=args.debug_crosscheck)
        name = "phi"
    payload = {
        "command": "galois",
        "map": name,
        "input": _set_labels(subset, game.states),
        "output": _set_labels(result, game.states),
    }
    _emit(args, payload, [f"{name}: {{{','.join(_set_labels(result, game.states))}}}"])
    return EXIT_OK


def _cmd_lattices(args) -> int:
    game = load_game(args.game)
    support = extract_support(game)
    pair = enumerate_lattices(support, override_guard=args.guard_override)
    lower = [_set_labels(s, game.states) for s in pair.lower]
    upper = [_set_labels(s, game.states) for s in pair.upper]
    payload = {"command": "lattices", "lower": lower, "upper": upper}
    _emit(args, payload, [
        "lower faces: " + "; ".join("{" + ",".join(s) + "}" for s in lower),
        "upper faces: " + "; ".join("{" + ",".join(s) + "}" for s in upper),
    ])
    return EXIT_OK


def _cmd_fixed_point(args) -> int:
    game = load_game(args.game)
    support = extract_support(game)
    I = _parse_set(args.argmin, game.states)
    if args.argmax is not None:
        J = _parse_set(args.argmax, game.states)
        answer = solver.solve_i_min_j_max(game, I, J)
    else:
        answer = solver.solve_i_min(game, I)
    payload = {
        "command": "fixed-point",
        "decision": "yes" if answer.decision else "no",
        "argmin": _set_labels(I, game.states),
    }
    lines = [f"decision: {payload['decision']}"]
    if args.argmax is not None:
        payload["argmax"] = _set_labels(_parse_set(args.argmax, game.states), game.states)
    if args.trail:
        payload["trail"] = answer.trail
        lines.append("trail: " + json.dumps(answer.trail, sort_keys=True))
    if args.construct and answer.witness is not None:
        payload["witness"] = answer.witness.tolist()
        lines.append("witness: " + ",".join(repr(v) for v in answer.witness.tolist()))
    _emit(args, payload, lines)
    return EXIT_OK if answer.decision else EXIT_NEGATIVE


def _cmd_hypergraph(args) -> int:
    game = load_game(args.game)
    support = extract_support(game)
    H = build_g_plus(support) if args.which == "plus" else build_g_minus(support)
    if args.merged:
        H = merge_primes(H)
    dot = export_dot(H)
    with open(args.dot, "w", encoding="utf-8") as fh:
        fh.write(dot)
    payload = {
        "command": "hypergraph",
        "which": args.which,
        "merged": args.merged,
        "dot_path": args.dot,
        "hypergraph": hypergraph_to_json(H),
    }
    _emit(args, payload, [
        f"wrote {args.dot}: {len(H.nodes)} nodes, {len(H.arcs)} hyperarcs, size {H.size}",
    ])
    return EXIT_OK


def _cmd_markov(args) -> int:
    game = load_game(args.game)
    analysis = markov.analyze_chain(game)
    payload = {
        "command": "markov",
        "classes": [list(c) for c in analysis.classes],
        "final_classes": [list(c) for c in analysis.final_classes],
        "ergodic": analysis.ergodic,
    }
    lines = [
        "classes: " + "; ".join("{" + ",".join(c) + "}" for c in analysis.classes),
        "final classes: " + "; ".join("{" + ",".join(c) + "}" for c in analysis.final_classes),
        f"ergodic: {analysis.ergodic}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK if analysis.ergodic else EXIT_NEGATIVE


def _default_policy(game) -> Policy:
    min_policy = {s: sorted(game.dynamics[s])[0] for s in game.states}
    max_policy = {}
    for s in game.states:
        for a, spec in game.dynamics[s].items():
            max_policy[(s, a)] = sorted(spec.max_actions)[0]
    return Policy(min_policy, max_policy)


def _load_policy(path, game) -> Policy:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    min_policy = dict(raw.get("min", {}))
    max_policy = {}
    for state, menu in raw.get("max", {}).items():
        for a, b in menu.items():
            max_policy[(state, a)] = b
    return Policy(min_policy, max_policy)


def _cmd_simulate(args) -> int:
    game = load_game(args.game)
    policy = _load_policy(args.policies, game) if args.policies else _default_policy(game)
    start = args.start if args.start is not None else game.states[0]
    trajectory = simulate(game, policy, start, args.steps, args.seed)
    payload = {
        "command": "simulate",
        "seed": trajectory.seed,
        "states": list(trajectory.states),
        "steps": [
            {"state": s.state, "min": s.min_action, "max": s.max_action, "payment": s.payment}
            for s in trajectory.steps
        ],
        "total_payoff": trajectory.total_payoff,
    }
    _emit(args, payload, [
        "visited: " + ",".join(trajectory.states),
        f"total payoff: {trajectory.total_payoff!r}",
    ])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stochgames",
        description="Ergodicity and fixed-point analysis of finite zero-sum "
        "stochastic games with perfect information.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--guard-override", action="store_true",
        help="allow subset enumeration above the dimension guard",
    )
    parser.add_argument(
        "--debug-crosscheck", action="store_true",
        help="double-compute Galois maps via Boolean iteration and compare",
    )
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for scans")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a game document")
    p.add_argument("game")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("apply", help="apply the one-step value operator")
    p.add_argument("game")
    p.add_argument("--vec", required=True, help="comma-separated decimals")
    p.set_defaults(func=_cmd_apply)

    p = sub.add_parser("iterate", help="value iteration / mean payoff estimate")
    p.add_argument("game")
    p.add_argument("-k", type=int, required=True, help="horizon")
    p.add_argument("--vec", help="starting vector (default zero)")
    p.add_argument("--mean-payoff", action="store_true", help="scaled estimate with convergence check")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser("ergodic", help="decide ergodicity")
    p.add_argument("game")
    p.add_argument("--witness", action="store_true", help="also build a fixed-point witness")
    p.set_defaults(func=_cmd_ergodic)

    p = sub.add_parser("galois", help="image of a set under the antitone pairing")
    p.add_argument("game")
    p.add_argument("--set", required=True, help="comma-separated state labels")
    p.add_argument("--dual", action="store_true", help="apply the dual map")
    p.set_defaults(func=_cmd_galois)

    p = sub.add_parser("lattices", help="enumerate invariant faces")
    p.add_argument("game")
    p.set_defaults(func=_cmd_lattices)

    p = sub.add_parser("fixed-point", help="prescribed argmin/argmax fixed point")
    p.add_argument("game")
    p.add_argument("--argmin", required=True)
    p.add_argument("--argmax")
    p.add_argument("--construct", action="store_true", help="emit the witness vector")
    p.add_argument("--trail", action="store_true", help="emit the certificate trail")
    p.set_defaults(func=_cmd_fixed_point)

    p = sub.add_parser("hypergraph", help="export a transition hypergraph")
    p.add_argument("game")
    p.add_argument("--which", choices=("plus", "minus"), required=True)
    p.add_argument("--merged", action="store_true", help="identify primed states")
    p.add_argument("--dot", required=True, help="output DOT path")
    p.set_defaults(func=_cmd_hypergraph)

    p = sub.add_parser("markov", help="zero-player chain analysis")
    p.add_argument("game")
    p.set_defaults(func=_cmd_markov)

    p = sub.add_parser("simulate", help="play stationary policies")
    p.add_argument("game")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--policies", help="JSON policy file")
    p.add_argument("--start", help="start state (default: first)")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericFailureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GameFormatError, PreconditionError, GuardExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
