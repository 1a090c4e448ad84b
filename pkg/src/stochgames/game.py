"""Finite zero-sum stochastic games with perfect information.

A game has states ``S``, and in each state the minimizing player picks an
action, after which the maximizing player picks a response from a menu that
may depend on the chosen action.  Each (state, min action, max action)
triple carries a payment (paid by the minimizer to the maximizer) and a
probability row over successor states.

Game documents are JSON::

    {"states": ["1", "2"],
     "dynamics": {"1": {"a": {"b": {"payment": 0.5,
                                    "transition": {"1": "1/2", "2": 0.5}}}}, ...}}

Probabilities may be decimals or exact ``"p/q"`` strings.  Canonical
serialization sorts all keys lexicographically, so parse/serialize round
trips are stable.
"""
from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateSupportError,
    GameFormatError,
    PreconditionError,
    StochasticityError,
)

ROW_SUM_TOLERANCE = 1e-9
SUPPORT_ZERO_THRESHOLD = 1e-12


@dataclass(frozen=True)
class MaxOption:
    """One response of the maximizing player: its payment and transition row."""

    payment: float
    transition: dict[str, float]


@dataclass(frozen=True)
class MinActionSpec:
    """The maximizer's menu attached to one action of the minimizing player."""

    max_actions: dict[str, MaxOption]


@dataclass(frozen=True)
class GameSpec:
    """A validated game: ordered state labels plus per-state dynamics.

    Invariants checked on construction: every state has at least one min
    action, every min action at least one max option, every transition row
    is nonnegative, sums to one within ``ROW_SUM_TOLERANCE`` and only names
    existing states.
    """

    states: tuple[str, ...]
    dynamics: dict[str, dict[str, MinActionSpec]]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.states:
            raise GameFormatError("a game needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise GameFormatError("duplicate state labels")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})
        if set(self.dynamics) != set(self.states):
            missing = sorted(set(self.states) - set(self.dynamics))
            extra = sorted(set(self.dynamics) - set(self.states))
            raise GameFormatError(
                f"dynamics must cover exactly the declared states "
                f"(missing {missing}, unknown {extra})"
            )
        for state in self.states:
            actions = self.dynamics[state]
            if not actions:
                raise GameFormatError(f"state {state!r} has no min action")
            for a, spec in actions.items():
                if not spec.max_actions:
                    raise GameFormatError(f"({state!r}, {a!r}) has no max action")
                for b, opt in spec.max_actions.items():
                    self._validate_row(state, a, b, opt.transition)

    def _validate_row(self, state: str, a: str, b: str, row: Mapping[str, float]) -> None:
        where = f"transition of ({state!r}, {a!r}, {b!r})"
        if not row:
            raise StochasticityError(f"{where} is empty")
        total = 0.0
        for target, p in row.items():
            if target not in self._index:
                raise GameFormatError(f"{where} names unknown state {target!r}")
            if p < 0:
                raise StochasticityError(f"{where} has negative probability {p} on {target!r}")
            total += p
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            raise StochasticityError(f"{where} sums to {total!r}, not 1")

    @property
    def n(self) -> int:
        return len(self.states)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GameFormatError(f"unknown state label {label!r}") from None

    def min_actions(self, state: str) -> tuple[str, ...]:
        return tuple(self.dynamics[state])

    def max_actions(self, state: str, a: str) -> tuple[str, ...]:
        return tuple(self.dynamics[state][a].max_actions)

    def option(self, state: str, a: str, b: str) -> MaxOption:
        return self.dynamics[state][a].max_actions[b]

    def max_abs_payment(self) -> float:
        return max(
            abs(opt.payment)
            for actions in self.dynamics.values()
            for spec in actions.values()
            for opt in spec.max_actions.values()
        )


@dataclass(frozen=True)
class SupportRow:
    """Nonzero pattern of the transition row of one (state, a, b) triple."""

    state: str
    min_action: str
    max_action: str
    successors: tuple[int, ...]


@dataclass(frozen=True)
class SupportSpec:
    """The zero/nonzero pattern of a game's transitions.

    Rows are sorted by (state index, min label, max label); successor sets
    are nonempty tuples of state indices.  All combinatorial algorithms in
    this library depend on the game only through this object.
    """

    states: tuple[str, ...]
    rows: tuple[SupportRow, ...]

    def __post_init__(self):
        if not self.states:
            raise ValueError("support needs at least one state")
        covered = set()
        for row in self.rows:
            if not row.successors:
                raise DegenerateSupportError(
                    f"({row.state!r}, {row.min_action!r}, {row.max_action!r}) has empty support"
                )
            if any(not 0 <= j < len(self.states) for j in row.successors):
                raise ValueError("successor index out of range")
            covered.add(row.state)
        if covered != set(self.states):
            raise ValueError("every state needs at least one support row")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def m1(self) -> int:
        """Number of (state, min action) pairs."""
        return len({(r.state, r.min_action) for r in self.rows})

    @property
    def m2(self) -> int:
        """Number of (state, min action, max action) triples."""
        return len(self.rows)

    def grouped(self) -> dict[str, dict[str, dict[str, tuple[int, ...]]]]:
        """Nested view: state -> min action -> max action -> successors."""
        out: dict[str, dict[str, dict[str, tuple[int, ...]]]] = {s: {} for s in self.states}
        for r in self.rows:
            out[r.state].setdefault(r.min_action, {})[r.max_action] = r.successors
        return out

    def successors(self, state: str, a: str, b: str) -> tuple[int, ...]:
        for r in self.rows:
            if (r.state, r.min_action, r.max_action) == (state, a, b):
                return r.successors
        raise KeyError((state, a, b))

    def uniform_game(self) -> GameSpec:
        """Payment-free representative with uniform rows on each support."""
        dynamics: dict[str, dict[str, MinActionSpec]] = {}
        for state, actions in self.grouped().items():
            dynamics[state] = {
                a: MinActionSpec(
                    {
                        b: MaxOption(
                            0.0,
                            {self.states[j]: 1.0 / len(succ) for j in succ},
                        )
                        for b, succ in menu.items()
                    }
                )
                for a, menu in actions.items()
            }
        return GameSpec(self.states, dynamics)


@dataclass(frozen=True)
class Policy:
    """Stationary feedback policies for both players.

    ``min_policy`` maps a state label to a min action; ``max_policy`` maps a
    (state, min action) pair to a max action.
    """

    min_policy: dict[str, str]
    max_policy: dict[tuple[str, str], str]

    def validate(self, game: GameSpec) -> None:
        for state in game.states:
            a = self.min_policy.get(state)
            if a is None or a not in game.dynamics[state]:
                raise PreconditionError(f"min policy invalid at state {state!r}: {a!r}")
            for action in game.dynamics[state]:
                b = self.max_policy.get((state, action))
                if b is None or b not in game.dynamics[state][action].max_actions:
                    raise PreconditionError(
                        f"max policy invalid at ({state!r}, {action!r}): {b!r}"
                    )


@dataclass(frozen=True)
class TrajectoryStep:
    state: str
    min_action: str
    max_action: str
    payment: float


@dataclass(frozen=True)
class Trajectory:
    """A simulated play: visited states, chosen actions, accumulated payment."""

    seed: int
    steps: tuple[TrajectoryStep, ...]
    states: tuple[str, ...]
    total_payoff: float


def _to_probability(value, where: str) -> float:
    if isinstance(value, bool):
        raise GameFormatError(f"{where}: boolean is not a probability")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise GameFormatError(f"{where}: bad probability string {value!r}") from None
    raise GameFormatError(f"{where}: probability must be a number or 'p/q' string")


def parse_game(document: str) -> GameSpec:
    """Parse and validate a JSON game document.

    Raises :class:`GameFormatError` with line/column on syntax errors, and
    :class:`StochasticityError` for bad probability rows.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise GameFormatError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(raw, dict):
        raise GameFormatError("top level must be an object")
    for key in ("states", "dynamics"):
        if key not in raw:
            raise GameFormatError(f"missing top-level field {key!r}")
    states = raw["states"]
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise GameFormatError("'states' must be a list of strings")
    dynamics_raw = raw["dynamics"]
    if not isinstance(dynamics_raw, dict):
        raise GameFormatError("'dynamics' must be an object")

    dynamics: dict[str, dict[str, MinActionSpec]] = {}
    for state, actions in dynamics_raw.items():
        if not isinstance(actions, dict):
            raise GameFormatError(f"dynamics[{state!r}] must be an object")
        parsed_actions: dict[str, MinActionSpec] = {}
        for a, menu in actions.items():
            if not isinstance(menu, dict):
                raise GameFormatError(f"dynamics[{state!r}][{a!r}] must be an object")
            options: dict[str, MaxOption] = {}
            for b, payload in menu.items():
                where = f"dynamics[{state!r}][{a!r}][{b!r}]"
                if not isinstance(payload, dict):
                    raise GameFormatError(f"{where} must be an object")
                if "payment" not in payload or "transition" not in payload:
                    raise GameFormatError(f"{where} needs 'payment' and 'transition'")
                payment = payload["payment"]
                if isinstance(payment, bool) or not isinstance(payment, (int, float)):
                    raise GameFormatError(f"{where}: payment must be a number")
                transition_raw = payload["transition"]
                if not isinstance(transition_raw, dict):
                    raise GameFormatError(f"{where}: transition must be an object")
                transition = {
                    target: _to_probability(p, f"{where}.transition[{target!r}]")
                    for target, p in transition_raw.items()
                }
                options[b] = MaxOption(float(payment), transition)
            parsed_actions[a] = MinActionSpec(options)
        dynamics[state] = parsed_actions

    return GameSpec(tuple(states), dynamics)


def serialize_game(game: GameSpec) -> str:
    """Canonical JSON text: keys sorted lexicographically."""
    doc = {
        "states": list(game.states),
        "dynamics": {
            state: {
                a: {
                    b: {"payment": opt.payment, "transition": dict(opt.transition)}
                    for b, opt in spec.max_actions.items()
                }
                for a, spec in actions.items()
            }
            for state, actions in game.dynamics.items()
        },
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def load_game(path) -> GameSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_game(fh.read())


def extract_support(game: GameSpec) -> SupportSpec:
    """The support pattern of the game's transitions.

    Entries in ``(0, SUPPORT_ZERO_THRESHOLD]`` are treated as zero and
    reported as warnings; a row losing all mass raises
    :class:`DegenerateSupportError`.
    """
    rows: list[SupportRow] = []
    for state in game.states:
        for a, spec in game.dynamics[state].items():
            for b, opt in spec.max_actions.items():
                succ = []
                for target, p in opt.transition.items():
                    if p > SUPPORT_ZERO_THRESHOLD:
                        succ.append(game.index(target))
                    elif p > 0:
                        warnings.warn(
                            f"({state!r}, {a!r}, {b!r}): probability {p} on "
                            f"{target!r} is below the support threshold; treated as zero",
                            stacklevel=2,
                        )
                if not succ:
                    raise DegenerateSupportError(
                        f"({state!r}, {a!r}, {b!r}) has no successor above the threshold"
                    )
                rows.append(SupportRow(state, a, b, tuple(sorted(succ))))
    rows.sort(key=lambda r: (game.index(r.state), r.min_action, r.max_action))
    return SupportSpec(game.states, tuple(rows))


def perturb_payments(game: GameSpec, g: Sequence[float]) -> GameSpec:
    """New game with every payment in state ``i`` shifted by ``g[i]``."""
    if len(g) != game.n:
        raise PreconditionError(f"perturbation has length {len(g)}, game has {game.n} states")
    dynamics = {
        state: {
            a: MinActionSpec(
                {
                    b: MaxOption(opt.payment + float(g[game.index(state)]), opt.transition)
                    for b, opt in spec.max_actions.items()
                }
            )
            for a, spec in actions.items()
        }
        for state, actions in game.dynamics.items()
    }
    return GameSpec(game.states, dynamics)


def simulate(
    game: GameSpec,
    policies: Policy,
    start: str,
    horizon: int,
    seed: int,
) -> Trajectory:
    """Play both stationary policies for ``horizon`` steps from ``start``.

    Deterministic given the seed: successors are drawn by inverse transform
    over the transition row in state order.
    """
    if horizon < 0:
        raise PreconditionError("horizon must be nonnegative")
    if start not in game._index:
        raise PreconditionError(f"unknown start state {start!r}")
    policies.validate(game)

    rng = random.Random(seed)
    steps: list[TrajectoryStep] = []
    visited = [start]
    state = start
    total = 0.0
    for _ in range(horizon):
        a = policies.min_policy[state]
        b = policies.max_policy[(state, a)]
        opt = game.dynamics[state][a].max_actions[b]
        steps.append(TrajectoryStep(state, a, b, opt.payment))
        total += opt.payment
        state = _draw_successor(game, opt.transition, rng)
        visited.append(state)
    return Trajectory(seed, tuple(steps), tuple(visited), total)


def _draw_successor(game: GameSpec, row: Mapping[str, float], rng: random.Random) -> str:
    u = rng.random()
    acc = 0.0
    last = None
    for target in game.states:
        p = row.get(target, 0.0)
        if p <= 0:
            continue
        acc += p
        last = target
        if u < acc:
            return target
    # Row sums to 1 within tolerance; stray rounding mass goes to the last
    # positive entry.
    assert last is not None
    return last
