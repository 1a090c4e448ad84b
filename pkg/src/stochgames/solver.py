"""Fixed points of the recession operator with prescribed argmin/argmax.

The decision procedure answers "is there a fixed point whose minimizing
states are exactly I" by a loop of necessary checks and reductions: the
upper Boolean abstraction must fix the complement's indicator, the largest
disjoint upper face must be nonempty, and if I is closed under the
antitone pairing the answer is yes; otherwise the problem restricts to the
closed hull, keeping only the minimizer's actions that confine play there,
and repeats.  Each reduction strictly shrinks the carrier, so the loop runs
at most n times.

Positive answers ship a verified witness vector.  For a closed set the
monotone iteration limit started at the complement's indicator already has
the right argmin; otherwise a witness of the reduced problem is lifted
through the semiderivative at the hull's canonical fixed point and a small
multiple of the lift is added, with the step found by geometric halving.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericFailureError, PreconditionError
from .game import GameSpec, SupportRow, SupportSpec, extract_support
from .operators import GameOperator
from .shapley import argmax_set, argmin_set, kleene_limit_real, sup_norm
from .subsets import Subset

WITNESS_RESIDUAL = 1e-8
STEP_RESIDUAL = 1e-9
STEP_FLOOR = 1e-14
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ReducedGame:
    """Restriction of a support to a carrier the minimizer can confine play to."""

    carrier: Subset
    kept_actions: dict[str, tuple[str, ...]]
    support: SupportSpec


@dataclass(frozen=True)
class ActiveSets:
    """Actions attaining the one-step optimum at a fixed point.

    ``min_active[state]`` lists the minimizer's optimal actions;
    ``max_active[(state, a)]`` the maximizer's optimal responses within a
    kept menu.
    """

    min_active: dict[str, tuple[str, ...]]
    max_active: dict[tuple[str, str], tuple[str, ...]]


@dataclass(frozen=True)
class IMinAnswer:
    """Decision, per-loop certificate trail, and (on yes) a verified witness."""

    decision: bool
    trail: list
    witness: np.ndarray | None


def _real_op(game_or_support: GameSpec | SupportSpec) -> GameOperator:
    if isinstance(game_or_support, GameSpec):
        return GameOperator.from_game(game_or_support)
    return GameOperator.from_support(game_or_support)


def _labels(op: GameOperator, mask: int) -> list[str]:
    return [op.labels[i] for i in range(op.n) if mask >> i & 1]


def _compress_mask(mask: int, kept: tuple[int, ...]) -> int:
    out = 0
    for new, old in enumerate(kept):
        if mask >> old & 1:
            out |= 1 << new
    return out


def _indicator(mask: int, n: int) -> np.ndarray:
    return np.asarray([(mask >> i) & 1 for i in range(n)], dtype=float)


def _residual(F: Callable[[np.ndarray], np.ndarray], u: np.ndarray) -> float:
    return sup_norm(np.asarray(F(u)) - u)


def reduce_operator(support: SupportSpec, I_bar: Subset) -> ReducedGame:
    """Keep the minimizer's actions whose every response stays in ``I_bar``,
    restricted to the carrier's states."""
    op = GameOperator.from_support(support)
    if not op.check_h1_mask(I_bar.mask):
        raise PreconditionError("carrier must be a lower invariant face")
    red, kept = op.reduce(I_bar.mask)
    labels = red.labels
    rows = []
    kept_actions: dict[str, tuple[str, ...]] = {}
    for state_groups in red.group_rows:
        for g in state_groups:
            state, a, _ = red.row_keys[g[0]]
            kept_actions.setdefault(state, tuple())
            if a not in kept_actions[state]:
                kept_actions[state] = kept_actions[state] + (a,)
            for r in g:
                s, aa, bb = red.row_keys[r]
                succ = tuple(j for j in range(red.n) if red.row_masks[r] >> j & 1)
                rows.append(SupportRow(s, aa, bb, succ))
    rows.sort(key=lambda r: (labels.index(r.state), r.min_action, r.max_action))
    return ReducedGame(I_bar, kept_actions, SupportSpec(labels, tuple(rows)))


def _algorithm1(op: GameOperator, I_mask: int) -> tuple[bool, list]:
    """Decision loop; the trail records one entry per pass over the current carrier."""
    trail: list = []
    if I_mask == 0:
        return False, [{"outcome": "no", "reason": "empty-argmin"}]
    if I_mask == op.full_mask:
        return True, [{"outcome": "yes", "reason": "constant-witness"}]
    while True:
        entry = {
            "carrier": list(op.labels),
            "argmin_target": _labels(op, I_mask),
        }
        comp = op.full_mask & ~I_mask
        h1_equality = op.f_plus_mask(comp) == comp
        entry["upper_abstraction_fixes_complement"] = h1_equality
        if not h1_equality:
            entry["outcome"] = "no"
            entry["reason"] = "complement-indicator-not-fixed"
            trail.append(entry)
            return False, trail
        phi_mask = op.kleene_mask(op.f_minus_mask, comp)
        entry["phi"] = _labels(op, phi_mask)
        if phi_mask == 0:
            entry["outcome"] = "no"
            entry["reason"] = "no-disjoint-upper-face"
            trail.append(entry)
            return False, trail
        closure_mask = op.full_mask & ~op.kleene_mask(op.f_plus_mask, phi_mask)
        entry["closure"] = _labels(op, closure_mask)
        if closure_mask == I_mask:
            entry["outcome"] = "yes"
            trail.append(entry)
            return True, trail
        entry["outcome"] = "reduce"
        trail.append(entry)
        op, kept = op.reduce(closure_mask)
        I_mask = _compress_mask(I_mask, kept)


def _construct(op: GameOperator, I_mask: int) -> np.ndarray:
    """Witness with argmin exactly ``I_mask``; assumes the decision was yes."""
    if I_mask == op.full_mask:
        return np.zeros(op.n)
    comp = op.full_mask & ~I_mask
    phi_mask = op.phi_mask(I_mask)
    closure_mask = op.phi_star_mask(phi_mask)
    if closure_mask == I_mask:
        return kleene_limit_real(op.apply, _indicator(comp, op.n))
    red, kept = op.reduce(closure_mask)
    v = _construct(red, _compress_mask(I_mask, kept))
    v = (v - v.min()) / (v.max() - v.min())
    w = kleene_limit_real(op.apply, _indicator(op.full_mask & ~closure_mask, op.n))
    deriv = op.semiderivative(w, TIE_TOLERANCE)
    z = np.zeros(op.n)
    z[list(kept)] = v
    z_bar = kleene_limit_real(deriv.apply, z)
    step = 0.5
    while step >= STEP_FLOOR:
        u = w + step * z_bar
        if _residual(op.apply, u) <= STEP_RESIDUAL:
            return u
        step /= 2
    raise NumericFailureError(
        "no step size above 1e-14 makes the lifted witness a fixed point "
        f"(carrier {list(op.labels)}, residual at floor "
        f"{_residual(op.apply, w + STEP_FLOOR * z_bar):.3e})"
    )


def _construct_verified(op: GameOperator, I: Subset) -> np.ndarray:
    u = _construct(op, I.mask)
    res = _residual(op.apply, u)
    if res > WITNESS_RESIDUAL:
        raise NumericFailureError(f"witness residual {res:.3e} exceeds {WITNESS_RESIDUAL}")
    got = argmin_set(u)
    if got != I:
        raise NumericFailureError(
            f"witness argmin {got.labels(op.labels)} differs from requested "
            f"{I.labels(op.labels)} (vector {u.tolist()})"
        )
    return u


def solve_i_min(game_or_support: GameSpec | SupportSpec, I: Subset) -> IMinAnswer:
    """Is there a fixed point of the recession operator whose argmin is ``I``?

    Runs the reduction loop described in the module docstring; a yes
    answer carries a witness vector with verified residual and argmin.
    """
    op = _real_op(game_or_support)
    if I.n != op.n:
        raise PreconditionError(f"subset over {I.n} states, game over {op.n}")
    decision, trail = _algorithm1(op, I.mask)
    witness = _construct_verified(op, I) if decision else None
    return IMinAnswer(decision, trail, witness)


def solve_i_min_j_max(
    game_or_support: GameSpec | SupportSpec, I: Subset, J: Subset
) -> IMinAnswer:
    """Is there a fixed point with argmin ``I`` and argmax ``J``?

    The two constraints separate: the argmin problem runs as is, the argmax
    problem runs on the conjugate operator, and a joint witness is rebuilt
    from the two single-constraint witnesses by monotone iteration inside
    the order interval they bound.
    """
    op = _real_op(game_or_support)
    if I.n != op.n or J.n != op.n:
        raise PreconditionError("subset dimension mismatch")
    if not I or not J:
        raise PreconditionError("argmin and argmax sets must be nonempty")
    if not I.isdisjoint(J):
        raise PreconditionError("argmin and argmax sets must be disjoint")
    if not op.check_h1_mask(I.mask) or not op.check_h2_mask(J.mask):
        trail = [{"outcome": "no", "reason": "prescribed-sets-not-invariant-faces"}]
        return IMinAnswer(False, trail, None)
    dual = op.conjugate()
    dec_min, trail_min = _algorithm1(op, I.mask)
    dec_max, trail_max = _algorithm1(dual, J.mask)
    trail = [
        {"subproblem": "argmin", "trail": trail_min},
        {"subproblem": "argmax", "trail": trail_max},
    ]
    if not (dec_min and dec_max):
        return IMinAnswer(False, trail, None)
    v = _construct_verified(op, I)
    u_dual = _construct_verified(dual, J)  # argmin of the conjugate = argmax of op
    witness = lattice_witness(op.apply, v, -u_dual, I, J)
    return IMinAnswer(True, trail, witness)


def lattice_witness(
    F: Callable[[np.ndarray], np.ndarray],
    v,
    w,
    I: Subset,
    J: Subset,
) -> np.ndarray:
    """Combine fixed points ``v`` (argmin I) and ``w`` (argmax J) into one
    fixed point carrying both prescriptions.

    Inputs are rescaled so ``v`` spans [0, 1/2] and ``w`` spans [1/2, 1];
    monotone iteration from ``sup(v, indicator of J)`` stays inside the
    order interval pinched at 0 on I and 1 on J, and its limit is the
    witness.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    for name, vec in (("v", v), ("w", w)):
        res = _residual(F, vec)
        if res > WITNESS_RESIDUAL:
            raise PreconditionError(f"{name} is not a fixed point (residual {res:.3e})")
    if argmin_set(v) != I:
        raise PreconditionError("v must have argmin exactly I")
    if argmax_set(w) != J:
        raise PreconditionError("w must have argmax exactly J")
    if np.array_equal(v, w):
        return v.copy()
    v = (v - v.min()) / (v.max() - v.min()) / 2
    w = 0.5 + (w - w.min()) / (w.max() - w.min()) / 2
    start = np.maximum(v, _indicator(J.mask, J.n))
    limit = kleene_limit_real(F, start)
    res = _residual(F, limit)
    if res > WITNESS_RESIDUAL:
        raise NumericFailureError(f"combined witness residual {res:.3e}")
    if argmin_set(limit) != I or argmax_set(limit) != J:
        raise NumericFailureError(
            f"combined witness has argmin {argmin_set(limit).indices()} / "
            f"argmax {argmax_set(limit).indices()}, wanted {I.indices()} / {J.indices()}"
        )
    return limit


def semiderivative_active_sets(
    game_or_support: GameSpec | SupportSpec, w, *, tie_tolerance: float = TIE_TOLERANCE
) -> ActiveSets:
    """Active action sets of the recession operator at a verified fixed point."""
    op = _real_op(game_or_support)
    w = np.asarray(w, dtype=float)
    res = _residual(op.apply, w)
    if res > 1e-10:
        raise PreconditionError(f"w is not a fixed point (residual {res:.3e})")
    outer, inner = op.active_structure(w, tie_tolerance)
    return ActiveSets(outer, inner)


def semiderivative_apply(
    game_or_support: GameSpec | SupportSpec,
    w,
    x,
    *,
    tie_tolerance: float = TIE_TOLERANCE,
) -> np.ndarray:
    """Directional derivative of the recession operator at fixed point ``w``.

    Evaluates min over active actions of max over active responses of the
    transition rows applied to ``x``.
    """
    op = _real_op(game_or_support)
    w = np.asarray(w, dtype=float)
    res = _residual(op.apply, w)
    if res > 1e-10:
        raise PreconditionError(f"w is not a fixed point (residual {res:.3e})")
    return op.semiderivative(w, tie_tolerance).apply(np.asarray(x, dtype=float))


def construct_witness(game_or_support: GameSpec | SupportSpec, I: Subset) -> np.ndarray:
    """Witness vector for a yes instance of the prescribed-argmin problem."""
    op = _real_op(game_or_support)
    decision, _ = _algorithm1(op, I.mask)
    if not decision:
        raise PreconditionError("no fixed point has the requested argmin")
    return _construct_verified(op, I)
