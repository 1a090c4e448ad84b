"""Compiled payment-free min/max transition operators.

A :class:`GameOperator` is the flattened form of a game's transition
structure: rows sorted by (state, outer action, inner action), each row a
probability vector with a support bitmask.  ``outer_min=True`` evaluates
``min`` over the outer actions of ``max`` over each menu (the usual
operator of the minimizing player moving first); ``outer_min=False`` is
the conjugate sense ``max`` of ``min`` over the same rows, used for
prescribed-argmax queries.

Everything combinatorial here works on integer bitmasks and depends only on
the supports; the probability rows are used by the real-valued ``apply``.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError
from .game import GameSpec, SupportSpec, extract_support


class GameOperator:
    """Flattened payment-free operator over a transition support."""

    __slots__ = (
        "labels",
        "n",
        "outer_min",
        "group_rows",
        "row_masks",
        "row_keys",
        "P",
        "_b_starts",
        "_a_starts",
        "full_mask",
    )

    def __init__(
        self,
        labels: Sequence[str],
        group_rows: Sequence[Sequence[Sequence[int]]],
        row_masks: Sequence[int],
        row_keys: Sequence[tuple[str, str, str]],
        P: np.ndarray,
        outer_min: bool = True,
    ):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.outer_min = outer_min
        # group_rows[i][g] lists row indices of the g-th outer action of state i;
        # rows within a group and groups within a state are contiguous.
        self.group_rows = tuple(tuple(tuple(g) for g in state) for state in group_rows)
        self.row_masks = tuple(row_masks)
        self.row_keys = tuple(row_keys)
        self.P = np.asarray(P, dtype=float)
        self.full_mask = (1 << self.n) - 1

        b_starts = []
        a_starts = []
        for state in self.group_rows:
            a_starts.append(len(b_starts))
            for g in state:
                b_starts.append(g[0])
        self._b_starts = np.asarray(b_starts, dtype=np.intp)
        self._a_starts = np.asarray(a_starts, dtype=np.intp)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_support(cls, support: SupportSpec, outer_min: bool = True) -> "GameOperator":
        """Uniform-probability representative of a support pattern."""
        return cls._build(support, None, outer_min)

    @classmethod
    def from_game(cls, game: GameSpec, outer_min: bool = True) -> "GameOperator":
        return cls._build(extract_support(game), game, outer_min)

    @classmethod
    def _build(cls, support: SupportSpec, game: GameSpec | None, outer_min: bool) -> "GameOperator":
        labels = support.states
        index = {lbl: i for i, lbl in enumerate(labels)}
        group_rows: list[list[list[int]]] = []
        row_masks: list[int] = []
        row_keys: list[tuple[str, str, str]] = []
        prob_rows: list[np.ndarray] = []
        grouped = support.grouped()
        for state in labels:
            state_groups: list[list[int]] = []
            for a, menu in grouped[state].items():
                rows = []
                for b, succ in menu.items():
                    mask = 0
                    row = np.zeros(len(labels))
                    for j in succ:
                        mask |= 1 << j
                    if game is not None:
                        transition = game.dynamics[state][a].max_actions[b].transition
                        for target, p in transition.items():
                            row[index[target]] = p
                    else:
                        row[list(succ)] = 1.0 / len(succ)
                    rows.append(len(row_masks))
                    row_masks.append(mask)
                    row_keys.append((state, a, b))
                    prob_rows.append(row)
                state_groups.append(rows)
            group_rows.append(state_groups)
        return cls(labels, group_rows, row_masks, row_keys, np.array(prob_rows), outer_min)

    # -- real evaluation ----------------------------------------------------

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the payment-free operator at ``x`` (vector or matrix of columns)."""
        y = self.P @ x
        if self.outer_min:
            inner = np.maximum.reduceat(y, self._b_starts, axis=0)
            return np.minimum.reduceat(inner, self._a_starts, axis=0)
        inner = np.minimum.reduceat(y, self._b_starts, axis=0)
        return np.maximum.reduceat(inner, self._a_starts, axis=0)

    def conjugate(self) -> "GameOperator":
        """Operator ``x -> -F(-x)``: same rows, optimization senses swapped."""
        return GameOperator(
            self.labels, self.group_rows, self.row_masks, self.row_keys, self.P,
            not self.outer_min,
        )

    # -- Boolean abstractions ------------------------------------------------

    def f_plus_mask(self, x: int) -> int:
        """Upper abstraction: row test is 'support meets x'."""
        out = 0
        bit = 1
        masks = self.row_masks
        if self.outer_min:
            for state in self.group_rows:
                if all(any(masks[r] & x for r in g) for g in state):
                    out |= bit
                bit <<= 1
        else:
            for state in self.group_rows:
                if any(all(masks[r] & x for r in g) for g in state):
                    out |= bit
                bit <<= 1
        return out

    def f_minus_mask(self, x: int) -> int:
        """Lower abstraction: row test is 'support contained in x'."""
        out = 0
        bit = 1
        masks = self.row_masks
        if self.outer_min:
            for state in self.group_rows:
                if all(any(masks[r] & x == masks[r] for r in g) for g in state):
                    out |= bit
                bit <<= 1
        else:
            for state in self.group_rows:
                if any(all(masks[r] & x == masks[r] for r in g) for g in state):
                    out |= bit
                bit <<= 1
        return out

    def check_h1_mask(self, I: int) -> bool:
        """Lower invariant face test: F+(1 on complement of I) stays off I."""
        return self.f_plus_mask(self.full_mask & ~I) & I == 0

    def check_h2_mask(self, J: int) -> bool:
        """Upper invariant face test: F-(1 on J) keeps J at one."""
        return self.f_minus_mask(J) & J == J

    def kleene_mask(self, fn: Callable[[int], int], x0: int) -> int:
        """Exact monotone Boolean iteration limit from a pre/post-fixed point."""
        x = x0
        y = fn(x)
        if y == x:
            return x
        if y | x == x or y & x == x:  # decreasing or increasing start
            while y != x:
                x, y = y, fn(y)
            return x
        raise PreconditionError("Boolean iteration needs a monotone start")

    def phi_mask(self, I: int) -> int:
        """Largest upper invariant face disjoint from ``I``.

        Computed as the limit of the lower abstraction from the complement
        of ``I``; requires ``I`` to be a lower invariant face.
        """
        if not self.check_h1_mask(I):
            raise PreconditionError("set is not a lower invariant face")
        return self.kleene_mask(self.f_minus_mask, self.full_mask & ~I)

    def phi_star_mask(self, J: int) -> int:
        """Largest lower invariant face disjoint from ``J`` (dual of phi_mask)."""
        if not self.check_h2_mask(J):
            raise PreconditionError("set is not an upper invariant face")
        return self.full_mask & ~self.kleene_mask(self.f_plus_mask, J)

    # -- reduction and semiderivative ----------------------------------------

    def reduce(self, carrier: int) -> tuple["GameOperator", tuple[int, ...]]:
        """Restrict to ``carrier``, keeping only play that stays inside it.

        With ``outer_min`` the outer (minimizing) actions whose every
        response has support inside the carrier are kept; in the conjugate
        sense every outer action is kept but its menu is restricted to the
        confined responses.  Returns the reduced operator and the kept
        original state indices.
        """
        kept = [i for i in range(self.n) if carrier >> i & 1]
        if not kept:
            raise PreconditionError("empty carrier")
        remap = {old: new for new, old in enumerate(kept)}

        def compress(mask: int) -> int:
            out = 0
            for old, new in remap.items():
                if mask >> old & 1:
                    out |= 1 << new
            return out

        labels = tuple(self.labels[i] for i in kept)
        group_rows: list[list[list[int]]] = []
        row_masks: list[int] = []
        row_keys: list[tuple[str, str, str]] = []
        prob_idx: list[int] = []
        for i in kept:
            state_groups: list[list[int]] = []
            for g in self.group_rows[i]:
                if self.outer_min:
                    if any(self.row_masks[r] & ~carrier for r in g):
                        continue
                    rows = list(g)
                else:
                    rows = [r for r in g if self.row_masks[r] & ~carrier == 0]
                    if not rows:
                        raise PreconditionError(
                            "carrier is not invariant: a menu has no confined response"
                        )
                new_rows = []
                for r in rows:
                    new_rows.append(len(row_masks))
                    row_masks.append(compress(self.row_masks[r]))
                    row_keys.append(self.row_keys[r])
                    prob_idx.append(r)
                state_groups.append(new_rows)
            if not state_groups:
                raise PreconditionError(
                    "carrier is not invariant: a state has no confining action"
                )
            group_rows.append(state_groups)
        P = self.P[np.asarray(prob_idx, dtype=np.intp)][:, np.asarray(kept, dtype=np.intp)]
        return (
            GameOperator(labels, group_rows, row_masks, row_keys, P, self.outer_min),
            tuple(kept),
        )

    def semiderivative(self, w: np.ndarray, tie_tolerance: float = 1e-9) -> "GameOperator":
        """Directional first-order operator at ``w``, built from active actions.

        An outer action is active when its inner optimum at ``w`` ties the
        state value within ``tie_tolerance``; within each active menu the
        inner actions tying the menu optimum are kept.
        """
        w = np.asarray(w, dtype=float)
        vals = self.P @ w
        group_rows: list[list[list[int]]] = []
        row_masks: list[int] = []
        row_keys: list[tuple[str, str, str]] = []
        prob_idx: list[int] = []
        for state in self.group_rows:
            if self.outer_min:
                group_vals = [max(vals[r] for r in g) for g in state]
                state_val = min(group_vals)
                active = [
                    g for g, gv in zip(state, group_vals) if gv <= state_val + tie_tolerance
                ]
                kept_groups = [
                    [r for r in g if vals[r] >= max(vals[q] for q in g) - tie_tolerance]
                    for g in active
                ]
            else:
                group_vals = [min(vals[r] for r in g) for g in state]
                state_val = max(group_vals)
                active = [
                    g for g, gv in zip(state, group_vals) if gv >= state_val - tie_tolerance
                ]
                kept_groups = [
                    [r for r in g if vals[r] <= min(vals[q] for q in g) + tie_tolerance]
                    for g in active
                ]
            state_groups = []
            for g in kept_groups:
                new_rows = []
                for r in g:
                    new_rows.append(len(row_masks))
                    row_masks.append(self.row_masks[r])
                    row_keys.append(self.row_keys[r])
                    prob_idx.append(r)
                state_groups.append(new_rows)
            group_rows.append(state_groups)
        P = self.P[np.asarray(prob_idx, dtype=np.intp)]
        return GameOperator(self.labels, group_rows, row_masks, row_keys, P, self.outer_min)

    # -- conveniences ----------------------------------------------------------

    def active_structure(self, w: np.ndarray, tie_tolerance: float = 1e-9):
        """Active outer actions per state and inner actions per kept menu at ``w``."""
        deriv = self.semiderivative(w, tie_tolerance)
        outer: dict[str, tuple[str, ...]] = {}
        inner: dict[tuple[str, str], tuple[str, ...]] = {}
        for state_groups in deriv.group_rows:
            for g in state_groups:
                state, a, _ = deriv.row_keys[g[0]]
                outer.setdefault(state, tuple())
                outer[state] = outer[state] + (a,)
                inner[(state, a)] = tuple(deriv.row_keys[r][2] for r in g)
        return outer, inner
