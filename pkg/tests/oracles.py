"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: direct loops over the raw game
dictionaries, fixpoint reachability by repeated closure, path enumeration
for final classes, and an exact-rational ordered-value-pattern solver for
the prescribed-argmin problem on three states.  None of it shares code
with the library paths it checks.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from stochgames.game import GameSpec, MaxOption, MinActionSpec, SupportRow, SupportSpec


# -- naive dynamic programming over the raw dictionaries ---------------------

def naive_shapley(game: GameSpec, x) -> np.ndarray:
    out = []
    for s in game.states:
        best_a = None
        for spec in game.dynamics[s].values():
            best_b = None
            for opt in spec.max_actions.values():
                val = opt.payment + sum(
                    p * x[game.index(t)] for t, p in opt.transition.items()
                )
                best_b = val if best_b is None else max(best_b, val)
            best_a = best_b if best_a is None else min(best_a, best_b)
        out.append(best_a)
    return np.asarray(out)


def naive_recession(game: GameSpec, x) -> np.ndarray:
    out = []
    for s in game.states:
        best_a = None
        for spec in game.dynamics[s].values():
            best_b = None
            for opt in spec.max_actions.values():
                val = sum(p * x[game.index(t)] for t, p in opt.transition.items())
                best_b = val if best_b is None else max(best_b, val)
            best_a = best_b if best_a is None else min(best_a, best_b)
        out.append(best_a)
    return np.asarray(out)


# -- naive Boolean abstractions ----------------------------------------------

def naive_f_plus(support: SupportSpec, bits: set[int]) -> set[int]:
    grouped = support.grouped()
    out = set()
    for i, s in enumerate(support.states):
        if all(
            any(any(j in bits for j in succ) for succ in menu.values())
            for menu in grouped[s].values()
        ):
            out.add(i)
    return out


def naive_f_minus(support: SupportSpec, bits: set[int]) -> set[int]:
    grouped = support.grouped()
    out = set()
    for i, s in enumerate(support.states):
        if all(
            any(all(j in bits for j in succ) for succ in menu.values())
            for menu in grouped[s].values()
        ):
            out.add(i)
    return out


# -- naive hypergraph reachability: repeated closure ---------------------------

def naive_reach(arcs, start) -> set:
    reached = set(start)
    changed = True
    while changed:
        changed = False
        for tail, head in arcs:
            if set(tail) <= reached and not set(head) <= reached:
                reached |= set(head)
                changed = True
    return reached


# -- naive final classes by path enumeration -----------------------------------

def naive_final_classes(successors: list[set[int]]) -> list[frozenset[int]]:
    """Final classes of a digraph given as successor sets, via transitive closure."""
    n = len(successors)
    reach = [set(succ) | {i} for i, succ in enumerate(successors)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            extra = set()
            for j in reach[i]:
                extra |= reach[j]
            if not extra <= reach[i]:
                reach[i] |= extra
                changed = True
    classes = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        cls = frozenset(j for j in reach[i] if i in reach[j])
        if i in cls:
            seen |= cls
            classes.append(cls)
    final = []
    for cls in classes:
        closure = set()
        for i in cls:
            closure |= reach[i]
        if closure <= cls:
            final.append(cls)
    return final


# -- exact-rational prescribed-argmin oracle for n = 3 --------------------------

# A support structure is a tuple over states of tuples over min actions of
# sorted tuples of successor bitmasks (uniform probabilities understood).

def structure_groups(structure):
    """Successor index tuples per state/action/row."""
    return [
        [
            [tuple(j for j in range(3) if mask >> j & 1) for mask in menu]
            for menu in state
        ]
        for state in structure
    ]


def _frac_eval(groups, u):
    out = []
    for state in groups:
        best_a = None
        for menu in state:
            best_b = None
            for succ in menu:
                val = sum((u[j] for j in succ), Fraction(0)) / len(succ)
                best_b = val if best_b is None else max(best_b, val)
            best_a = best_b if best_a is None else min(best_a, best_b)
        out.append(best_a)
    return out


def _two_level_fixed(groups, bottom: set[int], n: int) -> bool:
    u = [Fraction(0) if i in bottom else Fraction(1) for i in range(n)]
    return _frac_eval(groups, u) == u


def _affine_rows(groups, levels):
    """Per state/menu/row pairs (c0, c1) with row value c0 + c1*t.

    ``levels[i]`` is 0, "t" or 1: the value of u at state i.
    """
    rows = []
    for state in groups:
        state_rows = []
        for menu in state:
            menu_rows = []
            for succ in menu:
                c0 = Fraction(sum(1 for j in succ if levels[j] == 1), len(succ))
                c1 = Fraction(sum(1 for j in succ if levels[j] == "t"), len(succ))
                menu_rows.append((c0, c1))
            state_rows.append(menu_rows)
        rows.append(state_rows)
    return rows


def _breakpoints(state_rows):
    points = set()
    flat = [row for menu in state_rows for row in menu]
    for (a0, a1), (b0, b1) in itertools.combinations(flat, 2):
        if a1 != b1:
            t = Fraction(b0 - a0, a1 - b1)
            if 0 < t < 1:
                points.add(t)
    return points


def _three_level_solvable(groups, bottom: int, mid: int, top: int) -> bool:
    levels = {bottom: 0, mid: "t", top: 1}
    rows = _affine_rows(groups, levels)
    points = {Fraction(0), Fraction(1)}
    for state_rows in rows:
        points |= _breakpoints(state_rows)
    grid = sorted(points)
    targets = {bottom: (Fraction(0), Fraction(0)), mid: (Fraction(0), Fraction(1)),
               top: (Fraction(1), Fraction(0))}
    for lo, hi in zip(grid, grid[1:]):
        midpoint = (lo + hi) / 2
        # active affine piece of each state's min-max at this interval
        feasible_all = True
        constraints = []  # (c0, c1) rows that must equal target (d0, d1)
        for i, state_rows in enumerate(rows):
            best_a = None
            for menu_rows in state_rows:
                best_b = max(menu_rows, key=lambda r: r[0] + r[1] * midpoint)
                if best_a is None or (best_b[0] + best_b[1] * midpoint) < (
                    best_a[0] + best_a[1] * midpoint
                ):
                    best_a = best_b
            constraints.append((best_a, targets[i]))
        # intersect the solution sets of (c0 - d0) + (c1 - d1) t = 0 over [lo, hi]
        sol_lo, sol_hi = lo, hi
        point_solution = None
        for (c0, c1), (d0, d1) in constraints:
            a = c0 - d0
            b = c1 - d1
            if b == 0:
                if a != 0:
                    feasible_all = False
                    break
                continue  # identity on the interval
            t = -a / b
            if point_solution is None:
                point_solution = t
            elif point_solution != t:
                feasible_all = False
                break
        if not feasible_all:
            continue
        if point_solution is None:
            # every constraint holds identically; any interior point works
            if hi > lo and 0 < midpoint < 1:
                return True
            continue
        if sol_lo <= point_solution <= sol_hi and 0 < point_solution < 1:
            return True
    return False


def oracle_i_min(structure, I: set[int]) -> bool:
    """Exact answer to 'has the uniform support operator a fixed point with
    argmin exactly I' for 3-state structures, by value-pattern enumeration."""
    n = 3
    groups = structure_groups(structure)
    if not I:
        return False
    if I == set(range(n)):
        return True
    if len(I) == 2:
        return _two_level_fixed(groups, I, n)
    if _two_level_fixed(groups, I, n):
        return True
    (bottom,) = I
    rest = sorted(set(range(n)) - I)
    for mid, top in itertools.permutations(rest):
        if _three_level_solvable(groups, bottom, mid, top):
            return True
    return False


# -- support structure enumeration / canonicalization ---------------------------

def canonical_structure(structure):
    """Minimal relabeling of a 3-state structure under state permutations."""
    best = None
    for perm in itertools.permutations(range(3)):
        remapped = []
        for old in range(3):
            state = structure[old]
            new_state = tuple(
                sorted(
                    tuple(sorted({_remap_mask(mask, perm) for mask in menu}))
                    for menu in state
                )
            )
            remapped.append(new_state)
        candidate = tuple(remapped[perm.index(p)] for p in range(3))
        # candidate[p] must be the structure of the old state mapped to p
        if best is None or candidate < best:
            best = candidate
    return best


def _remap_mask(mask: int, perm) -> int:
    out = 0
    for j in range(3):
        if mask >> j & 1:
            out |= 1 << perm[j]
    return out


def structure_to_support(structure) -> SupportSpec:
    states = tuple(str(i + 1) for i in range(len(structure)))
    rows = []
    for i, state in enumerate(structure):
        for ai, menu in enumerate(state):
            for bi, mask in enumerate(menu):
                succ = tuple(j for j in range(len(structure)) if mask >> j & 1)
                rows.append(SupportRow(states[i], f"a{ai + 1}", f"b{bi + 1}", succ))
    return SupportSpec(states, tuple(rows))


# -- random instance generators ----------------------------------------------

def random_game(rng: np.random.Generator, n: int, max_actions: int = 2,
                payment_scale: float = 3.0) -> GameSpec:
    states = tuple(str(i + 1) for i in range(n))
    dynamics = {}
    for s in states:
        actions = {}
        for ai in range(int(rng.integers(1, max_actions + 1))):
            menu = {}
            for bi in range(int(rng.integers(1, max_actions + 1))):
                size = int(rng.integers(1, min(n, 3) + 1))
                succ = rng.choice(n, size=size, replace=False)
                weights = rng.uniform(0.1, 1.0, size=size)
                weights /= weights.sum()
                transition = {states[j]: float(w) for j, w in zip(succ, weights)}
                payment = float(rng.uniform(-payment_scale, payment_scale))
                menu[f"b{bi + 1}"] = MaxOption(payment, transition)
            actions[f"a{ai + 1}"] = MinActionSpec(menu)
        dynamics[s] = actions
    return GameSpec(states, dynamics)


def random_zero_player(rng: np.random.Generator, n: int) -> GameSpec:
    states = tuple(str(i + 1) for i in range(n))
    dynamics = {}
    for s in states:
        size = int(rng.integers(1, min(n, 3) + 1))
        succ = rng.choice(n, size=size, replace=False)
        weights = rng.uniform(0.1, 1.0, size=size)
        weights /= weights.sum()
        transition = {states[j]: float(w) for j, w in zip(succ, weights)}
        dynamics[s] = {"a": MinActionSpec({"b": MaxOption(0.0, transition)})}
    return GameSpec(states, dynamics)


def resample_probabilities(game: GameSpec, rng: np.random.Generator) -> GameSpec:
    """Same supports and payments, fresh positive probabilities."""
    dynamics = {}
    for s, actions in game.dynamics.items():
        new_actions = {}
        for a, spec in actions.items():
            menu = {}
            for b, opt in spec.max_actions.items():
                support = [t for t, p in opt.transition.items() if p > 0]
                weights = rng.uniform(0.1, 1.0, size=len(support))
                weights /= weights.sum()
                menu[b] = MaxOption(
                    opt.payment, {t: float(w) for t, w in zip(support, weights)}
                )
            new_actions[a] = MinActionSpec(menu)
        dynamics[s] = new_actions
    return GameSpec(game.states, dynamics)
