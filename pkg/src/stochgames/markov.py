"""Zero-player specialization: classical Markov-chain ergodicity.

A game in which both players have a single action everywhere is a Markov
chain with an additive payment.  Its long-run behavior is settled by the
digraph of the transition matrix: the chain's mean payment is
state-independent for every payment vector exactly when the digraph has a
single final class (a sink component of the condensation).  This module
computes that decomposition exactly from the support and serves as an
independent correctness oracle for the game-level machinery.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NumericFailureError, PreconditionError
from .game import GameSpec, extract_support
from .galois import is_ergodic
from .shapley import sup_norm


@dataclass(frozen=True)
class ChainAnalysis:
    """Communicating classes of a stochastic matrix and its final classes."""

    classes: tuple[tuple[str, ...], ...]
    final_classes: tuple[tuple[str, ...], ...]
    ergodic: bool


def _zero_player_matrix(game: GameSpec) -> np.ndarray:
    P = np.zeros((game.n, game.n))
    for state, actions in game.dynamics.items():
        if len(actions) != 1:
            raise PreconditionError(f"state {state!r} has {len(actions)} min actions; need 1")
        (spec,) = actions.values()
        if len(spec.max_actions) != 1:
            raise PreconditionError(
                f"state {state!r} has {len(spec.max_actions)} max actions; need 1"
            )
        (opt,) = spec.max_actions.values()
        for target, p in opt.transition.items():
            P[game.index(state), game.index(target)] = p
    return P


def analyze_chain(game: GameSpec) -> ChainAnalysis:
    """Strongly connected classes of the support digraph and the sinks among them."""
    P = _zero_player_matrix(game)
    adjacency = csr_matrix(P > 0)
    _, labels = connected_components(adjacency, directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        groups.setdefault(int(c), []).append(i)
    # Stable order: classes sorted by their smallest state index.
    ordered = sorted(groups.values(), key=min)
    final = []
    for members in ordered:
        member_set = set(members)
        outgoing = any(
            P[i, j] > 0 and j not in member_set for i in members for j in range(game.n)
        )
        if not outgoing:
            final.append(members)
    to_labels = lambda idxs: tuple(game.states[i] for i in idxs)
    return ChainAnalysis(
        tuple(to_labels(c) for c in ordered),
        tuple(to_labels(c) for c in final),
        ergodic=len(final) == 1,
    )


def cesaro_limit_estimate(
    game: GameSpec, g, k_max: int, tolerance: float
) -> tuple[np.ndarray, bool]:
    """Running average of the payment ``g`` along the chain, per start state.

    Iterates ``v <- g + P v`` and returns ``v/k`` at the first horizon where
    consecutive scaled iterates agree within ``tolerance``, else the
    estimate at ``k_max`` with a False flag.
    """
    P = _zero_player_matrix(game)
    g = np.asarray(g, dtype=float)
    if g.shape != (game.n,):
        raise PreconditionError("payment vector must have one entry per state")
    v = g.copy()
    prev = v.copy()
    for k in range(2, k_max + 1):
        v = g + P @ v
        est = v / k
        if sup_norm(est - prev) <= tolerance:
            return est, True
        prev = est
    return prev, False


def harmonic_constant_check(
    game: GameSpec, k_max: int = 10**5, tolerance: float = 1e-4, *, seed: int = 0, trials: int = 3
) -> bool:
    """Ergodicity of a zero-player game, numerically corroborated.

    Returns the game-level verdict (single final class / only constant
    harmonic vectors).  When the verdict is positive, running averages of a
    few seeded random payments must flatten to spread ``tolerance`` by
    ``k_max``; failure to converge raises :class:`NumericFailureError`.
    """
    _zero_player_matrix(game)  # validates the zero-player shape
    verdict = is_ergodic(extract_support(game)).ergodic
    if not verdict:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        g = rng.uniform(-1.0, 1.0, size=game.n)
        est, converged = cesaro_limit_estimate(game, g, k_max, tolerance)
        if not converged:
            raise NumericFailureError(
                f"running average did not settle within {k_max} steps"
            )
        spread = float(est.max() - est.min())
        if spread > tolerance:
            raise NumericFailureError(
                f"ergodic chain produced state-dependent average (spread {spread:.3e})"
            )
    return True
