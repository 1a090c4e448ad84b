"""Dynamic-programming operator of a game and its long-run behavior.

The one-step value operator maps a continuation value vector ``x`` to the
vector whose entry at state ``i`` is ``min`` over the minimizer's actions of
``max`` over the menu of (payment + transition row . x).  Repeating it gives
finite-horizon values; the scaled iterates estimate the mean payoff per
stage; zeroing the payments gives the recession operator that governs which
mean payoffs are realizable at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericFailureError, PreconditionError
from .game import GameSpec, SupportSpec
from .operators import GameOperator
from .subsets import Subset

KLEENE_TOLERANCE = 1e-10
KLEENE_MAX_ITER = 10**6
ARGSET_THRESHOLD = 1e-6


def sup_norm(x: np.ndarray) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def argmin_set(x: np.ndarray, threshold: float = ARGSET_THRESHOLD) -> Subset:
    """Indices within ``threshold`` of the minimum entry."""
    x = np.asarray(x, dtype=float)
    return Subset.of(np.flatnonzero(x <= x.min() + threshold).tolist(), x.size)


def argmax_set(x: np.ndarray, threshold: float = ARGSET_THRESHOLD) -> Subset:
    """Indices within ``threshold`` of the maximum entry."""
    x = np.asarray(x, dtype=float)
    return Subset.of(np.flatnonzero(x >= x.max() - threshold).tolist(), x.size)


class ShapleyKernel:
    """Compiled one-step value operator: payments plus transition rows."""

    def __init__(self, game: GameSpec):
        self.op = GameOperator.from_game(game)
        payments = []
        for state, a, b in self.op.row_keys:
            payments.append(game.dynamics[state][a].max_actions[b].payment)
        self.r = np.asarray(payments, dtype=float)

    def apply(self, x: np.ndarray) -> np.ndarray:
        y = self.op.P @ x
        if y.ndim > 1:
            y += self.r[:, None]
        else:
            y += self.r
        inner = np.maximum.reduceat(y, self.op._b_starts, axis=0)
        return np.minimum.reduceat(inner, self.op._a_starts, axis=0)


def apply_shapley(game: GameSpec, x) -> np.ndarray:
    """One application of the game's value operator."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != game.n:
        raise PreconditionError(f"vector has length {x.shape[0]}, game has {game.n} states")
    return ShapleyKernel(game).apply(x)


def recession_apply(game_or_support: GameSpec | SupportSpec, x) -> np.ndarray:
    """Payment-free evaluation: the value operator with all payments zeroed.

    Given only a :class:`SupportSpec`, the uniform-probability
    representative of the support is used; all combinatorial conclusions
    drawn from the result are insensitive to that choice.
    """
    x = np.asarray(x, dtype=float)
    op = _payment_free(game_or_support)
    if x.shape[0] != op.n:
        raise PreconditionError(f"vector has length {x.shape[0]}, operator has {op.n} states")
    return op.apply(x)


def _payment_free(game_or_support: GameSpec | SupportSpec) -> GameOperator:
    if isinstance(game_or_support, GameSpec):
        return GameOperator.from_game(game_or_support)
    return GameOperator.from_support(game_or_support)


def dual_operator(x, F: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Conjugate evaluation ``-F(-x)``; swaps the optimization senses of the players."""
    x = np.asarray(x, dtype=float)
    return -np.asarray(F(-x))


def value_iteration(game: GameSpec, k: int, x0=None) -> np.ndarray:
    """k-fold application of the value operator; from zero this is the k-stage value."""
    if k < 0:
        raise PreconditionError("iteration count must be nonnegative")
    kernel = ShapleyKernel(game)
    x = np.zeros(game.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    for _ in range(k):
        x = kernel.apply(x)
    return x


@dataclass(frozen=True)
class MeanPayoffEstimate:
    """Scaled value-iteration estimate of the per-stage payoff."""

    estimate: np.ndarray
    horizon: int
    oscillation: float
    converged: bool

    @property
    def spread(self) -> float:
        return float(self.estimate.max() - self.estimate.min())


def mean_payoff_estimate(
    game: GameSpec, max_horizon: int, tolerance: float
) -> MeanPayoffEstimate:
    """Iterate the value operator from zero and scale by the horizon.

    Stops at the first horizon where consecutive scaled iterates are within
    ``tolerance`` in sup-norm; otherwise reports the estimate at
    ``max_horizon`` with ``converged=False``.
    """
    if max_horizon < 1:
        raise PreconditionError("max_horizon must be at least 1")
    if tolerance <= 0:
        raise PreconditionError("tolerance must be positive")
    kernel = ShapleyKernel(game)
    v = kernel.apply(np.zeros(game.n))
    prev_est = v.copy()
    osc = sup_norm(v)
    if osc <= tolerance:
        return MeanPayoffEstimate(v, 1, osc, True)
    for k in range(2, max_horizon + 1):
        v = kernel.apply(v)
        est = v / k
        osc = sup_norm(est - prev_est)
        if osc <= tolerance:
            return MeanPayoffEstimate(est, k, osc, True)
        prev_est = est
    return MeanPayoffEstimate(prev_est, max_horizon, osc, False)


def perturbed_mean_payoff_estimates(
    game: GameSpec, perturbations: np.ndarray, horizon: int
) -> np.ndarray:
    """Scaled value iterates at a fixed horizon for a batch of state payments.

    ``perturbations`` has one column per state-dependent payment shift g;
    column ``j`` of the result is the horizon-``horizon`` estimate of the
    game with payments shifted by ``g_j``.  Shifting payments by a
    state-dependent g turns the value operator ``T`` into ``g + T``, which
    is what is iterated here, jointly over all columns.
    """
    G = np.asarray(perturbations, dtype=float)
    if G.ndim == 1:
        G = G[:, None]
    if G.shape[0] != game.n:
        raise PreconditionError("perturbations must have one row per state")
    if horizon < 1:
        raise PreconditionError("horizon must be at least 1")
    kernel = ShapleyKernel(game)
    X = np.zeros_like(G)
    for _ in range(horizon):
        X = kernel.apply(X) + G
    return X / horizon


def check_ergodic_equation(game: GameSpec, lam: float, u, tolerance: float) -> bool:
    """Whether ``T(u)`` equals ``lam * ones + u`` within ``tolerance`` in sup-norm."""
    if tolerance < 0:
        raise PreconditionError("tolerance must be nonnegative")
    u = np.asarray(u, dtype=float)
    return sup_norm(apply_shapley(game, u) - lam - u) <= tolerance


def kleene_limit_real(
    F: Callable[[np.ndarray], np.ndarray],
    x0,
    max_iter: int = KLEENE_MAX_ITER,
    tolerance: float = KLEENE_TOLERANCE,
) -> np.ndarray:
    """Monotone iteration limit of a payment-free operator from ``x0``.

    ``F(x0)`` must be entrywise above or below ``x0`` (so the orbit is
    monotone); iteration stops when consecutive iterates are within
    ``tolerance`` in sup-norm and raises :class:`NumericFailureError` if
    ``max_iter`` is exhausted first.
    """
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(F(x))
    slack = 1e-12
    if not (np.all(y <= x + slack) or np.all(y >= x - slack)):
        raise PreconditionError("iteration needs a pre- or post-fixed starting point")
    for _ in range(max_iter):
        if sup_norm(y - x) <= tolerance:
            return y
        x, y = y, np.asarray(F(y))
    raise NumericFailureError(
        f"no fixed point within {tolerance} after {max_iter} iterations "
        f"(last step moved {sup_norm(y - x):.3e})"
    )
