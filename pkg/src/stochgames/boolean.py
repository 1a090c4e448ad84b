"""Boolean abstractions of the payment-free operator on indicator vectors.

On a 0/1 vector the transition row's dot product lies strictly above 0
exactly when the support meets the set of ones, and reaches 1 exactly when
the support is contained in it.  Substituting those two tests for the dot
product gives an upper and a lower Boolean operator; both depend on the
game only through its transition supports, and they decide membership in
the lattices of invariant lower/upper faces of the unit hypercube exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import GuardExceededError, PreconditionError
from .game import SupportSpec
from .operators import GameOperator
from .subsets import Subset

ENUMERATION_GUARD = 24


@dataclass(frozen=True)
class LatticePair:
    """The enumerated lattices of lower and upper invariant faces.

    Both lists contain the empty set and the full state space and are
    sorted by cardinality, then lexicographically.
    """

    lower: tuple[Subset, ...]
    upper: tuple[Subset, ...]


def _op(support: SupportSpec) -> GameOperator:
    return GameOperator.from_support(support)


def _wrap(support: SupportSpec, x: Subset) -> None:
    if x.n != support.n:
        raise PreconditionError(f"subset over {x.n} states, support over {support.n}")


def f_plus(support: SupportSpec, x: Subset) -> Subset:
    """Upper Boolean abstraction: min over actions of max over menus of
    'some successor is in x'."""
    _wrap(support, x)
    return Subset(_op(support).f_plus_mask(x.mask), x.n)


def f_minus(support: SupportSpec, x: Subset) -> Subset:
    """Lower Boolean abstraction: min over actions of max over menus of
    'every successor is in x'."""
    _wrap(support, x)
    return Subset(_op(support).f_minus_mask(x.mask), x.n)


def check_h1(support: SupportSpec, I: Subset) -> bool:
    """Whether the minimizer can confine play to ``I``: the upper
    abstraction maps the complement's indicator below itself."""
    _wrap(support, I)
    return _op(support).check_h1_mask(I.mask)


def check_h2(support: SupportSpec, J: Subset) -> bool:
    """Whether the maximizer can confine play to ``J`` (dual of check_h1)."""
    _wrap(support, J)
    return _op(support).check_h2_mask(J.mask)


def boolean_kleene(op: Callable[[Subset], Subset], x0: Subset) -> Subset:
    """Exact limit of a monotone Boolean operator iterated from ``x0``.

    ``op(x0)`` must contain or be contained in ``x0``; each step then moves
    at least one bit monotonically, so the limit is reached within ``n``
    applications and is a fixed point of ``op``.
    """
    x = x0
    y = op(x)
    if y.mask == x.mask:
        return x
    if not (y.issubset(x) or x.issubset(y)):
        raise PreconditionError("Boolean iteration needs a monotone start")
    while y.mask != x.mask:
        x, y = y, op(y)
    return x


def enumerate_lattices(
    support: SupportSpec, *, override_guard: bool = False
) -> LatticePair:
    """All lower and upper invariant faces, by exhaustive subset scan.

    Guarded at ``ENUMERATION_GUARD`` states; pass ``override_guard=True``
    to scan anyway.
    """
    n = support.n
    if n > ENUMERATION_GUARD and not override_guard:
        raise GuardExceededError(
            f"enumeration over 2^{n} subsets exceeds the guard "
            f"({ENUMERATION_GUARD}); pass override_guard=True to force"
        )
    op = _op(support)
    lower = []
    upper = []
    for mask in range(1 << n):
        if op.check_h1_mask(mask):
            lower.append(Subset(mask, n))
        if op.check_h2_mask(mask):
            upper.append(Subset(mask, n))
    lower.sort(key=Subset.sort_key)
    upper.sort(key=Subset.sort_key)
    return LatticePair(tuple(lower), tuple(upper))
