"""Antitone pairing between invariant faces, and the ergodicity verdict.

For a lower invariant face I (a set the minimizer can confine play to),
``phi(I)`` is the largest upper invariant face disjoint from it, and
``phi_star`` is the dual map.  The game's recession operator has a
nonconstant fixed point exactly when some proper lower face pairs with a
nonempty upper face; the verdict routine scans subsets in
cardinality-lexicographic order and certifies non-ergodicity with the
closed conjugate pair it finds first.

Production computations go through merged-hypergraph reachability; the
Boolean-iteration route is available as a debug crosscheck.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .boolean import ENUMERATION_GUARD, enumerate_lattices
from .errors import GuardExceededError, PreconditionError
from .game import SupportSpec
from .hypergraph import Hypergraph, build_g_minus, build_g_plus, merge_primes, reach, state_nodes
from .operators import GameOperator
from .shapley import kleene_limit_real
from .subsets import Subset


@dataclass(frozen=True)
class ErgodicityReport:
    """Verdict plus the certificate needed to re-verify it offline."""

    verdict: str  # "ergodic" | "not-ergodic"
    witness: tuple[Subset, Subset] | None
    fixed_point_witness: np.ndarray | None
    stats: dict

    @property
    def ergodic(self) -> bool:
        return self.verdict == "ergodic"


def _merged_minus(support: SupportSpec) -> Hypergraph:
    return merge_primes(build_g_minus(support))


def _merged_plus(support: SupportSpec) -> Hypergraph:
    return merge_primes(build_g_plus(support))


def phi(support: SupportSpec, I: Subset, *, debug_crosscheck: bool = False) -> Subset:
    """Largest upper invariant face disjoint from the lower face ``I``.

    Computed as the complement of the states reachable from ``I`` in the
    merged lower-abstraction hypergraph.
    """
    op = GameOperator.from_support(support)
    if not op.check_h1_mask(I.mask):
        raise PreconditionError("phi is only defined on lower invariant faces")
    result = _phi_reach(_merged_minus(support), I)
    if debug_crosscheck:
        alt = Subset(op.phi_mask(I.mask), support.n)
        if alt != result:
            raise AssertionError(f"phi crosscheck failed: {result} vs {alt}")
    return result


def _phi_reach(merged_minus: Hypergraph, I: Subset) -> Subset:
    return reach(merged_minus, state_nodes(I, merged_minus.state_labels)).states.complement()


def phi_star(support: SupportSpec, J: Subset, *, debug_crosscheck: bool = False) -> Subset:
    """Largest lower invariant face disjoint from the upper face ``J``."""
    op = GameOperator.from_support(support)
    if not op.check_h2_mask(J.mask):
        raise PreconditionError("phi_star is only defined on upper invariant faces")
    result = _phi_star_reach(_merged_plus(support), J)
    if debug_crosscheck:
        alt = Subset(op.phi_star_mask(J.mask), support.n)
        if alt != result:
            raise AssertionError(f"phi_star crosscheck failed: {result} vs {alt}")
    return result


def _phi_star_reach(merged_plus: Hypergraph, J: Subset) -> Subset:
    return reach(merged_plus, state_nodes(J, merged_plus.state_labels)).states.complement()


def closure(support: SupportSpec, I: Subset) -> Subset:
    """Closed hull ``phi_star(phi(I))`` of a lower face with nonempty pairing."""
    image = phi(support, I)
    if not image:
        raise PreconditionError("closure needs phi(I) to be nonempty")
    result = phi_star(support, image)
    if not I.issubset(result):
        raise AssertionError("closure must contain its argument")
    return result


def _proper_subsets_by_cardinality(n: int):
    for k in range(1, n):
        for combo in itertools.combinations(range(n), k):
            yield combo


def _scan_cardinalities(support: SupportSpec, cards: tuple[int, ...]):
    """First (cardinality, combo) hit among the given cardinalities, plus work count.

    Worker for the parallel verdict scan; cardinalities are visited in the
    given (ascending) order, combinations lexicographically.
    """
    op = GameOperator.from_support(support)
    merged_minus = _merged_minus(support)
    n = support.n
    examined = 0
    for k in cards:
        for combo in itertools.combinations(range(n), k):
            examined += 1
            I = Subset.of(combo, n)
            if not op.check_h1_mask(I.mask):
                continue
            if _phi_reach(merged_minus, I):
                return (k, combo), examined
    return None, examined


def is_ergodic(
    support: SupportSpec,
    *,
    want_fixed_point: bool = False,
    override_guard: bool = False,
    debug_crosscheck: bool = False,
    jobs: int = 1,
) -> ErgodicityReport:
    """Scan for a proper lower invariant face pairing with a nonempty upper face.

    Subsets are visited by increasing cardinality, lexicographically within
    a cardinality; the first hit is canonicalized by closure, giving the
    reported conjugate pair.  ``want_fixed_point`` additionally builds a
    nonconstant fixed-point vector of the (uniform-representative)
    recession operator whose argmin/argmax are the witness sets.
    ``jobs > 1`` spreads cardinalities over worker processes; the reported
    pair is the same, the work counter may differ.
    """
    n = support.n
    if n > ENUMERATION_GUARD and not override_guard:
        raise GuardExceededError(
            f"ergodicity scan over 2^{n} subsets exceeds the guard "
            f"({ENUMERATION_GUARD}); pass override_guard=True to force"
        )
    op = GameOperator.from_support(support)
    merged_minus = _merged_minus(support)
    merged_plus = _merged_plus(support)
    t0 = time.perf_counter()
    examined = 0
    witness = None
    if jobs > 1 and n > 2:
        from concurrent.futures import ProcessPoolExecutor

        slices = [tuple(range(1 + w, n, jobs)) for w in range(jobs)]
        slices = [s for s in slices if s]
        hits = []
        with ProcessPoolExecutor(max_workers=len(slices)) as pool:
            for hit, count in pool.map(_scan_cardinalities, [support] * len(slices), slices):
                examined += count
                if hit is not None:
                    hits.append(hit)
        if hits:
            _, combo = min(hits)
            I = Subset.of(combo, n)
            image = _phi_reach(merged_minus, I)
            hull = _phi_star_reach(merged_plus, image)
            witness = (hull, image)
    else:
        for combo in _proper_subsets_by_cardinality(n):
            examined += 1
            I = Subset.of(combo, n)
            if not op.check_h1_mask(I.mask):
                continue
            image = _phi_reach(merged_minus, I)
            if debug_crosscheck:
                alt = Subset(op.phi_mask(I.mask), n)
                if alt != image:
                    raise AssertionError(f"phi crosscheck failed at {I}: {image} vs {alt}")
            if image:
                hull = _phi_star_reach(merged_plus, image)
                witness = (hull, image)
                break
    elapsed = time.perf_counter() - t0
    stats = {"subsets_examined": examined, "elapsed_seconds": elapsed}
    if witness is None:
        return ErgodicityReport("ergodic", None, None, stats)
    fixed_point = None
    if want_fixed_point:
        fixed_point = kleene_limit_real(
            GameOperator.from_support(support).apply,
            np.asarray([0.0 if i in witness[0] else 1.0 for i in range(n)]),
        )
    return ErgodicityReport("not-ergodic", witness, fixed_point, stats)


def conjugate_pairs(
    support: SupportSpec, *, override_guard: bool = False
) -> list[tuple[Subset, Subset]]:
    """All pairs (I, J) of nonempty faces mapping to each other under the
    antitone pairing, ordered by I."""
    lattices = enumerate_lattices(support, override_guard=override_guard)
    merged_minus = _merged_minus(support)
    merged_plus = _merged_plus(support)
    pairs = []
    for I in lattices.lower:
        if not I:
            continue
        J = _phi_reach(merged_minus, I)
        if J and _phi_star_reach(merged_plus, J) == I:
            pairs.append((I, J))
    pairs.sort(key=lambda p: p[0].sort_key())
    return pairs


def nontrivial_boolean_fixed_points(
    support: SupportSpec, *, override_guard: bool = False
) -> list[tuple[Subset, Subset]]:
    """All disjoint nonempty (lower face, upper face) pairs.

    These are exactly the candidate (argmin, argmax) skeletons of
    nonconstant fixed points of the recession operator; the list is empty
    if and only if the game is ergodic.
    """
    lattices = enumerate_lattices(support, override_guard=override_guard)
    out = []
    for I in lattices.lower:
        if not I:
            continue
        for J in lattices.upper:
            if J and I.isdisjoint(J):
                out.append((I, J))
    out.sort(key=lambda p: (p[0].sort_key(), p[1].sort_key()))
    return out
