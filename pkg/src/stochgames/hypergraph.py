"""Directed hypergraphs encoding the Boolean abstractions, and linear-time
reachability on them.

A hyperarc has a set-valued tail and head; a node is reachable from a seed
set when some hyperarc with a fully reached tail yields it.  The upper
abstraction is encoded by a two-layer hypergraph whose intermediate nodes
are (state, min action) pairs; the lower abstraction by one whose
intermediates are (state, min action, max action) triples.  Identifying
each primed output state with its original turns one application of the
operator into plain reachability, which is what the Galois-connection
computations consume.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import PreconditionError
from .game import SupportSpec
from .subsets import Subset

# Node tags. A node is a tuple whose first entry is one of these.
STATE = "state"
PRIME = "prime"
MIN = "min"
MINMAX = "minmax"

Node = tuple
_TAG_RANK = {STATE: 0, PRIME: 1, MIN: 2, MINMAX: 3}


def _node_key(node: Node):
    return (_TAG_RANK[node[0]], node[1:])


@dataclass(frozen=True)
class Hypergraph:
    """Immutable directed hypergraph with tagged nodes.

    ``arcs`` holds (tail, head) pairs of node tuples; tails and heads are
    nonempty and disjoint.  ``state_labels`` fixes the state universe and
    its order for reach results.
    """

    nodes: tuple[Node, ...]
    arcs: tuple[tuple[tuple[Node, ...], tuple[Node, ...]], ...]
    state_labels: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)
    _arcs_with_tail: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {node: k for k, node in enumerate(self.nodes)}
        if len(index) != len(self.nodes):
            raise ValueError("duplicate nodes")
        arcs_with_tail: dict[Node, list[int]] = {}
        for e, (tail, head) in enumerate(self.arcs):
            if not tail or not head:
                raise ValueError("hyperarc tails and heads must be nonempty")
            if set(tail) & set(head):
                raise ValueError("hyperarc tail and head must be disjoint")
            for node in tail + head:
                if node not in index:
                    raise ValueError(f"arc references unknown node {node!r}")
            for node in tail:
                arcs_with_tail.setdefault(node, []).append(e)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_arcs_with_tail", arcs_with_tail)

    @property
    def size(self) -> int:
        return len(self.nodes) + sum(len(t) + len(h) for t, h in self.arcs)


@dataclass(frozen=True)
class ReachResult:
    """Nodes reachable from a seed set, with its projection onto states."""

    reached: frozenset
    states: Subset


def state_nodes(subset: Subset, labels: Iterable[str]) -> tuple[Node, ...]:
    labels = tuple(labels)
    return tuple((STATE, labels[i]) for i in subset.indices())


def build_g_plus(support: SupportSpec) -> Hypergraph:
    """Two-layer hypergraph of the upper abstraction.

    Arcs feed a (state, action) node from every state some response can
    move to; one hyperarc per state collects all its action nodes into the
    primed copy of the state.
    """
    nodes: list[Node] = [(STATE, s) for s in support.states]
    nodes += [(PRIME, s) for s in support.states]
    arcs = []
    seen_pairs: dict[tuple[str, str], set[str]] = {}
    for row in support.rows:
        seen_pairs.setdefault((row.state, row.min_action), set()).update(
            support.states[j] for j in row.successors
        )
    pair_keys = sorted(seen_pairs)
    nodes += [(MIN, s, a) for s, a in pair_keys]
    for s, a in pair_keys:
        for j in sorted(seen_pairs[(s, a)]):
            arcs.append((((STATE, j),), ((MIN, s, a),)))
    for s in support.states:
        tail = tuple((MIN, s, a) for (s2, a) in pair_keys if s2 == s)
        arcs.append((tail, ((PRIME, s),)))
    return Hypergraph(tuple(nodes), tuple(arcs), support.states)


def build_g_minus(support: SupportSpec) -> Hypergraph:
    """Two-layer hypergraph of the lower abstraction.

    Each (state, a, b) node is fed from every successor of its row; for
    each (state, a) one hyperarc collects the whole response menu into the
    primed copy of the state.
    """
    nodes: list[Node] = [(STATE, s) for s in support.states]
    nodes += [(PRIME, s) for s in support.states]
    triples = [(r.state, r.min_action, r.max_action) for r in support.rows]
    nodes += [(MINMAX, s, a, b) for s, a, b in triples]
    arcs = []
    for row in support.rows:
        for j in row.successors:
            arcs.append(
                (((STATE, support.states[j]),),
                 ((MINMAX, row.state, row.min_action, row.max_action),))
            )
    menus: dict[tuple[str, str], list[Node]] = {}
    for s, a, b in triples:
        menus.setdefault((s, a), []).append((MINMAX, s, a, b))
    for (s, a) in sorted(menus):
        arcs.append((tuple(menus[(s, a)]), ((PRIME, s),)))
    return Hypergraph(tuple(nodes), tuple(arcs), support.states)


def merge_primes(H: Hypergraph) -> Hypergraph:
    """Identify each primed state with its original state node."""
    primes = [node for node in H.nodes if node[0] == PRIME]
    if not primes:
        return H
    state_set = {node[1] for node in H.nodes if node[0] == STATE}
    for node in primes:
        if node[1] not in state_set:
            raise PreconditionError(f"prime node {node!r} has no matching state")

    def rename(node: Node) -> Node:
        return (STATE, node[1]) if node[0] == PRIME else node

    nodes = tuple(node for node in H.nodes if node[0] != PRIME)
    arcs = []
    for tail, head in H.arcs:
        arcs.append((tuple(rename(v) for v in tail), tuple(rename(v) for v in head)))
    # Identification can create duplicates; keep one copy, in a stable order.
    arcs = tuple(dict.fromkeys(arcs))
    return Hypergraph(nodes, arcs, H.state_labels)


def reach(H: Hypergraph, start: Iterable[Node]) -> ReachResult:
    """Exact reachable set by the countdown algorithm, linear in hypergraph size.

    Every hyperarc holds a counter initialized to its tail size; newly
    reached nodes decrement the counters of arcs they tail, and an
    exhausted arc releases its head into the queue.
    """
    start = list(start)
    for node in start:
        if node not in H._index:
            raise PreconditionError(f"unknown start node {node!r}")
    counters = [len(tail) for tail, _ in H.arcs]
    reached = set()
    queue = []
    for node in start:
        if node not in reached:
            reached.add(node)
            queue.append(node)
    qi = 0
    while qi < len(queue):
        node = queue[qi]
        qi += 1
        for e in H._arcs_with_tail.get(node, ()):
            counters[e] -= 1
            if counters[e] == 0:
                for head_node in H.arcs[e][1]:
                    if head_node not in reached:
                        reached.add(head_node)
                        queue.append(head_node)
    label_index = {lbl: i for i, lbl in enumerate(H.state_labels)}
    state_idx = [
        label_index[node[1]]
        for node in reached
        if node[0] == STATE and node[1] in label_index
    ]
    return ReachResult(frozenset(reached), Subset.of(state_idx, len(H.state_labels)))


def is_invariant_relative(H: Hypergraph, K: Subset, universe: Iterable[Node]) -> bool:
    """Whether nothing in ``universe`` outside ``K`` is reachable from ``K``."""
    universe = set(universe)
    k_nodes = set(state_nodes(K, H.state_labels))
    if not k_nodes <= universe:
        raise PreconditionError("K must be contained in the universe")
    result = reach(H, sorted(k_nodes, key=_node_key))
    return (result.reached & universe) <= k_nodes


_SHAPES = {STATE: "circle", PRIME: "doublecircle", MIN: "box", MINMAX: "diamond"}


def export_dot(H: Hypergraph) -> str:
    """Deterministic DOT rendering; hyperarc tails meet at a point-shaped junction."""
    ordered = sorted(H.nodes, key=_node_key)
    names = {node: f"n{k}" for k, node in enumerate(ordered)}
    lines = ["digraph hypergraph {", "  rankdir=LR;"]
    for node in ordered:
        label = "/".join(str(part) for part in node[1:])
        if node[0] == PRIME:
            label += "'"
        lines.append(
            f'  {names[node]} [shape={_SHAPES[node[0]]}, label="{label}"];'
        )
    junction = 0
    for tail, head in H.arcs:
        tail = sorted(tail, key=_node_key)
        head = sorted(head, key=_node_key)
        if len(tail) == 1:
            src = names[tail[0]]
        else:
            src = f"j{junction}"
            junction += 1
            lines.append(f'  {src} [shape=point, label=""];')
            for node in tail:
                lines.append(f"  {names[node]} -> {src} [arrowhead=none];")
        for node in head:
            lines.append(f"  {src} -> {names[node]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hypergraph_to_json(H: Hypergraph) -> dict:
    """JSON-ready dump: tagged nodes plus tail/head arrays."""
    def render(node: Node) -> list:
        return list(node)

    return {
        "states": list(H.state_labels),
        "nodes": [render(node) for node in sorted(H.nodes, key=_node_key)],
        "arcs": [
            {
                "tail": [render(v) for v in sorted(tail, key=_node_key)],
                "head": [render(v) for v in sorted(head, key=_node_key)],
            }
            for tail, head in H.arcs
        ],
        "size": H.size,
    }
