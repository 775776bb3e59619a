import logging
import math
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from src.dynamics.network import State, validate_state
from src.schemas.graph_models import Digraph
from src.schemas.network_models import Network, WitnessSpec

logger = logging.getLogger(__name__)

TreeLabel = tuple[int, ...]


def _cycle_arcs(first: int, length: int) -> list[tuple[int, int]]:
    """first -> first+1 -> ... -> first+length-1 -> first."""
    last = first + length - 1
    return [(j, j + 1) for j in range(first, last)] + [(last, first)]


def _uniform(n: int, value: int) -> tuple[int, ...]:
    return (value,) * n


def _assemble(n: int, arcs, p, th, state) -> tuple[Network, State]:
    net = Network(graph=Digraph.from_arcs(n, arcs), p=tuple(p), th=tuple(th))
    return net, validate_state(net, np.asarray(state))


def build_nsc(length: int) -> tuple[Network, State]:
    """Isolated cycle with p = th = 1 whose state takes both values 0 and 1: (0, 1, ..., 1)."""
    if length < 2:
        raise ValueError(f"A cycle needs length >= 2, got {length}")
    state = [0] + [1] * (length - 1)
    return _assemble(length, _cycle_arcs(1, length), _uniform(length, 1), _uniform(length, 1), state)


def build_nsc1(length: int, p: int) -> tuple[Network, State]:
    """Isolated cycle, p_j = p, th_j = 1, a single firing node and everyone else at rest."""
    if p < 1:
        raise ValueError(f"Refractory period must be >= 1, got {p}")
    if length <= p:
        raise ValueError(f"A single pulse dies out unless length > p; got length={length}, p={p}")
    state = [0] + [p] * (length - 1)
    return _assemble(length, _cycle_arcs(1, length), _uniform(length, p), _uniform(length, 1), state)


def build_nscp(length: int, p: int) -> tuple[Network, State]:
    """Isolated cycle, p_j = p, th_j = 1, with a staircase state that descends along the arcs.

    Node j starts at -(j - 1) mod (p + 1), so every node reaches p exactly when its in-neighbor
    fires and the whole cycle keeps firing in waves of period p + 1.
    """
    if p < 1:
        raise ValueError(f"Refractory period must be >= 1, got {p}")
    if length < 2 or length % (p + 1):
        raise ValueError(f"Cycle length must be a multiple of p + 1 = {p + 1}, got {length}")
    state = [(-(j - 1)) % (p + 1) for j in range(1, length + 1)]
    return _assemble(length, _cycle_arcs(1, length), _uniform(length, p), _uniform(length, 1), state)


def build_landau(ks: Sequence[int]) -> tuple[Network, State]:
    """Disjoint odd cycles feeding a collector node that a 2-cycle keeps driving.

    Numbering: the cycles occupy consecutive blocks in the order given, then the collector, then
    the two nodes of the 2-cycle. Position j of a cycle of length k starts at 0 when j is even and
    j < k, at 1 otherwise.
    """
    ks = tuple(ks)
    if not ks:
        raise ValueError("Need at least one cycle length")
    for k in ks:
        if k < 3 or k % 2 == 0:
            raise ValueError(f"Cycle lengths must be odd and > 1, got {k}")

    arcs, state = [], []
    offset = 0
    collector = sum(ks) + 1
    for k in ks:
        arcs.extend(_cycle_arcs(offset + 1, k))
        arcs.append((offset + k, collector))
        state.extend(0 if j % 2 == 0 and j < k else 1 for j in range(1, k + 1))
        offset += k

    driver, partner = collector + 1, collector + 2
    arcs.extend([(driver, partner), (partner, driver), (driver, collector)])
    state.extend([0, 0, 1])
    n = collector + 2
    return _assemble(n, arcs, _uniform(n, 1), _uniform(n, 1), state)


def landau_reference(ks: Sequence[int]) -> tuple[int, int]:
    """Exact (tau, alpha) of build_landau(ks).

    The last node of a cycle of length k fires exactly at the times t with t mod k odd, and the
    2-cycle fires into the collector at every even t. The collector keeps being pushed back to odd
    firing times until the first odd t at which no cycle fires; from t + 1 on it fires at odd times
    only.
    """
    ks = tuple(ks)
    if not ks or any(k < 3 or k % 2 == 0 for k in ks):
        raise ValueError(f"Cycle lengths must be odd and > 1, got {ks}")
    t = 1
    while any((t % k) % 2 for k in ks):
        t += 2
    return t + 1, 2 * math.lcm(*ks)


def tree_labeling(depth: int, branching: int) -> dict[TreeLabel, int]:
    """Breadth-first numbering of Tr(depth): () -> 1, then children in lexicographic order."""
    if depth < 1:
        raise ValueError(f"Depth must be >= 1, got {depth}")
    if branching < 1:
        raise ValueError(f"Branching must be >= 1, got {branching}")
    labels: dict[TreeLabel, int] = {}
    for level in range(depth + 1):
        for sigma in product(range(1, branching + 1), repeat=level):
            labels[sigma] = len(labels) + 1
    return labels


def build_tree_witness(depth: int, branching: int, p: int) -> tuple[Network, State]:
    """Complete branching-ary tree of the given depth with arcs from children to parents.

    Leaves start firing; each level above sits one step earlier in the refractory cycle, so the
    firing front reaches the root after exactly `depth` steps.
    """
    if depth < 1:
        raise ValueError(f"Depth must be >= 1, got {depth}")
    if branching < 2:
        raise ValueError(f"Branching must be >= 2, got {branching}")
    if p < 1:
        raise ValueError(f"Refractory period must be >= 1, got {p}")

    labels = tree_labeling(depth, branching)
    n = len(labels)
    arcs = [(labels[sigma], labels[sigma[:-1]]) for sigma in labels if sigma]
    state = [0] * n
    for sigma, node in labels.items():
        state[node - 1] = (len(sigma) - depth) % (p + 1)
    return _assemble(n, arcs, _uniform(n, p), _uniform(n, branching), state)


def verify_tree_witness(
    net: Network, s0: State, F: Mapping[TreeLabel, int], depth: int, branching: int, p: int
) -> bool:
    """Check that the range of F is a witness of the given depth in (net, s0); False on any failure."""
    try:
        state = validate_state(net, s0)
        expected = tree_labeling(depth, branching)
    except ValueError as e:
        logger.debug("witness rejected: %s", e)
        return False

    if set(F) != set(expected):
        logger.debug("labeling is not defined on exactly Tr(%d)", depth)
        return False
    witness = set(F.values())
    if len(witness) != len(F) or not all(1 <= i <= net.n for i in witness):
        logger.debug("labeling is not an injection into the node set")
        return False

    for sigma, node in F.items():
        if net.p[node - 1] != p or net.th[node - 1] != branching:
            return False
        children = [F[sigma + (k,)] for k in range(1, branching + 1)] if len(sigma) < depth else []
        # leaves fire, each parent sits one step before its children
        if not children and state[node - 1] != 0:
            return False
        if any(int(state[node - 1]) != (int(state[child - 1]) - 1) % (p + 1) for child in children):
            return False
        # in-neighbors are exactly the children
        if set(net.graph.in_neighbors(node)) != set(children):
            return False
        # children keep the labeling order
        if any(a >= b for a, b in zip(children, children[1:])):
            return False
        # nothing leaves the witness except child -> parent arcs
        parent = F[sigma[:-1]] if sigma else None
        if any(target != parent for target in net.graph.out_neighbors(node)):
            return False
    return True


def build_witness(spec: WitnessSpec) -> tuple[Network, State]:
    """Build the construction named by spec.kind."""
    if spec.kind == "nsc":
        return build_nsc(spec.length)
    if spec.kind == "nsc1":
        return build_nsc1(spec.length, spec.p)
    if spec.kind == "nscp":
        return build_nscp(spec.length, spec.p)
    if spec.kind == "landau":
        return build_landau(spec.ks)
    return build_tree_witness(spec.depth, spec.branching, spec.p)
