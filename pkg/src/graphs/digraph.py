import logging
import math
from collections import Counter
from itertools import islice
from typing import Iterable, Iterator, Optional

import networkx as nx
import numpy as np

from src.schemas.graph_models import CondensationInfo, CycleCensus, Digraph

logger = logging.getLogger(__name__)

# below this arc probability, arcs are sampled by geometric skips instead of an n x n mask
SPARSE_PI_LIMIT = 0.1
DEFAULT_SIZE_GUARD = 12
DEFAULT_CYCLE_CAP = 1_000_000


class IntractableInstanceError(RuntimeError):
    """Raised when an exact answer would need exhaustive search on a large cyclic digraph."""


def _check_node(D: Digraph, i: int) -> None:
    if not 1 <= i <= D.n:
        raise ValueError(f"Node {i} is out of range 1..{D.n}")


def gen_erdos_renyi(n: int, pi: float, rng: np.random.Generator) -> Digraph:
    """Sample a loop-free digraph where each ordered pair i != j is an arc with probability pi."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"Arc probability must lie in [0, 1], got {pi}")

    pairs = n * (n - 1)
    if pi == 0.0 or pairs == 0:
        return Digraph.empty(n)

    if pi <= SPARSE_PI_LIMIT:
        positions = _geometric_positions(pairs, pi, rng)
        sources = positions // (n - 1)
        offsets = positions % (n - 1)
        targets = offsets + (offsets >= sources)
    else:
        mask = rng.random((n, n)) < pi
        np.fill_diagonal(mask, False)
        sources, targets = np.nonzero(mask)

    return Digraph.from_arcs(n, zip((sources + 1).tolist(), (targets + 1).tolist()))


def _geometric_positions(pairs: int, pi: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of successes among `pairs` Bernoulli(pi) trials, drawn by geometric gaps."""
    expected = pairs * pi
    batch = int(expected + 5 * math.sqrt(expected) + 16)
    chunks = []
    last = -1
    while last < pairs:
        chunk = last + np.cumsum(rng.geometric(pi, size=batch))
        chunks.append(chunk)
        last = int(chunk[-1])
    positions = np.concatenate(chunks)
    return positions[positions < pairs]


def upstream(D: Digraph, i: int) -> frozenset[int]:
    """UC(i): every node with a directed path to i, i included."""
    _check_node(D, i)
    return frozenset(nx.ancestors(D.nx_graph, i)) | {i}


def downstream(D: Digraph, i: int) -> frozenset[int]:
    """DC(i): every node reachable from i, i included."""
    _check_node(D, i)
    return frozenset(nx.descendants(D.nx_graph, i)) | {i}


def condense(D: Digraph) -> CondensationInfo:
    """Strongly connected components, their cyclic flags and the giant-component closures GC, UG, DG, CYCU."""
    graph = D.nx_graph
    components = sorted(
        (frozenset(members) for members in nx.strongly_connected_components(graph)), key=min
    )
    scc_id = [0] * D.n
    for index, members in enumerate(components):
        for i in members:
            scc_id[i - 1] = index
    # loop-free, so a singleton component is never cyclic
    cyclic = tuple(len(members) > 1 for members in components)

    dag = nx.condensation(graph, scc=components)
    in_cycu = [False] * len(components)
    for k in nx.topological_sort(dag):
        in_cycu[k] = cyclic[k] or any(in_cycu[u] for u in dag.predecessors(k))
    cycu = frozenset().union(*(components[k] for k in range(len(components)) if in_cycu[k]))

    gc = ug = dg = frozenset()
    candidates = [k for k in range(len(components)) if cyclic[k]]
    if candidates:
        giant = max(candidates, key=lambda k: (len(components[k]), -min(components[k])))
        gc = components[giant]
        ug = frozenset().union(*(components[k] for k in nx.ancestors(dag, giant) | {giant}))
        dg = frozenset().union(*(components[k] for k in nx.descendants(dag, giant) | {giant}))

    return CondensationInfo(
        scc_id=tuple(scc_id),
        scc_members=tuple(components),
        is_cyclic_scc=cyclic,
        gc=gc,
        ug=ug,
        dg=dg,
        cycu=cycu,
    )


def iter_cycles(D: Digraph, max_len: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Distinct directed cycles, each once, rotated so the smallest node comes first."""
    for cycle in nx.simple_cycles(D.nx_graph, length_bound=max_len):
        start = cycle.index(min(cycle))
        yield tuple(cycle[start:] + cycle[:start])


def cycle_census(
    D: Digraph, max_len: Optional[int] = None, max_count: int = DEFAULT_CYCLE_CAP
) -> CycleCensus:
    """Count distinct cycles per length up to max_len, stopping after max_count cycles."""
    if max_len is None:
        max_len = D.n
    if max_len < 2:
        raise ValueError(f"max_len must be >= 2, got {max_len}")

    counts = Counter()
    truncated = False
    for found, cycle in enumerate(iter_cycles(D, max_len)):
        if found == max_count:
            truncated = True
            logger.debug("cycle census truncated at %d cycles", max_count)
            break
        counts[len(cycle)] += 1
    return CycleCensus(counts=dict(sorted(counts.items())), truncated=truncated)


def is_supersimple(D: Digraph, cap: int = DEFAULT_CYCLE_CAP) -> Optional[bool]:
    """At most one directed cycle C, and no node outside C is joined to C by two C-arc-disjoint paths.

    Returns None when cap stops the cycle enumeration before the answer is known.
    """
    found = list(islice(iter_cycles(D), min(cap, 2)))
    if len(found) >= 2:
        return False
    if len(found) == cap:
        return None
    if not found:
        return True
    return _paths_to_and_from_cycle_are_unique(D, found[0])


def _paths_to_and_from_cycle_are_unique(D: Digraph, cycle: tuple[int, ...]) -> bool:
    graph = D.nx_graph.copy()
    graph.remove_edges_from(zip(cycle, cycle[1:] + cycle[:1]))
    on_cycle = set(cycle)
    # one cycle only, so removing its arcs leaves a DAG
    order = list(nx.topological_sort(graph))

    from_cycle = {}
    for v in order:
        if v in on_cycle:
            from_cycle[v] = 1
        else:
            from_cycle[v] = min(2, sum(from_cycle[u] for u in graph.predecessors(v)))
            if from_cycle[v] >= 2:
                return False

    to_cycle = {}
    for v in reversed(order):
        if v in on_cycle:
            to_cycle[v] = 1
        else:
            to_cycle[v] = min(2, sum(to_cycle[w] for w in graph.successors(v)))
            if to_cycle[v] >= 2:
                return False
    return True


def longest_path(D: Digraph, size_guard: int = DEFAULT_SIZE_GUARD) -> int:
    """L_max, the number of arcs on a longest directed path."""
    graph = D.nx_graph
    if nx.is_directed_acyclic_graph(graph):
        return nx.dag_longest_path_length(graph)

    cycles = list(islice(iter_cycles(D), 2))
    if len(cycles) == 1:
        # a simple path misses at least one arc of the only cycle
        cycle = cycles[0]
        best = 0
        for arc in zip(cycle, cycle[1:] + cycle[:1]):
            pruned = graph.copy()
            pruned.remove_edge(*arc)
            best = max(best, nx.dag_longest_path_length(pruned))
        return best

    if D.n > size_guard:
        raise IntractableInstanceError(
            f"Longest path on a digraph with several cycles needs exhaustive search; "
            f"n={D.n} exceeds the size guard {size_guard}"
        )
    return _exhaustive_longest_path(graph)


def _exhaustive_longest_path(graph: nx.DiGraph) -> int:
    best = 0
    limit = graph.number_of_nodes() - 1

    def extend(node, visited, length):
        nonlocal best
        best = max(best, length)
        if best == limit:
            return
        for successor in graph.successors(node):
            if successor not in visited:
                visited.add(successor)
                extend(successor, visited, length + 1)
                visited.remove(successor)

    for start in graph:
        extend(start, {start}, 0)
        if best == limit:
            break
    return best


def induced_subgraph(D: Digraph, nodes: Iterable[int]) -> tuple[Digraph, tuple[int, ...]]:
    """Subdigraph on `nodes`, relabelled 1..k in ascending order; returns it with the old ids."""
    ordered = tuple(sorted(set(nodes)))
    if not ordered:
        raise ValueError("Cannot induce a digraph on an empty node set")
    for i in ordered:
        _check_node(D, i)
    index = {old: new for new, old in enumerate(ordered, start=1)}
    arcs = [(index[u], index[v]) for u in ordered for v in D.out_neighbors(u) if v in index]
    return Digraph.from_arcs(len(ordered), arcs), ordered


def longest_path_upstream(D: Digraph, i: int, size_guard: int = DEFAULT_SIZE_GUARD) -> int:
    """L_max(i), the longest directed path inside UC(i)."""
    sub, _ = induced_subgraph(D, upstream(D, i))
    return longest_path(sub, size_guard)


def _check_path(D: Digraph, pt: tuple[int, ...]) -> None:
    if not pt:
        raise ValueError("A path needs at least one node")
    for i in pt:
        _check_node(D, i)
    if len(set(pt)) != len(pt):
        raise ValueError(f"Path {pt} repeats a node")
    for u, v in zip(pt, pt[1:]):
        if v not in D.out_neighbors(u):
            raise ValueError(f"Path {pt} uses the missing arc {u}->{v}")


def _uniquely_connected(graph: nx.DiGraph, a: int, b: int) -> bool:
    """Exactly one directed path joins a and b, and it runs from a to b."""
    if nx.has_path(graph, b, a):
        return False
    return len(list(islice(nx.all_simple_paths(graph, a, b), 2))) == 1


def is_straight_path(D: Digraph, pt) -> bool:
    """True when each earlier node on pt reaches each later one by exactly one directed path, and never back."""
    pt = tuple(pt)
    _check_path(D, pt)
    graph = D.nx_graph
    return all(
        _uniquely_connected(graph, pt[x], pt[y])
        for x in range(len(pt))
        for y in range(x + 1, len(pt))
    )


def longest_straight_path(D: Digraph, size_guard: int = DEFAULT_SIZE_GUARD) -> int:
    """L_max^s by depth-first extension; straightness is inherited by sub-paths."""
    if D.n > size_guard:
        raise IntractableInstanceError(
            f"Straight-path search is exhaustive; n={D.n} exceeds the size guard {size_guard}"
        )
    graph = D.nx_graph
    best = 0

    def extend(path):
        nonlocal best
        best = max(best, len(path) - 1)
        for successor in graph.successors(path[-1]):
            if successor in path:
                continue
            if all(_uniquely_connected(graph, u, successor) for u in path):
                path.append(successor)
                extend(path)
                path.pop()

    for start in graph:
        extend([start])
    return best


def is_b_small(V, b: float, n: int) -> bool:
    """|V| < b ln n."""
    if b <= 0:
        raise ValueError(f"b must be positive, got {b}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return len(V) < b * math.log(n)
