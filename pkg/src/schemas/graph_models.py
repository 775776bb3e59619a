from functools import cached_property

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator


class Digraph(BaseModel):
    """Loop-free directed graph on nodes 1..n.

    out_adj[i - 1] and in_adj[i - 1] hold the sorted out- and in-neighbors of node i.
    """
    model_config = ConfigDict(frozen=True)

    n: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_arcs(self) -> "Digraph":
        if self.n < 1:
            raise ValueError(f"Digraph needs at least one node, got n={self.n}")
        if len(self.out_adj) != self.n or len(self.in_adj) != self.n:
            raise ValueError("Adjacency lists must have one entry per node")

        forward = set()
        for i, targets in enumerate(self.out_adj, start=1):
            if len(set(targets)) != len(targets):
                raise ValueError(f"Duplicate arc out of node {i}")
            for j in targets:
                if not 1 <= j <= self.n:
                    raise ValueError(f"Arc {i}->{j} leaves the node range 1..{self.n}")
                if j == i:
                    raise ValueError(f"Self-loop at node {i}")
                forward.add((i, j))

        backward = set()
        for j, sources in enumerate(self.in_adj, start=1):
            if len(set(sources)) != len(sources):
                raise ValueError(f"Duplicate arc into node {j}")
            backward.update((i, j) for i in sources)

        if forward != backward:
            raise ValueError("out_adj and in_adj describe different arc sets")
        return self

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "Digraph":
        """Build a digraph from (source, target) pairs, 1-indexed."""
        out_adj = [set() for _ in range(n)]
        in_adj = [set() for _ in range(n)]
        for source, target in arcs:
            source, target = int(source), int(target)
            if not (1 <= source <= n and 1 <= target <= n):
                raise ValueError(f"Arc {source}->{target} leaves the node range 1..{n}")
            out_adj[source - 1].add(target)
            in_adj[target - 1].add(source)
        return cls(
            n=n,
            out_adj=tuple(tuple(sorted(targets)) for targets in out_adj),
            in_adj=tuple(tuple(sorted(sources)) for sources in in_adj),
        )

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls.from_arcs(n, [])

    def out_neighbors(self, i: int) -> tuple[int, ...]:
        return self.out_adj[i - 1]

    def in_neighbors(self, i: int) -> tuple[int, ...]:
        return self.in_adj[i - 1]

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        """All arcs sorted by source, then target."""
        return tuple((i, j) for i in self.nodes for j in self.out_adj[i - 1])

    @property
    def arc_count(self) -> int:
        return sum(len(targets) for targets in self.out_adj)

    @cached_property
    def nx_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(self.arcs)
        return graph


class CondensationInfo(BaseModel):
    """Strongly connected components and the giant-component closures of a digraph."""
    model_config = ConfigDict(frozen=True)

    scc_id: tuple[int, ...]
    scc_members: tuple[frozenset[int], ...]
    is_cyclic_scc: tuple[bool, ...]
    gc: frozenset[int]
    ug: frozenset[int]
    dg: frozenset[int]
    cycu: frozenset[int]

    @model_validator(mode="after")
    def _check_partition(self) -> "CondensationInfo":
        if len(self.scc_members) != len(self.is_cyclic_scc):
            raise ValueError("One cyclic flag per component is required")
        for node, component in enumerate(self.scc_id, start=1):
            if node not in self.scc_members[component]:
                raise ValueError(f"Node {node} is not a member of its component {component}")
        if sum(len(members) for members in self.scc_members) != len(self.scc_id):
            raise ValueError("Components do not partition the node set")
        if not self.gc <= (self.ug & self.dg):
            raise ValueError("Giant component must lie inside its upstream and downstream closures")
        return self


class CycleCensus(BaseModel):
    """Number of distinct directed cycles per length."""
    model_config = ConfigDict(frozen=True)

    counts: dict[int, int]
    truncated: bool = False

    @model_validator(mode="after")
    def _check_lengths(self) -> "CycleCensus":
        if any(length < 2 for length in self.counts):
            raise ValueError("A loop-free digraph has no cycles shorter than 2")
        return self

    @property
    def total(self) -> int:
        return sum(self.counts.values())
