import math

import networkx as nx
import numpy as np
import pytest

from src.graphs import digraph
from src.graphs.digraph import (
    IntractableInstanceError,
    _exhaustive_longest_path,
    condense,
    cycle_census,
    downstream,
    gen_erdos_renyi,
    induced_subgraph,
    is_b_small,
    is_straight_path,
    is_supersimple,
    longest_path,
    longest_path_upstream,
    longest_straight_path,
    upstream,
)
from src.schemas.graph_models import Digraph

FEEDER_ARCS = [(1, 2), (2, 1), (1, 3)]


def _complete(n):
    return Digraph.from_arcs(n, [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j])


def test_gen_erdos_renyi_degenerate_probabilities():
    rng = np.random.default_rng(0)
    assert gen_erdos_renyi(5, 0.0, rng).arc_count == 0
    assert gen_erdos_renyi(5, 1.0, rng).arc_count == 20


def test_gen_erdos_renyi_is_seed_deterministic():
    first = gen_erdos_renyi(200, 0.01, np.random.default_rng(7))
    second = gen_erdos_renyi(200, 0.01, np.random.default_rng(7))
    assert first == second


def test_gen_erdos_renyi_sparse_arc_count_matches_binomial():
    n, pi = 1000, 0.9 / 1000
    graph = gen_erdos_renyi(n, pi, np.random.default_rng(2024))
    pairs = n * (n - 1)
    mean, sd = pairs * pi, math.sqrt(pairs * pi * (1 - pi))
    assert abs(graph.arc_count - mean) < 4 * sd


def _arc_counts(n, pi, draws, seed):
    rng = np.random.default_rng(seed)
    return np.array([gen_erdos_renyi(n, pi, rng).arc_count for _ in range(draws)])


def test_gen_erdos_renyi_mean_arc_count():
    counts = _arc_counts(100, 0.01, 10_000, 11)
    se = math.sqrt(100 * 99 * 0.01 * 0.99 / 10_000)
    assert abs(counts.mean() - 99.0) < 3 * se


@pytest.mark.parametrize("limit", [1.0, -1.0], ids=["geometric-skip", "dense-mask"])
def test_gen_erdos_renyi_branches_sample_the_same_law(monkeypatch, limit):
    monkeypatch.setattr(digraph, "SPARSE_PI_LIMIT", limit)
    rng = np.random.default_rng(12)
    graphs = [gen_erdos_renyi(100, 0.01, rng) for _ in range(10_000)]
    counts = np.array([graph.arc_count for graph in graphs])
    variance = 100 * 99 * 0.01 * 0.99
    assert abs(counts.mean() - 99.0) < 3 * math.sqrt(variance / 10_000)
    assert counts.var(ddof=1) == pytest.approx(variance, rel=0.1)

    arcs = np.array([arc for graph in graphs for arc in graph.arcs])
    assert np.all(arcs[:, 0] != arcs[:, 1])
    assert np.mean(arcs[:, 0] <= 50) == pytest.approx(0.5, abs=0.01)
    assert np.mean(arcs[:, 1] <= 50) == pytest.approx(0.5, abs=0.01)


def test_gen_erdos_renyi_dense_branch_has_no_loops():
    graph = gen_erdos_renyi(30, 0.5, np.random.default_rng(3))
    assert all(u != v for u, v in graph.arcs)
    assert 0 < graph.arc_count < 30 * 29


def test_gen_erdos_renyi_rejects_bad_arguments():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        gen_erdos_renyi(0, 0.5, rng)
    with pytest.raises(ValueError):
        gen_erdos_renyi(5, 1.5, rng)


def test_digraph_rejects_self_loops_and_duplicates():
    with pytest.raises(ValueError):
        Digraph.from_arcs(3, [(1, 1)])
    with pytest.raises(ValueError):
        Digraph(n=2, out_adj=((2, 2), ()), in_adj=((), (1, 1)))
    with pytest.raises(ValueError):
        Digraph(n=2, out_adj=((2,), ()), in_adj=((), ()))


def test_upstream_and_downstream_are_reflexive():
    graph = Digraph.from_arcs(3, FEEDER_ARCS)
    assert upstream(graph, 3) == {1, 2, 3}
    assert upstream(graph, 1) == {1, 2}
    assert downstream(graph, 3) == {3}
    assert downstream(graph, 2) == {1, 2, 3}
    with pytest.raises(ValueError):
        upstream(graph, 4)


def test_condense_feeder_graph():
    info = condense(Digraph.from_arcs(3, FEEDER_ARCS))
    assert info.scc_members == (frozenset({1, 2}), frozenset({3}))
    assert info.is_cyclic_scc == (True, False)
    assert info.gc == {1, 2}
    assert info.ug == {1, 2}
    assert info.dg == {1, 2, 3}
    assert info.cycu == {1, 2, 3}


def test_condense_acyclic_graph_has_empty_giant():
    info = condense(Digraph.from_arcs(4, [(1, 2), (2, 3), (3, 4)]))
    assert info.gc == frozenset()
    assert info.cycu == frozenset()
    assert len(info.scc_members) == 4


def test_condense_giant_tie_goes_to_smallest_node():
    info = condense(Digraph.from_arcs(4, [(3, 4), (4, 3), (1, 2), (2, 1)]))
    assert info.gc == {1, 2}


def test_cycu_matches_upstream_cycles_on_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(20):
        graph = gen_erdos_renyi(15, 1.2 / 15, rng)
        info = condense(graph)
        for i in graph.nodes:
            sub, _ = induced_subgraph(graph, upstream(graph, i))
            assert (i in info.cycu) == (not nx.is_directed_acyclic_graph(sub.nx_graph))


def test_cycle_census_counts_complete_digraph():
    census = cycle_census(_complete(3))
    assert census.counts == {2: 3, 3: 2}
    assert not census.truncated


def test_cycle_census_truncates_at_cap():
    census = cycle_census(_complete(4), max_count=2)
    assert census.truncated
    assert census.total == 2


def test_is_supersimple():
    assert is_supersimple(Digraph.from_arcs(3, FEEDER_ARCS)) is True
    assert is_supersimple(Digraph.from_arcs(3, [(1, 2), (2, 1), (3, 1), (3, 2)])) is False
    assert is_supersimple(Digraph.from_arcs(3, [(1, 2), (2, 1), (1, 3), (2, 3)])) is False
    assert is_supersimple(_complete(3)) is False
    assert is_supersimple(Digraph.from_arcs(3, [(1, 2), (2, 3)])) is True


def test_longest_path():
    assert longest_path(Digraph.from_arcs(4, [(1, 2), (2, 3), (3, 4)])) == 3
    assert longest_path(Digraph.from_arcs(3, FEEDER_ARCS)) == 2
    assert longest_path(Digraph.from_arcs(4, [(1, 2), (2, 3), (3, 1), (3, 4)])) == 3
    assert longest_path(_complete(4)) == 3
    assert longest_path(Digraph.empty(3)) == 0


def _small_random_graphs(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(2, 11))
        yield gen_erdos_renyi(n, float(rng.uniform(0.5, 2.0)) / n, rng)


def test_longest_path_matches_exhaustive_search_with_at_most_one_cycle():
    checked = {0: 0, 1: 0}
    for graph in _small_random_graphs(3000, 21):
        cycles = cycle_census(graph, max_count=2).total
        if cycles > 1:
            continue
        checked[cycles] += 1
        assert longest_path(graph) == _exhaustive_longest_path(graph.nx_graph), graph.arcs
    assert checked[0] > 100 and checked[1] > 100


def test_supersimple_graphs_have_at_most_one_cycle():
    supersimple = 0
    for graph in _small_random_graphs(3000, 22):
        if is_supersimple(graph):
            supersimple += 1
            assert cycle_census(graph).total <= 1, graph.arcs
    assert supersimple > 100


def test_longest_path_guards_large_multicyclic_graphs():
    arcs = [(1, 2), (2, 1), (3, 4), (4, 3)] + [(i, i + 1) for i in range(4, 13)]
    with pytest.raises(IntractableInstanceError):
        longest_path(Digraph.from_arcs(13, arcs))


def test_longest_path_upstream():
    graph = Digraph.from_arcs(3, FEEDER_ARCS)
    assert longest_path_upstream(graph, 3) == 2
    assert longest_path_upstream(graph, 1) == 1


def test_straight_paths():
    line = Digraph.from_arcs(3, [(1, 2), (2, 3)])
    assert is_straight_path(line, (1, 2, 3))
    shortcut = Digraph.from_arcs(3, [(1, 2), (2, 3), (1, 3)])
    assert not is_straight_path(shortcut, (1, 2, 3))
    assert is_straight_path(shortcut, (2, 3))
    with pytest.raises(ValueError):
        is_straight_path(line, (1, 3))


def test_longest_straight_path():
    assert longest_straight_path(Digraph.from_arcs(4, [(1, 2), (2, 3), (3, 4)])) == 3
    # 1 and 2 reach each other, so no straight path joins them
    assert longest_straight_path(Digraph.from_arcs(3, FEEDER_ARCS)) == 1


def test_induced_subgraph_relabels_in_ascending_order():
    graph = Digraph.from_arcs(5, [(5, 3), (3, 1), (2, 4)])
    sub, ordered = induced_subgraph(graph, {5, 3, 1})
    assert ordered == (1, 3, 5)
    assert sub.arcs == ((2, 1), (3, 2))


def test_is_b_small():
    assert is_b_small({1, 2}, 1.0, 100)
    assert not is_b_small({1, 2, 3, 4, 5}, 1.0, 100)
    with pytest.raises(ValueError):
        is_b_small({1}, 0.0, 100)
