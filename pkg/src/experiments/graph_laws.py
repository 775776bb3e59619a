"""Monte Carlo checks of the random-digraph laws the dynamics results lean on.

The giant strongly connected component should cover about rho(c)^2 n nodes and its downstream
component about rho(c) n, where rho(c) solves exp(-c rho) = 1 - rho. The expected number of
directed l-cycles tends to c^l / l.
"""
import logging
import math
from typing import Sequence

import numpy as np
from scipy.optimize import bisect
from tqdm import tqdm

from src.graphs.digraph import condense, cycle_census, gen_erdos_renyi, induced_subgraph, is_supersimple, upstream
from src.schemas.experiment_models import GraphLawsReport

logger = logging.getLogger(__name__)

MIN_LAW_REPS = 30
DEFAULT_CYCLE_LENGTHS = (2, 3, 4)
# nodes per digraph whose upstream component is tested for supersimplicity
DEFAULT_UPSTREAM_SAMPLES = 5


def rho_of_c(c: float, tol: float = 1e-12) -> float:
    """Unique root in (0, 1) of 1 - x - exp(-c x), for c > 1."""
    if c <= 1:
        raise ValueError(f"rho(c) has a root in (0, 1) only for c > 1, got c={c}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    def f(x: float) -> float:
        return 1.0 - x - math.exp(-c * x)

    # f > 0 just above 0 and f(1) < 0; shrink the lower end until it is on the positive side
    lower = 0.5
    while f(lower) <= 0:
        lower /= 2
        if lower < 1e-300:
            raise ValueError(f"Could not bracket rho(c) for c={c}")
    return bisect(f, lower, 1.0, xtol=tol)


def expected_cycles(c: float, length: int) -> float:
    return c**length / length


def _mean_and_se(values: Sequence[float]) -> tuple[float, float]:
    data = np.asarray(values, dtype=float)
    if data.size < 2:
        return float(data.mean()), 0.0
    return float(data.mean()), float(data.std(ddof=1) / math.sqrt(data.size))


def estimate_graph_laws(
    n: int,
    c: float,
    reps: int,
    rng: np.random.Generator,
    cycle_lengths: Sequence[int] = DEFAULT_CYCLE_LENGTHS,
    upstream_samples: int = DEFAULT_UPSTREAM_SAMPLES,
    progress: bool = False,
) -> GraphLawsReport:
    if reps < MIN_LAW_REPS:
        raise ValueError(f"Graph laws need at least {MIN_LAW_REPS} repetitions, got {reps}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 0 <= c <= n:
        raise ValueError(f"c must lie in [0, n], got {c}")
    cycle_lengths = tuple(sorted(cycle_lengths))

    arcs, gc_fractions, dg_fractions, supersimple_fractions = [], [], [], []
    cycles = {length: [] for length in cycle_lengths}
    for _ in tqdm(range(reps), desc=f"Graph laws n={n} c={c}", disable=not progress):
        graph = gen_erdos_renyi(n, c / n, rng)
        info = condense(graph)
        arcs.append(graph.arc_count)
        gc_fractions.append(len(info.gc) / n)
        dg_fractions.append(len(info.dg) / n)

        census = cycle_census(graph, max_len=max(cycle_lengths))
        for length in cycle_lengths:
            cycles[length].append(census.counts.get(length, 0))

        sampled = rng.choice(n, size=min(upstream_samples, n), replace=False) + 1
        verdicts = [is_supersimple(induced_subgraph(graph, upstream(graph, int(i)))[0]) for i in sampled]
        supersimple_fractions.append(sum(v is True for v in verdicts) / len(verdicts))

    mean_arcs, se_arcs = _mean_and_se(arcs)
    mean_gc, se_gc = _mean_and_se(gc_fractions)
    mean_dg, se_dg = _mean_and_se(dg_fractions)
    mean_ss, se_ss = _mean_and_se(supersimple_fractions)
    cycle_stats = {length: _mean_and_se(counts) for length, counts in cycles.items()}

    report = GraphLawsReport(
        n=n,
        c=c,
        reps=reps,
        rho=rho_of_c(c) if c > 1 else None,
        mean_arcs=mean_arcs,
        se_arcs=se_arcs,
        mean_gc_fraction=mean_gc,
        se_gc_fraction=se_gc,
        mean_dg_fraction=mean_dg,
        se_dg_fraction=se_dg,
        mean_cycles={length: stats[0] for length, stats in cycle_stats.items()},
        se_cycles={length: stats[1] for length, stats in cycle_stats.items()},
        expected_cycles={length: expected_cycles(c, length) for length in cycle_lengths},
        supersimple_upstream_fraction=mean_ss,
        se_supersimple_upstream_fraction=se_ss,
    )
    logger.info("Graph laws n=%d c=%s: |DG|/n=%.4f rho=%s", n, c, mean_dg, report.rho)
    return report
