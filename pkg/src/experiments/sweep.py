import logging
import multiprocessing
import statistics
from functools import partial
from itertools import groupby
from typing import Iterable, Optional, Sequence

import numpy as np
from tqdm import tqdm

from src.dynamics.analysis import detect_hashing
from src.dynamics.network import State, random_network, random_state
from src.graphs.digraph import gen_erdos_renyi
from src.schemas.experiment_models import CellStats, SweepConfig, SweepRecord
from src.schemas.network_models import Network

logger = logging.getLogger(__name__)


def derive_seed(base_seed: int, n: int, c_index: int, rep: int) -> int:
    """64-bit seed mixed from the run coordinates; any single repetition can be replayed alone."""
    sequence = np.random.SeedSequence([base_seed, n, c_index, rep])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def draw_instance(cfg: SweepConfig, n: int, c: float, seed: int) -> tuple[Network, State]:
    """Fresh digraph, fresh parameters and a fresh initial state, all drawn from one seed."""
    rng = np.random.default_rng(seed)
    graph = gen_erdos_renyi(n, c / n, rng)
    net = random_network(graph, cfg.p_lo, cfg.p_hi, cfg.th_lo, cfg.th_hi, rng)
    return net, random_state(net, rng)


def run_repetition(cfg: SweepConfig, task: tuple[int, int, float, int]) -> SweepRecord:
    n, c_index, c, rep = task
    seed = derive_seed(cfg.base_seed, n, c_index, rep)
    net, s0 = draw_instance(cfg, n, c, seed)
    summary = detect_hashing(net, s0, cfg.step_cap, node_detail=False)

    return SweepRecord(
        n=n,
        c=c,
        rep=rep,
        seed=seed,
        alpha=None if summary.alpha is None else str(summary.alpha),
        tau=summary.tau,
        capped_alpha=summary.alpha is None,
        capped_tau=summary.tau is None,
    )


def run_sweep(cfg: SweepConfig, jobs: int = 1, progress: bool = False) -> list[SweepRecord]:
    """Every repetition of every cell, sorted by (n, c, rep) whatever the scheduling."""
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    tasks = [(n, c_index, c, rep) for n, c_index, c in cfg.cells() for rep in range(cfg.reps)]
    logger.info("Sweep over %d cells, %d repetitions in total, %d job(s)", len(cfg.cells()), len(tasks), jobs)

    worker = partial(run_repetition, cfg)
    if jobs == 1:
        records = [worker(task) for task in tqdm(tasks, desc="Sweep", disable=not progress)]
    else:
        with multiprocessing.Pool(processes=jobs) as pool:
            results = pool.imap(worker, tasks, chunksize=max(1, len(tasks) // (jobs * 16)))
            records = list(tqdm(results, total=len(tasks), desc="Sweep", disable=not progress))

    capped = sum(r.capped_alpha or r.capped_tau for r in records)
    if capped:
        logger.warning("%d of %d repetitions hit the step cap %d", capped, len(records), cfg.step_cap)
    return sorted(records, key=lambda r: (r.n, r.c, r.rep_index))


def _mean_of_two(a: int, b: int) -> str:
    """(a + b) / 2 as an exact decimal string."""
    total = a + b
    return str(total // 2) if total % 2 == 0 else f"{total // 2}.5"


def _order_statistics(values: Sequence[int]) -> tuple[Optional[int], Optional[str], Optional[int]]:
    """(lower median, mean of the 2nd and 3rd largest, max); p999 needs three values."""
    if not values:
        return None, None, None
    ranked = sorted(values, reverse=True)
    p999 = _mean_of_two(ranked[1], ranked[2]) if len(ranked) >= 3 else None
    return statistics.median_low(values), p999, ranked[0]


def cell_stats(records: Sequence[SweepRecord]) -> CellStats:
    """Order statistics of one (n, c) cell; capped runs only count towards capped_fraction."""
    if not records:
        raise ValueError("Cannot summarize an empty cell")
    cells = {(r.n, r.c) for r in records}
    if len(cells) != 1:
        raise ValueError(f"Records span several cells: {sorted(cells)}")
    n, c = cells.pop()

    alphas = [int(r.alpha) for r in records if not r.capped_alpha]
    taus = [r.tau for r in records if not r.capped_tau]
    if min(len(alphas), len(taus)) < 3:
        logger.warning("Cell n=%d c=%s has fewer than 3 uncapped runs; p999 left empty", n, c)

    median_alpha, p999_alpha, max_alpha = _order_statistics(alphas)
    median_tau, p999_tau, max_tau = _order_statistics(taus)
    capped = sum(r.capped_alpha or r.capped_tau for r in records)
    return CellStats(
        n=n,
        c=c,
        reps=len(records),
        median_alpha=None if median_alpha is None else str(median_alpha),
        p999_alpha=p999_alpha,
        max_alpha=None if max_alpha is None else str(max_alpha),
        median_tau=median_tau,
        p999_tau=p999_tau,
        max_tau=max_tau,
        capped_fraction=capped / len(records),
    )


def records_to_stats(records: Iterable[SweepRecord]) -> list[CellStats]:
    ordered = sorted(records, key=lambda r: (r.n, r.c, r.rep_index))
    return [cell_stats(list(group)) for _, group in groupby(ordered, key=lambda r: (r.n, r.c))]
