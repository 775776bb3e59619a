import logging
from typing import Optional

import numpy as np

from src.data_handler.file_handler import FileHandler
from src.dynamics.analysis import DEFAULT_COMPONENT_CAP, DEFAULT_STEP_CAP, detect_decomposed, detect_hashing
from src.dynamics.constructions import build_witness
from src.dynamics.network import State, random_state, simulate
from src.experiments.graph_laws import estimate_graph_laws
from src.experiments.sweep import records_to_stats, run_sweep
from src.graphs.digraph import gen_erdos_renyi
from src.schemas.experiment_models import CellStats, GraphLawsReport, SuiteReport, SweepRecord
from src.schemas.graph_models import Digraph
from src.schemas.network_models import DynamicsSummary, Network, WitnessSpec
from src.verification.suites import run_suite

logger = logging.getLogger(__name__)


class NetworkToolkit:
    """Ties generation, construction, detection, sweeps and verification to files on disk."""

    def __init__(self, file_handler: Optional[FileHandler] = None):
        self.file_handler = file_handler or FileHandler()

    def generate(self, n: int, c: float, seed: int, out_path: str) -> Digraph:
        """Sample a digraph with arc probability c / n and write its arc list."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if not 0 <= c <= n:
            raise ValueError(f"c must lie in [0, n], got {c}")
        graph = gen_erdos_renyi(n, c / n, np.random.default_rng(seed))
        self.file_handler.write_digraph(graph, out_path)
        logger.info("Digraph with %d nodes and %d arcs written to %s", n, graph.arc_count, out_path)
        return graph

    def construct(self, spec: WitnessSpec, net_path: str, state_path: str) -> tuple[Network, State]:
        net, s0 = build_witness(spec)
        self.file_handler.write_network(net, net_path)
        self.file_handler.write_state(s0, state_path)
        return net, s0

    def load_instance(
        self, net_path: str, state_path: Optional[str] = None, seed: Optional[int] = None
    ) -> tuple[Network, State]:
        """Network plus either the state file or a uniform random state drawn from seed."""
        net = self.file_handler.read_network(net_path)
        if state_path is not None:
            return net, self.file_handler.read_state(state_path, net)
        if seed is None:
            raise ValueError("Need a state file or a seed for a random state")
        return net, random_state(net, np.random.default_rng(seed))

    def simulate(self, net: Network, s0: State, steps: int) -> list[State]:
        return simulate(net, s0, steps)

    def detect(
        self,
        net: Network,
        s0: State,
        cap: Optional[int] = None,
        decomposed: bool = False,
    ) -> DynamicsSummary:
        if decomposed:
            summary = detect_decomposed(net, s0, cap or DEFAULT_COMPONENT_CAP)
        else:
            summary = detect_hashing(net, s0, cap or DEFAULT_STEP_CAP)
        if summary.capped:
            logger.warning("Step cap reached before the attractor was found")
        return summary

    def sweep(
        self,
        config_path: str,
        records_path: str,
        stats_path: str,
        jobs: int = 1,
        progress: bool = False,
    ) -> list[CellStats]:
        cfg = self.file_handler.read_config(config_path)
        records = run_sweep(cfg, jobs=jobs, progress=progress)
        self.file_handler.write_records(records, records_path)
        stats = records_to_stats(records)
        self.file_handler.write_stats(stats, stats_path)
        return stats

    def stats(self, records_path: str, stats_path: str) -> list[CellStats]:
        records: list[SweepRecord] = self.file_handler.read_records(records_path)
        stats = records_to_stats(records)
        self.file_handler.write_stats(stats, stats_path)
        return stats

    def laws(self, n: int, c: float, reps: int, seed: int, progress: bool = False) -> GraphLawsReport:
        return estimate_graph_laws(n, c, reps, np.random.default_rng(seed), progress=progress)

    def verify(self, suite: str, seed: Optional[int] = None, progress: bool = False, **kwargs) -> SuiteReport:
        if seed is not None:
            kwargs["seed"] = seed
        return run_suite(suite, progress=progress, **kwargs)
