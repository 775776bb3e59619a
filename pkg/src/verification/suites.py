"""Seeded invariant suites behind `verify --suite NAME`."""
import logging
import math
from itertools import combinations
from typing import Callable

import numpy as np
from tqdm import tqdm

from src.dynamics.analysis import classify_min_cycling, detect_brent, detect_decomposed, detect_hashing
from src.dynamics.constructions import (
    build_landau,
    build_nsc,
    build_nsc1,
    build_nscp,
    build_tree_witness,
    landau_reference,
    tree_labeling,
    verify_tree_witness,
)
from src.dynamics.network import State, disjoint_union, random_network, random_state, simulate
from src.experiments.graph_laws import estimate_graph_laws, expected_cycles, rho_of_c
from src.graphs.digraph import cycle_census, gen_erdos_renyi, iter_cycles, upstream
from src.schemas.experiment_models import SuiteReport
from src.schemas.network_models import Network
from src.verification.invariants import (
    check_acyclic_upstream_bound,
    check_min_period,
    check_one_cycle,
    check_period_identity,
    check_sc_invariance,
    check_stall_bound,
    check_upstream_determinism,
)

logger = logging.getLogger(__name__)

DEFAULT_SUITE_SEED = 20240601
DEFAULT_PROPS_CASES = 2000


def random_instance(rng: np.random.Generator, max_n: int = 12) -> tuple[Network, State]:
    """n <= max_n, c in [0.5, 2], p^* <= 2, th^* <= 2."""
    n = int(rng.integers(2, max_n, endpoint=True))
    c = float(rng.uniform(0.5, 2.0))
    graph = gen_erdos_renyi(n, min(1.0, c / n), rng)
    p_hi = int(rng.integers(1, 2, endpoint=True))
    th_hi = int(rng.integers(1, 2, endpoint=True))
    net = random_network(graph, 1, p_hi, 1, th_hi, rng)
    return net, random_state(net, rng)


def _embed(net: Network, s0: State, rng: np.random.Generator) -> tuple[Network, State]:
    """Place (net, s0) next to an unrelated random instance."""
    partner, partner_state = random_instance(rng, max_n=8)
    return disjoint_union([(net, s0), (partner, partner_state)])


def props_case(net: Network, s0: State, rng: np.random.Generator) -> list[str]:
    """Every dynamics property that applies to one instance."""
    hashed = detect_hashing(net, s0)
    violations = []
    for name, other in (
        ("decomposed", detect_decomposed(net, s0)),
        ("all-components", detect_decomposed(net, s0, sinks_only=False)),
        ("brent", detect_brent(net, s0)),
    ):
        if (other.tau, other.alpha) != (hashed.tau, hashed.alpha):
            violations.append(
                f"{name} gives (tau, alpha)=({other.tau}, {other.alpha}), hashing ({hashed.tau}, {hashed.alpha})"
            )

    violations += check_min_period(net, hashed)
    violations += check_period_identity(net, hashed)

    i = int(rng.integers(1, net.n, endpoint=True))
    shared = np.asarray(sorted(upstream(net.graph, i)), dtype=np.int64) - 1
    other_state = random_state(net, rng)
    other_state[shared] = s0[shared]
    violations += check_upstream_determinism(net, s0, other_state, i)
    violations += check_acyclic_upstream_bound(net, s0, i)

    states = np.stack(simulate(net, s0, hashed.tau + hashed.alpha))
    for cycle in iter_cycles(net.graph):
        if all(net.p[j - 1] == 1 and net.th[j - 1] == 1 for j in cycle):
            for t in range(len(states) - 1):
                violations += check_sc_invariance(net, states[t], states[t + 1], cycle)

    for source, target in net.graph.arcs:
        if net.th[target - 1] == 1 and (net.p[target - 1] + 1) % (net.p[source - 1] + 1) == 0:
            violations += check_stall_bound(net, states, source, target)

    if cycle_census(net.graph, max_count=2).total == 1:
        violations += check_one_cycle(net, hashed)
    return violations


def run_props_suite(
    seed: int = DEFAULT_SUITE_SEED, cases: int = DEFAULT_PROPS_CASES, progress: bool = False
) -> SuiteReport:
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="props")
    for case in tqdm(range(cases), desc="props", disable=not progress):
        net, s0 = random_instance(rng)
        report.violations += [f"case {case}: {v}" for v in props_case(net, s0, rng)]
        report.cases += 1
    return report


def run_nsc_suite(seed: int = DEFAULT_SUITE_SEED, progress: bool = False) -> SuiteReport:
    """Cycle witnesses force alpha > 1, a multiple of the length, or a multiple of p + 1, alone or embedded."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="nsc")

    def record(label: str, net: Network, s0: State, holds: Callable[[int], bool]) -> None:
        for where, (full, state) in (("alone", (net, s0)), ("embedded", _embed(net, s0, rng))):
            summary = detect_decomposed(full, state)
            report.cases += 1
            if summary.capped or not holds(summary.alpha):
                report.violations.append(f"{label} {where}: alpha={summary.alpha}")

    for length in tqdm(range(2, 9), desc="nsc", disable=not progress):
        record(f"nsc({length})", *build_nsc(length), lambda alpha: alpha > 1)
        for p in range(1, length):
            record(f"nsc1({length}, p={p})", *build_nsc1(length, p), lambda alpha, k=length: alpha % k == 0)

    for length in range(2, 13):
        for p in range(1, length):
            if length % (p + 1):
                continue
            net, s0 = build_nscp(length, p)
            record(f"nscp({length}, p={p})", net, s0, lambda alpha, q=p: alpha % (q + 1) == 0)
            onsets = classify_min_cycling(net, s0, detect_hashing(net, s0))
            report.cases += 1
            if any(onset != 0 for onset in onsets):
                report.violations.append(f"nscp({length}, p={p}): onsets {onsets}")
    return report


def run_landau_suite(seed: int = DEFAULT_SUITE_SEED, progress: bool = False) -> SuiteReport:
    """Every combination of the odd lengths 3, 5, 7 against the exact reference, alone and embedded."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="landau")
    length_sets = [ks for size in range(1, 4) for ks in combinations((3, 5, 7), size)]
    for ks in tqdm(length_sets, desc="landau", disable=not progress):
        net, s0 = build_landau(ks)
        summary = detect_hashing(net, s0)
        expected_tau, expected_alpha = landau_reference(ks)
        report.cases += 1
        if (summary.tau, summary.alpha) != (expected_tau, expected_alpha):
            report.violations.append(
                f"ks={ks}: (tau, alpha)=({summary.tau}, {summary.alpha}), expected ({expected_tau}, {expected_alpha})"
            )
        if summary.tau is not None and summary.tau > math.lcm(*ks) + 1:
            report.violations.append(f"ks={ks}: tau={summary.tau} exceeds lcm + 1")
        decomposed = detect_decomposed(net, s0)
        if (decomposed.tau, decomposed.alpha) != (summary.tau, summary.alpha):
            report.violations.append(f"ks={ks}: decomposed detection disagrees")

        embedded = detect_decomposed(*_embed(net, s0, rng))
        report.cases += 1
        if embedded.capped or embedded.tau < expected_tau or embedded.alpha % expected_alpha:
            report.violations.append(f"ks={ks}: embedded (tau, alpha)=({embedded.tau}, {embedded.alpha})")
    return report


def run_tree_suite(seed: int = DEFAULT_SUITE_SEED, progress: bool = False) -> SuiteReport:
    """Witnesses verify, and their transient lies in [d + 1, d + p] alone and stays >= d + 1 embedded."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="tree")
    for depth in tqdm(range(1, 5), desc="tree", disable=not progress):
        for branching in (2, 3):
            for p in (1, 2):
                label = f"tree(d={depth}, th={branching}, p={p})"
                net, s0 = build_tree_witness(depth, branching, p)
                report.cases += 1
                if not verify_tree_witness(net, s0, tree_labeling(depth, branching), depth, branching, p):
                    report.violations.append(f"{label}: builder output is not a witness")
                tau = detect_hashing(net, s0).tau
                if not depth + 1 <= tau <= depth + p:
                    report.violations.append(f"{label}: tau={tau} outside [{depth + 1}, {depth + p}]")
                embedded = detect_decomposed(*_embed(net, s0, rng))
                if embedded.capped or embedded.tau < depth + 1:
                    report.violations.append(f"{label}: embedded tau={embedded.tau} < {depth + 1}")
    return report


def run_laws_suite(seed: int = DEFAULT_SUITE_SEED, progress: bool = False) -> SuiteReport:
    """rho solves its equation; small Monte Carlo runs land near the predicted graph statistics."""
    rng = np.random.default_rng(seed)
    report = SuiteReport(name="laws")
    for c in (1.1, 1.5, 2.0, 3.0):
        rho = rho_of_c(c)
        report.cases += 1
        if abs(math.exp(-c * rho) - (1 - rho)) > 1e-9:
            report.violations.append(f"rho({c})={rho} does not solve exp(-c rho) = 1 - rho")

    dense = estimate_graph_laws(3200, 1.5, 50, rng, progress=progress)
    report.cases += 1
    if abs(dense.mean_dg_fraction - dense.rho) > 0.03:
        report.violations.append(f"|DG|/n={dense.mean_dg_fraction:.4f} is far from rho(1.5)={dense.rho:.4f}")

    sparse = estimate_graph_laws(1000, 0.8, 500, rng, progress=progress)
    report.cases += 1
    target, se = expected_cycles(0.8, 3), sparse.se_cycles[3]
    if abs(sparse.mean_cycles[3] - target) > 3 * se:
        report.violations.append(f"mean 3-cycle count {sparse.mean_cycles[3]:.4f} is far from {target:.4f}")
    return report


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "props": run_props_suite,
    "nsc": run_nsc_suite,
    "landau": run_landau_suite,
    "tree": run_tree_suite,
    "laws": run_laws_suite,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"Unknown suite '{name}'. Choose from {', '.join(SUITES)}")
    report = SUITES[name](**kwargs)
    logger.info("Suite %s: %d cases, %d violations", name, report.cases, len(report.violations))
    return report
