"""Transient and attractor measurement.

Two independent detectors are kept side by side: detect_hashing walks the full trajectory and
remembers every state, detect_decomposed measures the upstream component of each sink of the
condensation on its own and combines the parts with tau = max and alpha = lcm.
"""
import logging
import math
from typing import Optional

import networkx as nx
import numpy as np
from sympy import divisors

from src.dynamics.network import State, _step, restrict, restrict_state, simulate, state_key, validate_state
from src.graphs.digraph import condense, cycle_census, is_supersimple, longest_path, upstream
from src.schemas.network_models import DynamicsSummary, Network, OneCycleVerdict

logger = logging.getLogger(__name__)

DEFAULT_STEP_CAP = 10_000_000
DEFAULT_COMPONENT_CAP = 1_000_000
DEFAULT_TABLE_BUDGET = 512 * 2**20
# per-node periods and onsets need the whole transient plus one period in memory
DEFAULT_DETAIL_BUDGET = 64 * 2**20
# rough cost of one dict entry beyond the key bytes
_ENTRY_OVERHEAD = 100


def detect_hashing(
    net: Network,
    s0: State,
    step_cap: int = DEFAULT_STEP_CAP,
    table_budget: int = DEFAULT_TABLE_BUDGET,
    node_detail: bool = True,
) -> DynamicsSummary:
    """Record the first visit of every state; the first revisit fixes tau and alpha exactly."""
    state = validate_state(net, s0)
    entry_bytes = state.nbytes + _ENTRY_OVERHEAD
    first_seen: dict[bytes, int] = {}

    t = 0
    while True:
        key = state_key(state)
        seen = first_seen.get(key)
        if seen is not None:
            tau, alpha = seen, t - seen
            break
        if t == step_cap:
            logger.debug("no repeated state within %d steps", step_cap)
            return DynamicsSummary(capped=True)
        first_seen[key] = t
        if len(first_seen) * entry_bytes > table_budget:
            logger.info("state table passed %d bytes at t=%d, switching to Brent", table_budget, t)
            return detect_brent(net, s0, step_cap, node_detail=node_detail)
        state = _step(net, state)
        t += 1

    if not node_detail or (tau + alpha) * state.nbytes > DEFAULT_DETAIL_BUDGET:
        return DynamicsSummary(tau=tau, alpha=alpha)
    # dict order is visiting order, so the keys are the trajectory s(0..tau+alpha-1)
    states = np.frombuffer(b"".join(first_seen), dtype=net.state_dtype).reshape(tau + alpha, net.n)
    return _summary_with_detail(net, np.vstack([states, states[tau]]), tau, alpha)


def detect_brent(
    net: Network, s0: State, step_cap: int = DEFAULT_STEP_CAP, node_detail: bool = False
) -> DynamicsSummary:
    """Constant-memory cycle finding with power-of-two snapshots; exact tau and alpha."""
    start = validate_state(net, s0)

    power = alpha = 1
    tortoise = start
    hare = _step(net, start)
    hare_time = 1
    while not np.array_equal(tortoise, hare):
        if hare_time > step_cap:
            return DynamicsSummary(capped=True)
        if power == alpha:
            tortoise = hare
            power *= 2
            alpha = 0
        hare = _step(net, hare)
        hare_time += 1
        alpha += 1

    tortoise = hare = start
    for _ in range(alpha):
        hare = _step(net, hare)
    tau = 0
    while not np.array_equal(tortoise, hare):
        tortoise = _step(net, tortoise)
        hare = _step(net, hare)
        tau += 1

    if not node_detail or (tau + alpha) * start.nbytes > DEFAULT_DETAIL_BUDGET:
        return DynamicsSummary(tau=tau, alpha=alpha)
    states = np.stack(simulate(net, start, tau + alpha))
    return _summary_with_detail(net, states, tau, alpha)


def _summary_with_detail(net: Network, states: np.ndarray, tau: int, alpha: int) -> DynamicsSummary:
    """states holds s(0..tau+alpha)."""
    return DynamicsSummary(
        tau=tau,
        alpha=alpha,
        per_node_period=node_periods(states[tau:tau + alpha], alpha),
        min_cycling_onset=min_cycling_onsets(net, states, tau),
    )


def node_periods(attractor: np.ndarray, alpha: int) -> list[int]:
    """Smallest T with s_i(t) = s_i(t + T) on the attractor, per node; rows are s(tau..tau+alpha-1)."""
    periods = np.full(attractor.shape[1], alpha, dtype=np.int64)
    unresolved = np.ones(attractor.shape[1], dtype=bool)
    for d in divisors(alpha):
        if d == alpha or not unresolved.any():
            break
        repeats = np.all(attractor == np.roll(attractor, -d, axis=0), axis=0)
        periods[repeats & unresolved] = d
        unresolved &= ~repeats
    return periods.tolist()


def stall_times(states: np.ndarray, node: int, p_node: int) -> np.ndarray:
    """Times t with s_i(t) = s_i(t+1) = p_i inside the recorded trajectory."""
    column = states[:, node - 1]
    return np.flatnonzero((column[:-1] == p_node) & (column[1:] == p_node))


def uninterrupted_intervals(states: np.ndarray, node: int, p_node: int) -> list[tuple[int, int]]:
    """Maximal [t0, t1) inside the recorded trajectory free of stall times of `node`."""
    end = len(states) - 1
    intervals = []
    start = 0
    for stall in stall_times(states, node, p_node).tolist():
        if stall > start:
            intervals.append((start, stall))
        start = stall + 1
    if start < end:
        intervals.append((start, end))
    return intervals


def min_cycling_onsets(net: Network, states: np.ndarray, tau: int) -> list[Optional[int]]:
    """Time each node becomes minimally cycling, or None if it stalls inside the attractor.

    states must hold s(0..tau+alpha); stalls repeat with period alpha after tau, so one period
    decides the whole future.
    """
    at_rest = states == net.p_array
    stalls = at_rest[:-1] & at_rest[1:]
    onsets: list[Optional[int]] = []
    for i in range(net.n):
        times = np.flatnonzero(stalls[:, i])
        if times.size == 0:
            onsets.append(0)
        elif times[-1] >= tau:
            onsets.append(None)
        else:
            onsets.append(int(times[-1]) + 1)
    return onsets


def classify_min_cycling(net: Network, s0: State, summary: DynamicsSummary) -> list[Optional[int]]:
    """Re-simulate s(0..tau+alpha) and report when each node becomes minimally cycling."""
    if summary.capped:
        raise ValueError("Minimally cycling onsets need an uncapped summary")
    states = np.stack(simulate(net, s0, summary.tau + summary.alpha))
    return min_cycling_onsets(net, states, summary.tau)


def detect_decomposed(
    net: Network,
    s0: State,
    per_component_cap: int = DEFAULT_COMPONENT_CAP,
    sinks_only: bool = True,
) -> DynamicsSummary:
    """Measure each upstream subsystem on its own and combine with tau = max, alpha = lcm.

    With sinks_only the subsystems are the upstream components of the condensation sinks; every
    other upstream component is contained in one of them, and its period divides theirs. Without
    it, one subsystem per strongly connected component is measured, as in the plain decomposition.
    """
    state = validate_state(net, s0)
    info = condense(net.graph)
    dag = nx.condensation(net.graph.nx_graph, scc=info.scc_members)
    components = [k for k in dag if not sinks_only or dag.out_degree(k) == 0]

    periods = [None] * net.n
    onsets = [None] * net.n
    detailed = True
    tau, alpha = 0, 1
    measured = set()
    for k in components:
        nodes = upstream(net.graph, min(info.scc_members[k]))
        if nodes in measured:
            continue
        measured.add(nodes)

        sub_net, ordered = restrict(net, nodes)
        part = detect_hashing(sub_net, restrict_state(state, ordered), per_component_cap)
        if part.capped:
            logger.debug("component of size %d hit the cap %d", len(nodes), per_component_cap)
            return DynamicsSummary(capped=True)
        tau = max(tau, part.tau)
        alpha = math.lcm(alpha, part.alpha)
        if part.per_node_period is None:
            detailed = False
            continue
        for position, node in enumerate(ordered):
            periods[node - 1] = part.per_node_period[position]
            onsets[node - 1] = part.min_cycling_onset[position]

    if not detailed:
        return DynamicsSummary(tau=tau, alpha=alpha)
    return DynamicsSummary(tau=tau, alpha=alpha, per_node_period=periods, min_cycling_onset=onsets)


def check_one_cycle_bounds(net: Network, result: DynamicsSummary) -> OneCycleVerdict:
    """gcd(alpha, |C|) > 1 when alpha > 1, and the transient bound when the digraph is supersimple."""
    census = cycle_census(net.graph, max_count=2)
    if census.total != 1:
        raise ValueError("The one-cycle bounds need a digraph with exactly one directed cycle")
    if result.capped:
        raise ValueError("The one-cycle bounds need an uncapped summary")
    (length,) = census.counts

    gcd_holds = math.gcd(result.alpha, length) > 1 if result.alpha > 1 else None
    supersimple = is_supersimple(net.graph)
    tau_bound = bound_holds = None
    if supersimple:
        p_max = net.p_max
        tau_bound = 2 * longest_path(net.graph) + ((p_max + 1) ** p_max + 1) * length + 4 * p_max - 3
        bound_holds = result.tau <= tau_bound
    return OneCycleVerdict(
        cycle_length=length,
        gcd_holds=gcd_holds,
        supersimple=supersimple,
        tau_bound=tau_bound,
        bound_holds=bound_holds,
    )
