"""Property checkers. Each returns the list of violations it found; an empty list means the property held."""
import math
from typing import Sequence

import numpy as np

from src.dynamics.analysis import check_one_cycle_bounds, detect_hashing, stall_times, uninterrupted_intervals
from src.dynamics.network import State, restrict, restrict_state, simulate, validate_state
from src.graphs.digraph import condense, longest_path, upstream
from src.schemas.network_models import DynamicsSummary, Network


def check_min_period(net: Network, summary: DynamicsSummary) -> list[str]:
    """A non-steady attractor is at least p_* + 1 steps long."""
    if summary.capped or summary.alpha == 1:
        return []
    if summary.alpha < net.p_min + 1:
        return [f"alpha={summary.alpha} is shorter than p_min + 1 = {net.p_min + 1}"]
    return []


def check_upstream_determinism(
    net: Network, s_a: State, s_b: State, i: int, steps: int = 50
) -> list[str]:
    """Two states agreeing on UC(i) give node i the same trajectory."""
    nodes = sorted(upstream(net.graph, i))
    index = np.asarray(nodes) - 1
    a, b = validate_state(net, s_a), validate_state(net, s_b)
    if not np.array_equal(a[index], b[index]):
        raise ValueError(f"The two states differ on UC({i})")

    for t, (x, y) in enumerate(zip(simulate(net, a, steps), simulate(net, b, steps))):
        if x[i - 1] != y[i - 1]:
            return [f"node {i} diverges at t={t} although both states agree on UC({i})"]
    return []


def check_acyclic_upstream_bound(net: Network, s0: State, i: int) -> list[str]:
    """With UC(i) acyclic, the subsystem on UC(i) settles at the steady state within L_max(i) + p^* steps."""
    sub_net, ordered = restrict(net, upstream(net.graph, i))
    if condense(sub_net.graph).cycu:
        return []
    local = detect_hashing(sub_net, restrict_state(validate_state(net, s0), ordered), node_detail=False)
    bound = longest_path(sub_net.graph) + net.p_max
    violations = []
    if local.alpha != 1:
        violations.append(f"acyclic UC({i}) has alpha={local.alpha}")
    if local.tau > bound:
        violations.append(f"acyclic UC({i}) has tau={local.tau} > L_max(i) + p^* = {bound}")
    return violations


def in_sc(state: State, cycle: Sequence[int]) -> bool:
    """The state takes both values 0 and 1 somewhere on the cycle."""
    values = {int(state[j - 1]) for j in cycle}
    return 0 in values and 1 in values


def check_sc_invariance(net: Network, s: State, s_next: State, cycle: Sequence[int]) -> list[str]:
    """On a cycle of nodes with p = th = 1, a state that takes both values keeps doing so one step later."""
    if any(net.p[j - 1] != 1 or net.th[j - 1] != 1 for j in cycle):
        raise ValueError(f"Cycle {tuple(cycle)} has a node with p != 1 or th != 1")
    if in_sc(s, cycle) and not in_sc(s_next, cycle):
        return [f"cycle {tuple(cycle)} stopped taking both values 0 and 1"]
    return []


def check_stall_bound(net: Network, states: np.ndarray, j: int, i: int) -> list[str]:
    """Along j -> i with th_i = 1 and (p_j + 1) | (p_i + 1), node i stalls at most p_j times per
    uninterrupted firing interval [t0, t1) of j, counting stalls at t in [t0 + 1, t1 + 1)."""
    if j not in net.graph.in_neighbors(i):
        raise ValueError(f"{j} -> {i} is not an arc")
    p_i, p_j = net.p[i - 1], net.p[j - 1]
    if net.th[i - 1] != 1 or (p_i + 1) % (p_j + 1):
        raise ValueError(f"The stall bound does not apply to the arc {j} -> {i}")

    stalls = stall_times(states, i, p_i)
    violations = []
    for t0, t1 in uninterrupted_intervals(states, j, p_j):
        count = int(np.count_nonzero((stalls >= t0 + 1) & (stalls < t1 + 1)))
        if count > p_j:
            violations.append(f"node {i} stalls {count} > p_{j} = {p_j} times while {j} fires freely on [{t0}, {t1})")
    return violations


def check_period_identity(net: Network, summary: DynamicsSummary) -> list[str]:
    """Each node period divides alpha, and the periods over DG and CYCU have lcm alpha."""
    if summary.capped or summary.per_node_period is None:
        return []
    violations = [
        f"period {period} of node {i} does not divide alpha={summary.alpha}"
        for i, period in enumerate(summary.per_node_period, start=1)
        if summary.alpha % period
    ]
    info = condense(net.graph)
    relevant = info.dg | info.cycu
    combined = math.lcm(*(summary.per_node_period[i - 1] for i in relevant)) if relevant else 1
    if combined != summary.alpha:
        violations.append(f"lcm of node periods over DG and CYCU is {combined}, alpha is {summary.alpha}")
    return violations


def check_one_cycle(net: Network, summary: DynamicsSummary) -> list[str]:
    verdict = check_one_cycle_bounds(net, summary)
    violations = []
    if verdict.gcd_holds is False:
        violations.append(f"gcd(alpha={summary.alpha}, |C|={verdict.cycle_length}) = 1")
    if verdict.bound_holds is False:
        violations.append(f"tau={summary.tau} exceeds the supersimple bound {verdict.tau_bound}")
    return violations
