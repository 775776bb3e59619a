from typing import Iterable, Sequence

import numpy as np

from src.graphs.digraph import induced_subgraph
from src.schemas.graph_models import Digraph
from src.schemas.network_models import Network

# A state is a flat integer vector, position i - 1 holding s_i, stored in net.state_dtype.
State = np.ndarray


def validate_state(net: Network, s) -> State:
    """Return s as a canonical state vector of net, or raise ValueError."""
    state = np.asarray(s)
    if state.shape != (net.n,):
        raise ValueError(f"State needs {net.n} entries, got shape {state.shape}")
    if state.size and (state.min() < 0 or np.any(state > net.p_array)):
        raise ValueError("State entries must satisfy 0 <= s_i <= p_i")
    return state.astype(net.state_dtype)


def steady_state(net: Network) -> State:
    """Every node at rest; a fixed point of the update."""
    return net.p_array.copy()


def state_key(state: State) -> bytes:
    """Canonical byte encoding used for hashing."""
    return state.tobytes()


def step(net: Network, s: State) -> State:
    """One synchronous update under rules (R), (F) and (E)."""
    s = validate_state(net, s)
    return _step(net, s)


def _step(net: Network, s: State) -> State:
    # the firing set is read from s before any node changes, which makes the update simultaneous
    firing = (s == 0).astype(np.int64)
    firing_inputs = net.in_matrix @ firing
    p = net.p_array
    resting = np.where(firing_inputs >= net.th_array, 0, p)
    return np.where(s < p, s + 1, resting).astype(net.state_dtype)


def simulate(net: Network, s0: State, t_max: int) -> list[State]:
    """[s(0), s(1), ..., s(t_max)]."""
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    state = validate_state(net, s0)
    trajectory = [state]
    for _ in range(t_max):
        state = _step(net, state)
        trajectory.append(state)
    return trajectory


def random_network(
    D: Digraph, p_lo: int, p_hi: int, th_lo: int, th_hi: int, rng: np.random.Generator
) -> Network:
    """Independent uniform p_i in [p_lo, p_hi] and th_i in [th_lo, th_hi]."""
    if not 1 <= p_lo <= p_hi:
        raise ValueError(f"Need 1 <= p_lo <= p_hi, got {p_lo}, {p_hi}")
    if not 1 <= th_lo <= th_hi:
        raise ValueError(f"Need 1 <= th_lo <= th_hi, got {th_lo}, {th_hi}")
    p = rng.integers(p_lo, p_hi, size=D.n, endpoint=True)
    th = rng.integers(th_lo, th_hi, size=D.n, endpoint=True)
    return Network(graph=D, p=tuple(p.tolist()), th=tuple(th.tolist()))


def random_state(net: Network, rng: np.random.Generator) -> State:
    """Each s_i uniform on {0, ..., p_i}."""
    return rng.integers(0, net.p_array.astype(np.int64), endpoint=True).astype(net.state_dtype)


def restrict(net: Network, nodes: Iterable[int]) -> tuple[Network, tuple[int, ...]]:
    """The subsystem on `nodes`, relabelled 1..k in ascending order, with the old node ids."""
    sub_graph, ordered = induced_subgraph(net.graph, nodes)
    sub_net = Network(
        graph=sub_graph,
        p=tuple(net.p[i - 1] for i in ordered),
        th=tuple(net.th[i - 1] for i in ordered),
    )
    return sub_net, ordered


def restrict_state(state: State, ordered: Sequence[int]) -> State:
    return state[np.asarray(ordered, dtype=np.int64) - 1]


def disjoint_union(parts: Sequence[tuple[Network, State]]) -> tuple[Network, State]:
    """Place the parts side by side; part k's nodes follow those of parts 0..k-1."""
    if not parts:
        raise ValueError("Need at least one part")
    arcs, p, th, states = [], [], [], []
    offset = 0
    for net, state in parts:
        state = validate_state(net, state)
        arcs.extend((u + offset, v + offset) for u, v in net.graph.arcs)
        p.extend(net.p)
        th.extend(net.th)
        states.append(state.astype(np.int64))
        offset += net.n
    union = Network(graph=Digraph.from_arcs(offset, arcs), p=tuple(p), th=tuple(th))
    return union, validate_state(union, np.concatenate(states))
