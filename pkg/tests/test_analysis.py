import numpy as np
import pytest

from src.dynamics import analysis
from src.dynamics.analysis import (
    check_one_cycle_bounds,
    classify_min_cycling,
    detect_brent,
    detect_decomposed,
    detect_hashing,
    node_periods,
    stall_times,
    uninterrupted_intervals,
)
from src.dynamics.constructions import build_landau, build_nsc, build_nsc1, build_nscp
from src.dynamics.network import disjoint_union, state_key, steady_state
from src.schemas.network_models import DynamicsSummary
from src.verification.suites import random_instance


def test_feeder_network_hashing(feeder_net, feeder_state):
    summary = detect_hashing(feeder_net, feeder_state)
    assert (summary.tau, summary.alpha, summary.capped) == (0, 4, False)
    assert summary.per_node_period == [2, 2, 4]
    assert summary.min_cycling_onset == [0, 0, None]


def test_feeder_network_decomposed(feeder_net, feeder_state):
    summary = detect_decomposed(feeder_net, feeder_state)
    assert (summary.tau, summary.alpha) == (0, 4)
    assert summary.per_node_period == [2, 2, 4]
    assert summary.min_cycling_onset == [0, 0, None]


def test_steady_state_has_unit_attractor(feeder_net):
    summary = detect_hashing(feeder_net, steady_state(feeder_net))
    assert (summary.tau, summary.alpha) == (0, 1)
    assert summary.min_cycling_onset == [None, None, None]


def test_two_cycle_firing_together(make_net):
    net = make_net(2, [(1, 2), (2, 1)], p=(1, 1), th=(1, 1))
    summary = detect_hashing(net, [0, 0])
    assert (summary.tau, summary.alpha) == (1, 1)


def test_hashing_keys_each_visited_state_once(monkeypatch, feeder_net, feeder_state):
    keyed = []

    def recording_key(state):
        keyed.append(state.copy())
        return state_key(state)

    monkeypatch.setattr(analysis, "state_key", recording_key)
    summary = detect_hashing(feeder_net, feeder_state)
    assert len(keyed) == summary.tau + summary.alpha + 1
    assert keyed[0].tolist() == [0, 1, 1]
    assert np.array_equal(keyed[-1], keyed[summary.tau])


def test_summary_serializes_alpha_as_decimal_string(feeder_net, feeder_state):
    dumped = detect_hashing(feeder_net, feeder_state).model_dump()
    assert dumped["alpha"] == "4"
    assert dumped["tau"] == 0


def test_summary_rejects_periods_that_do_not_divide_alpha():
    with pytest.raises(ValueError):
        DynamicsSummary(tau=0, alpha=4, per_node_period=[3])
    with pytest.raises(ValueError):
        DynamicsSummary(tau=None, alpha=None)


def test_brent_matches_hashing_on_landau():
    net, s0 = build_landau((3, 5))
    brent = detect_brent(net, s0)
    assert (brent.tau, brent.alpha) == (6, 30)
    assert brent.per_node_period is None


def test_small_table_budget_falls_back_to_brent():
    net, s0 = build_landau((3, 5))
    summary = detect_hashing(net, s0, table_budget=1)
    assert (summary.tau, summary.alpha) == (6, 30)
    assert summary.per_node_period is not None


def test_step_cap_is_a_flagged_result():
    net, s0 = build_landau((3, 5))
    summary = detect_hashing(net, s0, step_cap=1)
    assert summary.capped
    assert summary.tau is None and summary.alpha is None
    assert detect_brent(net, s0, step_cap=1).capped


def test_decomposed_recovers_lcm_beyond_the_hashing_cap():
    parts = [build_nsc1(length, 1) for length in (3, 5, 7, 11)]
    net, s0 = disjoint_union(parts)
    assert detect_decomposed(net, s0).alpha == 1155
    assert detect_hashing(net, s0, step_cap=1000).capped


def test_two_disjoint_witness_cycles():
    net, s0 = disjoint_union([build_nsc(3), build_nsc(5)])
    summary = detect_decomposed(net, s0)
    assert summary.alpha == 15
    assert set(summary.per_node_period) == {3, 5}


def test_sink_restriction_matches_all_components():
    rng = np.random.default_rng(77)
    for _ in range(50):
        net, s0 = random_instance(rng)
        sinks = detect_decomposed(net, s0)
        everything = detect_decomposed(net, s0, sinks_only=False)
        assert (sinks.tau, sinks.alpha) == (everything.tau, everything.alpha)


def test_oracle_equivalence_on_fuzzed_instances():
    rng = np.random.default_rng(2025)
    for _ in range(200):
        net, s0 = random_instance(rng)
        hashed = detect_hashing(net, s0)
        decomposed = detect_decomposed(net, s0)
        assert (hashed.tau, hashed.alpha) == (decomposed.tau, decomposed.alpha)
        assert hashed.per_node_period == decomposed.per_node_period
        assert hashed.min_cycling_onset == decomposed.min_cycling_onset


@pytest.mark.slow
def test_oracle_equivalence_on_a_thousand_instances():
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        net, s0 = random_instance(rng)
        hashed = detect_hashing(net, s0)
        brent = detect_brent(net, s0)
        decomposed = detect_decomposed(net, s0)
        assert (hashed.tau, hashed.alpha) == (decomposed.tau, decomposed.alpha) == (brent.tau, brent.alpha)


def test_acyclic_network_reaches_steady_state(make_net):
    net = make_net(4, [(1, 2), (2, 3), (3, 4)], p=(2, 2, 2, 2), th=(1, 1, 1, 1))
    summary = detect_hashing(net, [0, 0, 2, 1])
    assert summary.alpha == 1
    assert summary.tau <= 3 + 2


def test_classify_min_cycling():
    net, s0 = build_nscp(6, 1)
    assert classify_min_cycling(net, s0, detect_hashing(net, s0)) == [0] * 6
    with pytest.raises(ValueError):
        classify_min_cycling(net, s0, DynamicsSummary(capped=True))


def test_node_periods():
    attractor = np.array([[0, 1, 0], [1, 1, 0], [0, 1, 1], [1, 1, 1]])
    assert node_periods(attractor, 4) == [2, 1, 4]


def test_stall_times_and_intervals():
    states = np.array([[1], [1], [0], [1], [1], [1]])
    assert stall_times(states, 1, 1).tolist() == [0, 3, 4]
    assert uninterrupted_intervals(states, 1, 1) == [(1, 3)]


def test_one_cycle_bounds_on_feeder(feeder_net, feeder_state):
    verdict = check_one_cycle_bounds(feeder_net, detect_hashing(feeder_net, feeder_state))
    assert verdict.cycle_length == 2
    assert verdict.gcd_holds is True
    assert verdict.supersimple is True
    assert verdict.tau_bound == 29
    assert verdict.bound_holds is True
    assert verdict.holds


def test_one_cycle_bounds_need_exactly_one_cycle(make_net):
    acyclic = make_net(2, [(1, 2)], p=(1, 1), th=(1, 1))
    with pytest.raises(ValueError):
        check_one_cycle_bounds(acyclic, detect_hashing(acyclic, [0, 1]))
    net, s0 = disjoint_union([build_nsc(2), build_nsc(3)])
    with pytest.raises(ValueError):
        check_one_cycle_bounds(net, detect_hashing(net, s0))
