import numpy as np
import pytest

from src.dynamics.analysis import detect_hashing
from src.dynamics.constructions import build_nsc, build_nsc1
from src.dynamics.network import disjoint_union, simulate
from src.schemas.network_models import DynamicsSummary
from src.verification.invariants import (
    check_acyclic_upstream_bound,
    check_min_period,
    check_one_cycle,
    check_period_identity,
    check_sc_invariance,
    check_stall_bound,
    check_upstream_determinism,
    in_sc,
)
from src.verification.suites import SUITES, props_case, random_instance, run_suite


def test_min_period_flags_short_attractors(make_net):
    net = make_net(2, [(1, 2), (2, 1)], p=(3, 3), th=(1, 1))
    assert check_min_period(net, DynamicsSummary(tau=0, alpha=4)) == []
    assert check_min_period(net, DynamicsSummary(tau=0, alpha=1)) == []
    assert len(check_min_period(net, DynamicsSummary(tau=0, alpha=2))) == 1


def test_upstream_determinism(feeder_net):
    assert check_upstream_determinism(feeder_net, np.array([0, 1, 0]), np.array([0, 1, 2]), 1) == []
    with pytest.raises(ValueError):
        check_upstream_determinism(feeder_net, np.array([0, 1, 0]), np.array([1, 1, 0]), 1)


def test_acyclic_upstream_bound(make_net):
    net = make_net(4, [(1, 2), (2, 3), (3, 4)], p=(2, 2, 2, 2), th=(1, 1, 1, 1))
    assert check_acyclic_upstream_bound(net, np.array([0, 0, 2, 1]), 4) == []


def test_sc_invariance(make_net):
    net, _ = build_nsc(3)
    assert in_sc(np.array([0, 1, 1]), (1, 2, 3))
    assert not in_sc(np.array([1, 1, 1]), (1, 2, 3))
    assert check_sc_invariance(net, np.array([0, 1, 1]), np.array([1, 0, 1]), (1, 2, 3)) == []
    assert len(check_sc_invariance(net, np.array([0, 1, 1]), np.array([1, 1, 1]), (1, 2, 3))) == 1
    slow = make_net(2, [(1, 2), (2, 1)], p=(2, 1), th=(1, 1))
    with pytest.raises(ValueError):
        check_sc_invariance(slow, np.array([0, 1]), np.array([1, 0]), (1, 2))


def test_stall_bound_catches_a_synthetic_violation(make_net):
    net = make_net(2, [(1, 2)], p=(1, 1), th=(1, 1))
    states = np.array([[0, 1], [1, 1], [0, 1], [1, 1], [0, 1], [1, 1]])
    assert len(check_stall_bound(net, states, 1, 2)) == 1


def test_stall_bound_holds_along_a_real_trajectory(feeder_net, feeder_state):
    states = np.stack(simulate(feeder_net, feeder_state, 12))
    assert check_stall_bound(feeder_net, states, 1, 2) == []
    assert check_stall_bound(feeder_net, states, 2, 1) == []


def test_stall_bound_rejects_arcs_it_does_not_cover(make_net):
    net = make_net(2, [(1, 2)], p=(1, 2), th=(1, 1))
    states = np.zeros((3, 2), dtype=np.int64)
    with pytest.raises(ValueError):
        check_stall_bound(net, states, 1, 2)
    with pytest.raises(ValueError):
        check_stall_bound(net, states, 2, 1)


def test_period_identity(feeder_net, feeder_state):
    summary = detect_hashing(feeder_net, feeder_state)
    assert check_period_identity(feeder_net, summary) == []
    wrong = summary.model_copy(update={"per_node_period": [2, 2, 3]})
    assert len(check_period_identity(feeder_net, wrong)) == 2


def test_one_cycle_checks(feeder_net, feeder_state):
    assert check_one_cycle(feeder_net, detect_hashing(feeder_net, feeder_state)) == []
    net, s0 = build_nsc1(5, 2)
    assert check_one_cycle(net, detect_hashing(net, s0)) == []


def test_props_case_on_random_instances():
    rng = np.random.default_rng(99)
    for _ in range(100):
        net, s0 = random_instance(rng)
        assert props_case(net, s0, rng) == []


def test_props_case_on_a_disjoint_union():
    rng = np.random.default_rng(5)
    net, s0 = disjoint_union([build_nsc(3), build_nsc1(4, 3)])
    assert props_case(net, s0, rng) == []


@pytest.mark.parametrize("name", ["nsc", "landau", "tree"])
def test_construction_suites_pass(name):
    report = run_suite(name, seed=3)
    assert report.cases > 0
    assert report.passed, report.violations


def test_small_props_suite_passes():
    report = run_suite("props", seed=17, cases=50)
    assert report.cases == 50
    assert report.passed, report.violations


def test_unknown_suite():
    assert set(SUITES) == {"props", "nsc", "landau", "tree", "laws"}
    with pytest.raises(ValueError):
        run_suite("nope")


@pytest.mark.slow
def test_props_suite_at_scale():
    report = run_suite("props", cases=10_000)
    assert report.passed, report.violations[:10]


@pytest.mark.slow
def test_laws_suite():
    report = run_suite("laws")
    assert report.passed, report.violations
