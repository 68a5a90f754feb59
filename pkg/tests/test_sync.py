import pytest
from hypothesis import given, settings, strategies as st

from graphcomp.sync import (
    NeuronSpec, SyncNetwork, UnsupportedTopologyError, correlation, exactly_synchronized,
    generate_distinct_inputs, generate_periodic_inputs, partial_sync_graph,
    partially_synchronized, shift, simulate_model1, simulate_model2, simulate_model3,
    sync_partition, total_input, validate_distinctness,
)

trains = st.frozensets(st.integers(0, 15), max_size=6)


def test_total_input_inhibitory_example():
    assert total_input([{5, 15}, {0, 10}], [{7, 10}]) == {0, 5, 15}


def test_total_input_trivial_cases():
    assert total_input([]) == frozenset()
    assert total_input([{1, 2}, {1, 2}]) == {1, 2}


def test_exact_sync_examples():
    assert exactly_synchronized(frozenset({0, 5}), frozenset({0, 5}))
    assert exactly_synchronized(frozenset(), frozenset())
    assert not exactly_synchronized(frozenset({0, 5}), frozenset({0, 5, 10}))


@settings(max_examples=300, deadline=None)
@given(trains, trains, trains)
def test_exact_sync_is_equivalence(a, b, c):
    assert exactly_synchronized(a, a)
    assert exactly_synchronized(a, b) == exactly_synchronized(b, a)
    if exactly_synchronized(a, b) and exactly_synchronized(b, c):
        assert exactly_synchronized(a, c)


def test_partial_sync_not_transitive():
    a, b, c = frozenset({0}), frozenset({0, 1}), frozenset({1})
    assert partially_synchronized(a, b) and partially_synchronized(b, c)
    assert not partially_synchronized(a, c)


def test_sync_partition_examples():
    s = {"a": {0}, "b": {0}, "c": {0}, "d": {1}, "e": {1}}
    assert sync_partition(s) == [frozenset("abc"), frozenset("de")]
    assert sync_partition({"a": {0}, "b": {1}}) == [frozenset("a"), frozenset("b")]
    assert sync_partition({"a": set(), "b": set()}) == [frozenset("ab")]


def test_partial_sync_graph_example():
    s = {"a": {0, 5, 10, 15, 20}, "b": {5, 15}, "c": {0, 10}, "d": {0, 10}}
    directed, undirected = partial_sync_graph(s)
    assert directed == {("a", "b"), ("a", "c"), ("a", "d")}
    assert undirected == {frozenset("cd")}
    assert partial_sync_graph({"x": {1}, "y": {2}}) == (set(), set())


def test_correlation_values():
    assert correlation(frozenset({0, 5, 10, 15, 20}), frozenset({5, 15})) == pytest.approx(0.4)
    assert correlation(frozenset({1, 2}), frozenset({1, 2})) == 1.0
    assert correlation(frozenset({1}), frozenset({2})) == 0.0


@settings(max_examples=300, deadline=None)
@given(trains, trains)
def test_correlation_bounds(a, b):
    r = correlation(a, b)
    assert 0.0 <= r <= 1.0
    assert (r == 1.0) == (a == b)


def test_validate_distinctness_examples():
    ok = {0: frozenset({0}), 1: frozenset({1}), 2: frozenset({2})}
    assert validate_distinctness(ok) == []
    bad = {0: frozenset({0, 1}), 1: frozenset({0}), 2: frozenset({1})}
    assert any("collision" in p for p in validate_distinctness(bad))
    silent = {0: frozenset(), 1: frozenset({1})}
    assert any("silent" in p for p in validate_distinctness(silent))


def test_validate_distinctness_respects_declared_syncs():
    ins = {"a": frozenset({3}), "b": frozenset({3}), "c": frozenset({7})}
    assert validate_distinctness(ins, [("a", "b")]) == []
    assert validate_distinctness(ins) != []


@pytest.mark.parametrize("n,seed", [(1, 0), (2, 7), (4, 3), (6, 11)])
def test_generated_inputs_are_valid(n, seed):
    ins = generate_distinct_inputs(n, 200, seed)
    assert len(ins) == n and all(ins.values())
    assert validate_distinctness(ins) == []
    assert ins == generate_distinct_inputs(n, 200, seed)


def test_generate_rejects_small_window():
    with pytest.raises(ValueError):
        generate_distinct_inputs(5, 6, 0)


def test_periodic_inputs_distinct_phases():
    ins = generate_periodic_inputs(3, 10, 60, seed=2, exclude_phases=(9,))
    phases = {min(t) for t in ins.values()}
    assert len(phases) == 3 and 9 not in phases
    assert all(len(t) == 6 for t in ins.values())


def test_shift_is_injective():
    a, b = frozenset({1, 5}), frozenset({1, 6})
    assert shift(a, 7, 10) != shift(b, 7, 10)
    assert shift(frozenset({9}), 1, 10) == {0}


def _and1_net(ins):
    neurons = {"a": NeuronSpec("port_input", delay=2), "c": NeuronSpec("port_input", delay=2),
               "b": NeuronSpec("port_input", delay=50), "d": NeuronSpec("port_input", delay=50)}
    return SyncNetwork(neurons, [("b", "c", 1.0), ("a", "d", 1.0)], ins, 200)


def test_model1_and_wiring():
    tt = simulate_model1(_and1_net({"a": {1}, "c": {1}, "b": {4}, "d": {4}}))
    assert tt["c"] == tt["d"] == {3, 54}
    ff = simulate_model1(_and1_net({"a": {1}, "c": {2}, "b": {4}, "d": {5}}))
    assert ff["c"] != ff["d"]


def test_model1_rejects_cycles():
    neurons = {"x": NeuronSpec("relay"), "y": NeuronSpec("relay")}
    with pytest.raises(UnsupportedTopologyError):
        simulate_model1(SyncNetwork(neurons, [("x", "y", 1.0), ("y", "x", 1.0)]))


def test_model1_threshold_needs_synchronized_group():
    neurons = {"p": NeuronSpec("port_input"), "q": NeuronSpec("port_input"),
               "e": NeuronSpec("threshold", n=2, shift=3)}
    net = SyncNetwork(neurons, [("p", "e", 1.0), ("q", "e", 1.0)], window=20)
    assert simulate_model1(net.with_inputs({"p": {1, 4}, "q": {1, 4}}))["e"] == {4, 7}
    assert simulate_model1(net.with_inputs({"p": {1, 4}, "q": {1, 5}}))["e"] == frozenset()


def test_model2_lone_intrinsic():
    net = SyncNetwork({"c": NeuronSpec("intrinsic", period=10)}, [], window=40)
    assert sorted(simulate_model2(net)["c"]) == [9, 19, 29, 39]


def test_model2_refractory_override():
    neurons = {"a": NeuronSpec("port_input"),
               "d": NeuronSpec("relay", refractory=8, override=1.5)}
    net = SyncNetwork(neurons, [("a", "d", 1.0)], window=20)
    assert sorted(simulate_model2(net.with_inputs({"a": {0, 3, 9, 12}}))["d"]) == [0, 9]
    strong = SyncNetwork(neurons, [("a", "d", 1.6)], window=20)
    assert sorted(simulate_model2(strong.with_inputs({"a": {0, 3}}))["d"]) == [0, 3]


def test_model2_storage():
    neurons = {"a": NeuronSpec("port_input"), "e": NeuronSpec("relay", stores=True),
               "f": NeuronSpec("relay")}
    net = SyncNetwork(neurons, [("a", "e", .5), ("a", "f", .5)], window=10)
    out = simulate_model2(net.with_inputs({"a": {1, 4, 6, 8}}))
    assert sorted(out["e"]) == [4, 8] and not out["f"]


def test_model2_feedback_is_delayed():
    neurons = {"a": NeuronSpec("port_input"), "x": NeuronSpec("relay"),
               "y": NeuronSpec("relay")}
    net = SyncNetwork(neurons, [("a", "x", 1.0), ("x", "y", 1.0), ("y", "x", 1.0)], window=6)
    out = simulate_model2(net.with_inputs({"a": {0}}))
    # the forward edge x->y is instantaneous; y->x arrives one step later
    assert sorted(out["x"]) == sorted(out["y"]) == list(range(6))


def test_model3_natural_cycle():
    net = SyncNetwork({"n": NeuronSpec("relay", period=10)}, [], window=40)
    assert sorted(simulate_model3(net)["n"]) == [9, 19, 29, 39]


def test_model3_reciprocal_pair_synchronizes():
    neurons = {"c": NeuronSpec("relay", period=10, phase=0.0),
               "d": NeuronSpec("relay", period=7, phase=0.3)}
    net = SyncNetwork(neurons, [("c", "d", 1.0), ("d", "c", 1.0)], window=60)
    out = simulate_model3(net)
    late = lambda s: {t for t in s if t >= 10}
    assert late(out["c"]) == late(out["d"]) != set()


def test_model3_strong_input_enslaves():
    neurons = {"a": NeuronSpec("port_input"), "b": NeuronSpec("port_input"),
               "e": NeuronSpec("relay", period=10, phase=0.4)}
    net = SyncNetwork(neurons, [("a", "e", .6), ("b", "e", .6)], window=60)
    drive = frozenset(range(3, 60, 7))
    out = simulate_model3(net.with_inputs({"a": drive, "b": drive}))
    assert {t for t in out["e"] if t >= 3} == drive


def test_network_round_trip():
    net = _and1_net({"a": {1}, "c": {1}})
    again = SyncNetwork.from_dict(net.to_dict())
    assert simulate_model1(again).trains == simulate_model1(net).trains


def test_network_rejects_missing_endpoint():
    with pytest.raises(ValueError):
        SyncNetwork({"a": NeuronSpec("relay")}, [("a", "zz", 1.0)])
