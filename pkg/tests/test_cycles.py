import random

import networkx as nx
import pytest

from graphcomp.core.graph import Graph, undirected
from graphcomp.cycles import (
    CycleMachine, build_cycle_nand, canonical_cycle, cycle_edges, cycle_gate_table,
    enumerate_cycles, in_cycle, settle, shares_cycle, step_cycle_machine,
)
from oracles import brute_force_cycles


def graph(pairs, extra=()):
    nodes = {n for p in pairs for n in p} | set(extra)
    return Graph(frozenset(nodes), undirected(pairs), {}, {})


def as_edge_sets(cycles):
    return {frozenset(frozenset(e) for e in cycle_edges(c)) for c in cycles}


def random_graph(rng: random.Random):
    n = rng.randint(1, 7)
    p = rng.random()
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return graph(pairs, range(n)), pairs


def test_small_examples():
    assert len(enumerate_cycles(graph([(0, 1), (1, 2), (2, 0)]))) == 1
    assert enumerate_cycles(graph([(0, 1), (1, 2), (1, 3)])) == set()
    k4 = graph([(a, b) for a in range(4) for b in range(a + 1, 4)])
    cycles = enumerate_cycles(k4, 4)
    assert len(cycles) == 7
    assert sorted(len(c) for c in cycles) == [3, 3, 3, 3, 4, 4, 4]


def test_canonical_form_is_invariant():
    forms = {canonical_cycle(c) for c in [(1, 2, 3, 4), (3, 4, 1, 2), (4, 3, 2, 1), (1, 4, 3, 2)]}
    assert forms == {(1, 2, 3, 4)}


def test_max_len_bounds_cycles():
    k5 = graph([(a, b) for a in range(5) for b in range(a + 1, 5)])
    assert all(len(c) <= 3 for c in enumerate_cycles(k5, 3))
    assert len(enumerate_cycles(k5, 3)) == 10


@pytest.mark.parametrize("seed", range(200))
def test_matches_brute_force(seed):
    g, pairs = random_graph(random.Random(seed))
    assert as_edge_sets(enumerate_cycles(g)) == brute_force_cycles(g.nodes, pairs)


def test_matches_networkx():
    rng = random.Random(99)
    for _ in range(50):
        g, pairs = random_graph(rng)
        ng = nx.Graph(pairs)
        theirs = {frozenset(frozenset(e) for e in cycle_edges(c))
                  for c in nx.simple_cycles(ng) if len(c) >= 3}
        assert as_edge_sets(enumerate_cycles(g)) == theirs


def test_in_cycle_ignores_unrelated_wiring():
    base = [("X", "A"), ("A", "C"), ("C", "X")]
    for extra in ([], [("Q", "Y")], [("Q", "Y"), ("Y", "Z"), ("Z", "Q")]):
        g = graph(base + extra, ["Q", "Y"])
        assert in_cycle(g, "X")
    open_path = graph([("X", "A"), ("A", "C")], ["Q", "Y"])
    assert not in_cycle(open_path, "X")


def test_isolated_and_shared():
    g = graph([(0, 1), (1, 2), (2, 0)], [9])
    assert not in_cycle(g, 9)
    assert shares_cycle(g, 0, 2)
    assert not shares_cycle(g, 0, 9)


def test_nand_table():
    m, spec = build_cycle_nand()
    table = cycle_gate_table(m, spec)
    assert table == {(True, True): False, (True, False): True,
                     (False, True): True, (False, False): True}


def test_nand_is_stable():
    m, spec = build_cycle_nand()
    assert cycle_gate_table(m, spec, steps=1) == cycle_gate_table(m, spec, steps=2)


def test_steps_never_violate_constraints():
    m, spec = build_cycle_nand()
    for bits in [(True, True), (True, False), (False, True), (False, False)]:
        state = m.with_graph(spec.graph_for(m, bits))
        for _ in range(4):
            state = step_cycle_machine(state)
            assert state.violations() == []


def test_breaking_an_input_later_starts_the_output():
    m, spec = build_cycle_nand()
    state = settle(m.with_graph(spec.graph_for(m, (True, True))))
    assert state.active["C"] is None
    state = settle(state.with_graph(spec.graph_for(m, (False, True))))
    assert state.active["A"] is None and state.active["C"] == "w1"
    assert state.violations() == []


def test_no_intrinsic_cycles_is_fixed_point():
    m, _ = build_cycle_nand()
    quiet = CycleMachine(m.graph, m.cycles, m.node_freqs, m.cycle_freqs, frozenset())
    assert step_cycle_machine(quiet).active == quiet.active


def test_extra_output_frequency_keeps_true_rows():
    m, spec = build_cycle_nand()
    allowed = {**m.node_freqs, "X": m.node_freqs["X"] | {("w1", "w3"), ("w2", "w3"), ("w3",)}}
    richer = CycleMachine(m.graph, m.cycles, allowed, {**m.cycle_freqs, "C": ("w1", "w2", "w3")},
                          m.intrinsic)
    before, after = cycle_gate_table(m, spec), cycle_gate_table(richer, spec)
    assert all(after[row] for row, v in before.items() if v)


def test_rejects_cycle_outside_graph():
    g = graph([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        CycleMachine(g, {"Z": (0, 1, 7)}, {}, {"Z": ("w",)})
