"""Computation with cycles: an intact cycle is TRUE, a broken one FALSE.

Cycles carry a signal at one of a few allowed frequencies. A node shared by
several active cycles must support the multiset of their frequencies, and
cycles holding an intrinsic oscillator start up whenever some allowed
frequency fits.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import product

from .core.graph import Graph, node_key, undirected


def _adjacency(g: Graph) -> dict:
    adj = {n: set() for n in g.nodes}
    for a, b in g.edges:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    return adj


def canonical_cycle(nodes) -> tuple:
    """Rotation and reflection invariant form: smallest node first, then the
    smaller of its two neighbors along the cycle."""
    nodes = list(nodes)
    k = min(range(len(nodes)), key=lambda i: node_key(nodes[i]))
    fwd = nodes[k:] + nodes[:k]
    back = [fwd[0]] + fwd[:0:-1]
    return tuple(min(fwd, back, key=lambda c: [node_key(n) for n in c]))


def enumerate_cycles(g: Graph, max_len: int | None = None) -> set:
    """All simple cycles of length >= 3 up to ``max_len`` in canonical form."""
    adj = _adjacency(g)
    limit = len(adj) if max_len is None else max_len
    order = {n: i for i, n in enumerate(sorted(adj, key=node_key))}
    found = set()

    def extend(path, on_path):
        last = path[-1]
        for nxt in adj[last]:
            if nxt == path[0]:
                if len(path) >= 3:
                    found.add(canonical_cycle(path))
            elif nxt not in on_path and order[nxt] > order[path[0]] and len(path) < limit:
                on_path.add(nxt)
                path.append(nxt)
                extend(path, on_path)
                path.pop()
                on_path.discard(nxt)

    for start in adj:
        extend([start], {start})
    return found


def in_cycle(g: Graph, n) -> bool:
    return any(n in c for c in enumerate_cycles(g))


def shares_cycle(g: Graph, a, b) -> bool:
    return any(a in c and b in c for c in enumerate_cycles(g))


def cycle_edges(nodes) -> list:
    nodes = list(nodes)
    return list(zip(nodes, nodes[1:] + nodes[:1]))


def cycle_intact(g: Graph, nodes) -> bool:
    return all(g.has_arc(a, b) for a, b in cycle_edges(nodes))


@dataclass(frozen=True)
class CycleMachine:
    """Cycles are registered by name; their order is the start-up priority.

    ``node_freqs`` maps a node to its allowed frequency multisets (sorted
    tuples); nodes without an entry accept anything. ``cycle_freqs`` lists a
    cycle's frequencies in preference order. ``active`` maps each cycle to
    its frequency or None.
    """

    graph: Graph
    cycles: dict
    node_freqs: dict
    cycle_freqs: dict
    intrinsic: frozenset = frozenset()
    active: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, nodes in self.cycles.items():
            if len(nodes) < 3 or len(set(nodes)) != len(nodes):
                raise ValueError(f"cycle {name!r} is not simple")
            if any(n not in self.graph.nodes for n in nodes):
                raise ValueError(f"cycle {name!r} leaves the graph")
            if name not in self.cycle_freqs:
                raise ValueError(f"cycle {name!r} has no allowed frequencies")
        active = {name: self.active.get(name) for name in self.cycles}
        object.__setattr__(self, "active", active)

    def multiset(self, node, active=None) -> tuple:
        active = self.active if active is None else active
        return tuple(sorted(f for name, f in active.items()
                            if f is not None and node in self.cycles[name]))

    def violations(self) -> list:
        out = []
        for name, f in self.active.items():
            if f is not None and f not in self.cycle_freqs[name]:
                out.append(f"cycle {name!r} runs at disallowed frequency {f!r}")
            if f is not None and not cycle_intact(self.graph, self.cycles[name]):
                out.append(f"cycle {name!r} is active but broken")
        for node, allowed in self.node_freqs.items():
            if self.multiset(node) not in allowed:
                out.append(f"node {node!r} carries disallowed multiset {self.multiset(node)}")
        return out

    def with_graph(self, g: Graph) -> "CycleMachine":
        return replace(self, graph=g)

    def to_dict(self) -> dict:
        return {
            "nodes": sorted(map(str, self.graph.nodes)),
            "edges": sorted({tuple(sorted(map(str, e))) for e in self.graph.edges}),
            "cycles": {k: list(v) for k, v in self.cycles.items()},
            "node_freqs": {str(k): sorted(list(m) for m in v) for k, v in self.node_freqs.items()},
            "cycle_freqs": {k: list(v) for k, v in self.cycle_freqs.items()},
            "intrinsic": sorted(self.intrinsic),
            "active": dict(self.active),
        }


def step_cycle_machine(m: CycleMachine) -> CycleMachine:
    """Broken cycles fall silent; then each intact, silent intrinsic cycle,
    in registration order, starts at its first frequency that keeps every
    node's multiset allowed."""
    active = {name: (f if f is not None and cycle_intact(m.graph, m.cycles[name]) else None)
              for name, f in m.active.items()}
    for name in m.cycles:
        if name not in m.intrinsic or active[name] is not None:
            continue
        if not cycle_intact(m.graph, m.cycles[name]):
            continue
        for f in m.cycle_freqs[name]:
            trial = {**active, name: f}
            if all(m.multiset(n, trial) in m.node_freqs[n]
                   for n in m.cycles[name] if n in m.node_freqs):
                active = trial
                break
    return replace(m, active=active)


def settle(m: CycleMachine, max_steps: int = 100) -> CycleMachine:
    for _ in range(max_steps):
        nxt = step_cycle_machine(m)
        if nxt.active == m.active:
            return nxt
        m = nxt
    raise RuntimeError("cycle machine did not settle")


@dataclass(frozen=True)
class CycleGateSpec:
    inputs: tuple
    output: str
    break_edges: dict

    def graph_for(self, m: CycleMachine, bits) -> Graph:
        """Graph with each FALSE input's break edge removed."""
        removed = set()
        for name, bit in zip(self.inputs, bits):
            if not bit:
                a, b = self.break_edges[name]
                removed |= {(a, b), (b, a)}
        return m.graph.with_edges(m.graph.edges - removed)


def build_cycle_nand(w1: str = "w1", w2: str = "w2") -> tuple[CycleMachine, CycleGateSpec]:
    """Three triangles through X: A runs only at w1, B only at w2, C at
    either. X can carry w1, w2 or both, but no repeated frequency, so C
    starts only when A or B is broken."""
    cycles = {"A": ("X", "a1", "a2"), "B": ("X", "b1", "b2"), "C": ("X", "c1", "c2")}
    pairs = [e for nodes in cycles.values() for e in cycle_edges(nodes)]
    nodes = frozenset(n for c in cycles.values() for n in c)
    g = Graph(nodes, undirected(pairs), {}, {})
    x_allowed = {(), (w1,), (w2,), tuple(sorted((w1, w2)))}
    m = CycleMachine(g, cycles, {"X": x_allowed},
                     {"A": (w1,), "B": (w2,), "C": (w1, w2)}, frozenset(cycles))
    spec = CycleGateSpec(("A", "B"), "C", {"A": ("a1", "a2"), "B": ("b1", "b2")})
    return m, spec


def evaluate_cycle_gate(m: CycleMachine, spec: CycleGateSpec, bits, steps: int = 1) -> bool:
    state = m.with_graph(spec.graph_for(m, bits))
    for _ in range(steps):
        state = step_cycle_machine(state)
    return state.active[spec.output] is not None


def cycle_gate_table(m: CycleMachine, spec: CycleGateSpec, steps: int = 1) -> dict:
    return {bits: evaluate_cycle_gate(m, spec, bits, steps)
            for bits in product((True, False), repeat=len(spec.inputs))}
