"""Logic gates whose signals are the presence or absence of arcs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .graph import Graph, GraphType, fixed_nodes, no_edge_labels, symmetric, undirected
from .machine import ConstructionError, DomainError, Machine, Mode, fixed_point_output

NAND_TABLE = {(a, b): not (a and b) for a, b in product((False, True), repeat=2)}


def _pair(arc) -> frozenset:
    a, b = arc
    return frozenset((a, b))


@dataclass(frozen=True)
class ArcGateSpec:
    """A gate made of potential arcs.

    Triangle: inputs A-B and B-C, output A-C.
    Square: inputs A-C and B-D, output C-D.
    """

    shape: str
    input_arcs: tuple
    output_arc: tuple
    table: dict = field(default_factory=lambda: dict(NAND_TABLE))

    def __post_init__(self):
        if self.shape not in ("triangle", "square"):
            raise ConstructionError(f"unknown gate shape {self.shape!r}")
        if len(self.input_arcs) != 2:
            raise ConstructionError("an arc gate needs exactly two input arcs")
        if set(self.table) != set(product((False, True), repeat=2)):
            raise ConstructionError("gate table must cover all four input rows")
        arcs = [_pair(a) for a in self.input_arcs] + [_pair(self.output_arc)]
        if any(len(a) != 2 for a in arcs) or len(set(arcs)) != 3:
            raise ConstructionError("gate arcs must be three distinct non-loop arcs")
        i1, i2, out = arcs
        nodes = i1 | i2 | out
        if self.shape == "triangle":
            if len(nodes) != 3 or len(i1 & i2) != 1:
                raise ConstructionError("triangle gate arcs must form a triangle")
        else:
            if len(nodes) != 4 or i1 & i2 or len(out & i1) != 1 or len(out & i2) != 1:
                raise ConstructionError("square gate needs disjoint inputs joined by the output")

    @classmethod
    def triangle(cls, a="A", b="B", c="C", table=None) -> "ArcGateSpec":
        return cls("triangle", ((a, b), (b, c)), (a, c), dict(table or NAND_TABLE))

    @classmethod
    def square(cls, a="A", b="B", c="C", d="D", table=None) -> "ArcGateSpec":
        return cls("square", ((a, c), (b, d)), (c, d), dict(table or NAND_TABLE))

    @property
    def nodes(self) -> frozenset:
        return frozenset(n for arc in (*self.input_arcs, self.output_arc) for n in arc)


def _set_arc(edges: set, arc, present: bool) -> None:
    a, b = arc
    if present:
        edges.update({(a, b), (b, a)})
    else:
        edges.difference_update({(a, b), (b, a)})


def arc_gate_rule(specs, g: Graph) -> Graph:
    edges = set(g.edges)
    for s in specs:
        bits = tuple(g.has_arc(*arc) for arc in s.input_arcs)
        _set_arc(edges, s.output_arc, s.table[bits])
    return g.with_edges(edges, {})


def build_arc_gate_machine(specs, static_edges=()) -> Machine:
    """Arc-based machine whose update sets every gate output from its table.

    The machine input is a bitmask over the free input arcs (gate inputs no
    gate drives), in the order they are first met. The output, reported once
    the graph stops changing, is a bitmask over the terminal gate outputs.
    """
    specs = tuple(specs)
    outputs = [_pair(s.output_arc) for s in specs]
    if len(set(outputs)) != len(outputs):
        raise ConstructionError("gate output arcs must be pairwise distinct")
    for s in specs:
        if _pair(s.output_arc) in {_pair(a) for a in s.input_arcs}:
            raise ConstructionError("a gate may not drive its own input")
    driven = set(outputs)
    free = []
    for s in specs:
        for arc in s.input_arcs:
            if _pair(arc) not in driven and _pair(arc) not in {_pair(f) for f in free}:
                free.append(tuple(arc))
    consumed = {_pair(a) for s in specs for a in s.input_arcs}
    terminal = [tuple(s.output_arc) for s in specs if _pair(s.output_arc) not in consumed]

    nodes = set()
    for s in specs:
        nodes |= s.nodes
    static = undirected(static_edges)
    for a, b in static:
        nodes.update((a, b))
    nodes = frozenset(nodes)
    static_pairs = {_pair(e) for e in static}
    if static_pairs & driven:
        raise ConstructionError("a static edge coincides with a gate output arc")

    def rule(g: Graph) -> Graph:
        return arc_gate_rule(specs, g)

    def input_fn(i: int) -> Graph:
        if not 0 <= i < 2 ** len(free):
            raise DomainError(f"input {i} outside 0..{2 ** len(free) - 1}")
        edges = set(static)
        for k, arc in enumerate(free):
            _set_arc(edges, arc, bool(i >> k & 1))
        return Graph(nodes, frozenset(edges), {}, {})

    def value(g: Graph) -> int:
        return sum(1 << k for k, arc in enumerate(terminal) if g.has_arc(*arc))

    gtype = GraphType(frozenset(), frozenset(), (symmetric, no_edge_labels, fixed_nodes(nodes)))
    m = Machine(gtype, rule, input_fn, fixed_point_output(rule, value), Mode.ARC_BASED,
                "arc_gates")
    m.params = {"free_inputs": free, "terminal_outputs": terminal}
    return m


def spec_to_dict(s: ArcGateSpec) -> dict:
    return {
        "shape": s.shape,
        "input_arcs": [list(a) for a in s.input_arcs],
        "output_arc": list(s.output_arc),
        "table": [[int(a), int(b), int(v)] for (a, b), v in sorted(s.table.items())],
    }


def spec_from_dict(d: dict) -> ArcGateSpec:
    table = NAND_TABLE
    if "table" in d:
        table = {(bool(a), bool(b)): bool(v) for a, b, v in d["table"]}
    return ArcGateSpec(d["shape"], tuple(tuple(a) for a in d["input_arcs"]),
                       tuple(d["output_arc"]), dict(table))


