"""Cellular automata as node-based graph machines on a grid."""

from __future__ import annotations

from typing import Callable

from .graph import Graph, GraphType, grid_graph, grid_shape, no_edge_labels
from .machine import DomainError, Machine, Mode, fixed_point_output

LocalRule = Callable[[int, tuple], int]


def life_rule(self_label: int, neighbors) -> int:
    """Conway's B3/S23 on a multiset of 0/1 neighbor labels."""
    neighbors = tuple(neighbors)
    if len(neighbors) > 8:
        raise ValueError("Life uses at most 8 neighbors")
    live = sum(neighbors)
    if self_label:
        return 1 if live in (2, 3) else 0
    return 1 if live == 3 else 0


def ca_rule(local_rule: LocalRule, neighbor_map: dict) -> Callable[[Graph], Graph]:
    def rule(g: Graph) -> Graph:
        labels = g.node_labels
        new = {
            n: local_rule(labels.get(n, 0), tuple(sorted(labels.get(m, 0) for m in nbrs)))
            for n, nbrs in neighbor_map.items()
        }
        return g.with_node_labels(new)

    return rule


def build_grid_ca_machine(width: int, height: int, neighborhood: str = "moore_8",
                          local_rule: LocalRule = life_rule,
                          label_set=frozenset({0, 1})) -> Machine:
    """Node-based machine applying ``local_rule`` to every cell at once.

    Cells are nodes ``(row, col)``; cells beyond the border do not exist, so
    border cells simply have fewer neighbors. The input integer is a
    row-major bitmask of live cells. The machine halts when the pattern is
    a still life and reports its population.
    """
    if width < 1 or height < 1:
        raise ValueError("grid dimensions must be >= 1")
    template = grid_graph(width, height, neighborhood)
    neighbor_map = {n: template.neighbors(n) for n in template.nodes}
    rule = ca_rule(local_rule, neighbor_map)
    cells = [(r, c) for r in range(height) for c in range(width)]

    def input_fn(i: int) -> Graph:
        if not 0 <= i < 2 ** len(cells):
            raise DomainError(f"input {i} is not a {width}x{height} bitmask")
        return template.with_node_labels({n: (i >> k) & 1 for k, n in enumerate(cells)})

    def population(g: Graph) -> int:
        return sum(1 for v in g.node_labels.values() if v)

    gtype = GraphType(label_set, frozenset(), (grid_shape(width, height, neighborhood),
                                               no_edge_labels))
    m = Machine(gtype, rule, input_fn, fixed_point_output(rule, population), Mode.NODE_BASED,
                "grid_ca")
    m.params = {"width": width, "height": height, "neighborhood": neighborhood}
    return m


def grid_from_rows(rows, neighborhood: str = "moore_8") -> Graph:
    """Graph for a list of equal-length 0/1 rows."""
    height, width = len(rows), len(rows[0])
    labels = {(r, c): int(rows[r][c]) for r in range(height) for c in range(width)}
    return grid_graph(width, height, neighborhood, labels)


def grid_to_rows(g: Graph, width: int, height: int) -> list:
    return [[g.label((r, c)) for c in range(width)] for r in range(height)]


PATTERNS = {
    "blinker": [(1, 0), (1, 1), (1, 2)],
    "glider": [(0, 1), (1, 2), (2, 0), (2, 1), (2, 2)],
    "block": [(0, 0), (0, 1), (1, 0), (1, 1)],
}


def place(pattern: str, width: int, height: int, top: int = 0, left: int = 0,
          neighborhood: str = "moore_8") -> Graph:
    rows = [[0] * width for _ in range(height)]
    for r, c in PATTERNS[pattern]:
        rows[top + r][left + c] = 1
    return grid_from_rows(rows, neighborhood)
