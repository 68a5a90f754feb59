"""Labeled graphs, graph types and validation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

Node = Hashable
Edge = tuple


def node_key(node: Node) -> str:
    """Canonical string for a node id; tuples and lists encode alike."""
    if isinstance(node, tuple):
        node = list(node)
    return json.dumps(node, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Graph:
    """A labeled graph with value semantics.

    Undirected graphs are stored as symmetric ordered pairs.
    """

    nodes: frozenset = frozenset()
    edges: frozenset = frozenset()
    node_labels: Mapping = field(default_factory=dict)
    edge_labels: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "node_labels", dict(self.node_labels))
        object.__setattr__(
            self, "edge_labels", {tuple(e): v for e, v in self.edge_labels.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.node_labels == other.node_labels
            and self.edge_labels == other.edge_labels
        )

    def __hash__(self):
        return hash(self.digest())

    def label(self, node: Node, default: int = 0) -> int:
        return self.node_labels.get(node, default)

    def has_arc(self, a: Node, b: Node) -> bool:
        return (a, b) in self.edges

    def neighbors(self, node: Node) -> list:
        return sorted((b for a, b in self.edges if a == node), key=node_key)

    def with_node_labels(self, labels: Mapping) -> "Graph":
        return Graph(self.nodes, self.edges, labels, self.edge_labels)

    def with_edges(self, edges: Iterable[Edge], edge_labels: Mapping | None = None) -> "Graph":
        edges = frozenset(tuple(e) for e in edges)
        if edge_labels is None:
            edge_labels = {e: v for e, v in self.edge_labels.items() if e in edges}
        return Graph(self.nodes, edges, self.node_labels, edge_labels)

    def canonical(self) -> dict:
        """Sorted, JSON-ready form; identical graphs give identical output."""
        nodes = sorted(self.nodes, key=node_key)
        edges = sorted(self.edges, key=lambda e: (node_key(e[0]), node_key(e[1])))
        return {
            "nodes": [_jsonable(n) for n in nodes],
            "edges": [[_jsonable(a), _jsonable(b)] for a, b in edges],
            "node_labels": {node_key(n): self.node_labels[n] for n in
                            sorted(self.node_labels, key=node_key)},
            "edge_labels": {node_key(list(e)): self.edge_labels[e] for e in
                            sorted(self.edge_labels, key=lambda e: node_key(list(e)))},
        }

    def digest(self) -> str:
        """Hex string of a stable 64-bit hash of the canonical form."""
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.blake2b(blob.encode(), digest_size=8).hexdigest()


def _jsonable(node):
    return list(node) if isinstance(node, tuple) else node


def undirected(pairs: Iterable[tuple]) -> frozenset:
    """Symmetric closure of a collection of node pairs."""
    out = set()
    for a, b in pairs:
        out.add((a, b))
        out.add((b, a))
    return frozenset(out)


# --- graph types -----------------------------------------------------------

Constraint = Callable[[Graph], list]


@dataclass(frozen=True)
class GraphType:
    """Allowed graphs, described by label sets plus named structural checks.

    ``node_label_set`` / ``edge_label_set`` of ``None`` admit any integer.
    """

    node_label_set: frozenset | None = None
    edge_label_set: frozenset | None = None
    constraints: tuple = ()


def validate_graph(g: Graph, t: GraphType | None = None) -> list[str]:
    """Return every violated constraint; an empty list means ``g`` is allowed."""
    problems = []
    for a, b in sorted(g.edges, key=lambda e: (node_key(e[0]), node_key(e[1]))):
        for end in (a, b):
            if end not in g.nodes:
                problems.append(f"dangling edge {a!r}->{b!r}: node {end!r} absent")
    for n in g.node_labels:
        if n not in g.nodes:
            problems.append(f"label on missing node {n!r}")
    for e in g.edge_labels:
        if e not in g.edges:
            problems.append(f"label on missing edge {e!r}")
    if t is None:
        return problems
    if t.node_label_set is not None:
        for n, v in g.node_labels.items():
            if v not in t.node_label_set:
                problems.append(f"node {n!r} label {v} not allowed")
    if t.edge_label_set is not None:
        for e, v in g.edge_labels.items():
            if v not in t.edge_label_set:
                problems.append(f"edge {e!r} label {v} not allowed")
    for check in t.constraints:
        problems.extend(check(g))
    return problems


def symmetric(g: Graph) -> list[str]:
    return [f"edge {a!r}->{b!r} has no reverse" for a, b in g.edges if (b, a) not in g.edges]


def no_edge_labels(g: Graph) -> list[str]:
    return ["edge labels present"] if g.edge_labels else []


def fixed_nodes(nodes: Iterable[Node]) -> Constraint:
    expected = frozenset(nodes)

    def check(g: Graph) -> list[str]:
        return [] if g.nodes == expected else ["node set differs from the fixed node set"]

    check.__name__ = "fixed_nodes"
    return check


def max_degree(k: int) -> Constraint:
    def check(g: Graph) -> list[str]:
        deg: dict = {}
        for a, _ in g.edges:
            deg[a] = deg.get(a, 0) + 1
        return [f"node {n!r} has degree {d} > {k}" for n, d in deg.items() if d > k]

    check.__name__ = f"max_degree_{k}"
    return check


def grid_edges(width: int, height: int, neighborhood: str = "von_neumann_4") -> frozenset:
    if neighborhood == "von_neumann_4":
        offsets = [(0, 1), (1, 0)]
    elif neighborhood == "moore_8":
        offsets = [(0, 1), (1, 0), (1, 1), (1, -1)]
    else:
        raise ValueError(f"unknown neighborhood {neighborhood!r}")
    pairs = []
    for r in range(height):
        for c in range(width):
            for dr, dc in offsets:
                rr, cc = r + dr, c + dc
                if 0 <= rr < height and 0 <= cc < width:
                    pairs.append(((r, c), (rr, cc)))
    return undirected(pairs)


def grid_shape(width: int, height: int, neighborhood: str = "von_neumann_4") -> Constraint:
    nodes = frozenset((r, c) for r in range(height) for c in range(width))
    edges = grid_edges(width, height, neighborhood)

    def check(g: Graph) -> list[str]:
        out = []
        if g.nodes != nodes:
            out.append(f"nodes are not a {width}x{height} grid")
        if g.edges != edges:
            out.append(f"edges are not a {neighborhood} grid")
        return out

    check.__name__ = "grid_shape"
    return check


def grid_graph(width: int, height: int, neighborhood: str = "von_neumann_4",
               labels: Mapping | None = None) -> Graph:
    nodes = [(r, c) for r in range(height) for c in range(width)]
    labels = {n: 0 for n in nodes} if labels is None else labels
    return Graph(frozenset(nodes), grid_edges(width, height, neighborhood), labels, {})
