"""JSON documents for graphs and machines, with a registry of named rules."""

from __future__ import annotations

import json
from typing import Callable

from .arcgates import build_arc_gate_machine, spec_from_dict
from .automata import build_grid_ca_machine, life_rule
from .graph import Graph, node_key
from .machine import Machine, identity_machine
from .turing import TuringSpec, build_turing_machine_graph


class DocumentError(ValueError):
    """A machine document is malformed; the message names the field."""


RULES: dict[str, Callable[[dict], Machine]] = {}


def register(name: str):
    def deco(factory):
        RULES[name] = factory
        return factory

    return deco


@register("identity")
def _identity(params: dict) -> Machine:
    return identity_machine()


@register("life")
def _life(params: dict) -> Machine:
    return build_grid_ca_machine(int(params["width"]), int(params["height"]),
                                 params.get("neighborhood", "moore_8"), life_rule)


@register("arc_gates")
def _arc_gates(params: dict) -> Machine:
    specs = [spec_from_dict(d) for d in params["gates"]]
    static = [tuple(e) for e in params.get("static_edges", [])]
    return build_arc_gate_machine(specs, static)


@register("turing")
def _turing(params: dict) -> Machine:
    tm = TuringSpec.from_dict(params["tm"])
    return build_turing_machine_graph(tm, int(params["tape_length"]),
                                      params.get("input_word"),
                                      int(params.get("head_position", 0)))


def _node(x):
    return tuple(x) if isinstance(x, list) else x


def graph_to_dict(g: Graph) -> dict:
    return g.canonical()


def graph_from_dict(d: dict) -> Graph:
    nodes = [_node(n) for n in d.get("nodes", [])]
    by_key = {node_key(n): n for n in nodes}
    edges = []
    for k, e in enumerate(d.get("edges", [])):
        if not isinstance(e, list) or len(e) != 2:
            raise DocumentError(f"edges[{k}]: expected a [from, to] pair")
        edges.append((_node(e[0]), _node(e[1])))
    labels = {}
    for k, v in d.get("node_labels", {}).items():
        if k not in by_key:
            try:
                parsed = _node(json.loads(k))
            except json.JSONDecodeError:
                parsed = k
            by_key.setdefault(node_key(parsed), parsed)
        labels[by_key.get(k, k)] = int(v)
    edge_labels = {}
    for k, v in d.get("edge_labels", {}).items():
        a, b = json.loads(k)
        edge_labels[(_node(a), _node(b))] = int(v)
    return Graph(frozenset(nodes), frozenset(edges), labels, edge_labels)


def machine_document(rule: str, params: dict, g: Graph | None = None) -> dict:
    doc = graph_to_dict(g) if g is not None else {}
    doc.update({"rule": rule, "rule_params": params})
    return doc


def load_document(doc: dict) -> tuple[Machine, Graph | None]:
    """Build the machine named by ``doc["rule"]`` and the graph, if any."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    rule = doc.get("rule")
    if rule not in RULES:
        raise DocumentError(f"rule: unknown rule {rule!r}; known: {sorted(RULES)}")
    params = doc.get("rule_params", {})
    if not isinstance(params, dict):
        raise DocumentError("rule_params: expected an object")
    try:
        m = RULES[rule](params)
    except KeyError as exc:
        raise DocumentError(f"rule_params: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"rule_params: {exc}") from None
    g = graph_from_dict(doc) if "nodes" in doc else None
    return m, g


def load_path(path) -> tuple[Machine, Graph | None]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return load_document(doc)
