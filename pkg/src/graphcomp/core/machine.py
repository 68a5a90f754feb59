"""Graph computation machines: update rules iterated until the output halts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

from .graph import Graph, GraphType, validate_graph


class _NotHaltedYet:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_HALTED_YET"

    def __reduce__(self):
        return (_NotHaltedYet, ())


NOT_HALTED_YET = _NotHaltedYet()


class Mode(str, enum.Enum):
    NODE_BASED = "node_based"
    ARC_BASED = "arc_based"
    UNRESTRICTED = "unrestricted"


class ContractError(RuntimeError):
    """An update rule broke the machine's graph type or mode."""


class DomainError(ValueError):
    """The input function does not accept the given integer."""


class ConstructionError(ValueError):
    """Machine or gate parameters are inconsistent."""


@dataclass
class Machine:
    graph_type: GraphType
    update_rule: Callable[[Graph], Graph]
    input_fn: Callable[[int], Graph]
    output_fn: Callable[[Graph], object]
    mode: Mode = Mode.UNRESTRICTED
    name: str = "anonymous"
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RunResult:
    halted: bool
    value: int | None = None
    steps: int | None = None
    cap: int | None = None
    trajectory_hashes: tuple = ()

    def to_dict(self) -> dict:
        if self.halted:
            out = {"outcome": "halted", "value": self.value, "steps": self.steps}
        else:
            out = {"outcome": "cap_exceeded", "cap": self.cap}
        out["trajectory_hashes"] = list(self.trajectory_hashes)
        return out


def check_mode(mode: Mode, before: Graph, after: Graph) -> list[str]:
    problems = []
    if mode is Mode.NODE_BASED:
        if after.nodes != before.nodes:
            problems.append("node-based rule changed the node set")
        if after.edges != before.edges:
            problems.append("node-based rule changed the edge set")
        if after.edge_labels != before.edge_labels:
            problems.append("node-based rule changed edge labels")
    elif mode is Mode.ARC_BASED:
        if after.nodes != before.nodes:
            problems.append("arc-based rule changed the node set")
        if after.node_labels != before.node_labels:
            problems.append("arc-based rule changed node labels")
    return problems


def step(m: Machine, g: Graph) -> Graph:
    """Apply the update rule once, enforcing graph type and mode."""
    nxt = m.update_rule(g)
    problems = check_mode(m.mode, g, nxt) + validate_graph(nxt, m.graph_type)
    if problems:
        raise ContractError(f"{m.name}: " + "; ".join(problems))
    return nxt


def run_graph(m: Machine, g: Graph, max_steps: int, record: bool = True) -> RunResult:
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    hashes = [g.digest()] if record else []
    for t in range(max_steps + 1):
        out = m.output_fn(g)
        if out is not NOT_HALTED_YET:
            return RunResult(True, int(out), t, trajectory_hashes=tuple(hashes))
        if t == max_steps:
            break
        g = step(m, g)
        if record:
            hashes.append(g.digest())
    return RunResult(False, cap=max_steps, trajectory_hashes=tuple(hashes))


def run(m: Machine, input: int, max_steps: int, record: bool = True) -> RunResult:
    """Iterate from ``input_fn(input)`` until the output function halts.

    ``steps`` is the least t whose graph yields an output. Reaching
    ``max_steps`` without halting returns a ``cap_exceeded`` result; that
    says nothing about eventual termination.
    """
    g = m.input_fn(input)
    problems = validate_graph(g, m.graph_type)
    if problems:
        raise ContractError(f"{m.name}: input graph invalid: " + "; ".join(problems))
    return run_graph(m, g, max_steps, record=record)


def identity_machine(g0: Graph | None = None) -> Machine:
    g0 = Graph() if g0 is None else g0

    def output(g):
        return NOT_HALTED_YET

    return Machine(GraphType(), lambda g: g, lambda i: g0, output, Mode.UNRESTRICTED, "identity")


def fixed_point_output(rule: Callable[[Graph], Graph], value: Callable[[Graph], int]):
    """Output function that halts once the rule leaves the graph unchanged."""

    def output(g: Graph):
        return value(g) if rule(g) == g else NOT_HALTED_YET

    return output
