from .arcgates import ArcGateSpec, build_arc_gate_machine, NAND_TABLE
from .automata import build_grid_ca_machine, life_rule, grid_from_rows, grid_to_rows, place
from .graph import Graph, GraphType, validate_graph, grid_graph, undirected
from .io import DocumentError, load_document, load_path, machine_document, graph_from_dict
from .machine import (
    NOT_HALTED_YET, ConstructionError, ContractError, DomainError, Machine, Mode, RunResult,
    run, run_graph, step,
)
from .turing import TAPE_OVERFLOW, TuringSpec, build_turing_machine_graph, decode_tape, unary_increment

__all__ = [
    "ArcGateSpec", "build_arc_gate_machine", "NAND_TABLE", "build_grid_ca_machine", "life_rule",
    "grid_from_rows", "grid_to_rows", "place", "Graph", "GraphType", "validate_graph",
    "grid_graph", "undirected", "DocumentError", "load_document", "load_path",
    "machine_document", "graph_from_dict", "NOT_HALTED_YET", "ConstructionError",
    "ContractError", "DomainError", "Machine", "Mode", "RunResult", "run", "run_graph", "step",
    "TAPE_OVERFLOW", "TuringSpec", "build_turing_machine_graph", "decode_tape",
    "unary_increment",
]
