"""Turing machines embedded as node-based graph machines.

The tape is a line of nodes. The head never moves as an object: the node
holding it computes the transition, writes its symbol and hands the head
state to its neighbor, which activates on the same step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphType, fixed_nodes, no_edge_labels, undirected
from .machine import NOT_HALTED_YET, ConstructionError, DomainError, Machine, Mode

TAPE_OVERFLOW = -1


@dataclass(frozen=True)
class TuringSpec:
    states: tuple
    tape_alphabet: tuple  # first symbol is the blank
    transition: dict  # (state, symbol) -> (state, symbol, "L" | "R")
    halt_states: frozenset
    initial_state: object

    def __post_init__(self):
        object.__setattr__(self, "halt_states", frozenset(self.halt_states))
        if self.initial_state not in self.states:
            raise ConstructionError("initial state is not a state")
        if not self.halt_states <= set(self.states):
            raise ConstructionError("halt states must be states")
        for q in self.states:
            for s in self.tape_alphabet:
                key = (q, s)
                if q in self.halt_states:
                    if key in self.transition:
                        raise ConstructionError(f"halt state {q!r} has a transition")
                elif key not in self.transition:
                    raise ConstructionError(f"no transition for {key!r}")
        for (q, s), (q2, s2, mv) in self.transition.items():
            if q2 not in self.states or s2 not in self.tape_alphabet or mv not in ("L", "R"):
                raise ConstructionError(f"bad transition {(q, s)!r} -> {(q2, s2, mv)!r}")

    def to_dict(self) -> dict:
        return {
            "states": list(self.states),
            "tape_alphabet": list(self.tape_alphabet),
            "transition": [[q, s, q2, s2, mv] for (q, s), (q2, s2, mv) in
                           sorted(self.transition.items(), key=repr)],
            "halt_states": sorted(self.halt_states, key=repr),
            "initial_state": self.initial_state,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TuringSpec":
        trans = {(q, s): (q2, s2, mv) for q, s, q2, s2, mv in d["transition"]}
        return cls(tuple(d["states"]), tuple(d["tape_alphabet"]), trans,
                   frozenset(d["halt_states"]), d["initial_state"])


def unary_increment() -> TuringSpec:
    """Walk right over 1s, write a 1 on the first blank, halt."""
    return TuringSpec(
        states=("scan", "done"),
        tape_alphabet=("_", "1"),
        transition={("scan", "1"): ("scan", "1", "R"), ("scan", "_"): ("done", "1", "R")},
        halt_states=frozenset({"done"}),
        initial_state="scan",
    )


class _Codec:
    """Packs (symbol, head state) into one integer node label."""

    def __init__(self, tm: TuringSpec):
        self.tm = tm
        self.n_sym = len(tm.tape_alphabet)
        self.sym_index = {s: i for i, s in enumerate(tm.tape_alphabet)}
        self.state_index = {q: i for i, q in enumerate(tm.states)}
        self.overflow = len(tm.states)  # extra head state

    def encode(self, sym: int, head: int | None) -> int:
        return sym + self.n_sym * (0 if head is None else head + 1)

    def decode(self, label: int):
        head = label // self.n_sym
        return label % self.n_sym, (None if head == 0 else head - 1)

    def labels(self) -> frozenset:
        return frozenset(range(self.n_sym * (len(self.tm.states) + 2)))

    def active(self, head) -> bool:
        return (head is not None and head != self.overflow
                and self.tm.states[head] not in self.tm.halt_states)

    def move(self, sym: int, head: int):
        q2, s2, mv = self.tm.transition[(self.tm.states[head], self.tm.tape_alphabet[sym])]
        return self.sym_index[s2], self.state_index[q2], (1 if mv == "R" else -1)


def build_turing_machine_graph(tm: TuringSpec, tape_length: int, input_word=None,
                               head_position: int = 0) -> Machine:
    """Node-based machine emulating ``tm`` on a bounded tape.

    Each step performs exactly one transition, so the machine halts on the
    same step count as the Turing machine. A head that would leave the tape
    stops in an overflow state and the output is ``TAPE_OVERFLOW``.
    Otherwise the output counts cells holding the alphabet's second symbol
    (the unary reading); ``decode_tape`` recovers the full tape.
    ``input_fn(i)`` writes ``i`` in unary from the head position;
    ``params["initial"]`` holds the graph for ``input_word``.
    """
    if tape_length < 1 or not 0 <= head_position < tape_length:
        raise ConstructionError("head must start on the tape")
    codec = _Codec(tm)
    nodes = frozenset(range(tape_length))
    edges = undirected((i, i + 1) for i in range(tape_length - 1))

    def initial(word) -> Graph:
        word = list(word)
        if head_position + len(word) > tape_length:
            raise DomainError("input word does not fit on the tape")
        cells = [0] * tape_length
        for k, s in enumerate(word):
            if s not in codec.sym_index:
                raise DomainError(f"symbol {s!r} not in the tape alphabet")
            cells[head_position + k] = codec.sym_index[s]
        labels = {i: codec.encode(cells[i], None) for i in range(tape_length)}
        labels[head_position] = codec.encode(cells[head_position],
                                             codec.state_index[tm.initial_state])
        return Graph(nodes, edges, labels, {})

    def rule(g: Graph) -> Graph:
        new = {}
        for i in range(tape_length):
            sym, head = codec.decode(g.node_labels[i])
            if codec.active(head):
                s2, q2, d = codec.move(sym, head)
                new[i] = codec.encode(s2, None if 0 <= i + d < tape_length else codec.overflow)
                continue
            arriving = None
            for j, d_needed in ((i - 1, 1), (i + 1, -1)):
                if 0 <= j < tape_length:
                    jsym, jhead = codec.decode(g.node_labels[j])
                    if codec.active(jhead):
                        _, q2, d = codec.move(jsym, jhead)
                        if d == d_needed:
                            arriving = q2
            new[i] = codec.encode(sym, head if arriving is None else arriving)
        return g.with_node_labels(new)

    def output_fn(g: Graph):
        for i in range(tape_length):
            sym, head = codec.decode(g.node_labels[i])
            if head is None:
                continue
            if head == codec.overflow:
                return TAPE_OVERFLOW
            if tm.states[head] in tm.halt_states:
                one = 1 if codec.n_sym > 1 else 0
                return sum(1 for v in g.node_labels.values() if codec.decode(v)[0] == one)
        return NOT_HALTED_YET

    def input_fn(i: int) -> Graph:
        if i < 0 or codec.n_sym < 2:
            raise DomainError(f"input {i} has no unary encoding")
        return initial([tm.tape_alphabet[1]] * i)

    gtype = GraphType(codec.labels(), frozenset(), (fixed_nodes(nodes), no_edge_labels))
    m = Machine(gtype, rule, input_fn, output_fn, Mode.NODE_BASED, "turing")
    m.params = {"tape_length": tape_length, "head_position": head_position,
                "initial": initial(input_word if input_word is not None else []),
                "decode": lambda g: decode_tape(tm, g)}
    return m


def decode_tape(tm: TuringSpec, g: Graph) -> tuple:
    n_sym = len(tm.tape_alphabet)
    return tuple(tm.tape_alphabet[g.node_labels[i] % n_sym] for i in sorted(g.nodes))
