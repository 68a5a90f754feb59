"""Logic gates whose truth values are synchrony between pairs of neurons.

A port is a pair of neurons. TRUE means the pair fires in exact synchrony,
FALSE that it does not, and SILENT that neither neuron fires.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from itertools import product

from .sync import (
    NeuronSpec, SyncNetwork, SIMULATORS, generate_distinct_inputs, generate_periodic_inputs,
)


class TruthValue(str, enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    SILENT = "SILENT"

    def __str__(self) -> str:
        return self.value


T, F, S = TruthValue.TRUE, TruthValue.FALSE, TruthValue.SILENT

GATE_KINDS = ("AND1", "NOT1", "COPY1", "TRUE_TO_SILENT", "REPLICATE_IF",
              "AND2", "NOT2", "NOT3", "NAND3")
CONTINGENT = {"NOT3", "NAND3"}

MODEL1_WINDOW = 200
MODEL23_WINDOW = 120
PORT_DELAY_STEP = 48


def port_delay(k: int) -> int:
    """Per-port delay that desynchronizes inputs arriving on different ports."""
    return 2 + PORT_DELAY_STEP * k


@dataclass
class GateNetwork:
    net: SyncNetwork
    inputs: list
    outputs: list
    model: str
    latency: int
    name: str = ""
    inhibitory: bool = False
    drive: str = "random"
    warmup: int = 0
    exclude_phases: tuple = ()

    def __post_init__(self):
        if self.model not in SIMULATORS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.latency < 1:
            raise ValueError("latency must be >= 1")
        seen = set()
        for port in [*self.inputs, *self.outputs]:
            for nid in port:
                if nid not in self.net.neurons:
                    raise ValueError(f"port neuron {nid!r} missing from network")
            if frozenset(port) & seen and port not in self.outputs:
                raise ValueError(f"port {port} overlaps another port")
            seen |= frozenset(port)
        for x, y in self.inputs:
            for nid in (x, y):
                if self.net.neurons[nid].kind != "port_input":
                    raise ValueError(f"input port neuron {nid!r} is not a port_input")

    @property
    def contingent(self) -> bool:
        return self.name in CONTINGENT

    def to_dict(self) -> dict:
        return {"name": self.name, "model": self.model, "latency": self.latency,
                "inputs": [list(p) for p in self.inputs],
                "outputs": [list(p) for p in self.outputs], "net": self.net.to_dict()}


def _net(neurons: dict, conns, window: int) -> SyncNetwork:
    return SyncNetwork(neurons, [(s, d, float(w)) for s, d, w in conns], {}, window)


def _ports(*pairs) -> dict:
    return {nid: NeuronSpec("port_input", delay=port_delay(k))
            for k, pair in enumerate(pairs) for nid in pair}


def _and1() -> GateNetwork:
    neurons = _ports(("a", "c"), ("b", "d"))
    net = _net(neurons, [("b", "c", 1), ("a", "d", 1)], MODEL1_WINDOW)
    return GateNetwork(net, [("a", "c"), ("b", "d")], [("c", "d")], "model1", 1, "AND1")


def _not1() -> GateNetwork:
    neurons = _ports(("a", "c"))
    neurons.update(b=NeuronSpec("relay"), d=NeuronSpec("relay"),
                   e=NeuronSpec("threshold", n=2, shift=1))
    conns = [("a", "b", 1), ("c", "b", 1), ("a", "e", 1), ("c", "e", 1),
             ("a", "d", 1), ("c", "d", 1), ("e", "d", 1)]
    return GateNetwork(_net(neurons, conns, MODEL1_WINDOW), [("a", "c")], [("b", "d")],
                       "model1", 2, "NOT1")


def _copy1() -> GateNetwork:
    neurons = _ports(("a", "b"))
    neurons.update({n: NeuronSpec("relay") for n in "cdef"})
    conns = [("a", "c", 1), ("a", "e", 1), ("b", "d", 1), ("b", "f", 1)]
    return GateNetwork(_net(neurons, conns, MODEL1_WINDOW), [("a", "b")],
                       [("c", "d"), ("e", "f")], "model1", 1, "COPY1")


def _true_to_silent() -> GateNetwork:
    neurons = _ports(("a", "b"))
    neurons.update(h1=NeuronSpec("inhibitory"), h2=NeuronSpec("inhibitory"),
                   c=NeuronSpec("relay"), d=NeuronSpec("relay"))
    conns = [("a", "h1", 1), ("b", "h2", 1), ("a", "c", 1), ("h2", "c", 1),
             ("b", "d", 1), ("h1", "d", 1)]
    return GateNetwork(_net(neurons, conns, MODEL1_WINDOW), [("a", "b")], [("c", "d")],
                       "model1", 2, "TRUE_TO_SILENT", inhibitory=True)


def _replicate_if() -> GateNetwork:
    neurons = _ports(("a", "b"), ("c", "d"))
    neurons.update({n: NeuronSpec("relay") for n in "efgh"})
    conns = [(s, t, 1) for t, srcs in (("e", "acd"), ("f", "bcd"), ("g", "cab"), ("h", "dab"))
             for s in srcs]
    return GateNetwork(_net(neurons, conns, MODEL1_WINDOW), [("a", "b"), ("c", "d")],
                       [("e", "f"), ("g", "h")], "model1", 1, "REPLICATE_IF")


def _zero_ports(*names) -> dict:
    return {n: NeuronSpec("port_input") for n in names}


def _and2() -> GateNetwork:
    neurons = _zero_ports("A", "B", "C", "D")
    neurons.update(E=NeuronSpec("relay", stores=True), F=NeuronSpec("relay", stores=True))
    conns = [("A", "E", .5), ("C", "E", .5), ("B", "F", .5), ("D", "F", .5)]
    return GateNetwork(_net(neurons, conns, MODEL23_WINDOW), [("A", "B"), ("C", "D")],
                       [("E", "F")], "model2", 1, "AND2")


def _not2() -> GateNetwork:
    neurons = _zero_ports("A", "B")
    neurons.update(C=NeuronSpec("intrinsic", period=10),
                   D=NeuronSpec("relay", refractory=8, override=1.5))
    conns = [("A", "D", .8), ("B", "D", .8), ("C", "D", 1.0)]
    return GateNetwork(_net(neurons, conns, MODEL23_WINDOW), [("A", "B")], [("C", "D")],
                       "model2", 1, "NOT2", drive="periodic", warmup=20, exclude_phases=(9,))


def _not3() -> GateNetwork:
    neurons = _zero_ports("A", "B")
    neurons.update(C=NeuronSpec("relay", period=10, phase=0.0),
                   D=NeuronSpec("relay", period=10, phase=0.5))
    conns = [("A", "D", .8), ("B", "C", -1.5), ("C", "D", 1.0), ("D", "C", 1.0)]
    return GateNetwork(_net(neurons, conns, MODEL23_WINDOW), [("A", "B")], [("C", "D")],
                       "model3", 1, "NOT3", drive="periodic", warmup=20)


def _nand3() -> GateNetwork:
    neurons = _zero_ports("A", "B", "C", "D")
    neurons.update(E=NeuronSpec("relay", period=10, phase=0.0),
                   F=NeuronSpec("relay", period=10, phase=0.5))
    conns = [("A", "E", .6), ("B", "E", .6), ("C", "F", .6), ("D", "F", .6),
             ("E", "F", 1.0), ("F", "E", 1.0), ("B", "C", -.3)]
    return GateNetwork(_net(neurons, conns, MODEL23_WINDOW), [("A", "B"), ("C", "D")],
                       [("E", "F")], "model3", 1, "NAND3", drive="periodic", warmup=20)


_BUILDERS = {
    "AND1": _and1, "NOT1": _not1, "COPY1": _copy1, "TRUE_TO_SILENT": _true_to_silent,
    "REPLICATE_IF": _replicate_if, "AND2": _and2, "NOT2": _not2, "NOT3": _not3,
    "NAND3": _nand3,
}


def build_gate(kind: str) -> GateNetwork:
    try:
        return _BUILDERS[kind]()
    except KeyError:
        raise ValueError(f"unknown gate kind {kind!r}; choose from {', '.join(GATE_KINDS)}") from None


# --- evaluation -------------------------------------------------------------

def drive_trains(g: GateNetwork, inputs, seed: int) -> dict:
    """External trains for the open input ports of ``g``.

    A TRUE port gets one train on both neurons, FALSE two distinct trains,
    SILENT none.
    """
    inputs = list(inputs)
    if len(inputs) != len(g.inputs):
        raise ValueError(f"{g.name or 'gate'} takes {len(g.inputs)} inputs, got {len(inputs)}")
    n_sources = sum({T: 1, F: 2, S: 0}[TruthValue(v)] for v in inputs)
    W = g.net.window
    if g.drive == "periodic":
        trains = generate_periodic_inputs(n_sources, 10, W, seed, g.exclude_phases)
    else:
        trains = generate_distinct_inputs(n_sources, W, seed)
    ext, k = {}, 0
    for (x, y), v in zip(g.inputs, inputs):
        v = TruthValue(v)
        if v is S:
            ext[x] = ext[y] = frozenset()
        elif v is T:
            ext[x] = ext[y] = trains[k]
            k += 1
        else:
            ext[x], ext[y] = trains[k], trains[k + 1]
            k += 2
    return ext


def read_port(g: GateNetwork, state, port) -> TruthValue:
    x, y = (state[n] for n in port)
    if g.inhibitory and not x and not y:
        return S
    return T if x == y else F


def simulate_gate(g: GateNetwork, inputs, seed: int):
    state = SIMULATORS[g.model](g.net.with_inputs(drive_trains(g, inputs, seed)))
    return state.after(g.warmup) if g.warmup else state


def evaluate_gate(g: GateNetwork, inputs, seed: int = 0) -> tuple:
    state = simulate_gate(g, inputs, seed)
    return tuple(read_port(g, state, p) for p in g.outputs)


def cross_synchronized(g: GateNetwork, inputs, seed: int = 0) -> bool:
    """True when every output neuron fires the same nonempty train."""
    state = simulate_gate(g, inputs, seed)
    trains = {state[n] for p in g.outputs for n in p}
    return len(trains) == 1 and bool(next(iter(trains)))


# --- truth tables -----------------------------------------------------------

def table_from(fn, n_in: int) -> dict:
    """Truth table over TRUE/FALSE inputs from a function on booleans."""
    out = {}
    for bits in product((True, False), repeat=n_in):
        res = fn(*bits)
        res = res if isinstance(res, tuple) else (res,)
        out[tuple(T if b else F for b in bits)] = tuple(T if r else F for r in res)
    return out


TABLES = {
    "AND": table_from(lambda a, b: a and b, 2),
    "OR": table_from(lambda a, b: a or b, 2),
    "NOT": table_from(lambda a: not a, 1),
    "NAND": table_from(lambda a, b: not (a and b), 2),
    "COPY": table_from(lambda a: (a, a), 1),
    "XOR": table_from(lambda a, b: a != b, 2),
    "IDENTITY2": table_from(lambda a, b: (a, b), 2),
    "FULL_ADDER": table_from(lambda a, b, c: ((a + b + c) % 2 == 1, a + b + c >= 2), 3),
    "TRUE_TO_SILENT": {(T,): (S,), (F,): (F,)},
}

EXPECTED = {"AND1": "AND", "AND2": "AND", "NOT1": "NOT", "NOT2": "NOT", "NOT3": "NOT",
            "COPY1": "COPY", "NAND3": "NAND", "TRUE_TO_SILENT": "TRUE_TO_SILENT",
            "REPLICATE_IF": "IDENTITY2"}


@dataclass
class RowResult:
    inputs: tuple
    expected: tuple
    observed: list
    passed: bool
    cross_sync: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"inputs": [str(v) for v in self.inputs],
             "expected": [str(v) for v in self.expected],
             "observed": [[str(v) for v in obs] for obs in self.observed],
             "pass": self.passed}
        if self.cross_sync:
            d["cross_sync"] = self.cross_sync
        return d


@dataclass
class TruthTableReport:
    gate: str
    rows: list
    trials: int
    contingent: bool = False

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failing_rows(self) -> list:
        return [r for r in self.rows if not r.passed]

    def to_dict(self) -> dict:
        d = {"gate": self.gate, "trials": self.trials, "pass": self.passed,
             "rows": [r.to_dict() for r in self.rows]}
        if self.contingent:
            d["parameterization_contingent"] = True
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_truth_table(g: GateNetwork, expected: dict, trials: int = 25, seed: int = 0,
                       cross_sync: dict | None = None) -> TruthTableReport:
    """Evaluate every row with ``trials`` seeds.

    ``cross_sync`` optionally maps rows to whether all output neurons must
    share one train; a row passes only if that observable matches too.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows = []
    for inputs, want in expected.items():
        observed, xs = [], []
        ok = True
        for k in range(trials):
            s = seed * 1_000_003 + k
            got = evaluate_gate(g, inputs, s)
            observed.append(got)
            ok &= got == tuple(want)
            if cross_sync is not None:
                x = cross_synchronized(g, inputs, s)
                xs.append(x)
                ok &= x == cross_sync.get(inputs, False)
        rows.append(RowResult(tuple(inputs), tuple(want), observed, ok, xs))
    return TruthTableReport(g.name, rows, trials, g.contingent)


# --- composition ------------------------------------------------------------

def _rename(g: GateNetwork, prefix: str) -> GateNetwork:
    def r(nid):
        return f"{prefix}{nid}"
    neurons = {r(n): replace(s, feed=None if s.feed is None else r(s.feed))
               for n, s in g.net.neurons.items()}
    net = SyncNetwork(neurons, [(r(s), r(d), w) for s, d, w in g.net.connections], {},
                      g.net.window)
    return replace(g, net=net, inputs=[tuple(map(r, p)) for p in g.inputs],
                   outputs=[tuple(map(r, p)) for p in g.outputs])


def _spread_shifts(neurons: dict, window: int) -> dict:
    """Give every threshold unit its own shift so distinct units never
    produce coinciding trains by accident."""
    out = dict(neurons)
    thresholds = sorted(n for n, s in neurons.items() if s.kind == "threshold")
    for k, n in enumerate(thresholds):
        out[n] = replace(neurons[n], shift=1 + (37 * k) % (window - 1))
    return out


def compose(a: GateNetwork, b: GateNetwork, wiring: dict | None = None) -> GateNetwork:
    """Feed outputs of ``a`` into inputs of ``b``.

    ``wiring`` maps output-port indices of ``a`` to input-port indices of
    ``b``. A wired input port of ``b`` keeps its port delay but takes its
    train from the matching output neurons of ``a``. The result exposes the
    unwired outputs of ``a`` followed by the outputs of ``b``, and the inputs
    of ``a`` followed by the unwired inputs of ``b``. An empty wiring places
    the gates side by side.
    """
    wiring = dict(wiring or {})
    if a.model != b.model:
        raise ValueError(f"cannot compose {a.model} with {b.model}")
    if a.net.window != b.net.window:
        raise ValueError("composed gates must share a window")
    if len(set(wiring.values())) != len(wiring):
        raise ValueError("wiring must be injective")
    for o, i in wiring.items():
        if not 0 <= o < len(a.outputs) or not 0 <= i < len(b.inputs):
            raise ValueError(f"dangling wiring {o}->{i}")
    a, b = _rename(a, "0/"), _rename(b, "1/")
    neurons = {**a.net.neurons, **b.net.neurons}
    for o, i in wiring.items():
        for src, dst in zip(a.outputs[o], b.inputs[i]):
            neurons[dst] = replace(neurons[dst], feed=src)
    neurons = _spread_shifts(neurons, a.net.window)
    net = SyncNetwork(neurons, a.net.connections + b.net.connections, {}, a.net.window)
    outputs = [p for k, p in enumerate(a.outputs) if k not in wiring] + b.outputs
    inputs = a.inputs + [p for k, p in enumerate(b.inputs) if k not in wiring.values()]
    latency = a.latency + b.latency if wiring else max(a.latency, b.latency)
    return GateNetwork(net, inputs, outputs, a.model, latency,
                       f"({a.name}>{b.name})" if wiring else f"({a.name}|{b.name})",
                       a.inhibitory or b.inhibitory, a.drive, max(a.warmup, b.warmup))


def select_outputs(g: GateNetwork, indices) -> GateNetwork:
    return replace(g, outputs=[g.outputs[k] for k in indices])


def nand_gate() -> GateNetwork:
    g = compose(build_gate("AND1"), build_gate("NOT1"), {0: 0})
    return replace(g, name="NAND")


_PRIMITIVES = {"NAND": (nand_gate, 2, 1), "AND": (lambda: build_gate("AND1"), 2, 1),
               "NOT": (lambda: build_gate("NOT1"), 1, 1),
               "COPY": (lambda: build_gate("COPY1"), 1, 2)}


def build_netlist(inputs, gates, outputs, name: str = "netlist") -> GateNetwork:
    """Wire model-1 gates into a circuit.

    ``gates`` is a list of ``(kind, in_signals, out_signals)`` in dependency
    order with kinds NAND, AND, NOT or COPY. Signals needed more than once
    are fanned out with COPY gates; leftover copies are left unexposed.
    """
    inputs = list(inputs)
    net = None
    avail: dict = {}

    def add(g: GateNetwork, wiring: dict) -> list:
        """Compose ``g`` after the current net; return its output indices."""
        nonlocal net
        keep = [k for k in range(len(net.outputs)) if k not in wiring]
        remap = {old: new for new, old in enumerate(keep)}
        for sig in avail:
            avail[sig] = [remap[k] for k in avail[sig] if k in remap]
        net = compose(net, g, wiring)
        return list(range(len(keep), len(net.outputs)))

    def provide(sig, count: int) -> None:
        while len(avail.get(sig, [])) < count:
            if not avail.get(sig):
                raise ValueError(f"signal {sig!r} is never produced")
            port = avail[sig].pop()
            ports = add(build_gate("COPY1"), {port: 0})
            avail[sig].extend(ports)

    uses: dict = {}
    for sig in [s for _, ins, _ in gates for s in ins] + list(outputs):
        uses[sig] = uses.get(sig, 0) + 1
    for k, x in enumerate(inputs):
        copy = build_gate("COPY1")
        net = copy if net is None else compose(net, copy, {})
        avail[x] = [2 * k, 2 * k + 1]
    if net is None:
        raise ValueError("a netlist needs at least one input")
    for x in inputs:
        provide(x, uses.get(x, 0))
    for kind, ins, outs in gates:
        builder, n_in, n_out = _PRIMITIVES[kind]
        if len(ins) != n_in or len(outs) != n_out:
            raise ValueError(f"{kind} takes {n_in} inputs and gives {n_out} outputs")
        wiring = {}
        for k, sig in enumerate(ins):
            if not avail.get(sig):
                raise ValueError(f"signal {sig!r} is used before it is produced")
            wiring[avail[sig].pop(0)] = k
        for sig, port in zip(outs, add(builder(), wiring)):
            avail.setdefault(sig, []).append(port)
        for sig in outs:
            provide(sig, uses.get(sig, 0))
    chosen = []
    for sig in outputs:
        if not avail.get(sig):
            raise ValueError(f"output signal {sig!r} is never produced")
        chosen.append(avail[sig].pop(0))
    return replace(select_outputs(net, chosen), name=name)


XOR_NETLIST = (
    ["a", "b"],
    [("NAND", ["a", "b"], ["n1"]), ("NAND", ["a", "n1"], ["n2"]),
     ("NAND", ["b", "n1"], ["n3"]), ("NAND", ["n2", "n3"], ["x"])],
    ["x"],
)


def _xor_steps(a, b, out, tag):
    n1, n2, n3 = (f"{tag}{k}" for k in range(3))
    return [("NAND", [a, b], [n1]), ("NAND", [a, n1], [n2]),
            ("NAND", [b, n1], [n3]), ("NAND", [n2, n3], [out])]


FULL_ADDER_NETLIST = (
    ["a", "b", "cin"],
    _xor_steps("a", "b", "s1", "p") + _xor_steps("s1", "cin", "sum", "q")
    + [("NAND", ["a", "b"], ["g"]), ("NAND", ["s1", "cin"], ["h"]),
       ("NAND", ["g", "h"], ["cout"])],
    ["sum", "cout"],
)


def xor_gate() -> GateNetwork:
    return build_netlist(*XOR_NETLIST, name="XOR")


def full_adder() -> GateNetwork:
    return build_netlist(*FULL_ADDER_NETLIST, name="FULL_ADDER")


def eval_netlist(inputs, gates, outputs, values) -> tuple:
    """Boolean evaluation of a netlist, used as a reference."""
    env = dict(zip(inputs, values))
    ops = {"NAND": lambda a, b: (not (a and b),), "AND": lambda a, b: (a and b,),
           "NOT": lambda a: (not a,), "COPY": lambda a: (a, a)}
    for kind, ins, outs in gates:
        env.update(zip(outs, ops[kind](*(env[s] for s in ins))))
    return tuple(env[s] for s in outputs)
