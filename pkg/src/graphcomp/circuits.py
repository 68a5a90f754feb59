"""Unit-delay boolean circuits: loop memory, clocks and a tree RAM.

Every gate reads its sources' outputs from the previous tick, so a signal
takes one tick per gate. All gate outputs start at 0.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

ARITY = {"AND": None, "OR": None, "NAND": None, "NOT": 1, "CONST": 0, "INPUT": 0,
         "OUTPUT": 1}


class ProtocolTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class Gate:
    op: str
    inputs: tuple = ()
    value: int = 0

    def __post_init__(self):
        if self.op not in ARITY:
            raise ValueError(f"unknown primitive {self.op!r}")
        want = ARITY[self.op]
        if want is None and len(self.inputs) < 1:
            raise ValueError(f"{self.op} needs at least one input")
        if want is not None and len(self.inputs) != want:
            raise ValueError(f"{self.op} takes {want} inputs, got {len(self.inputs)}")


@dataclass(frozen=True)
class Circuit:
    gates: dict
    ports: dict = field(default_factory=dict)
    state: dict = field(default_factory=dict)

    def __post_init__(self):
        for gid, g in self.gates.items():
            for src in g.inputs:
                if src not in self.gates:
                    raise ValueError(f"gate {gid!r} reads missing gate {src!r}")
        for name, gid in self.ports.items():
            if gid not in self.gates:
                raise ValueError(f"port {name!r} names missing gate {gid!r}")
        state = {gid: int(self.state.get(gid, 0)) for gid in self.gates}
        object.__setattr__(self, "state", state)

    @property
    def input_gates(self) -> list:
        return [gid for gid, g in self.gates.items() if g.op == "INPUT"]

    def read(self, port: str) -> int:
        return self.state[self.ports[port]]

    def to_dict(self) -> dict:
        return {"gates": {str(k): {"op": g.op, "inputs": list(g.inputs), "value": g.value}
                          for k, g in self.gates.items()},
                "ports": dict(self.ports), "state": {str(k): v for k, v in self.state.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Circuit":
        gates = {k: Gate(v["op"], tuple(v["inputs"]), v.get("value", 0))
                 for k, v in d["gates"].items()}
        return cls(gates, dict(d.get("ports", {})), dict(d.get("state", {})))


def _eval(g: Gate, prev: dict) -> int:
    vals = [prev[s] for s in g.inputs]
    if g.op == "AND":
        return int(all(vals))
    if g.op == "OR":
        return int(any(vals))
    if g.op == "NAND":
        return int(not all(vals))
    if g.op == "NOT":
        return int(not vals[0])
    if g.op == "OUTPUT":
        return vals[0]
    return g.value  # CONST


def tick(c: Circuit, inputs: dict | None = None) -> Circuit:
    """One synchronous step. ``inputs`` maps INPUT gate ids or port names to bits."""
    inputs = {c.ports.get(k, k): int(v) for k, v in (inputs or {}).items()}
    missing = [gid for gid in c.input_gates if gid not in inputs]
    if missing:
        raise ValueError(f"no bit given for input gates {missing}")
    prev = c.state
    new = {gid: inputs[gid] if g.op == "INPUT" else _eval(g, prev) for gid, g in c.gates.items()}
    return Circuit(c.gates, c.ports, new)


class Simulator:
    """Mutable stepping wrapper that holds input levels between ticks."""

    def __init__(self, c: Circuit):
        self.circuit = c
        self.levels = {gid: 0 for gid in c.input_gates}
        self.t = 0
        self.trace: list = []

    def set(self, **levels) -> None:
        for name, bit in levels.items():
            self.levels[self.circuit.ports.get(name, name)] = int(bit)

    def step(self, n: int = 1, record=()) -> None:
        for _ in range(n):
            self.circuit = tick(self.circuit, self.levels)
            self.t += 1
            for port in record:
                self.trace.append((self.t, port, self.circuit.read(port)))

    def read(self, port: str) -> int:
        return self.circuit.read(port)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("tick", "port", "bit"))
        w.writerows(self.trace)
        return buf.getvalue()


class Builder:
    def __init__(self):
        self.gates: dict = {}
        self.ports: dict = {}
        self._n = 0

    def add(self, op: str, *inputs, name: str | None = None, value: int = 0) -> str:
        if name is None:
            name = f"g{self._n}"
            self._n += 1
        if name in self.gates:
            raise ValueError(f"duplicate gate {name!r}")
        self.gates[name] = Gate(op, tuple(inputs), value)
        return name

    def placeholder(self, name: str) -> str:
        """Reserve a gate id to be defined later, for feedback loops."""
        self.gates[name] = None
        return name

    def define(self, name: str, op: str, *inputs) -> str:
        self.gates[name] = Gate(op, tuple(inputs))
        return name

    def input(self, port: str) -> str:
        gid = self.add("INPUT", name=f"in:{port}")
        self.ports[port] = gid
        return gid

    def output(self, port: str, src: str) -> str:
        gid = self.add("OUTPUT", src, name=f"out:{port}")
        self.ports[port] = gid
        return gid

    def delay(self, src: str, n: int) -> str:
        for _ in range(n):
            src = self.add("OR", src)
        return src

    def stretch(self, src: str, n: int) -> str:
        """High for ``n`` consecutive ticks after each rising input."""
        taps = [src]
        for _ in range(n - 1):
            taps.append(self.add("OR", taps[-1]))
        return self.add("OR", *taps)

    def build(self) -> Circuit:
        undefined = [k for k, g in self.gates.items() if g is None]
        if undefined:
            raise ValueError(f"undefined gates {undefined}")
        return Circuit(dict(self.gates), dict(self.ports))


ERASE_STRETCH = 2
WRITE_STRETCH = 4


def memory_core(b: Builder, erase: str, write: str, prefix: str = "") -> str:
    """Two-gate loop holding one bit; returns the gate carrying the bit.

    The loop has two positions, so erase is stretched to cover both. Write
    is stretched past the end of an adjacent erase so that it wins.
    """
    m = b.placeholder(f"{prefix}m")
    not_erase = b.add("NOT", b.stretch(erase, ERASE_STRETCH))
    hold = b.add("AND", m, not_erase, name=f"{prefix}hold")
    b.define(m, "OR", hold, b.stretch(write, WRITE_STRETCH))
    return m


def build_memory_cell() -> tuple[Circuit, dict]:
    b = Builder()
    m = memory_core(b, b.input("erase"), b.input("write"))
    b.output("read", m)
    c = b.build()
    return c, dict(c.ports)


def frontend(b: Builder, value: str, write_now: str, prefix: str = "") -> str:
    """Turn a ``write_now`` rise at t into erase at t+1 and write=value at t+2."""
    erase = b.add("AND", write_now, b.add("NOT", write_now), name=f"{prefix}erase")
    write = b.add("AND", erase, b.delay(value, 1), name=f"{prefix}write")
    return memory_core(b, erase, write, prefix)


def build_frontend_cell() -> tuple[Circuit, dict]:
    b = Builder()
    m = frontend(b, b.input("value"), b.input("write_now"))
    b.output("read", m)
    b.ports["erase"], b.ports["write"] = "erase", "write"
    c = b.build()
    return c, dict(c.ports)


def build_clock(period: int) -> tuple[Circuit, dict]:
    """Ring of ``period`` OR stages seeded once by a first-tick strobe."""
    if period < 2:
        raise ValueError("clock period must be >= 2")
    b = Builder()
    one = b.add("CONST", value=1)
    zero = b.add("CONST", value=0)
    strobe = b.add("AND", one, b.add("NOT", one))
    ring = [b.placeholder(f"r{k}") for k in range(period)]
    b.define(ring[0], "OR", ring[-1], strobe)
    for k in range(1, period):
        b.define(ring[k], "OR", ring[k - 1], zero)
    b.output("clock_out", ring[0])
    c = b.build()
    return c, dict(c.ports)


# --- RAM --------------------------------------------------------------------

@dataclass
class RamHandle:
    sim: Simulator
    address_bits: int
    settle_steps: int
    leaf_write: list
    leaf_read: list
    cells: list

    @property
    def circuit(self) -> Circuit:
        return self.sim.circuit

    def _drive(self, addr: int, **levels) -> None:
        if not 0 <= addr < 2 ** self.address_bits:
            raise ValueError(f"address {addr} outside 0..{2 ** self.address_bits - 1}")
        for i in range(self.address_bits):
            levels[f"address[{i}]"] = addr >> (self.address_bits - 1 - i) & 1
        self.sim.set(**levels)

    def write(self, addr: int, bit: int) -> "RamHandle":
        self._drive(addr, data_in=bit, active_write=1, active_read=0)
        self.sim.step(self.settle_steps)
        self.sim.set(active_write=0)
        self.sim.step(self.settle_steps)
        return self

    def read(self, addr: int) -> int:
        self._drive(addr, active_write=0, active_read=1)
        for _ in range(4 * self.settle_steps):
            self.sim.step()
            if self.sim.read("result_arrived"):
                bit = self.sim.read("data_out")
                break
        else:
            raise ProtocolTimeout(f"result_arrived stayed low reading address {addr}")
        self.sim.set(active_read=0)
        self.sim.step(self.settle_steps)
        return bit

    def idle(self, n: int) -> None:
        self.sim.set(active_write=0, active_read=0)
        self.sim.step(n)

    def stored(self) -> list:
        return [self.circuit.state[m] for m in self.cells]

    def active_leaves(self, kind: str = "write") -> list:
        gates = self.leaf_write if kind == "write" else self.leaf_read
        return [k for k, g in enumerate(gates) if self.circuit.state[g]]


def build_ram(address_bits: int) -> RamHandle:
    """Binary routing tree over ``2**address_bits`` frontend cells.

    Each bank has an active bit per direction: on when its parent is active
    and its bank constant equals its address bit. The root's own active bit
    drops once either first-level bank is on, so those banks latch their bit
    while the driver keeps the request line up; deeper banks follow their
    parent and the held address. Leaves pass their stored bit,
    gated by their read-active bit, down an OR tree next to a matching
    result-arrived tree.
    """
    if not 1 <= address_bits <= 6:
        raise ValueError("address_bits must be in 1..6")
    b = Builder()
    addr = [b.input(f"address[{i}]") for i in range(address_bits)]
    not_addr = [b.add("NOT", a) for a in addr]
    data = b.input("data_in")
    req = {"write": b.input("active_write"), "read": b.input("active_read")}

    leaves = {}
    for kind, line in req.items():
        first = [b.placeholder(f"{kind}:{bank}") for bank in "01"]
        root = b.add("AND", line, b.add("NOT", b.add("OR", *first)), name=f"{kind}:root")
        level = {"": root}
        for depth in range(address_bits):
            nxt = {}
            for path, parent in level.items():
                for bank in "01":
                    bit = addr[depth] if bank == "1" else not_addr[depth]
                    name = f"{kind}:{path}{bank}"
                    if depth == 0:
                        # latched, since the root drops once this bank is on
                        b.define(name, "AND", b.add("OR", name, parent), b.add("AND", line, bit))
                    else:
                        b.define(name, "AND", parent, bit)
                    nxt[path + bank] = name
            level = nxt
        leaves[kind] = [level[format(k, f"0{address_bits}b")] for k in range(2 ** address_bits)]

    cells, outs, arrived = [], [], []
    for k in range(2 ** address_bits):
        m = frontend(b, b.delay(data, 1), leaves["write"][k], prefix=f"cell{k}:")
        cells.append(m)
        outs.append(b.add("AND", m, leaves["read"][k]))
        arrived.append(b.add("OR", leaves["read"][k]))
    while len(outs) > 1:
        outs = [b.add("OR", outs[i], outs[i + 1]) for i in range(0, len(outs), 2)]
        arrived = [b.add("OR", arrived[i], arrived[i + 1]) for i in range(0, len(arrived), 2)]
    b.output("data_out", outs[0])
    b.output("result_arrived", arrived[0])
    c = b.build()
    settle = 2 * (address_bits + 2) + FRONTEND_SETTLE
    return RamHandle(Simulator(c), address_bits, settle, leaves["write"], leaves["read"], cells)


# write_now rise -> erase -> write -> stretched write fills the loop
FRONTEND_SETTLE = 2 + WRITE_STRETCH + 1
