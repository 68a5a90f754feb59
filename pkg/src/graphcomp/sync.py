"""Spike-train synchrony and three discrete-time neuron models.

Spike trains are frozensets of integer step times inside ``[0, window)``.
Model 1 is symbolic: every neuron's output is a fixed injective function of
its total input, so two neurons agree exactly when their inputs agree.
Models 2 and 3 are stepwise activation simulations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

EPS = 1e-9

KINDS = ("relay", "threshold", "inhibitory", "port_input", "intrinsic")


class UnsupportedTopologyError(ValueError):
    pass


def train(times: Iterable[int], window: int | None = None) -> frozenset:
    out = frozenset(int(t) for t in times)
    if window is not None and any(not 0 <= t < window for t in out):
        raise ValueError(f"spike times must lie in [0, {window})")
    return out


def shift(times: frozenset, offset: int, window: int) -> frozenset:
    """Cyclic time shift; a bijection on the window, hence injective."""
    return frozenset((t + offset) % window for t in times)


def total_input(excitatory: Iterable[frozenset], inhibitory: Iterable[frozenset] = ()) -> frozenset:
    """Union of excitatory trains minus the union of inhibitory trains."""
    exc = frozenset().union(*excitatory)
    inh = frozenset().union(*inhibitory)
    return exc - inh


def exactly_synchronized(a: frozenset, b: frozenset) -> bool:
    return frozenset(a) == frozenset(b)


def sync_partition(trains: Mapping) -> list[frozenset]:
    """Group neurons with identical trains; blocks sorted by smallest member."""
    blocks: dict = {}
    for nid in sorted(trains, key=str):
        blocks.setdefault(frozenset(trains[nid]), []).append(nid)
    return sorted((frozenset(b) for b in blocks.values()), key=lambda b: min(map(str, b)))


def partial_sync_graph(trains: Mapping) -> tuple[set, set]:
    """Directed arcs ``a -> b`` when B is a strict subset of A, plus
    undirected arcs (as frozensets) between exactly synchronized neurons."""
    directed, undirected = set(), set()
    ids = sorted(trains, key=str)
    for a, b in combinations(ids, 2):
        A, B = frozenset(trains[a]), frozenset(trains[b])
        if A == B:
            undirected.add(frozenset((a, b)))
        elif B < A:
            directed.add((a, b))
        elif A < B:
            directed.add((b, a))
    return directed, undirected


def partially_synchronized(a: frozenset, b: frozenset) -> bool:
    return a <= b or b <= a


def correlation(a: frozenset, b: frozenset) -> float:
    """|A & B| / |A | B|, taken as 1 when both trains are silent."""
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def validate_distinctness(inputs: Mapping, declared_syncs: Iterable = (),
                          private: bool = True) -> list[str]:
    """Check the no-accidental-synchronization assumptions on port inputs.

    Reports silent inputs, declared syncs whose trains differ, pairs of
    proper subsets whose unions coincide without being forced to, and (when
    ``private``) trains lacking a spike that no other train has.
    """
    ids = sorted(inputs, key=str)
    problems = [f"input {i!r} is silent" for i in ids if not inputs[i]]
    parent = {i: i for i in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in declared_syncs:
        if inputs[a] != inputs[b]:
            problems.append(f"declared sync {a!r}~{b!r} but trains differ")
        parent[find(a)] = find(b)

    if len(ids) > 16:
        raise ValueError("subset check is exponential; at most 16 inputs")
    seen: dict = {}
    for size in range(1, len(ids)):
        for subset in combinations(ids, size):
            key = frozenset(find(i) for i in subset)
            union = frozenset().union(*(inputs[i] for i in subset))
            other = seen.setdefault(union, key)
            if other != key:
                problems.append(
                    f"union collision: {sorted(map(str, other))} vs {sorted(map(str, key))}")
    if private:
        classes: dict = {}
        for i in ids:
            classes.setdefault(find(i), inputs[i])
        for rep, spikes in classes.items():
            rest = frozenset().union(*(s for r, s in classes.items() if r != rep))
            if not spikes - rest:
                problems.append(f"input {rep!r} has no private spike time")
    return problems


def generate_distinct_inputs(n_ports: int, window: int, seed: int,
                             max_size: int = 8) -> dict[int, frozenset]:
    """Pairwise-disjoint nonempty trains, so every assumption holds by construction."""
    if n_ports < 0:
        raise ValueError("n_ports must be >= 0")
    if window < 2 * n_ports:
        raise ValueError(f"window {window} too small for {n_ports} distinct trains")
    if n_ports == 0:
        return {}
    rng = np.random.default_rng(seed)
    cap = max(2, min(max_size, window // n_ports))
    sizes = rng.integers(2, cap + 1, size=n_ports)
    times = rng.choice(window, size=int(sizes.sum()), replace=False)
    out, start = {}, 0
    for k, n in enumerate(sizes):
        out[k] = frozenset(int(t) for t in times[start:start + n])
        start += n
    return out


def generate_periodic_inputs(n: int, period: int, window: int, seed: int,
                             exclude_phases: Iterable[int] = ()) -> dict[int, frozenset]:
    """Period-``period`` trains with pairwise distinct phases."""
    phases = [p for p in range(period) if p not in set(exclude_phases)]
    if n > len(phases):
        raise ValueError(f"cannot place {n} distinct phases in period {period}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(phases, size=n, replace=False) if n else []
    return {k: frozenset(range(int(p), window, period)) for k, p in enumerate(chosen)}


# --- networks ---------------------------------------------------------------

@dataclass(frozen=True)
class NeuronSpec:
    """One neuron. Fields beyond ``kind`` apply to the models that use them.

    ``delay`` and ``feed``: a port neuron takes its feed (an external train,
    or the named upstream neuron) shifted by ``delay``. ``shift`` is a
    threshold unit's private model-1 transform. ``period`` is the intrinsic
    or natural cycle; ``phase`` the initial activation.
    """

    kind: str
    n: int = 1
    delay: int = 0
    feed: object = None
    shift: int = 1
    period: int = 10
    stores: bool = False
    refractory: int = 0
    override: float = math.inf
    threshold: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown neuron kind {self.kind!r}")
        if self.n < 1 or self.delay < 0 or self.period < 1 or self.refractory < 0:
            raise ValueError("threshold n >= 1, delays >= 0, periods >= 1 required")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        for f, default in _DEFAULTS.items():
            v = getattr(self, f)
            if v != default:
                d[f] = "inf" if v == math.inf else v
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NeuronSpec":
        d = dict(d)
        if d.get("override") == "inf":
            d["override"] = math.inf
        return cls(**d)


_DEFAULTS = {f: getattr(NeuronSpec("relay"), f) for f in
             ("n", "delay", "feed", "shift", "period", "stores", "refractory", "override",
              "threshold", "phase")}


@dataclass
class SyncNetwork:
    neurons: dict
    connections: list  # (src, dst, weight)
    external_inputs: dict = field(default_factory=dict)
    window: int = 200

    def __post_init__(self):
        for src, dst, _ in self.connections:
            if src not in self.neurons or dst not in self.neurons:
                raise ValueError(f"connection {src!r}->{dst!r} has a missing endpoint")
        for nid in self.external_inputs:
            spec = self.neurons.get(nid)
            if spec is None or spec.kind != "port_input" or spec.feed is not None:
                raise ValueError(f"external input to {nid!r}, which is not an open port")
        for nid, spec in self.neurons.items():
            if spec.feed is not None and spec.feed not in self.neurons:
                raise ValueError(f"{nid!r} is fed by missing neuron {spec.feed!r}")

    def presynaptic(self, nid) -> list:
        return [(s, w) for s, d, w in self.connections if d == nid]

    def with_inputs(self, inputs: Mapping) -> "SyncNetwork":
        return replace(self, external_inputs=dict(inputs))

    def to_dict(self) -> dict:
        return {
            "neurons": {str(k): v.to_dict() for k, v in sorted(self.neurons.items(), key=str)},
            "connections": [[s, d, w] for s, d, w in self.connections],
            "window": self.window,
            "external_inputs": {str(k): sorted(v) for k, v in
                                sorted(self.external_inputs.items(), key=str)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SyncNetwork":
        neurons = {k: NeuronSpec.from_dict(v) for k, v in d["neurons"].items()}
        conns = [(s, t, float(w)) for s, t, w in d.get("connections", [])]
        ext = {k: frozenset(v) for k, v in d.get("external_inputs", {}).items()}
        return cls(neurons, conns, ext, int(d.get("window", 200)))


@dataclass(frozen=True)
class SyncState:
    trains: dict

    def __getitem__(self, nid) -> frozenset:
        return self.trains[nid]

    def after(self, warmup: int) -> "SyncState":
        return SyncState({k: frozenset(t for t in v if t >= warmup)
                          for k, v in self.trains.items()})

    def to_dict(self) -> dict:
        return {str(k): sorted(v) for k, v in sorted(self.trains.items(), key=str)}


def _dependencies(net: SyncNetwork) -> dict:
    deps = {n: set() for n in net.neurons}
    for s, d, _ in net.connections:
        deps[d].add(s)
    for n, spec in net.neurons.items():
        if spec.feed is not None:
            deps[n].add(spec.feed)
    return deps


def _order(net: SyncNetwork, strict: bool) -> tuple[list, set]:
    """Topological order (ties by id); with ``strict=False`` cycles are
    broken and the dropped edges returned as delayed feedback."""
    deps = _dependencies(net)
    done, order, feedback = set(), [], set()
    remaining = sorted(net.neurons, key=str)
    while remaining:
        ready = [n for n in remaining if deps[n] <= done]
        if not ready:
            if strict:
                raise UnsupportedTopologyError("model 1 needs feedforward wiring")
            n = remaining[0]
            feedback |= {(s, n) for s in deps[n] - done}
            ready = [n]
        for n in ready:
            done.add(n)
            order.append(n)
        remaining = [n for n in remaining if n not in done]
    return order, feedback


def _is_inhibitory(net: SyncNetwork, src, weight: float) -> bool:
    return net.neurons[src].kind == "inhibitory" or weight < 0


# --- model 1 ----------------------------------------------------------------

def simulate_model1(net: SyncNetwork) -> SyncState:
    """Exact-synchrony model on a feedforward network.

    Relays and port neurons emit their total input unchanged; a port neuron's
    feed is first shifted by its port delay. A threshold unit fires on the
    common train of any group of at least ``n`` exactly synchronized
    presynaptic trains and shifts it by its own offset. Inhibitory neurons
    copy their input and are subtracted at their targets.
    """
    order, _ = _order(net, strict=True)
    W = net.window
    out: dict = {}
    for nid in order:
        spec = net.neurons[nid]
        exc, inh = [], []
        for src, w in net.presynaptic(nid):
            (inh if _is_inhibitory(net, src, w) else exc).append(out[src])
        if spec.kind == "port_input":
            feed = net.external_inputs.get(nid, frozenset()) if spec.feed is None else out[spec.feed]
            out[nid] = total_input([shift(feed, spec.delay, W), *exc], inh)
        elif spec.kind in ("relay", "inhibitory"):
            out[nid] = total_input(exc, inh)
        elif spec.kind == "threshold":
            groups: dict = {}
            for t in exc:
                if t:
                    groups[t] = groups.get(t, 0) + 1
            fired = frozenset().union(*(t for t, c in groups.items() if c >= spec.n))
            out[nid] = shift(fired - frozenset().union(*inh), spec.shift, W)
        else:
            raise UnsupportedTopologyError(f"model 1 has no {spec.kind!r} neurons")
    return SyncState(out)


# --- model 2 ----------------------------------------------------------------

def _port_train(net: SyncNetwork, nid, spec: NeuronSpec, fired_at: dict) -> frozenset:
    if spec.feed is None:
        base = net.external_inputs.get(nid, frozenset())
    else:
        base = frozenset(fired_at[spec.feed])
    return frozenset(t + spec.delay for t in base if t + spec.delay < net.window)


def simulate_model2(net: SyncNetwork) -> SyncState:
    """Activation model: weighted spikes add activation, firing resets it.

    Spikes along feedforward edges arrive on the same step; edges closing a
    cycle deliver on the next step. Non-storing neurons lose unused
    activation each step; intrinsic neurons gain ``1/period`` per step. A
    neuron that fired within the last ``refractory`` steps fires again only
    if activation reaches ``override``.
    """
    order, feedback = _order(net, strict=False)
    pre = {n: net.presynaptic(n) for n in order}
    act = {n: net.neurons[n].phase for n in order}
    last: dict = {n: None for n in order}
    fired_at: dict = {n: [] for n in order}
    ports = {}
    for t in range(net.window):
        now = set()
        for nid in order:
            spec = net.neurons[nid]
            if spec.kind == "port_input":
                if nid not in ports:
                    ports[nid] = _port_train(net, nid, spec, fired_at)
                if t in ports[nid]:
                    now.add(nid)
                    fired_at[nid].append(t)
                continue
            drive = 0.0
            for src, w in pre[nid]:
                hit = (t - 1 in fired_at[src][-1:]) if (src, nid) in feedback else src in now
                if hit:
                    drive += -abs(w) if _is_inhibitory(net, src, w) else w
            keep = spec.stores or spec.kind == "intrinsic"
            a = (act[nid] if keep else 0.0) + drive
            if spec.kind == "intrinsic":
                a += 1.0 / spec.period
            refractory = last[nid] is not None and t - last[nid] <= spec.refractory
            if a >= spec.threshold - EPS and (not refractory or a >= spec.override - EPS):
                now.add(nid)
                fired_at[nid].append(t)
                last[nid] = t
                a = 0.0
            act[nid] = a if keep else 0.0
    return SyncState({n: frozenset(v) for n, v in fired_at.items()})


# --- model 3 ----------------------------------------------------------------

@dataclass(frozen=True)
class Model3Params:
    enslave_threshold: float = 1.0


def simulate_model3(net: SyncNetwork, params: Model3Params = Model3Params()) -> SyncState:
    """Enslavement model.

    Every non-port neuron fires on its own every ``period`` steps and spikes
    propagate within the step. A synchronous group of feedforward inputs
    whose summed weight reaches the enslavement threshold captures the
    neuron: it then fires only with that group, ignoring weaker input,
    until the group is silent for a full natural cycle. A strictly stronger
    group takes over. A reciprocal partner's spike forces a free neuron to
    fire unless inhibition on the same step cancels it; a partner that is
    itself captured passes its captor on. Free neurons add weak input to
    their activation and inhibition subtracts from it (floored at zero).
    """
    theta = params.enslave_threshold
    ids = sorted(net.neurons, key=str)
    pre = {n: net.presynaptic(n) for n in ids}
    targets = {(s, d) for s, d, _ in net.connections}
    recip = {n: {s for s, _ in pre[n] if (n, s) in targets} for n in ids}
    act = {n: net.neurons[n].phase for n in ids}
    master: dict = {n: None for n in ids}
    strength = {n: 0.0 for n in ids}
    master_last = {n: -1 for n in ids}
    fired_at: dict = {n: [] for n in ids}
    port_ids = [n for n in ids if net.neurons[n].kind == "port_input"]
    port_order, _ = _order(net, strict=False)
    port_order = [n for n in port_order if n in port_ids]
    ports: dict = {}

    def captured(n, t) -> bool:
        return master[n] is not None and t - master_last[n] <= net.neurons[n].period

    for t in range(net.window):
        now = set()
        for nid in port_order:
            if nid not in ports:
                ports[nid] = _port_train(net, nid, net.neurons[nid], fired_at)
            if t in ports[nid]:
                now.add(nid)
        for n in ids:
            if master[n] is not None and not captured(n, t):
                master[n] = None
        changed = True
        while changed:
            changed = False
            for n in ids:
                if n in now or n in port_ids:
                    continue
                spec = net.neurons[n]
                fired_pre = [(s, w) for s, w in pre[n] if s in now]
                inh = sum(abs(w) for s, w in fired_pre if _is_inhibitory(net, s, w))
                exc = [(s, w) for s, w in fired_pre if not _is_inhibitory(net, s, w)]
                ff = [(s, w) for s, w in exc if s not in recip[n]]
                ff_w = sum(w for _, w in ff)
                is_captured = captured(n, t)
                fire = False
                if is_captured and any(s in master[n] for s, _ in exc):
                    fire = True
                elif ff_w - inh >= theta - EPS and (not is_captured or ff_w > strength[n] + EPS):
                    master[n], strength[n], fire = frozenset(s for s, _ in ff), ff_w, True
                else:
                    for s, w in exc:
                        if (s in recip[n] and captured(s, t) and w >= theta - EPS
                                and (not is_captured or w > strength[n] + EPS)):
                            master[n], strength[n], fire = frozenset({s}), w, True
                            break
                    if not fire and not is_captured:
                        rec_w = sum(w for s, w in exc if s in recip[n])
                        total = act[n] + 1.0 / spec.period + sum(w for _, w in exc) - inh
                        fire = rec_w - inh >= theta - EPS or total >= 1.0 - EPS
                if fire:
                    now.add(n)
                    if master[n] is not None:
                        master_last[n] = t
                    changed = True
        # a neuron that fired on its own can still be captured through a
        # partner captured on the same step
        changed = True
        while changed:
            changed = False
            for n in ids:
                if n not in now or n in port_ids or captured(n, t):
                    continue
                for s, w in pre[n]:
                    if s in now and s in recip[n] and captured(s, t) and w >= theta - EPS:
                        master[n], strength[n], master_last[n] = frozenset({s}), w, t
                        changed = True
                        break
        for n in ids:
            if master[n] is not None and any(s in now for s in master[n]):
                master_last[n] = t
            if n in now:
                fired_at[n].append(t)
            if n in port_ids:
                continue
            if n in now or captured(n, t):
                act[n] = 0.0
            else:
                spec = net.neurons[n]
                drive = sum(-abs(w) if _is_inhibitory(net, s, w) else w
                            for s, w in pre[n] if s in now)
                act[n] = max(0.0, act[n] + 1.0 / spec.period + drive)
        for nid in port_ids:
            if nid in now:
                fired_at[nid].append(t)
    return SyncState({n: frozenset(v) for n, v in fired_at.items()})


SIMULATORS = {"model1": simulate_model1, "model2": simulate_model2, "model3": simulate_model3}
