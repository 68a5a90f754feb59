"""End-to-end acceptance checks, one per criterion, each with a time budget.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``;
either way one PASS/FAIL line is printed per criterion.
"""

import itertools
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from graphcomp import circuits, cycles, dynamics, gates, sync
from graphcomp.core import (
    ArcGateSpec, Graph, build_arc_gate_machine, build_grid_ca_machine, build_turing_machine_graph,
    decode_tape, grid_from_rows, undirected, grid_to_rows, place, run_graph, step,
)

sys.path.insert(0, os.path.dirname(__file__))
from oracles import brute_force_cycles, life_array_step  # noqa: E402
from test_core import halting_tms  # noqa: E402

T, F = gates.T, gates.F
TRIALS = 25


def check_arc_gates():
    for spec in (ArcGateSpec.triangle(), ArcGateSpec.square()):
        m = build_arc_gate_machine([spec])
        for a, b in itertools.product((False, True), repeat=2):
            nxt = step(m, m.input_fn(int(a) | int(b) << 1))
            if nxt.has_arc(*spec.output_arc) != (not (a and b)):
                return False, f"row {(a, b)}"
    return True, "8/8 rows"


def _suite(kinds, cross=None):
    reports = []
    for kind in kinds:
        g = gates.build_gate(kind)
        reports.append(gates.verify_truth_table(
            g, gates.TABLES[gates.EXPECTED[kind]], TRIALS, 0, (cross or {}).get(kind)))
    bad = [f"{r.gate} {row.inputs}" for r in reports for row in r.failing_rows()]
    return reports, bad


def check_model1_gates():
    reports, bad = _suite(["AND1", "NOT1", "COPY1"])
    nand = gates.nand_gate()
    for row in gates.TABLES["AND"]:
        want = tuple(F if v == T else T for v in gates.TABLES["AND"][row])
        for k in range(TRIALS):
            if gates.evaluate_gate(nand, row, k) != want:
                bad.append(f"NAND {row}")
                break
    n = sum(len(r.rows) for r in reports) + 4
    return not bad, f"{n - len(bad)}/{n} rows" + (f", failing {bad}" if bad else "")


def check_routing_gates():
    reports, bad = _suite(["TRUE_TO_SILENT", "REPLICATE_IF"],
                          {"REPLICATE_IF": {(T, T): True}})
    t2s = gates.TABLES["TRUE_TO_SILENT"]
    ok = t2s[(T,)] == (gates.S,) and t2s[(F,)] == (F,)
    return ok and not bad, f"{sum(len(r.rows) for r in reports)} rows" + (
        f", failing {bad}" if bad else "")


def check_timing_gates():
    reports, bad = _suite(["AND2", "NOT2", "NOT3", "NAND3"])
    labelled = sum(r.contingent for r in reports)
    return not bad and labelled >= 2, (
        f"{len(reports) - len({b.split()[0] for b in bad})}/4 gates, "
        f"{labelled} labelled parameterization-contingent" + (f", failing {bad}" if bad else ""))


def check_universal_circuits():
    bad = []
    for build, name in ((gates.xor_gate, "XOR"), (gates.full_adder, "FULL_ADDER")):
        rep = gates.verify_truth_table(build(), gates.TABLES[name], trials=3)
        bad += [f"{name} {r.inputs}" for r in rep.failing_rows()]
    return not bad, "XOR 4 rows, adder 8 rows" + (f", failing {bad}" if bad else "")


def check_synchrony():
    rng = np.random.default_rng(0)
    pool = [frozenset(np.flatnonzero(rng.random(6) < 0.5).tolist()) for _ in range(40)]
    for _ in range(10_000):
        a, b, c = (pool[i] for i in rng.integers(0, len(pool), 3))
        if not sync.exactly_synchronized(a, a):
            return False, "reflexivity"
        if sync.exactly_synchronized(a, b) != sync.exactly_synchronized(b, a):
            return False, "symmetry"
        if (sync.exactly_synchronized(a, b) and sync.exactly_synchronized(b, c)
                and not sync.exactly_synchronized(a, c)):
            return False, "transitivity"
        r = sync.correlation(a, b)
        if not 0.0 <= r <= 1.0 or (r == 1.0) != (a == b):
            return False, f"correlation {r}"
    x, y, z = frozenset({0}), frozenset({0, 1}), frozenset({1})
    if not (sync.partially_synchronized(x, y) and sync.partially_synchronized(y, z)
            and not sync.partially_synchronized(x, z)):
        return False, "partial sync is transitive on the witness"
    r = sync.correlation(frozenset({0, 5, 10, 15, 20}), frozenset({5, 15}))
    return abs(r - 0.4) < 1e-12, f"10^4 triples, worked correlation {r}"


def check_inhibition():
    got = sync.total_input([{5, 15}, {0, 10}], [{7, 10}])
    return got == {0, 5, 15}, f"{sorted(got)}"


def check_circle_map():
    omegas = np.random.default_rng(0).random(100)
    rigid = np.max(np.abs(dynamics.rotation_numbers(omegas, 0.0, n_iter=10_000) - omegas))
    rows = dynamics.staircase_sweep(1.0, 0.0, 1.0, 401)
    rho = np.array([r.rho for r in rows])
    drop = float(np.min(np.diff(rho)))
    found = {(p, q) for p, q, _, _ in dynamics.plateaus(rows)}
    locked = [r for r in rows if r.locked][::10]
    om = np.repeat([r.omega for r in locked], 10)
    th = np.random.default_rng(1).random(len(om))
    spread = np.abs(dynamics.rotation_numbers(om, 1.0, th).reshape(-1, 10)
                    - np.array([[r.p / r.q] for r in locked]))
    ok = (rigid < 1e-9 and drop >= -1e-6 and {(0, 1), (1, 2), (1, 1)} <= found
          and spread.max() < 1e-4)
    return ok, (f"rigid err {rigid:.1e}, min step {drop:.1e}, {len(found)} plateaus, "
                f"start spread {spread.max():.1e}")


def check_cycle_nand():
    m, spec = cycles.build_cycle_nand()
    table = cycles.cycle_gate_table(m, spec, steps=2)
    if any(out != (not (a and b)) for (a, b), out in table.items()):
        return False, f"table {table}"
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(1, 7)
        p = rng.random()
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
        g = Graph(frozenset(range(n)), undirected(pairs), {}, {})
        mine = {frozenset(frozenset(e) for e in cycles.cycle_edges(c))
                for c in cycles.enumerate_cycles(g)}
        if mine != brute_force_cycles(g.nodes, pairs):
            return False, f"enumeration differs on graph {seed}"
    return True, "4 rows, 200 graphs"


def check_circuits():
    sim = circuits.Simulator(circuits.build_memory_cell()[0])
    sim.set(write=1)
    sim.step()
    sim.set(write=0)
    sim.step(20)
    for _ in range(10_000):
        sim.step()
        if sim.read("read") != 1:
            return False, f"cell lost its bit at tick {sim.t}"
    fe = circuits.Simulator(circuits.build_frontend_cell()[0])
    fe.set(value=1, write_now=1)
    fe.step(record=("erase", "write"))
    t0 = fe.t
    fe.set(write_now=0)
    fe.step(4, record=("erase", "write"))
    if {(t - t0, port) for t, port, v in fe.trace if v} != {(1, "erase"), (2, "write")}:
        return False, "frontend schedule"
    for period in range(2, 9):
        clk = circuits.Simulator(circuits.build_clock(period)[0])
        clk.step(10 * period + 3, record=("clock_out",))
        ts = [t for t, _, v in clk.trace if v]
        if len(ts) != 10 or set(np.diff(ts)) != {period}:
            return False, f"clock period {period}"
    for i in range(8):
        h = circuits.build_ram(3)
        for j in range(8):
            h.write(j, 1)
        h.write(i, 0)
        if [h.read(j) for j in range(8)] != [int(j != i) for j in range(8)]:
            return False, f"isolation row {i}"
    return True, "10^4-tick retention, schedule, 7 clocks, 8x8 RAM matrix"


def check_life():
    m = build_grid_ca_machine(8, 8)
    for seed in range(20):
        rng = random.Random(seed)
        rows = [[rng.randint(0, 1) for _ in range(8)] for _ in range(8)]
        g = grid_from_rows(rows)
        for t in range(50):
            g = step(m, g)
            rows = life_array_step(rows)
            if grid_to_rows(g, 8, 8) != rows:
                return False, f"seed {seed} step {t + 1}"
    m5 = build_grid_ca_machine(5, 5)
    b0 = place("blinker", 5, 5, 1, 1)
    if step(m5, b0) == b0 or step(m5, step(m5, b0)) != b0:
        return False, "blinker"
    m10 = build_grid_ca_machine(10, 10)
    g = place("glider", 10, 10, 1, 1)
    for _ in range(4):
        g = step(m10, g)
    return g == place("glider", 10, 10, 2, 2), "20 seeds x 50 steps, blinker, glider"


def check_turing():
    for tm, word, steps, tape in halting_tms(10, seed=3):
        m = build_turing_machine_graph(tm, 41, word, head_position=20)
        g = m.params["initial"]
        r = run_graph(m, g, 200, record=False)
        if not (r.halted and r.steps == steps):
            return False, f"halt step {r.steps} != {steps}"
        for _ in range(steps):
            g = step(m, g)
        if list(decode_tape(tm, g)) != tape:
            return False, "tape differs"
    return True, "10 machines"


CLI_SUITE = [
    ("verify-gates",),
    ("staircase", "--points", "101", "--n-iter", "20000"),
    ("life", "--pattern", "random", "--steps", "10"),
    ("cycle-nand",),
    ("ram-demo", "--address-bits", "3"),
    ("--json", "verify-gates", "--filter", "NAND3,XOR"),
]


def check_reproducible():
    def outputs():
        env = {k: v for k, v in os.environ.items() if k != "GRAPHCOMP_SEED"}
        return [subprocess.run([sys.executable, "-m", "graphcomp", "--seed", "11", *args],
                               capture_output=True, env=env, timeout=300).stdout
                for args in CLI_SUITE]
    first, second = outputs(), outputs()
    same = [a == b for a, b in zip(first, second)]
    return all(same) and all(first), f"{sum(same)}/{len(same)} commands identical"


CRITERIA = [
    (1, "arc-gate NAND tables", check_arc_gates, 1),
    (2, "model-1 gates and composed NAND", check_model1_gates, 5),
    (3, "routing gates", check_routing_gates, 5),
    (4, "timing-based gates", check_timing_gates, 10),
    (5, "XOR and full adder from NAND+COPY", check_universal_circuits, 5),
    (6, "synchrony relations", check_synchrony, 5),
    (7, "inhibitory arithmetic", check_inhibition, None),
    (8, "circle map", check_circle_map, 30),
    (9, "cycle NAND and enumeration", check_cycle_nand, 10),
    (10, "circuits", check_circuits, 10),
    (11, "Life embedding", check_life, 5),
    (12, "Turing embedding", check_turing, 5),
    (13, "CLI reproducibility", check_reproducible, None),
]


def evaluate(number, title, check, budget):
    start = time.perf_counter()
    ok, detail = check()
    elapsed = time.perf_counter() - start
    in_time = budget is None or elapsed < budget
    limit = f" / {budget} s" if budget else ""
    verdict = "PASS" if ok and in_time else "FAIL"
    if ok and not in_time:
        detail += ", over time budget"
    return ok and in_time, f"criterion {number:2d} {verdict}  {title}: {detail} ({elapsed:.2f} s{limit})"


@pytest.mark.parametrize("number,title,check,budget", CRITERIA, ids=[str(c[0]) for c in CRITERIA])
def test_criterion(number, title, check, budget, capsys):
    ok, line = evaluate(number, title, check, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
