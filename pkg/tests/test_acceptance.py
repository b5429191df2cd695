"""Acceptance gate: one check per criterion, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quam.analysis import compare
from quam.circuit import count_gates
from quam.encode_pt import AddressMap, build_pt_circuit, data_state
from quam.encode_vm import build_vm_circuit, memory_state
from quam.reduce import build_reduced_circuit, plan_reduction, reduced_write_network
from quam.retrieval import build_oracle, grover_success, pt_retrieve, standard_grover, vm_retrieve
from quam.state import StateVector

from conftest import STORED, sample_patterns, random_patterns, uniform_over, worked_map

RESULTS: dict[str, tuple[bool, str]] = {}


def _exact_trace(marks):
    vec = [Fraction(1, 2) if i in STORED else Fraction(0) for i in range(16)]
    out = []
    for marked in marks:
        vec = [-a if i in marked else a for i, a in enumerate(vec)]
        mean = sum(vec) / 16
        vec = [a - 2 * mean for a in vec]
        out.append(vec)
    return out


def c1_pt_encoding():
    full = build_pt_circuit(worked_map()).simulate().amplitudes
    expected = np.zeros(32)
    expected[STORED] = 0.5
    err = np.abs(full - expected).max()
    return err <= 1e-12, f"max deviation {err:.1e} (flag half included)"


def c2_vm_encoding():
    ps = sample_patterns()
    mem = memory_state(build_vm_circuit(ps).simulate(), 4, atol=1e-10)
    pt = data_state(build_pt_circuit(worked_map()).simulate(), 4)
    err = np.abs(mem.amplitudes - pt.amplitudes).max()
    return err <= 1e-10, f"memory marginal vs PT: {err:.1e}; ancillae ground"


def c3_reduce():
    ps = sample_patterns()
    plan = plan_reduction(ps)
    net = count_gates(reduced_write_network(plan))
    reduced = build_reduced_circuit(plan).simulate().amplitudes
    naive = build_pt_circuit(plan.assignment).simulate().amplitudes
    naive_counts = count_gates(build_pt_circuit(worked_map()))
    err = np.abs(reduced - naive).max()
    ok = (net.mcx, net.cx) == (4, 4) and err <= 1e-12 and (naive_counts.mcx, naive_counts.cx) == (6, 6)
    return ok, f"reduced {net.mcx} MCX + {net.cx} CX vs naive {naive_counts.mcx}+{naive_counts.cx}; state diff {err:.1e}"


def c4_standard_grover():
    ps = sample_patterns()
    trace = standard_grover(StateVector.uniform_over(4, STORED), build_oracle(ps, "0110"), 3)
    exact = _exact_trace([{6}] * 3)
    r1 = [Fraction(x, 8) for x in (-1, -1, -1, 3, -1, -1, -5, -1, -1, 3, -1, -1, -1, -1, -1, 3)]
    ok = exact[0] == r1
    ok &= (exact[1][0], exact[1][3], exact[1][6]) == (Fraction(-5, 32), Fraction(11, 32), Fraction(19, 32))
    ok &= (exact[2][0], exact[2][3], exact[2][6]) == (Fraction(3, 128), Fraction(67, 128), Fraction(-53, 128))
    printed = [(-0.2, 0.3, 0.6), (0.02, 0.5, -0.4)]
    rounded = [
        tuple(round(float(v), 1) for v in (exact[1][0], exact[1][3], exact[1][6])),
        (round(float(exact[2][0]), 2), round(float(exact[2][3]), 1), round(float(exact[2][6]), 1)),
    ]
    ok &= rounded == printed
    err = max(
        np.abs(snap - np.array([float(x) for x in ex])).max()
        for snap, ex in zip(trace.snapshots[1:], exact)
    )
    ok &= err <= 1e-12
    return bool(ok), f"simulated vs rational oracle {err:.1e}; roundings {rounded}"


def c5_vm_trick():
    ps = sample_patterns()
    report = vm_retrieve(ps, build_oracle(ps, "0110"))
    r2 = np.array([1, 1, 1, -1, 1, 1, 7, 1, 1, -1, 1, 1, 1, 1, 1, -1]) / 8
    err = np.abs(report.trace.snapshots[2] - r2).max()
    p6 = abs(report.trace.snapshots[3][6]) ** 2
    ok = err <= 1e-12 and abs(p6 - 1) <= 1e-10 and report.trace.rotations == 3
    return ok, f"rotation-2 diff {err:.1e}; P(0110) after {report.trace.rotations} rotations = {p6:.12f}"


def c6_pt_trick():
    ps = sample_patterns()
    plan = plan_reduction(ps)
    report = pt_retrieve(plan.assignment, build_oracle(ps, "0110"), network=reduced_write_network(plan))
    err = np.abs(report.trace.address_states[0] - np.array([1, 1, -1, 1]) / 2).max()
    ok = err <= 1e-12 and report.outcome_pattern == "0110" and abs(report.outcome.probability - 1) <= 1e-12
    return ok, f"address state diff {err:.1e}; outcome {report.outcome_pattern} p={report.outcome.probability:.12f}"


def c7_encoder_properties():
    rng = np.random.default_rng(7)
    worst_vm = worst_pt = worst_red = 0.0
    for _ in range(200):
        k = [2, 4, 8][int(rng.integers(3))]
        m = int(rng.integers(k.bit_length() - 1, 9))
        ps = random_patterns(rng, m, k)
        target = uniform_over(1 << m, ps.patterns)
        vm = memory_state(build_vm_circuit(ps).simulate(), m)
        pt_full = build_pt_circuit(AddressMap.in_order(ps)).simulate()
        pt = data_state(pt_full, m)
        plan = plan_reduction(ps)
        red = build_reduced_circuit(plan).simulate().amplitudes
        naive = build_pt_circuit(plan.assignment).simulate().amplitudes
        worst_vm = max(worst_vm, np.abs(vm.amplitudes - target).max())
        worst_pt = max(worst_pt, np.abs(pt.amplitudes - target).max())
        worst_red = max(worst_red, np.abs(red - naive).max())
    ok = worst_vm <= 1e-10 and worst_pt <= 1e-10 and worst_red <= 1e-12
    return ok, f"200 instances: VM {worst_vm:.1e}, PT {worst_pt:.1e}, reduced vs naive {worst_red:.1e}"


def c8a_pt_closed_form():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        k = [2, 4, 8, 16][int(rng.integers(4))]
        m = int(rng.integers(k.bit_length() - 1, 9))
        ps = random_patterns(rng, m, k)
        target = ps.patterns[int(rng.integers(k))]
        report = pt_retrieve(AddressMap.in_order(ps), build_oracle(ps, target))
        expected = grover_success(k, 1, report.trace.rotations)
        worst = max(worst, abs(report.success_probability - expected))
    return worst <= 1e-9, f"100 instances: max |p - sin^2((2t+1) asin(1/sqrt k))| = {worst:.1e}"


def c8b_pt_certain_success():
    rng = np.random.default_rng(88)
    details, ok = [], True
    for k, tau in [(4, 1), (16, 3)]:
        ps = random_patterns(rng, 6, k)
        report = pt_retrieve(AddressMap.in_order(ps), build_oracle(ps, ps.patterns[1]), rotations=tau)
        p = report.success_probability
        ok &= abs(p - 1) <= 1e-9
        details.append(f"k={k} t={tau}: p={p:.10f}")
    return ok, "; ".join(details)


def c9_cost_report():
    ps = sample_patterns()
    rep = compare(ps, build_oracle(ps, "0110"), worked_map())
    vm, pt = rep["VM"], rep["PT"]
    ok = (vm.predicted.gates.cu, vm.predicted.gates.ccx, vm.predicted.gates.mcx) == (3, 16, 6)
    ok &= (pt.predicted.gates.h, pt.predicted.gates.mcx) == (4, 8)
    ok &= (pt.actual.rotations, vm.actual.rotations) == (1, 3)
    ok &= (vm.width, pt.width) == (10, 5)
    rows = rep.rows()
    ok &= all(row["diff_mcx"] is not None and row["diff_rotations"] is not None for row in rows)
    return bool(ok), f"VM diff {vm.discrepancy()}; PT diff {pt.discrepancy()}"


def c10_unitarity():
    rng = np.random.default_rng(10)
    v = rng.normal(size=64) + 1j * rng.normal(size=64)
    s = StateVector(6, v / np.linalg.norm(v))
    for _ in range(1000):
        wires = [int(w) for w in rng.permutation(6)]
        kind = int(rng.integers(5))
        if kind == 0:
            s.h(wires[0])
        elif kind == 1:
            n = int(rng.integers(1, 6))
            s.mcx([(w, int(rng.integers(2))) for w in wires[1 : n + 1]], wires[0])
        elif kind == 2:
            s.cu(*rng.uniform(-math.pi, math.pi, 3), wires[0], wires[1])
        elif kind == 3:
            s.phase_mark({int(rng.integers(64))})
        else:
            s.diffuse()
    drift = abs(s.norm() - 1)
    return drift <= 1e-9, f"norm drift after 1000 gates: {drift:.1e}"


CRITERIA = {
    "1 PT encoding exactness": c1_pt_encoding,
    "2 VM encoding exactness": c2_vm_encoding,
    "3 reduce fidelity and savings": c3_reduce,
    "4 standard Grover failure trace": c4_standard_grover,
    "5 VM trick trace": c5_vm_trick,
    "6 permutation trick trace": c6_pt_trick,
    "7 encoder properties": c7_encoder_properties,
    "8a PT success matches closed form": c8a_pt_closed_form,
    "8b PT success is certain at k=4/t=1 and k=16/t=3": c8b_pt_certain_success,
    "9 cost report golden values": c9_cost_report,
    "10 unitarity regression": c10_unitarity,
}


def line(name: str) -> str:
    ok, detail = RESULTS[name]
    return f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    RESULTS[name] = CRITERIA[name]()
    ok, detail = RESULTS[name]
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, check in CRITERIA.items():
        RESULTS[name] = check()
        print(line(name))
        failed += not RESULTS[name][0]
    sys.exit(1 if failed else 0)
