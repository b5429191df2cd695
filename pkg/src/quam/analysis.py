"""Predicted-versus-actual cost comparison of the two storage schemes.

Predicted figures are closed-form functions of ``(k, m)``; actual figures
are counted on built circuits and executed retrievals. Both are kept side
by side and never reconciled.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .circuit import Circuit, GateCounts, count_gates
from .encode_pt import AddressMap, address_hadamards, predicted_pt_counts, pt_write_network
from .encode_vm import build_vm_circuit, memory_state, predicted_vm_counts
from .patterns import PatternSet
from .reduce import plan_reduction, reduced_write_network
from .retrieval import OracleSpec, pt_retrieve, vm_retrieve

GATE_KINDS = ("h", "x", "cx", "ccx", "mcx", "cu")


@dataclass(frozen=True)
class CostFigures:
    gates: GateCounts
    rotations: float
    oracle_calls: float


@dataclass(frozen=True)
class CostReport:
    method: str  # "VM", "PT" or "PT-reduced"
    width: int
    predicted: CostFigures
    actual: CostFigures
    success_probability: float
    advantage_flags: dict[str, bool] = field(default_factory=dict)
    # alternate reading of the VM oracle-call formula, sqrt(n - 1) * k + 1
    oracle_calls_raw: float | None = None

    def discrepancy(self) -> dict[str, float]:
        """``actual - predicted`` for every predicted gate species plus the run figures."""
        p, a = self.predicted.gates.as_dict(), self.actual.gates.as_dict()
        out = {kind: a[kind] - p[kind] for kind in GATE_KINDS if p[kind]}
        out["rotations"] = self.actual.rotations - self.predicted.rotations
        out["oracle_calls"] = self.actual.oracle_calls - self.predicted.oracle_calls
        return out

    def row(self) -> dict:
        r = {"method": self.method, "width": self.width}
        for kind in GATE_KINDS:
            r[f"pred_{kind}"] = getattr(self.predicted.gates, kind)
            r[f"act_{kind}"] = getattr(self.actual.gates, kind)
        r["pred_rotations"] = self.predicted.rotations
        r["act_rotations"] = self.actual.rotations
        r["pred_oracle_calls"] = self.predicted.oracle_calls
        r["pred_oracle_calls_raw"] = self.oracle_calls_raw
        r["act_oracle_calls"] = self.actual.oracle_calls
        diff = self.discrepancy()
        for kind in GATE_KINDS:
            r[f"diff_{kind}"] = diff.get(kind)
        r["diff_rotations"] = diff["rotations"]
        r["diff_oracle_calls"] = diff["oracle_calls"]
        r["success_probability"] = self.success_probability
        r["sqrt_n_lt_k"] = self.advantage_flags.get("sqrt_n_lt_k")
        r["sqrt_k_p_lt_k"] = self.advantage_flags.get("sqrt_k_p_lt_k")
        return r


@dataclass(frozen=True)
class Comparison:
    k: int
    m: int
    reports: tuple[CostReport, ...]

    @property
    def n(self) -> int:
        return 1 << self.m

    def __getitem__(self, method: str) -> CostReport:
        for r in self.reports:
            if r.method == method:
                return r
        raise KeyError(method)

    def rows(self) -> list[dict]:
        return [r.row() for r in self.reports]

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "m": self.m, "n": self.n, "reports": self.rows()}, indent=2)

    def to_csv(self) -> str:
        rows = self.rows()
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: "" if v is None else v for key, v in row.items()})
        return buf.getvalue()


def predicted_vm(k: int, m: int) -> tuple[CostFigures, float]:
    n = 1 << m
    calls = (math.sqrt(n) - 1) * k + 1
    raw = math.sqrt(n - 1) * k + 1
    return CostFigures(predicted_vm_counts(k, m), math.sqrt(n), calls), raw


def predicted_pt(k: int) -> CostFigures:
    return CostFigures(predicted_pt_counts(k), math.sqrt(k), math.sqrt(k) * k * 2)


def _pt_report(method, amap, network, oracle, flags) -> CostReport:
    circuit = Circuit(amap.m + 1, tuple(address_hadamards(amap))) + network
    report = pt_retrieve(amap, oracle, network=network)
    p = count_gates(network).mcx
    flags = dict(flags, sqrt_k_p_lt_k=math.sqrt(amap.k) * p < amap.k)
    actual = CostFigures(count_gates(circuit), report.trace.rotations, report.trace.oracle_calls)
    return CostReport(
        method, amap.m + 1, predicted_pt(amap.k), actual, report.success_probability, flags
    )


def compare(patterns: PatternSet, oracle: OracleSpec, amap: AddressMap | None = None) -> Comparison:
    """Build both encodings and the reduced one, run their retrievals, tabulate costs.

    ``amap`` fixes the address map of the unreduced PT row; by default
    address ``j`` holds the ``j``-th input pattern.
    """
    k, m = patterns.k, patterns.m
    flags = {"sqrt_n_lt_k": math.sqrt(1 << m) < k}

    vm_circuit = build_vm_circuit(patterns)
    state = memory_state(vm_circuit.simulate(), m)
    vm = vm_retrieve(patterns, oracle, state=state)
    pred, raw = predicted_vm(k, m)
    vm_report = CostReport(
        "VM",
        2 * m + 2,
        pred,
        CostFigures(count_gates(vm_circuit), vm.trace.rotations, vm.trace.oracle_calls),
        vm.success_probability,
        dict(flags),
        raw,
    )

    if amap is None:
        amap = AddressMap.in_order(patterns)
    pt_report = _pt_report("PT", amap, pt_write_network(amap), oracle, flags)
    plan = plan_reduction(patterns)
    red_report = _pt_report(
        "PT-reduced", plan.assignment, reduced_write_network(plan), oracle, flags
    )
    return Comparison(k, m, (vm_report, pt_report, red_report))
