"""Ventura-Martinez storage circuit.

Wire layout over ``2m + 2`` qubits::

    load    q0 .. q(m-1)
    c1      q(m)
    c2      q(m+1)
    memory  q(m+2) .. q(2m+1)

``c2 = 1`` marks the processing branch, ``c2 = 0`` the memory branches.
Every step keeps the circuit unitary: the load register is cleared by the
same X gates that loaded it, since it holds one classical pattern in every
branch at once.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Gate, GateCounts, count_gates, split_angle_gate
from .errors import InputError
from .patterns import PatternSet, format_bits
from .state import StateVector


@dataclass(frozen=True)
class VmLayout:
    m: int

    @property
    def width(self) -> int:
        return 2 * self.m + 2

    @property
    def load(self) -> list[int]:
        return list(range(self.m))

    @property
    def c1(self) -> int:
        return self.m

    @property
    def c2(self) -> int:
        return self.m + 1

    @property
    def memory(self) -> list[int]:
        return list(range(self.m + 2, 2 * self.m + 2))

    def memory_wire(self, bit: int) -> int:
        return self.m + 2 + bit


def split_parameters(k: int) -> list[int]:
    """Split parameter for each of the ``k - 1`` splits: ``k, k-1, ..., 2``."""
    return [k + 1 - i for i in range(1, k)]


def build_vm_circuit(patterns: PatternSet) -> Circuit:
    k, m = patterns.k, patterns.m
    if k < 2:
        raise InputError("the Ventura-Martinez encoder needs at least two patterns")
    lay = VmLayout(m)
    gates: list[Gate] = [Gate.x(lay.c2, label="mark processing branch")]

    def load(p: int, tag: str):
        for b in range(m):
            if (p >> b) & 1:
                gates.append(Gate.x(lay.load[b], label=tag))

    for i, (p, split) in enumerate(zip(patterns, split_parameters(k)), 1):
        name = format_bits(p, m)
        load(p, f"load {name}")
        if i > 1:
            for b in range(m):
                gates.append(Gate.ccx(lay.load[b], lay.c2, lay.memory_wire(b), label="copy to processing"))
            for b in range(m):
                gates.append(Gate.cx(lay.load[b], lay.memory_wire(b), label="xor into all branches"))
        for w in lay.memory:
            gates.append(Gate.x(w, label="invert memory"))
        ones = [(w, 1) for w in lay.memory]
        gates.append(Gate.mcx(ones, lay.c1, label="entangle c1"))
        gates.append(split_angle_gate(split, lay.c1, lay.c2, label=f"split p={split}"))
        gates.append(Gate.mcx(ones, lay.c1, label="disentangle c1"))
        for w in lay.memory:
            gates.append(Gate.x(w, label="restore memory"))
        for b in range(m):
            gates.append(Gate.cx(lay.load[b], lay.memory_wire(b), label="write / flip back"))
        for b in range(m):
            gates.append(Gate.ccx(lay.load[b], lay.c2, lay.memory_wire(b), label="clear processing"))
        load(p, f"unload {name}")

    # the remaining processing branch becomes the last memory branch
    last = patterns.patterns[-1]
    name = format_bits(last, m)
    load(last, f"load {name}")
    for b in range(m):
        gates.append(Gate.ccx(lay.load[b], lay.c2, lay.memory_wire(b), label="store last pattern"))
    controls = [(lay.memory_wire(b), (last >> b) & 1) for b in range(m)]
    gates.append(Gate.mcx(controls, lay.c2, label="close processing branch"))
    load(last, f"unload {name}")
    return Circuit(lay.width, tuple(gates))


def memory_state(state: StateVector, m: int, atol: float = 1e-10) -> StateVector:
    """Memory-register state, checking that load and control wires are ground."""
    return state.marginal_register(VmLayout(m).memory, atol=atol)


def encode_vm(patterns: PatternSet) -> StateVector:
    """Simulate the storage circuit and return the ``m``-qubit memory register."""
    return memory_state(build_vm_circuit(patterns).simulate(), patterns.m)


def predicted_vm_counts(k: int, m: int) -> GateCounts:
    """Closed-form estimate: k-1 rotations, k*m CCX, 2(k-1) MCX."""
    return GateCounts(cu=k - 1, ccx=k * m, mcx=2 * (k - 1))


@dataclass(frozen=True)
class GateBudget:
    predicted: GateCounts
    actual: GateCounts

    def divergence(self) -> dict[str, int]:
        """``actual - predicted`` for every gate species the prediction covers."""
        keys = [k for k, v in self.predicted.as_dict().items() if v]
        a, p = self.actual.as_dict(), self.predicted.as_dict()
        return {key: a[key] - p[key] for key in keys}


def vm_gate_budget(patterns: PatternSet) -> GateBudget:
    return GateBudget(
        predicted_vm_counts(patterns.k, patterns.m),
        count_gates(build_vm_circuit(patterns)),
    )
