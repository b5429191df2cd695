"""Basis-encoded associative memory on a dense statevector simulator."""
from .circuit import Circuit, Gate, GateCounts
from .encode_pt import AddressMap, build_pt_circuit, encode_pt
from .encode_vm import build_vm_circuit, encode_vm
from .kernels import BACKEND
from .patterns import PatternSet
from .reduce import build_reduced_circuit, plan_reduction
from .retrieval import build_oracle, classical_nn, pt_retrieve, standard_retrieve, vm_retrieve
from .state import StateVector

__all__ = [
    "AddressMap",
    "BACKEND",
    "Circuit",
    "Gate",
    "GateCounts",
    "PatternSet",
    "StateVector",
    "build_oracle",
    "build_pt_circuit",
    "build_reduced_circuit",
    "build_vm_circuit",
    "classical_nn",
    "encode_pt",
    "encode_vm",
    "plan_reduction",
    "pt_retrieve",
    "standard_retrieve",
    "vm_retrieve",
]
