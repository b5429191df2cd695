"""Grover-style retrieval over a stored pattern superposition.

Three procedures share one oracle model (a phase flip on the marked basis
states) and one diffusion convention (``a -> a - 2 mean``):

* ``standard_grover`` marks the query every rotation. On a sparse,
  non-uniform superposition it loses the target after a few rotations.
* ``vm_retrieve`` marks the query once, then marks every stored pattern on
  each later rotation.
* ``pt_retrieve`` undoes the permutation write network, runs the diffusion
  on the ``g`` address wires only, and writes the patterns back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .encode_pt import AddressMap, address_hadamards, encode_pt, pt_write_network
from .encode_vm import encode_vm
from .errors import ConsistencyError, InputError, OracleError
from .patterns import PatternSet, format_bits, hamming
from .state import MeasurementOutcome, StateVector


@dataclass(frozen=True)
class OracleSpec:
    mode: str  # "exact-target" or "epsilon-ball"
    query: int
    epsilon: int
    marked: frozenset[int]
    m: int

    @property
    def query_bits(self) -> str:
        return format_bits(self.query, self.m)


def build_oracle(patterns: PatternSet, query: int | str, epsilon: int = 0) -> OracleSpec:
    """Mark the stored patterns within Hamming distance ``epsilon`` of ``query``."""
    if epsilon < 0:
        raise InputError("epsilon must be non-negative")
    if isinstance(query, str):
        if len(query.strip()) != patterns.m:
            raise InputError(f"query has {len(query.strip())} bits, patterns have {patterns.m}")
        query = int(query.strip(), 2)
    if not 0 <= query < patterns.n:
        raise InputError(f"query {query} does not fit in {patterns.m} bits")
    marked = frozenset(p for p in patterns if hamming(p, query) <= epsilon)
    mode = "exact-target" if epsilon == 0 else "epsilon-ball"
    return OracleSpec(mode, query, epsilon, marked, patterns.m)


def classical_nn(patterns: PatternSet, query: int | str) -> int:
    """Stored pattern nearest to ``query``; the earliest one wins ties."""
    if isinstance(query, str):
        if len(query) != patterns.m:
            raise InputError(f"query has {len(query)} bits, patterns have {patterns.m}")
        query = int(query, 2)
    return min(patterns, key=lambda p: hamming(p, query))


@dataclass
class RetrievalTrace:
    snapshots: list[np.ndarray] = field(default_factory=list)
    marked_sets: list[frozenset[int]] = field(default_factory=list)
    rotations: int = 0
    oracle_calls: int = 0
    # permutation trick only: address-register state after each un-write
    address_states: list[np.ndarray] = field(default_factory=list)

    def to_dict(self, snapshots: bool = True) -> dict:
        out = {
            "rotations": self.rotations,
            "oracle_calls": self.oracle_calls,
            "marked_sets": [sorted(s) for s in self.marked_sets],
        }
        if snapshots:
            out["snapshots"] = [_pairs(s) for s in self.snapshots]
            if self.address_states:
                out["address_states"] = [_pairs(s) for s in self.address_states]
        return out


def _pairs(amps: np.ndarray) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in amps]


@dataclass
class RetrievalReport:
    method: str
    outcome: MeasurementOutcome
    outcome_pattern: str
    success_probability: float
    trace: RetrievalTrace
    oracle: OracleSpec
    no_solution: bool = False

    def to_dict(self, snapshots: bool = True) -> dict:
        return {
            "method": self.method,
            "query": self.oracle.query_bits,
            "epsilon": self.oracle.epsilon,
            "marked": sorted(format_bits(p, self.oracle.m) for p in self.oracle.marked),
            "outcome": {
                "index": self.outcome.index,
                "pattern": self.outcome_pattern,
                "probability": self.outcome.probability,
            },
            "success_probability": self.success_probability,
            "no_solution": self.no_solution,
            **self.trace.to_dict(snapshots),
        }


def encoded_state(patterns: PatternSet) -> StateVector:
    """Memory register of the storage circuit; one pattern is just written."""
    if patterns.k == 1:
        return encode_pt(AddressMap.in_order(patterns))
    return encode_vm(patterns)


def grover_rotations(space: int, marked: int) -> int:
    """``floor(pi/4 * sqrt(space / marked))``, at least one."""
    return max(1, math.floor(math.pi / 4 * math.sqrt(space / max(marked, 1))))


def grover_success(space: int, marked: int, rotations: int) -> float:
    """Closed-form success probability of Grover search on a uniform space."""
    theta = math.asin(math.sqrt(marked / space))
    return math.sin((2 * rotations + 1) * theta) ** 2


def _measure(state: StateVector, seed: int | None) -> MeasurementOutcome:
    return state.argmax_outcome() if seed is None else state.sample_outcome(seed)


def standard_grover(state: StateVector, oracle: OracleSpec, rotations: int) -> RetrievalTrace:
    """Mark-then-diffuse on the whole register, ``rotations`` times."""
    if not oracle.marked:
        raise OracleError("oracle marks no basis state")
    if rotations < 1:
        raise InputError("at least one rotation is required")
    s = state.copy()
    trace = RetrievalTrace(snapshots=[s.amplitudes.copy()])
    for _ in range(rotations):
        s.phase_mark(oracle.marked).diffuse()
        trace.snapshots.append(s.amplitudes.copy())
        trace.marked_sets.append(oracle.marked)
    trace.rotations = rotations
    trace.oracle_calls = rotations
    return trace


def _report(method, state, oracle, trace, m, seed, no_solution=False) -> RetrievalReport:
    outcome = _measure(state, seed)
    probs = state.probabilities()
    success = float(sum(probs[p] for p in oracle.marked))
    return RetrievalReport(
        method, outcome, format_bits(outcome.index, m), success, trace, oracle, no_solution
    )


def standard_retrieve(
    patterns: PatternSet,
    oracle: OracleSpec,
    rotations: int | None = None,
    state: StateVector | None = None,
    seed: int | None = None,
) -> RetrievalReport:
    if rotations is None:
        rotations = grover_rotations(patterns.n, len(oracle.marked))
    s = encoded_state(patterns) if state is None else state
    trace = standard_grover(s, oracle, rotations)
    final = StateVector(patterns.m, trace.snapshots[-1])
    return _report("grover", final, oracle, trace, patterns.m, seed)


def vm_retrieve(
    patterns: PatternSet,
    oracle: OracleSpec,
    rotations: int | None = None,
    state: StateVector | None = None,
    seed: int | None = None,
) -> RetrievalReport:
    """Mark the query once, then every stored pattern on later rotations.

    ``state`` defaults to the memory register produced by the
    Ventura-Martinez storage circuit.
    """
    no_solution = not oracle.marked
    if rotations is None:
        rotations = grover_rotations(patterns.n, len(oracle.marked))
    if rotations < 1:
        raise InputError("at least one rotation is required")
    s = (encoded_state(patterns) if state is None else state).copy()
    if s.num_qubits != patterns.m:
        raise InputError("initial state must live on the m-qubit memory register")
    stored = frozenset(patterns)
    trace = RetrievalTrace(snapshots=[s.amplitudes.copy()])
    for r in range(rotations):
        marked = oracle.marked if r == 0 else stored
        s.phase_mark(marked).diffuse()
        trace.snapshots.append(s.amplitudes.copy())
        trace.marked_sets.append(marked)
    trace.rotations = rotations
    trace.oracle_calls = 1 + (rotations - 1) * patterns.k
    return _report("vm", s, oracle, trace, patterns.m, seed, no_solution)


def pt_retrieve(
    amap: AddressMap,
    oracle: OracleSpec,
    rotations: int | None = None,
    network: Circuit | None = None,
    seed: int | None = None,
) -> RetrievalReport:
    """Grover rotations confined to the ``g`` address wires.

    ``network`` is the write network that prepared the state (the naive
    network for ``amap`` by default); its inverse is used to compress and
    the network itself to expand on every rotation.
    """
    m, k, g = amap.m, amap.k, amap.g
    no_solution = not oracle.marked
    if rotations is None:
        rotations = grover_rotations(k, len(oracle.marked))
    if rotations < 1:
        raise InputError("at least one rotation is required")
    if network is None:
        network = pt_write_network(amap)
    if network.width != m + 1:
        raise InputError("write network width does not match the address map")
    undo = network.inverse()
    prep = Circuit(m + 1, tuple(address_hadamards(amap))) + network
    s = prep.simulate()
    address_wires = list(range(g))
    trace = RetrievalTrace(snapshots=[s.amplitudes.copy()])
    for _ in range(rotations):
        s.phase_mark(oracle.marked)
        s = undo.simulate(s)
        if g:
            trace.address_states.append(s.marginal_register(address_wires).amplitudes.copy())
            s.diffuse(address_wires)
        else:
            s.amplitudes *= -1  # reflection of a one-dimensional space
        s = network.simulate(s)
        trace.snapshots.append(s.amplitudes.copy())
        trace.marked_sets.append(oracle.marked)
    trace.rotations = rotations
    trace.oracle_calls = rotations * k * 2
    try:
        data = s.marginal_register(range(m))
    except ConsistencyError:
        raise ConsistencyError("flag qubit is not in the ground state before measurement") from None
    return _report("pt", data, oracle, trace, m, seed, no_solution)
