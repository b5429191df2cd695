"""Permutation-technique storage over ``m + 1`` qubits.

Data wires are ``q0 .. q(m-1)``, the flag is ``q(m)``. Hadamards on the low
``g`` wires spread amplitude over the ``k = 2**g`` address states; a write
network of flag-mediated moves then carries address ``j`` to its pattern.

Every branch of the superposition is a single basis state with the same
positive amplitude, so the write network is planned on classical branch
records (:class:`BranchWriter`) and only emitted as gates.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateCounts, count_gates
from .encode_vm import GateBudget
from .errors import ConsistencyError, InputError, SizeError
from .patterns import PatternSet, format_bits, parse_bits
from .state import StateVector

MAX_MATRIX_QUBITS = 12


@dataclass(frozen=True)
class AddressMap:
    """Bijection from the ``k = 2**g`` address states onto ``k`` patterns.

    ``entries[j]`` is the pattern stored at address ``j``; the address state
    is the ``m``-bit basis state whose low ``g`` bits are ``j``.
    """

    m: int
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        k = len(self.entries)
        if k < 1 or k & (k - 1):
            raise InputError(f"number of patterns must be a power of two, got {k}")
        if k > 1 << self.m:
            raise InputError(f"{k} patterns do not fit in {self.m} bits")
        PatternSet(self.m, self.entries)  # range and distinctness checks

    @classmethod
    def in_order(cls, patterns: PatternSet) -> AddressMap:
        """Address ``j`` holds the ``j``-th pattern of the input."""
        return cls(patterns.m, patterns.patterns)

    @classmethod
    def from_pairs(cls, m: int, pairs: Iterable[tuple[int, int]]) -> AddressMap:
        table = dict(pairs)
        k = len(table)
        if sorted(table) != list(range(k)):
            raise InputError("addresses must be exactly 0 .. k-1")
        return cls(m, tuple(table[j] for j in range(k)))

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def g(self) -> int:
        return self.k.bit_length() - 1

    @property
    def patterns(self) -> PatternSet:
        return PatternSet(self.m, self.entries)

    def address_of(self, pattern: int) -> int:
        return self.entries.index(pattern)

    def items(self) -> list[tuple[int, int]]:
        return list(enumerate(self.entries))

    def to_text(self) -> str:
        width = max(self.g, 1)
        return "".join(
            f"{format_bits(j, width)} -> {format_bits(p, self.m)}\n" for j, p in self.items()
        )


def parse_address_map(text: str) -> AddressMap:
    """Parse ``address-bits -> pattern-bits`` lines (``#`` comments allowed)."""
    pairs, widths = [], set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        left, sep, right = line.partition("->")
        if not sep:
            raise InputError(f"line {lineno}: expected 'address -> pattern'")
        try:
            pairs.append((parse_bits(left), parse_bits(right)))
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        widths.add(len(right.strip()))
    if not pairs:
        raise InputError("address map is empty")
    if len(widths) != 1:
        raise InputError("patterns in the address map have mixed lengths")
    return AddressMap.from_pairs(widths.pop(), pairs)


def read_address_map(path: str | Path) -> AddressMap:
    return parse_address_map(Path(path).read_text())


# -- branch-level planning ----------------------------------------------------

class BranchWriter:
    """Tracks one classical record per branch and emits the matching gates.

    A branch is ``(data, flag)``. An MCX with data controls toggles the flag
    of every branch whose data matches; a flag-controlled CX toggles one data
    bit of every flagged branch. The records are updated by actually applying
    each emitted gate, so they can never drift from the circuit.
    """

    def __init__(self, m: int, starts: Sequence[int], targets: Sequence[int]):
        self.m = m
        self.flag_wire = m
        self.data = list(starts)
        self.targets = list(targets)
        self.flags = [0] * len(starts)
        self.gates: list[Gate] = []

    @property
    def flagged(self) -> set[int]:
        return {b for b, f in enumerate(self.flags) if f}

    def pending(self, b: int) -> int:
        return self.data[b] ^ self.targets[b]

    def occupant(self, state: int, exclude: int | None = None) -> int | None:
        for b, d in enumerate(self.data):
            if d == state and b != exclude:
                return b
        return None

    def distinct(self) -> bool:
        return len(set(self.data)) == len(self.data)

    # gate emission

    def mcx(self, cube: dict[int, int], label: str | None = None) -> None:
        """MCX onto the flag controlled by ``{bit: value}`` over data wires."""
        if not cube:
            raise ConsistencyError("an MCX needs at least one data control")
        controls = tuple(sorted(cube.items()))
        self.gates.append(Gate.mcx(controls, self.flag_wire, label=label))
        for b, d in enumerate(self.data):
            if all((d >> w) & 1 == v for w, v in controls):
                self.flags[b] ^= 1

    def full_cube(self, state: int) -> dict[int, int]:
        return {w: (state >> w) & 1 for w in range(self.m)}

    def write(self, bit: int, label: str | None = None) -> None:
        self.gates.append(Gate.cx(self.flag_wire, bit, label=label))
        for b in self.flagged:
            self.data[b] ^= 1 << bit

    def write_all(self, b: int, label: str | None = None) -> None:
        diff = self.pending(b)
        for bit in range(self.m):
            if (diff >> bit) & 1:
                self.write(bit, label)

    # naive moves

    def move(self, b: int) -> None:
        """Carry branch ``b`` to its target: entangle, write, disentangle."""
        name = format_bits(self.targets[b], self.m)
        self.mcx(self.full_cube(self.data[b]), f"entangle {format_bits(self.data[b], self.m)}")
        self.write_all(b, f"write {name}")
        self.mcx(self.full_cube(self.data[b]), f"disentangle {name}")

    def swap(self, b: int, c: int) -> None:
        """Exchange the data of ``b`` and ``c``; used to break move cycles."""
        x, y = self.data[b], self.data[c]
        diff = x ^ y
        bits = [w for w in range(self.m) if (diff >> w) & 1]
        self.mcx(self.full_cube(x), "swap: entangle")
        for w in bits:
            self.write(w, "swap: move first")
        self.mcx(self.full_cube(y), "swap: hand over flag")
        for w in bits:
            self.write(w, "swap: move second")
        self.mcx(self.full_cube(x), "swap: disentangle")

    def run_moves(self, include_identity: bool = False) -> None:
        """Move every branch to its target in address order.

        A move is deferred while its target is still occupied by another
        branch; if every remaining move is blocked, a swap breaks the cycle.
        """
        pending = [b for b in range(len(self.data)) if include_identity or self.pending(b)]
        while pending:
            ready = [b for b in pending if self.occupant(self.targets[b], exclude=b) is None]
            if ready:
                b = ready[0]
                self.move(b)
                pending.remove(b)
                continue
            b = pending[0]
            c = self.occupant(self.targets[b], exclude=b)
            self.swap(b, c)
            pending.remove(b)
            if not self.pending(c) and c in pending:
                pending.remove(c)

    def check_done(self) -> None:
        if any(self.flags) or self.data != self.targets:
            raise ConsistencyError("write network did not reach the target patterns")


# -- circuits -----------------------------------------------------------------

def address_hadamards(amap: AddressMap) -> list[Gate]:
    return [Gate.h(w, label="address superposition") for w in range(amap.g)]


def pt_write_network(amap: AddressMap, skip_identity: bool = True) -> Circuit:
    """Gates carrying address state ``j`` (flag 0) to ``entries[j]`` (flag 0)."""
    if amap.k == 1:
        return single_pattern_network(amap)
    writer = BranchWriter(amap.m, list(range(amap.k)), amap.entries)
    writer.run_moves(include_identity=not skip_identity)
    writer.check_done()
    return Circuit(amap.m + 1, tuple(writer.gates))


def single_pattern_network(amap: AddressMap) -> Circuit:
    """With one pattern there is no superposition: write it with X gates."""
    (p,) = amap.entries
    gates = [Gate.x(w, label="write") for w in range(amap.m) if (p >> w) & 1]
    return Circuit(amap.m + 1, tuple(gates))


def build_pt_circuit(amap: AddressMap, skip_identity: bool = True) -> Circuit:
    return Circuit(amap.m + 1, tuple(address_hadamards(amap))) + pt_write_network(
        amap, skip_identity
    )


def data_state(state: StateVector, m: int, atol: float = 1e-10) -> StateVector:
    """Data-register state, checking the flag wire is ground."""
    return state.marginal_register(range(m), atol=atol)


def encode_pt(amap: AddressMap) -> StateVector:
    return data_state(build_pt_circuit(amap).simulate(), amap.m)


# -- explicit permutation matrix ----------------------------------------------

@dataclass(frozen=True)
class PermutationMatrixSpec:
    """Permutation of the ``n`` basis states; ``mapping[col] = row``."""

    n: int
    mapping: tuple[int, ...]

    def matrix(self) -> np.ndarray:
        P = np.zeros((self.n, self.n), dtype=np.int64)
        P[list(self.mapping), np.arange(self.n)] = 1
        return P

    @property
    def swaps(self) -> list[tuple[int, int]]:
        """Transpositions whose matrix product, in list order, equals the permutation."""
        seen, out = set(), []
        for start in range(self.n):
            if start in seen or self.mapping[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.mapping[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.mapping[nxt]
            out.extend((cycle[0], c) for c in reversed(cycle[1:]))
        return out


def permutation_matrix(amap: AddressMap) -> PermutationMatrixSpec:
    """Permutation sending address ``j`` to ``entries[j]``.

    Patterns lying outside the address block are sent back along the chain
    of preimages to the first address that is not itself a pattern, which
    reduces to plain transpositions when address and pattern sets are
    disjoint. Every other state is fixed.
    """
    n = 1 << amap.m
    if amap.m > MAX_MATRIX_QUBITS:
        raise SizeError(f"explicit matrix limited to m <= {MAX_MATRIX_QUBITS}")
    preimage = {p: j for j, p in amap.items()}
    mapping = list(range(n))
    for j, p in amap.items():
        mapping[j] = p
    for p in amap.entries:
        if p < amap.k:
            continue
        x = preimage[p]
        while x in preimage:
            x = preimage[x]
        mapping[p] = x
    return PermutationMatrixSpec(n, tuple(mapping))


def uniform_address_vector(amap: AddressMap) -> np.ndarray:
    v = np.zeros(1 << amap.m)
    v[: amap.k] = 1.0 / np.sqrt(amap.k)
    return v


# -- budgets ------------------------------------------------------------------

def predicted_pt_counts(k: int) -> GateCounts:
    """Closed-form estimate: k Hadamards and 2k MCX."""
    return GateCounts(h=k, mcx=2 * k)


def pt_gate_budget(amap: AddressMap) -> GateBudget:
    return GateBudget(predicted_pt_counts(amap.k), count_gates(build_pt_circuit(amap)))
