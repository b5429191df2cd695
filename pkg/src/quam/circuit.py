"""Gate-list circuit IR: simulate, invert, count, serialize, peephole.

Text format, one gate per line::

    # width 5
    H 0
    MCX ~0 ~1 ~2 ~3 4    # entangle 0000
    CX 4 2
    CU 4 5 [1.0471975511965979, 3.141592653589793, 3.141592653589793]

Wires are listed controls first, target last. A ``~`` prefix marks an
anti-control (fires on ``|0>``). Text after ``#`` is a comment; on a gate
line it becomes the gate label.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable

from .errors import InputError, WiringError
from .state import Control, StateVector, split_angle, u_matrix

KINDS = ("H", "X", "CX", "CCX", "MCX", "CU")

_CONTROL_ARITY = {"H": (0, 0), "X": (0, 0), "CX": (1, 1), "CCX": (2, 2), "MCX": (1, None), "CU": (1, 1)}


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    controls: tuple[Control, ...] = ()
    params: tuple[float, float, float] | None = None
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise WiringError(f"unknown gate kind {self.kind!r}")
        lo, hi = _CONTROL_ARITY[self.kind]
        n = len(self.controls)
        if n < lo or (hi is not None and n > hi):
            raise WiringError(f"{self.kind} takes {lo}..{hi or 'any'} controls, got {n}")
        wires = [w for w, _ in self.controls] + [self.target]
        if len(set(wires)) != len(wires):
            raise WiringError(f"duplicate wires in {self.kind} {wires}")
        if any(b not in (0, 1) for _, b in self.controls):
            raise WiringError("control polarity must be 0 or 1")
        if (self.kind == "CU") != (self.params is not None):
            raise WiringError("parameters are required for CU and only for CU")

    @property
    def wires(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.controls) + (self.target,)

    def inverse(self) -> Gate:
        if self.kind != "CU":
            return self
        theta, phi, lam = self.params
        return replace(self, params=(-theta, -lam, -phi))

    def apply(self, state: StateVector) -> None:
        if self.kind == "H":
            state.h(self.target)
        elif self.kind == "CU":
            state.unitary(u_matrix(*self.params), self.target, self.controls)
        else:
            state.mcx(self.controls, self.target)

    # convenience constructors
    @staticmethod
    def h(target: int, label: str | None = None) -> Gate:
        return Gate("H", target, label=label)

    @staticmethod
    def x(target: int, label: str | None = None) -> Gate:
        return Gate("X", target, label=label)

    @staticmethod
    def cx(control: int, target: int, polarity: int = 1, label: str | None = None) -> Gate:
        return Gate("CX", target, ((control, polarity),), label=label)

    @staticmethod
    def ccx(c0: int, c1: int, target: int, label: str | None = None) -> Gate:
        return Gate("CCX", target, ((c0, 1), (c1, 1)), label=label)

    @staticmethod
    def mcx(controls: Iterable[Control], target: int, label: str | None = None) -> Gate:
        return Gate("MCX", target, tuple(controls), label=label)

    @staticmethod
    def cu(theta: float, phi: float, lam: float, control: int, target: int, label: str | None = None) -> Gate:
        return Gate("CU", target, ((control, 1),), (theta, phi, lam), label=label)


@dataclass(frozen=True)
class GateCounts:
    h: int = 0
    x: int = 0
    cx: int = 0
    ccx: int = 0
    mcx: int = 0
    cu: int = 0

    @property
    def total(self) -> int:
        return self.h + self.x + self.cx + self.ccx + self.mcx + self.cu

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.width < 1:
            raise WiringError("circuit width must be positive")
        for g in self.gates:
            if max(g.wires) >= self.width or min(g.wires) < 0:
                raise WiringError(f"{g.kind} on wires {g.wires} exceeds width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.width != self.width:
            raise WiringError("cannot concatenate circuits of different width")
        return Circuit(self.width, self.gates + other.gates)

    @property
    def labels(self) -> list[str | None]:
        return [g.label for g in self.gates]

    def simulate(self, initial: StateVector | None = None) -> StateVector:
        return simulate(self, initial)

    def inverse(self) -> Circuit:
        return inverse(self)

    def count(self) -> GateCounts:
        return count_gates(self)

    def to_text(self) -> str:
        return dumps(self)


def simulate(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """Apply the gates in order to a copy of ``initial`` (ground state by default)."""
    if initial is None:
        state = StateVector(circuit.width)
    else:
        if initial.num_qubits != circuit.width:
            raise WiringError(
                f"state has {initial.num_qubits} qubits, circuit has width {circuit.width}"
            )
        state = initial.copy()
    for g in circuit.gates:
        g.apply(state)
    return state


def inverse(circuit: Circuit) -> Circuit:
    return Circuit(circuit.width, tuple(g.inverse() for g in reversed(circuit.gates)))


def count_gates(circuit: Circuit) -> GateCounts:
    tally = Counter(g.kind.lower() for g in circuit.gates)
    return GateCounts(**tally)


# -- text serialization -----------------------------------------------------

def dumps(circuit: Circuit) -> str:
    lines = [f"# width {circuit.width}"]
    for g in circuit.gates:
        wires = [("~" if b == 0 else "") + str(w) for w, b in g.controls] + [str(g.target)]
        line = f"{g.kind} {' '.join(wires)}"
        if g.params is not None:
            line += " [" + ", ".join(repr(float(p)) for p in g.params) + "]"
        if g.label:
            line += f"  # {g.label}"
        lines.append(line)
    return "\n".join(lines) + "\n"


_WIDTH = re.compile(r"#\s*width\s+(\d+)")


def loads(text: str, width: int | None = None) -> Circuit:
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        code, _, comment = raw.partition("#")
        code = code.strip()
        if not code:
            m = _WIDTH.match(raw.strip())
            if m and width is None:
                width = int(m.group(1))
            continue
        params = None
        if "[" in code:
            code, _, rest = code.partition("[")
            try:
                params = tuple(float(p) for p in rest.rstrip("]").split(","))
            except ValueError as exc:
                raise InputError(f"line {lineno}: bad parameters") from exc
            if len(params) != 3:
                raise InputError(f"line {lineno}: CU needs three parameters")
        kind, *wires = code.split()
        if not wires:
            raise InputError(f"line {lineno}: missing wires")
        try:
            controls = tuple(
                (int(w.lstrip("~")), 0 if w.startswith("~") else 1) for w in wires[:-1]
            )
            target = int(wires[-1])
        except ValueError as exc:
            raise InputError(f"line {lineno}: bad wire list") from exc
        gates.append(Gate(kind.upper(), target, controls, params, comment.strip() or None))
    if width is None:
        width = 1 + max((max(g.wires) for g in gates), default=0)
    return Circuit(width, tuple(gates))


# -- polarity rewriting -----------------------------------------------------

def expand_polarity(circuit: Circuit) -> Circuit:
    """Replace every anti-control by an explicit X sandwich."""
    out = []
    for g in circuit.gates:
        anti = [w for w, b in g.controls if b == 0]
        if not anti:
            out.append(g)
            continue
        out.extend(Gate.x(w) for w in anti)
        out.append(replace(g, controls=tuple((w, 1) for w, _ in g.controls)))
        out.extend(Gate.x(w) for w in anti)
    return Circuit(circuit.width, tuple(out))


def peephole(circuit: Circuit) -> Circuit:
    """Remove X pairs on the same wire.

    Two X gates on a wire cancel when every gate between them either leaves
    the wire alone or uses it only as a control; such controls have their
    polarity flipped. Adjacent pairs are the trivial case. Runs to a fixpoint.
    """
    gates = list(circuit.gates)
    while True:
        folded = _fold_once(gates)
        if folded is None:
            return Circuit(circuit.width, tuple(gates))
        gates = folded


def _fold_once(gates: list[Gate]) -> list[Gate] | None:
    open_x: dict[int, int] = {}
    for i, g in enumerate(gates):
        if g.kind == "X":
            w = g.target
            if w in open_x:
                j = open_x[w]
                out = gates[:j]
                for mid in gates[j + 1 : i]:
                    if w in (c for c, _ in mid.controls):
                        mid = replace(
                            mid, controls=tuple((c, 1 - b if c == w else b) for c, b in mid.controls)
                        )
                    out.append(mid)
                out.extend(gates[i + 1 :])
                return out
            open_x[w] = i
            continue
        # a gate targeting a wire blocks any pending X on it
        open_x.pop(g.target, None)
    return None


def split_angle_gate(p: int, control: int, target: int, label: str | None = None) -> Gate:
    """Controlled split ``CU(2 asin(1/sqrt p), pi, pi)``."""
    return Gate.cu(split_angle(p), math.pi, math.pi, control, target, label=label)
