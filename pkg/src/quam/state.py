"""Dense complex statevector with the gates, oracles and diffusion used here.

Qubit ``i`` is bit ``i`` of the basis index (little-endian). All gate methods
mutate the state in place and return ``self`` so calls can be chained.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    ConsistencyError,
    NormalizationError,
    QubitIndexError,
    SizeError,
    WiringError,
)

MAX_QUBITS = 24

# A control is a (wire, required_bit) pair; required_bit 0 is an anti-control.
Control = tuple[int, int]

_H = 1.0 / math.sqrt(2.0)


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """The generic single-qubit rotation U(theta, phi, lambda)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def split_angle(p: int) -> float:
    """Rotation angle that peels amplitude ``1/sqrt(p)`` off a branch."""
    if p < 1:
        raise ValueError("split parameter must be positive")
    return 2.0 * math.asin(1.0 / math.sqrt(p))


@dataclass(frozen=True)
class MeasurementOutcome:
    index: int
    probability: float


class StateVector:
    """``2**num_qubits`` complex amplitudes."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: Sequence[complex] | np.ndarray | None = None):
        if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= MAX_QUBITS:
            raise SizeError(f"qubit count must be in [1, {MAX_QUBITS}], got {num_qubits}")
        self.num_qubits = int(num_qubits)
        if amplitudes is None:
            self.amplitudes = np.zeros(1 << self.num_qubits, dtype=np.complex128)
            self.amplitudes[0] = 1.0
        else:
            amps = np.array(amplitudes, dtype=np.complex128).ravel()
            if amps.shape[0] != 1 << self.num_qubits:
                raise SizeError(
                    f"{self.num_qubits} qubits need {1 << self.num_qubits} amplitudes, "
                    f"got {amps.shape[0]}"
                )
            self.amplitudes = np.ascontiguousarray(amps)

    @classmethod
    def from_basis(cls, num_qubits: int, index: int) -> StateVector:
        s = cls(num_qubits)
        s._check_index(index)
        s.amplitudes[0] = 0.0
        s.amplitudes[index] = 1.0
        return s

    @classmethod
    def uniform_over(cls, num_qubits: int, indices: Iterable[int]) -> StateVector:
        """Equal positive amplitudes on ``indices``, zero elsewhere."""
        indices = sorted(set(indices))
        s = cls(num_qubits)
        s.amplitudes[0] = 0.0
        for i in indices:
            s._check_index(i)
        s.amplitudes[indices] = 1.0 / math.sqrt(len(indices))
        return s

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        nz = np.flatnonzero(np.abs(self.amplitudes) > 1e-12)
        terms = ", ".join(f"{i}: {self.amplitudes[i]:.4g}" for i in nz[:8])
        more = ", ..." if nz.size > 8 else ""
        return f"StateVector({self.num_qubits}, {{{terms}{more}}})"

    # -- validation -------------------------------------------------------

    def _check_wire(self, wire: int) -> None:
        if not 0 <= wire < self.num_qubits:
            raise QubitIndexError(f"wire {wire} outside register of {self.num_qubits} qubits")

    def _check_index(self, index: int) -> None:
        if not 0 <= index < self.dim:
            raise QubitIndexError(f"basis index {index} outside [0, {self.dim})")

    def _control_masks(self, controls: Iterable[Control], target: int) -> tuple[int, int]:
        self._check_wire(target)
        mask = value = 0
        seen = {target}
        for wire, bit in controls:
            self._check_wire(wire)
            if wire in seen:
                raise WiringError(f"wire {wire} used twice")
            if bit not in (0, 1):
                raise WiringError(f"control polarity must be 0 or 1, got {bit}")
            seen.add(wire)
            mask |= 1 << wire
            value |= bit << wire
        return mask, value

    # -- gates ------------------------------------------------------------

    def h(self, target: int) -> StateVector:
        self._check_wire(target)
        kernels.controlled_unitary(self.amplitudes, self.num_qubits, 0, 0, target, _H, _H, _H, -_H)
        return self

    def mcx(self, controls: Iterable[Control], target: int) -> StateVector:
        """Polarity-aware multi-controlled NOT; covers X, CX and CCX."""
        mask, value = self._control_masks(controls, target)
        kernels.controlled_swap(self.amplitudes, self.num_qubits, mask, value, target)
        return self

    def x(self, target: int) -> StateVector:
        return self.mcx((), target)

    def cx(self, control: int, target: int, polarity: int = 1) -> StateVector:
        return self.mcx([(control, polarity)], target)

    def ccx(self, c0: int, c1: int, target: int) -> StateVector:
        return self.mcx([(c0, 1), (c1, 1)], target)

    def unitary(self, matrix: np.ndarray, target: int, controls: Iterable[Control] = ()) -> StateVector:
        mask, value = self._control_masks(controls, target)
        m = np.asarray(matrix, dtype=complex)
        kernels.controlled_unitary(
            self.amplitudes, self.num_qubits, mask, value, target, m[0, 0], m[0, 1], m[1, 0], m[1, 1]
        )
        return self

    def cu(self, theta: float, phi: float, lam: float, control: int, target: int) -> StateVector:
        return self.unitary(u_matrix(theta, phi, lam), target, [(control, 1)])

    def phase_mark(self, marked: Iterable[int]) -> StateVector:
        """Negate the amplitudes of the marked basis states."""
        idx = np.array(sorted(set(marked)), dtype=np.int64)
        for i in idx:
            self._check_index(int(i))
        if idx.size:
            kernels.negate(self.amplitudes, idx)
        return self

    def diffuse(self, subspace: Iterable[int] | None = None, atol: float = 1e-10) -> StateVector:
        """Reflect about the uniform state of ``subspace``: ``a -> a - 2 mean``.

        Uses ``I - 2|s><s|``, the negative of the textbook operator, so that
        printed traces match sign for sign. With a proper subspace the
        remaining wires must sit in a single basis state.
        """
        wires = list(range(self.num_qubits)) if subspace is None else list(subspace)
        if not wires:
            raise WiringError("diffusion subspace is empty")
        mask = 0
        for w in wires:
            self._check_wire(w)
            if (mask >> w) & 1:
                raise WiringError(f"wire {w} used twice")
            mask |= 1 << w
        if mask != self.dim - 1:
            self._require_definite_complement(mask, atol)
        kernels.diffuse(self.amplitudes, self.num_qubits, mask)
        return self

    def _require_definite_complement(self, sub_mask: int, atol: float) -> None:
        idx = np.arange(self.dim)
        keys = idx & ~sub_mask
        weights = np.bincount(keys, weights=self.probabilities(), minlength=self.dim)
        dominant = int(np.argmax(weights))
        outside = np.abs(self.amplitudes[keys != dominant])
        if outside.size and outside.max() > atol:
            raise ConsistencyError(
                "wires outside the diffusion subspace are not in a definite basis state"
            )

    # -- measurement ------------------------------------------------------

    def _require_norm(self) -> np.ndarray:
        probs = self.probabilities()
        total = probs.sum()
        if total < 1e-24:
            raise NormalizationError("state has zero norm")
        return probs / total

    def argmax_outcome(self) -> MeasurementOutcome:
        probs = self._require_norm()
        i = int(np.argmax(probs))  # first maximum: lowest index wins ties
        return MeasurementOutcome(i, float(probs[i]))

    def sample_outcome(self, seed: int | None = None) -> MeasurementOutcome:
        probs = self._require_norm()
        rng = np.random.default_rng(seed)
        i = int(rng.choice(self.dim, p=probs))
        return MeasurementOutcome(i, float(probs[i]))

    # -- registers --------------------------------------------------------

    def marginal_register(self, wires: Sequence[int], atol: float = 1e-10) -> StateVector:
        """Amplitudes of ``wires`` when every other wire is in ``|0>``.

        Raises ``ConsistencyError`` if any other wire carries amplitude.
        """
        wires = list(wires)
        if not wires:
            raise WiringError("register is empty")
        idx = np.arange(1 << len(wires))
        full = np.zeros_like(idx)
        for pos, w in enumerate(wires):
            self._check_wire(w)
            full |= ((idx >> pos) & 1) << w
        sub = self.amplitudes[full]
        rest = np.delete(self.amplitudes, full)
        if rest.size and np.abs(rest).max() > atol:
            raise ConsistencyError("ancilla wires are not in the ground state")
        return StateVector(len(wires), sub)

    # -- serialization ----------------------------------------------------

    def to_pairs(self) -> list[list[float]]:
        return [[float(a.real), float(a.imag)] for a in self.amplitudes]

    def to_json(self) -> str:
        return json.dumps(self.to_pairs())

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> StateVector:
        amps = np.array([complex(re, im) for re, im in pairs])
        q = int(amps.shape[0]).bit_length() - 1
        if q < 1 or 1 << q != amps.shape[0]:
            raise SizeError(f"amplitude count {amps.shape[0]} is not a power of two >= 2")
        return cls(q, amps)


def ground_state(num_qubits: int) -> StateVector:
    return StateVector(num_qubits)
