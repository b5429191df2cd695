"""Pure numpy implementations of the statevector kernels.

Same signatures and in-place semantics as the compiled ``_kernels`` module.
The state is viewed as a rank-``q`` tensor whose axis ``q-1-w`` is wire ``w``.
"""


def _index(num_qubits, fixed):
    idx = [slice(None)] * num_qubits
    for wire, bit in fixed.items():
        idx[num_qubits - 1 - wire] = bit
    return tuple(idx)


def _controls(num_qubits, ctrl_mask, ctrl_value):
    return {
        w: (ctrl_value >> w) & 1 for w in range(num_qubits) if (ctrl_mask >> w) & 1
    }


def controlled_swap(state, num_qubits, ctrl_mask, ctrl_value, target):
    view = state.reshape((2,) * num_qubits)
    fixed = _controls(num_qubits, ctrl_mask, ctrl_value)
    i0 = _index(num_qubits, {**fixed, target: 0})
    i1 = _index(num_qubits, {**fixed, target: 1})
    tmp = view[i0].copy()
    view[i0] = view[i1]
    view[i1] = tmp


def controlled_unitary(state, num_qubits, ctrl_mask, ctrl_value, target, u00, u01, u10, u11):
    view = state.reshape((2,) * num_qubits)
    fixed = _controls(num_qubits, ctrl_mask, ctrl_value)
    i0 = _index(num_qubits, {**fixed, target: 0})
    i1 = _index(num_qubits, {**fixed, target: 1})
    a0 = view[i0].copy()
    a1 = view[i1].copy()
    view[i0] = u00 * a0 + u01 * a1
    view[i1] = u10 * a0 + u11 * a1


def negate(state, indices):
    state[indices] = -state[indices]


def diffuse(state, num_qubits, sub_mask):
    view = state.reshape((2,) * num_qubits)
    axes = tuple(num_qubits - 1 - w for w in range(num_qubits) if (sub_mask >> w) & 1)
    view -= 2.0 * view.mean(axis=axes, keepdims=True)
