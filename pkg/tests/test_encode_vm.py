import numpy as np
import pytest

from quam.circuit import count_gates
from quam.encode_pt import AddressMap, encode_pt
from quam.encode_vm import (
    VmLayout,
    build_vm_circuit,
    encode_vm,
    memory_state,
    predicted_vm_counts,
    split_parameters,
    vm_gate_budget,
)
from quam.errors import InputError
from quam.patterns import PatternSet

from conftest import STORED, random_patterns, uniform_over


def test_layout():
    lay = VmLayout(4)
    assert lay.width == 10
    wires = lay.load + [lay.c1, lay.c2] + lay.memory
    assert sorted(wires) == list(range(10))


def test_split_parameters_track_remaining_patterns():
    assert split_parameters(4) == [4, 3, 2]
    assert split_parameters(2) == [2]


def test_worked_instance(sample):
    full = build_vm_circuit(sample).simulate()
    mem = memory_state(full, 4)  # raises unless load and controls are ground
    np.testing.assert_allclose(mem.amplitudes, uniform_over(16, STORED), atol=1e-10)


def test_two_single_bit_patterns():
    mem = encode_vm(PatternSet(1, (0, 1)))
    np.testing.assert_allclose(mem.amplitudes, [2**-0.5] * 2, atol=1e-10)


def test_rejects_small_or_duplicate():
    with pytest.raises(InputError):
        build_vm_circuit(PatternSet(3, (5,)))
    with pytest.raises(InputError):
        PatternSet(3, (5, 5))


def test_matches_permutation_encoder(rng):
    for _ in range(25):
        m = int(rng.integers(2, 6))
        k = [2, 4][int(rng.integers(2))]
        ps = random_patterns(rng, m, k)
        np.testing.assert_allclose(
            encode_vm(ps).amplitudes, encode_pt(AddressMap.in_order(ps)).amplitudes, atol=1e-10
        )


def test_order_independent(rng):
    ps = random_patterns(rng, 4, 5)
    shuffled = PatternSet(4, tuple(rng.permutation(ps.patterns).tolist()))
    np.testing.assert_allclose(encode_vm(ps).amplitudes, encode_vm(shuffled).amplitudes, atol=1e-10)


def test_uniform_for_non_power_of_two_k(rng):
    ps = random_patterns(rng, 4, 7)
    np.testing.assert_allclose(encode_vm(ps).amplitudes, uniform_over(16, ps.patterns), atol=1e-10)


def test_budget(sample):
    assert predicted_vm_counts(4, 4).as_dict() == dict(h=0, x=0, cx=0, ccx=16, mcx=6, cu=3)
    assert predicted_vm_counts(2, 1).as_dict() == dict(h=0, x=0, cx=0, ccx=2, mcx=2, cu=1)
    budget = vm_gate_budget(sample)
    assert budget.actual.cu == 3
    assert budget.actual == count_gates(build_vm_circuit(sample))
    # one extra MCX closes the last processing branch; CCX copies run twice per split
    assert budget.divergence() == {"ccx": 8, "mcx": 1, "cu": 0}
