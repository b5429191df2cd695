import sys

import numpy as np
import pytest

from quam.encode_pt import AddressMap
from quam.patterns import PatternSet

SAMPLE_STRINGS = ["0011", "1001", "1111", "0110"]
STORED = [3, 6, 9, 15]


def sample_patterns() -> PatternSet:
    return PatternSet.from_strings(SAMPLE_STRINGS)


def worked_map() -> AddressMap:
    """Hand-picked map: 00->0110, 01->1001, 10->1111, 11->0011."""
    return AddressMap(4, (0b0110, 0b1001, 0b1111, 0b0011))


def reduced_map() -> AddressMap:
    return AddressMap(4, (0b1111, 0b1001, 0b0110, 0b0011))


def random_patterns(rng, m: int, k: int) -> PatternSet:
    return PatternSet(m, tuple(int(x) for x in rng.choice(1 << m, size=k, replace=False)))


def uniform_over(n: int, indices) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[list(indices)] = 1 / np.sqrt(len(indices))
    return v


@pytest.fixture
def sample():
    return sample_patterns()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in acceptance.CRITERIA:
        if name in acceptance.RESULTS:
            terminalreporter.write_line(acceptance.line(name))
