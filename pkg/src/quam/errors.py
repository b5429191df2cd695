"""Exception hierarchy shared by every module in the package."""


class QuamError(Exception):
    """Base class for all errors raised by quam."""


class InputError(QuamError, ValueError):
    """Malformed or constraint-violating user input (patterns, maps, files)."""


class SizeError(QuamError, ValueError):
    """Requested register or matrix is outside the supported size range."""


class QubitIndexError(QuamError, IndexError):
    """A wire or basis index lies outside the register."""


class WiringError(QuamError, ValueError):
    """Duplicate wires, bad control lists, or a width mismatch."""


class NormalizationError(QuamError, ValueError):
    """A state that must be normalized has (near) zero norm."""


class OracleError(QuamError, ValueError):
    """An oracle resolved to an empty marked set where one is required."""


class PlanError(QuamError, ValueError):
    """A reduce schedule is malformed (e.g. unbalanced entangle/disentangle)."""


class ConsistencyError(QuamError, RuntimeError):
    """An internal invariant was breached during simulation."""
