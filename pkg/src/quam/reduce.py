"""Gate-reducing planner for the permutation-technique write network.

Two stages:

1. Assignment. Hamming distances between address states and patterns form
   a matrix; the smallest remaining cells are fixed greedily and their rows
   and columns removed until nothing is left.
2. Parallel writing. Patterns that still need the same 1-bit are flagged
   together and that bit is written by one flag-controlled CX. Groups of
   branches are selected by a single MCX whenever one control cube isolates
   them from every other branch.

Planning runs on classical branch records (see ``BranchWriter``); the
resulting circuit is checked against the naive network and the planner
falls back to the naive schedule if it would not save gates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, count_gates, expand_polarity
from .encode_pt import (
    AddressMap,
    BranchWriter,
    address_hadamards,
    pt_write_network,
    single_pattern_network,
)
from .errors import InputError, PlanError
from .patterns import PatternSet, format_bits, hamming


# -- distances and assignment -------------------------------------------------

@dataclass(frozen=True)
class DistanceMatrix:
    rows: tuple[int, ...]  # address states
    cols: tuple[int, ...]  # patterns
    values: np.ndarray

    @classmethod
    def build(cls, rows: Sequence[int], cols: Sequence[int]) -> DistanceMatrix:
        values = np.array([[hamming(a, p) for p in cols] for a in rows], dtype=np.int64)
        return cls(tuple(rows), tuple(cols), values)

    def format(self, m: int) -> str:
        head = "d_H    " + " ".join(f"{format_bits(p, m):>{max(m, 2)}}" for p in self.cols)
        lines = [head]
        for a, row in zip(self.rows, self.values):
            lines.append(f"{format_bits(a, m):<6} " + " ".join(f"{v:>{max(m, 2)}}" for v in row))
        return "\n".join(lines)


def greedy_assignment(D: np.ndarray) -> list[list[tuple[int, int]]]:
    """Row/column elimination on the global minimum.

    Each pass takes the smallest value left, fixes every cell holding it in
    (row, column) order when both are still free, then deletes those rows and
    columns. Returns the fixed ``(row, col)`` pairs grouped by pass.
    """
    rows = set(range(D.shape[0]))
    cols = set(range(D.shape[1]))
    if len(rows) != len(cols):
        raise InputError("distance matrix must be square")
    passes = []
    while rows:
        best = min(D[r, c] for r in rows for c in cols)
        taken = []
        for r in sorted(rows):
            for c in sorted(cols):
                if D[r, c] == best and c not in {tc for _, tc in taken} and r not in {tr for tr, _ in taken}:
                    taken.append((r, c))
                    break
        for r, c in taken:
            rows.discard(r)
            cols.discard(c)
        passes.append(taken)
    return passes


def assign_addresses(patterns: PatternSet, addresses: Sequence[int] | None = None) -> AddressMap:
    """Greedy minimal-Hamming assignment of patterns to address states."""
    k = patterns.k
    addresses = list(range(k)) if addresses is None else list(addresses)
    if sorted(addresses) != list(range(k)):
        raise InputError("addresses must be the k lowest basis states")
    D = DistanceMatrix.build(addresses, patterns.patterns).values
    table = {}
    for taken in greedy_assignment(D):
        for r, c in taken:
            table[addresses[r]] = patterns.patterns[c]
    return AddressMap.from_pairs(patterns.m, table.items())


def assignment_cost(amap: AddressMap) -> int:
    return sum(hamming(j, p) for j, p in amap.items())


def optimal_assignment_cost(patterns: PatternSet) -> int:
    """Exhaustive minimum over all ``k!`` assignments (reporting only)."""
    if patterns.k > 6:
        raise InputError("exhaustive assignment is limited to k <= 6")
    return min(
        sum(hamming(j, p) for j, p in enumerate(perm))
        for perm in itertools.permutations(patterns.patterns)
    )


# -- similarity ---------------------------------------------------------------

def masked_pattern(pattern: int, current: int, m: int) -> str:
    """Display string with ``I`` at 1-bits that are already in place."""
    chars = []
    for w in reversed(range(m)):
        p, c = (pattern >> w) & 1, (current >> w) & 1
        chars.append("I" if p and c else str(p))
    return "".join(chars)


@dataclass(frozen=True)
class SimilarityMatrix:
    labels: tuple[str, ...]
    values: np.ndarray  # diagonal is meaningless and held at 0

    def __getitem__(self, ij: tuple[int, int]) -> int | None:
        i, j = ij
        return None if i == j else int(self.values[i, j])

    def format(self) -> str:
        w = max(len(s) for s in self.labels)
        lines = ["sim".ljust(w) + " " + " ".join(s.rjust(w) for s in self.labels)]
        for i, s in enumerate(self.labels):
            cells = ["*" if i == j else str(self.values[i, j]) for j in range(len(self.labels))]
            lines.append(s.ljust(w) + " " + " ".join(c.rjust(w) for c in cells))
        return "\n".join(lines)


def similarity(a: str, b: str) -> int:
    """Shared unwritten 1-bits of two masked pattern strings."""
    if len(a) != len(b):
        raise InputError(f"mask length mismatch: {a!r} vs {b!r}")
    return sum(x == "1" and y == "1" for x, y in zip(a, b))


def build_similarity(masked: Sequence[str]) -> SimilarityMatrix:
    n = len(masked)
    values = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = similarity(masked[i], masked[j])
    return SimilarityMatrix(tuple(masked), values)


# -- plans --------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    """One schedule entry; ``branches`` are address indices."""

    kind: str  # entangle | disentangle | write | swap
    branches: tuple[int, ...]
    bit: int | None = None


@dataclass(frozen=True)
class Cluster:
    bit: int
    members: tuple[int, ...]  # patterns sharing the bit


@dataclass(frozen=True)
class ReducePlan:
    assignment: AddressMap
    clusters: tuple[Cluster, ...]
    schedule: tuple[Step, ...]
    distance: DistanceMatrix
    assignment_passes: tuple[tuple[tuple[int, int], ...], ...]
    similarity: SimilarityMatrix
    fallback: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def m(self) -> int:
        return self.assignment.m

    def explain(self) -> str:
        return explain_plan(self)


class _Planner:
    def __init__(self, amap: AddressMap):
        self.amap = amap
        self.m = amap.m
        self.w = BranchWriter(amap.m, list(range(amap.k)), amap.entries)
        self.steps: list[Step] = []
        self.clusters: list[Cluster] = []

    # flag management

    def toggle(self, group: set[int], kind: str) -> None:
        if not group:
            return
        self.steps.append(Step(kind, tuple(sorted(group))))
        emit_toggle(self.w, group, kind)

    def set_flags(self, target: set[int]) -> None:
        current = self.w.flagged
        self.toggle(current - target, "disentangle")
        self.toggle(target - current, "entangle")

    def write(self, bit: int) -> None:
        self.steps.append(Step("write", tuple(sorted(self.w.flagged)), bit))
        self.w.write(bit)

    # helpers

    def one_writes(self, b: int) -> list[int]:
        d, t = self.w.data[b], self.w.targets[b]
        return [q for q in range(self.m) if (t >> q) & 1 and not (d >> q) & 1]

    def groups(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {q: [] for q in range(self.m)}
        for b in range(len(self.w.data)):
            for q in self.one_writes(b):
                out[q].append(b)
        return out

    def free_after(self, moved: dict[int, int]) -> bool:
        data = list(self.w.data)
        for b, s in moved.items():
            data[b] = s
        return len(set(data)) == len(data)

    # main loop

    def run(self) -> None:
        while True:
            groups = self.groups()
            choice = None
            for q in sorted(groups, key=lambda q: (-len(groups[q]), q)):
                members = groups[q]
                if len(members) < 2:
                    break
                if self.free_after({b: self.w.data[b] ^ (1 << q) for b in members}):
                    choice = (q, set(members))
                    break
            if choice is None:
                break
            q, members = choice
            self.clusters.append(
                Cluster(q, tuple(self.w.targets[b] for b in sorted(members)))
            )
            keep = self.w.flagged & members
            self.set_flags(keep)
            if len(keep) == 1:
                (b,) = keep
                self.write_unshared(b, groups)
            self.set_flags(members)
            self.write(q)
        self.finish()

    def write_unshared(self, b: int, groups: dict[int, list[int]]) -> None:
        diff = self.w.pending(b)
        bits = [
            q for q in range(self.m)
            if (diff >> q) & 1 and not (len(groups[q]) >= 2 and b in groups[q])
        ]
        if bits and self.free_after({b: self.w.data[b] ^ sum(1 << q for q in bits)}):
            for q in bits:
                self.write(q)

    def finish(self) -> None:
        w = self.w
        while True:
            pending = [b for b in range(len(w.data)) if w.pending(b)]
            if not pending:
                break
            ready = [b for b in pending if w.occupant(w.targets[b], exclude=b) is None]
            if ready:
                flagged = [b for b in ready if b in w.flagged]
                b = (flagged or ready)[0]
                self.set_flags({b})
                for q in range(self.m):
                    if (w.pending(b) >> q) & 1:
                        self.write(q)
                continue
            self.set_flags(set())
            b = pending[0]
            c = w.occupant(w.targets[b], exclude=b)
            self.steps.append(Step("swap", (b, c)))
            w.swap(b, c)
        self.set_flags(set())


def cube_cover(data: Sequence[int], group: set[int], m: int) -> list[list[int]]:
    """Partition ``group`` into sets each isolated by one control cube.

    A set is isolated when the data bits its members agree on match no
    branch outside the set. Greedy: grow each set from its lowest member.
    """
    def agreed(members: list[int]) -> dict[int, int]:
        first = data[members[0]]
        return {
            w: (first >> w) & 1
            for w in range(m)
            if all((data[b] >> w) & 1 == (first >> w) & 1 for b in members)
        }

    def clean(members: list[int]) -> bool:
        cube = agreed(members)
        if not cube:
            return False
        inside = set(members)
        return not any(
            b not in inside and all((d >> w) & 1 == v for w, v in cube.items())
            for b, d in enumerate(data)
        )

    remaining = sorted(group)
    out = []
    while remaining:
        chosen = [remaining[0]]
        for b in remaining[1:]:
            if clean(chosen + [b]):
                chosen.append(b)
        out.append(chosen)
        remaining = [b for b in remaining if b not in chosen]
    return out


def emit_toggle(writer: BranchWriter, group: set[int], kind: str) -> None:
    for members in cube_cover(writer.data, group, writer.m):
        first = writer.data[members[0]]
        cube = {
            w: (first >> w) & 1
            for w in range(writer.m)
            if all((writer.data[b] >> w) & 1 == (first >> w) & 1 for b in members)
        }
        names = " ".join(format_bits(writer.data[b], writer.m) for b in members)
        writer.mcx(cube, f"{kind} {names}")


def plan_reduction(patterns: PatternSet | AddressMap) -> ReducePlan:
    """Plan a reduced write network.

    Given a ``PatternSet`` the assignment is chosen greedily; an explicit
    ``AddressMap`` is used as is.
    """
    if isinstance(patterns, AddressMap):
        amap = patterns
        pset = amap.patterns
        passes = ()
    else:
        pset = patterns
        k = pset.k
        if k & (k - 1):
            raise InputError(f"number of patterns must be a power of two, got {k}")
        amap = assign_addresses(pset)
    distance = DistanceMatrix.build(range(pset.k), pset.patterns)
    if not isinstance(patterns, AddressMap):
        passes = tuple(tuple(p) for p in greedy_assignment(distance.values))
    masked = [masked_pattern(p, j, amap.m) for j, p in amap.items() if p != j]
    sim = build_similarity(masked) if masked else SimilarityMatrix((), np.zeros((0, 0), np.int64))

    planner = _Planner(amap)
    if amap.k > 1:
        planner.run()
    plan = ReducePlan(
        amap, tuple(planner.clusters), tuple(planner.steps), distance, passes, sim
    )
    if amap.k == 1:
        return plan
    cost = _cost(reduced_write_network(plan))
    baselines = [(amap, "the greedy assignment")]
    if not isinstance(patterns, AddressMap):
        baselines.append((AddressMap.in_order(pset), "the input order"))
    for base, name in baselines:
        if _cost(pt_write_network(base)) < cost:
            masked = [masked_pattern(p, j, base.m) for j, p in base.items() if p != j]
            plan = ReducePlan(
                base, (), _naive_schedule(base), distance, passes,
                build_similarity(masked) if masked else sim, fallback=True,
                notes=(f"parallel schedule cost more than naive writes on {name}; kept naive",),
            )
            cost = _cost(reduced_write_network(plan))
    return plan


def _cost(circuit: Circuit) -> int:
    counts = count_gates(circuit)
    return counts.mcx + counts.cx


def _naive_schedule(amap: AddressMap) -> tuple[Step, ...]:
    """Naive moves expressed as schedule steps (one branch per flag session)."""
    planner = _Planner(amap)
    w = planner.w
    while True:
        pending = [b for b in range(amap.k) if w.pending(b)]
        if not pending:
            break
        ready = [b for b in pending if w.occupant(w.targets[b], exclude=b) is None]
        if ready:
            b = ready[0]
            planner.set_flags({b})
            for q in range(amap.m):
                if (w.pending(b) >> q) & 1:
                    planner.write(q)
            planner.set_flags(set())
        else:
            b = pending[0]
            c = w.occupant(w.targets[b], exclude=b)
            planner.steps.append(Step("swap", (b, c)))
            w.swap(b, c)
    return tuple(planner.steps)


# -- circuit emission ---------------------------------------------------------

def reduced_write_network(plan: ReducePlan) -> Circuit:
    """Replay the schedule into gates, validating it step by step."""
    amap = plan.assignment
    if amap.k == 1:
        return single_pattern_network(amap)
    w = BranchWriter(amap.m, list(range(amap.k)), amap.entries)
    for step in plan.schedule:
        members = set(step.branches)
        if any(not 0 <= b < amap.k for b in members):
            raise PlanError(f"step {step} names an unknown branch")
        if step.kind == "entangle":
            if members & w.flagged:
                raise PlanError(f"entangling already flagged branches {sorted(members & w.flagged)}")
            emit_toggle(w, members, "entangle")
        elif step.kind == "disentangle":
            if members - w.flagged:
                raise PlanError(f"disentangling unflagged branches {sorted(members - w.flagged)}")
            emit_toggle(w, members, "disentangle")
        elif step.kind == "write":
            if step.bit is None or not 0 <= step.bit < amap.m:
                raise PlanError(f"write step without a valid bit: {step}")
            if members != w.flagged:
                raise PlanError("write step does not match the flagged branches")
            names = " ".join(format_bits(w.targets[b], amap.m) for b in sorted(members))
            kind = "parallel write" if len(members) > 1 else "write"
            w.write(step.bit, f"{kind} q{step.bit} ({names})")
        elif step.kind == "swap":
            if w.flagged:
                raise PlanError("swap requires every flag to be clear")
            b, c = step.branches
            w.swap(b, c)
        else:
            raise PlanError(f"unknown step kind {step.kind!r}")
        if step.kind in ("entangle", "disentangle") and not _toggled_exactly(w, members, step.kind):
            raise PlanError(f"{step.kind} of {sorted(members)} also hit other branches")
    if w.flagged:
        raise PlanError("schedule leaves branches entangled with the flag")
    if w.data != w.targets:
        raise PlanError("schedule does not reach the assigned patterns")
    return Circuit(amap.m + 1, tuple(w.gates))


def _toggled_exactly(w: BranchWriter, members: set[int], kind: str) -> bool:
    want = 1 if kind == "entangle" else 0
    return all(w.flags[b] == want for b in members)


def build_reduced_circuit(plan: ReducePlan, sandwich: bool = False) -> Circuit:
    """Hadamards plus the reduced write network.

    ``sandwich=True`` spells every anti-control as an X pair around the gate;
    ``peephole`` folds those back into control polarities.
    """
    amap = plan.assignment
    circuit = Circuit(amap.m + 1, tuple(address_hadamards(amap))) + reduced_write_network(plan)
    return expand_polarity(circuit) if sandwich else circuit


def explain_plan(plan: ReducePlan) -> str:
    amap, m = plan.assignment, plan.m
    out = ["Distance matrix (rows: address states, columns: patterns)", plan.distance.format(m), ""]
    for i, taken in enumerate(plan.assignment_passes, 1):
        if not taken:
            continue
        d = int(plan.distance.values[taken[0]])
        pairs = ", ".join(
            f"{format_bits(plan.distance.rows[r], m)} -> {format_bits(plan.distance.cols[c], m)}"
            for r, c in taken
        )
        out.append(f"pass {i}: minimal distance {d}: {pairs}")
    out += ["", "Assignment"]
    for j, p in amap.items():
        tag = "  (identity, nothing to write)" if j == p else ""
        out.append(f"  {format_bits(j, m)} -> {format_bits(p, m)}{tag}")
    if plan.similarity.labels:
        out += ["", "Similarity of unwritten 1-bits (I = already in place)", plan.similarity.format()]
    out.append("")
    if plan.fallback:
        out += [f"note: {n}" for n in plan.notes]
    for c in plan.clusters:
        names = ", ".join(format_bits(p, m) for p in c.members)
        out.append(f"cluster on qubit {c.bit}: {names}")
    out += ["", "Schedule"]
    w = BranchWriter(m, list(range(amap.k)), amap.entries)
    for step in plan.schedule:
        states = " ".join(format_bits(w.data[b], m) for b in step.branches)
        if step.kind in ("entangle", "disentangle"):
            emit_toggle(w, set(step.branches), step.kind)
            out.append(f"  {step.kind} {states}")
        elif step.kind == "write":
            w.write(step.bit)
            after = " ".join(format_bits(w.data[b], m) for b in step.branches)
            mode = "in parallel " if len(step.branches) > 1 else ""
            out.append(f"  write qubit {step.bit} {mode}{states} -> {after}")
        else:
            b, c = step.branches
            w.swap(b, c)
            out.append(f"  swap {states}")
    counts = count_gates(reduced_write_network(plan))
    out += ["", f"write network: {counts.mcx} MCX, {counts.cx} CX"]
    return "\n".join(out) + "\n"
