"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--qubits 10 14 18] [--repeat 5]

Times each kernel on a random state, and the full storage circuit of a
random pattern set, once per backend. Results go to stdout as a table.
"""
import argparse
import time

import numpy as np

from quam import kernels
from quam.circuit import Circuit
from quam.encode_vm import build_vm_circuit
from quam.patterns import PatternSet
from quam.state import u_matrix


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(q, rng):
    u = u_matrix(0.3, 1.1, -0.4)
    mask = (1 << (q // 2)) | 1
    return {
        "mcx": lambda mod, s: mod.controlled_swap(s, q, mask, mask, q - 1),
        "cu": lambda mod, s: mod.controlled_unitary(s, q, 1, 1, q - 1, u[0, 0], u[0, 1], u[1, 0], u[1, 1]),
        "h": lambda mod, s: mod.controlled_unitary(s, q, 0, 0, q // 2, 1, 1, 1, -1),
        "diffuse": lambda mod, s: mod.diffuse(s, q, (1 << q) - 1),
    }


def run_circuit(mod, circuit: Circuit):
    saved = {name: getattr(kernels, name) for name in ("controlled_swap", "controlled_unitary", "negate", "diffuse")}
    for name in saved:
        setattr(kernels, name, getattr(mod, name))
    try:
        circuit.simulate()
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = kernels.BACKENDS
    if "cython" not in backends:
        print("compiled kernels are not built; only the numpy backend is available")
    rng = np.random.default_rng(args.seed)
    names = list(backends)
    print(f"{'case':<22}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))

    for q in args.qubits:
        base = rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q)
        base /= np.linalg.norm(base)
        for case, fn in kernel_cases(q, rng).items():
            row = {}
            for name, mod in backends.items():
                state = base.copy()
                row[name] = best_of(lambda: fn(mod, state), args.repeat)
            _print_row(f"{case} q={q}", row)

    for m, k in [(4, 8), (6, 16), (8, 16)]:
        ps = PatternSet(m, tuple(int(x) for x in rng.choice(1 << m, k, replace=False)))
        circuit = build_vm_circuit(ps)
        row = {name: best_of(lambda: run_circuit(mod, circuit), max(1, args.repeat // 2))
               for name, mod in backends.items()}
        _print_row(f"vm store m={m} k={k}", row)


def _print_row(label, row):
    cells = "".join(f"{row[n] * 1e3:>10.3f}ms" for n in row)
    extra = ""
    if "cython" in row and "python" in row:
        extra = f"{row['python'] / row['cython']:>11.1f}x"
    print(f"{label:<22}{cells}{extra}")


if __name__ == "__main__":
    main()
