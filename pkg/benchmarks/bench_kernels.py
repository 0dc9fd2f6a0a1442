"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from swapqkd import _kernels_py as numpy_kernels
from swapqkd.protocol import Scenario, _prepare, PINNED_CONVENTION, _PAIRS, _IDX
from swapqkd.transforms import AngleSet, basis_transform

try:
    from swapqkd import _kernels as compiled_kernels
except ImportError:
    compiled_kernels = None


def cases(k):
    r = np.random.default_rng(0)
    psi = r.normal(size=64) + 1j * r.normal(size=64)
    psi /= np.linalg.norm(psi)
    g = basis_transform(0.3, 0.7)
    angles = AngleSet.from_pi(0.1875, 0.25, 0.4375, 0.25)
    both = Scenario(True, True, 0.25)

    def full_round():
        v = _prepare(psi, angles, both, PINNED_CONVENTION, True, lambda v, g, q: k.apply_gate(v, 6, _IDX[q], g))
        return k.bell_table3(v, _PAIRS)

    return {
        "apply_gate (6 qubits)": lambda: k.apply_gate(psi, 6, 3, g),
        "bell_project (6 qubits)": lambda: k.bell_project(psi, 6, 1, 4),
        "bell_table3": lambda: k.bell_table3(psi, _PAIRS),
        "attacked round": full_round,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()
    backends = {"numpy": numpy_kernels}
    if compiled_kernels is not None:
        backends["cython"] = compiled_kernels
    else:
        print("compiled kernels not built; timing the numpy fallback only")
    timings = {}
    for name, k in backends.items():
        for case, fn in cases(k).items():
            timings.setdefault(case, {})[name] = min(timeit.repeat(fn, number=args.repeat, repeat=5)) / args.repeat
    print(f"{'kernel':<26}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for case, t in timings.items():
        line = f"{case:<26}" + "".join(f"{t[b] * 1e6:>10.2f}us" for b in backends)
        if len(backends) > 1:
            line += f"{t['numpy'] / t['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
