"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time per kernel and backend, the speed-up, and whether
the two backends agree on the result.
"""

import argparse
import timeit

import numpy as np

from solitonlab import kernels


def cases():
    rng = np.random.default_rng(0)
    u = rng.normal(size=1024)
    up = rng.normal(size=1024)
    psi = rng.normal(size=4096) + 1j * rng.normal(size=4096)
    offset = rng.normal(size=4096)
    counters = rng.integers(0, 2**32, size=(100_000, 4), dtype=np.uint64).astype(np.uint32)
    return {
        "philox4x32 (1e5 blocks)": lambda m: m.philox4x32(counters, 1, 2),
        "uniforms (1e6)": lambda m: m.uniforms(1, 2, 0, 0, 1_000_000),
        "count_phase_window (1e6)": lambda m: m.count_phase_window(1, 2, 0, 0, 1_000_000, 0.3),
        "leapfrog (1024 pts x 1000)": lambda m: m.leapfrog(u, up, 0.25, 1e-3, 1000),
        "phase_rotate (4096 pts)": lambda m: m.phase_rotate(psi.copy(), offset, 0.1),
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if a is None:
        return b is None
    return bool(np.allclose(a, b, rtol=1e-12, atol=1e-12))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only the Python kernels are available")
    print(f"{'kernel':28s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speed-up':>9s}  agree")
    for name, call in cases().items():
        times, results = {}, {}
        for label, mod in backends.items():
            results[label] = call(mod)
            times[label] = min(timeit.repeat(lambda: call(mod), number=1, repeat=args.repeat))
        py = times["python"] * 1e3
        if "cython" in times:
            cy = times["cython"] * 1e3
            agree = same(results["python"], results["cython"])
            print(f"{name:28s} {py:12.3f} {cy:12.3f} {py / cy:8.1f}x  {agree}")
        else:
            print(f"{name:28s} {py:12.3f} {'-':>12s} {'-':>9s}  -")


if __name__ == "__main__":
    main()
