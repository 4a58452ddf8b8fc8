#!/usr/bin/env python3
"""Benchmark the compiled noise kernel against the pure-Python fallback.

The generator is the package's hot loop: each (seed, channel) stream is
inherently sequential, so the pure-Python path cannot be vectorized
away.  Run after building the extension:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from chromanoise._kernels import available_backends, get_backend

SHAPES = [(64, 64, 4), (128, 128, 4), (256, 256, 4)]
SEED = 7


def bench(fn, *args, repeats=5, min_time=0.05):
    best = float("inf")
    for _ in range(repeats):
        n, t0 = 0, time.perf_counter()
        while time.perf_counter() - t0 < min_time:
            fn(*args)
            n += 1
        best = min(best, (time.perf_counter() - t0) / n)
    return best


def main():
    backends = {name: get_backend(name) for name in available_backends()}
    print(f"backends: {', '.join(backends)}")
    header = f"{'shape':>14} " + "".join(f"{name:>14}" for name in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for shape in SHAPES:
        times = {}
        for name, mod in backends.items():
            reps = 5 if name != "python" or shape[0] <= 128 else 2
            times[name] = bench(mod.fill_standard_normal, SEED, *shape, repeats=reps)
        row = f"{'x'.join(str(s) for s in shape):>14} "
        row += "".join(f"{times[name] * 1e3:>11.2f} ms" for name in backends)
        if "cython" in times and "python" in times:
            row += f"{times['python'] / times['cython']:>9.1f}x"
        print(row)

    # correctness spot check: identical bits across backends
    mods = list(backends.values())
    if len(mods) > 1:
        a = mods[0].fill_standard_normal(SEED, 64, 64, 4)
        for mod in mods[1:]:
            b = mod.fill_standard_normal(SEED, 64, 64, 4)
            assert a.tobytes() == b.tobytes(), "backend outputs diverged"
        print("parity: outputs bit-identical across backends")
    sample = mods[0].fill_standard_normal(SEED, 256, 256, 4)
    print(f"sample mean/std at 256x256x4: {np.mean(sample):+.5f} / {np.std(sample):.5f}")


if __name__ == "__main__":
    main()
