"""Compare the compiled kernels with the numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import timeit

import numpy as np

from wignerlab import _kernels_py

try:
    from wignerlab import _kernels as compiled
except ImportError:
    compiled = None


def workloads():
    rng = np.random.default_rng(0)
    weights = rng.dirichlet(np.ones(8), 100_000)
    trans = rng.random((100_000, 4))
    grid = np.linspace(0.0, 2 * math.pi, 50)
    angles = rng.uniform(0.0, math.pi, (1 << 20, 3))
    return {
        "lhv_margins (1e5 trials)": lambda k: k.lhv_margins(weights, trans),
        "spin_grid_argmax (50^4)": lambda k: k.spin_grid_argmax(grid, grid, grid, grid[:25]),
        "ratio_violation_count (2^20)": lambda k: k.ratio_violation_count(2.0, angles, 1e-9),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = [("numpy", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    if compiled is None:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name, _ in backends) + "     speedup")
    for label, fn in workloads().items():
        times = [min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) for _, k in backends]
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{label:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + "  " + speed)


if __name__ == "__main__":
    main()
