#!/usr/bin/env python3
"""Benchmark the compiled integrator core against the pure-Python fallback.

The radial shooting kernel is the package hot spot: every sweep case walks
thousands of embedded Runge-Kutta steps with scalar state.  This script
times identical workloads on both backends and reports the speedup.

Usage:  python benchmarks/compare_backends.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from biharm_lab import _backend
from biharm_lab import biharmonic as bh
from biharm_lab import system as st
from biharm_lab import sweeps


def timed(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads(backend):
    c = bh.EXACT_AMPLITUDE
    return [
        ("single shot, 4096 nodes, rtol 1e-9",
         lambda: bh.shoot(3, 7.0, c, 3 * c, 20.0, num_intervals=4096,
                          backend=backend)),
        ("coupled system, rexp=0.5, 2048 nodes",
         lambda: st.solve_radial_system(4, 3.0, 0.5, 1.0, 1.8, 20.0,
                                        num_intervals=2048, backend=backend)),
        ("touched-zero classification, 1024 nodes",
         lambda: bh.shoot(3, 7.0, 1.0, 0.3, 20.0, num_intervals=1024,
                          backend=backend)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = ["python"]
    try:
        _backend.kernel("compiled")
        backends.insert(0, "compiled")
    except ImportError:
        print("compiled core not built; timing the pure-Python kernel only\n")

    names = [name for name, _ in workloads("python")]
    results = {be: [timed(fn, args.repeat) for _, fn in workloads(be)]
               for be in backends}

    width = max(len(n) for n in names)
    header = f"{'workload':<{width}}  " + "".join(f"{be:>12}" for be in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for i, name in enumerate(names):
        row = f"{name:<{width}}  "
        row += "".join(f"{1e3 * results[be][i]:>10.2f}ms" for be in backends)
        if len(backends) == 2:
            row += f"{results['python'][i] / results['compiled'][i]:>9.1f}x"
        print(row)

    # sweep-level comparison: one (n, q) slice of the weak-bound sweep
    print()
    for be in backends:
        import biharm_lab._backend as bk
        saved = bk._DEFAULT
        bk._DEFAULT = bk.kernel(be)
        try:
            t = timed(lambda: sweeps.weak_bound_sweep(n_values=(3,), q_values=(7.0,)),
                      max(1, args.repeat // 2))
        finally:
            bk._DEFAULT = saved
        print(f"weak-bound sweep slice (24 shots) on {be:>8}: {1e3 * t:8.1f}ms")


if __name__ == "__main__":
    main()
