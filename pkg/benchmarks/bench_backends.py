"""Timing comparison of the compiled and pure-numpy inner-loop kernels.

Runs the same workloads against homlie._core (Cython) and homlie._core_py
(numpy) directly, bypassing the import-time backend selection, and prints a
small table with the speedup.  Usage:

    python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from homlie import _core_py
from homlie.cochain import multi_indices, structure_tables
from homlie.homalg import HomLieContext
from homlie.linalg import diagonal_signs
from homlie.sampling import random_tridiagonal_symmetric

try:
    from homlie import _core
except ImportError:
    _core = None


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads():
    beta3 = diagonal_signs([1, -1, 1])
    bracket_table, twist_table = structure_tables(HomLieContext(beta3))
    m = bracket_table.shape[0]

    rng = np.random.default_rng(0)
    args = np.ascontiguousarray(rng.standard_normal((m, 3)))
    combos3 = multi_indices(m, 3)

    l0 = random_tridiagonal_symmetric(np.random.default_rng(0), 4)
    beta4 = diagonal_signs([1, -1, 1, -1]).matrix

    out = []

    def wedge(mod):
        def run():
            for _ in range(200):
                mod.wedge_coefficients(args, combos3)
        return run

    out.append(("wedge minors, m=9 k=3, x200", wedge))

    for k in (3, 4):
        co = multi_indices(m, k + 1)
        ci = multi_indices(m, k)

        def assemble(mod, co=co, ci=ci):
            def run():
                mod.assemble_coboundary(bracket_table, twist_table, co, ci)
            return run

        out.append((f"coboundary matrix, n=3 k={k}", assemble))

    def flow(mod):
        def run():
            mod.rk4_flow(l0, beta4, 1e-3, 10_000)
        return run

    out.append(("rk4 Lax flow, n=4, 10k steps", flow))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="timing repetitions, best-of (default 3)")
    opts = parser.parse_args()

    if _core is None:
        print("compiled backend not available; showing pure-python times only")

    rows = []
    for name, make in workloads():
        t_py = bench(make(_core_py), opts.repeat)
        t_cy = bench(make(_core), opts.repeat) if _core else None
        rows.append((name, t_py, t_cy))

    width = max(len(name) for name, _, _ in rows)
    header = f"{'workload':<{width}}  {'python':>10}  {'cython':>10}  {'speedup':>7}"
    print(header)
    print("-" * len(header))
    for name, t_py, t_cy in rows:
        if t_cy is None:
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {'-':>10}  {'-':>7}")
        else:
            print(
                f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {t_cy * 1e3:>8.2f}ms"
                f"  {t_py / t_cy:>6.1f}x"
            )


if __name__ == "__main__":
    main()
