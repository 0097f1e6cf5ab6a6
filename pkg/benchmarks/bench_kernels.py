"""Timing comparison of the numba and numpy histogram kernels.

Scans full GL_n(F_p) and a Borel cell with both backends and prints
wall-clock times plus the speedup ratio.  The numba path is warmed up
first so JIT compilation is not counted.

Run from the repo root:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from matkloos._kernels import HAS_NUMBA, borel_cell_hist, full_group_hist
from matkloos.oracle import _free_positions


def _identity(n):
    return np.eye(n, dtype=np.int64)


def time_full_group(p, n, backend, repeat=3):
    a = _identity(n)
    b = _identity(n)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        hist = full_group_hist(a, b, p, n, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, int(hist.sum())


def time_borel_cell(p, n, backend, repeat=3):
    # longest Weyl element: every position above the antidiagonal is free
    perm = list(range(n - 1, -1, -1))
    free = _free_positions(tuple(perm))
    ui = [i for i, _ in free]
    uj = [j for _, j in free]
    a = _identity(n)
    b = _identity(n)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        hist = borel_cell_hist(a, b, perm, ui, uj, p, n, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, int(hist.sum())


def run(label, fn, cases):
    print(f"\n{label}")
    print(f"  {'case':<14} {'numba':>10} {'numpy':>10} {'ratio':>8}")
    for p, n in cases:
        t_np, mass_np = fn(p, n, "numpy")
        if HAS_NUMBA:
            t_nb, mass_nb = fn(p, n, "numba")
            assert mass_nb == mass_np
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(
                f"  n={n} p={p:<7} {t_nb:>9.4f}s {t_np:>9.4f}s {ratio:>7.1f}x"
            )
        else:
            print(f"  n={n} p={p:<7} {'-':>10} {t_np:>9.4f}s {'-':>8}")


def main():
    if not HAS_NUMBA:
        print("numba unavailable, timing the numpy path only")
    # warmup: triggers compilation of both jitted kernels
    if HAS_NUMBA:
        full_group_hist(_identity(2), _identity(2), 2, 2, backend="numba")
        borel_cell_hist(
            _identity(2), _identity(2), [1, 0], [0], [1], 2, 2, backend="numba"
        )

    run(
        "full GL_n(F_p) scan (p^(n^2) candidate matrices)",
        time_full_group,
        [(11, 2), (31, 2), (3, 3), (5, 3)],
    )
    run(
        "Borel cell of the longest Weyl element",
        time_borel_cell,
        [(31, 2), (5, 3)],
    )


if __name__ == "__main__":
    main()
