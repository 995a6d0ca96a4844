"""Timing comparison of the compiled and pure-python kernels.

Run with: python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from reludist import _pykernels

try:
    from reludist import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench(name, fn_by_backend):
    print(f"\n{name}")
    base = None
    for label, fn in fn_by_backend:
        if fn is None:
            print(f"  {label:<14} unavailable")
            continue
        t = _time(fn)
        note = f"  ({base / t:.1f}x vs pure)" if base is not None else ""
        if base is None:
            base = t
        print(f"  {label:<14} {t * 1e3:8.2f} ms{note}")


def main():
    m, n = 4096, 64
    rg = np.random.default_rng(0)
    x = rg.standard_normal(n)
    y = rg.standard_normal(n)
    xs = np.zeros(n)
    ys = np.zeros(n)
    xs[0], ys[0], ys[1] = 1.0, 0.5, 0.25

    bench(f"gaussian_entries m={m} n={n}", [
        ("pure-python", lambda: _pykernels.gaussian_entries(1, m, n)),
        ("compiled", (lambda: _kernels.gaussian_entries(1, m, n)) if _kernels else None),
    ])
    bench(f"pair_trial dense m={m} n={n}", [
        ("pure-python", lambda: _pykernels.pair_trial(1, m, x, y)),
        ("compiled", (lambda: _kernels.pair_trial(1, m, x, y)) if _kernels else None),
    ])
    bench(f"pair_trial planar (2 active cols) m={m} n={n}", [
        ("pure-python", lambda: _pykernels.pair_trial(1, m, xs, ys)),
        ("compiled", (lambda: _kernels.pair_trial(1, m, xs, ys)) if _kernels else None),
    ])

    if _kernels is not None:
        a = _kernels.pair_trial(7, m, x, y)
        b = _pykernels.pair_trial(7, m, x, y)
        worst = max(abs(va - vb) / abs(vb) for va, vb in zip(a, b))
        print(f"\ncross-backend max rel deviation: {worst:.3g}")


if __name__ == "__main__":
    main()
