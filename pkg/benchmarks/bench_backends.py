#!/usr/bin/env python3
"""Benchmark: compiled extension core vs pure-Python fallback.

Times the hot paths on both backends and prints a speedup table:

    python benchmarks/bench_backends.py [--quick]

Both backends produce bit-identical numbers (asserted here too); the
compiled core exists purely for speed.
"""

import argparse
import sys
import time

import numpy as np

from walklab._backends import available_backends, get_backend


def timeit(fn, min_time=0.2):
    # one warmup call, then repeat until min_time has elapsed
    fn()
    n = 0
    t0 = time.perf_counter()
    while True:
        fn()
        n += 1
        dt = time.perf_counter() - t0
        if dt >= min_time and n >= 3:
            return dt / n


def make_cases(quick):
    t_big = 300.0 if quick else 3000.0
    n_mc = 10_000 if quick else 200_000

    def scalar_sweep(core):
        acc = 0.0
        for z in np.linspace(0.5, 50.0, 2000):
            acc += core.log_gamma(z) + core.bessel_i0e(z)
        return acc

    def kernel_sweep(core):
        acc = 0.0
        for x in np.linspace(0.0, 80.0, 2000):
            acc += core.rho_rw(x, 100.0) + core.grad_rw(x, 100.0)
        return acc

    return [
        ("scalar specfun x2000", scalar_sweep),
        ("kernel eval x2000", kernel_sweep),
        ("tail_mass_rw(5, 100)", lambda c: c.tail_mass_rw(5.0, 100.0)),
        ("l2 density metric t=100", lambda c: c.l2_metric(1, 100.0)),
        ("l2 gradient metric t=100", lambda c: c.l2_metric(4, 100.0)),
        (f"l2 flux metric t={t_big:g}", lambda c: c.l2_metric(7, t_big)),
        (f"cattaneo residual t={t_big:g}",
         lambda c: c.cattaneo_l2(t_big, max(1e-3 * t_big, 1e-2))),
        (f"mc {n_mc} walkers x 100 steps",
         lambda c: c.mc_block(42, 0, n_mc, 100)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="smaller problem sizes")
    args = ap.parse_args()

    names = available_backends()
    if "compiled" not in names:
        print("compiled backend not available; build with "
              "`pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1
    fast = get_backend("compiled")
    pure = get_backend("python")

    # backends must agree exactly before we bother timing them
    assert fast.l2_metric(1, 50.0) == pure.l2_metric(1, 50.0)
    assert np.array_equal(fast.mc_block(1, 0, 1000, 32),
                          pure.mc_block(1, 0, 1000, 32))

    rows = []
    for label, fn in make_cases(args.quick):
        t_fast = timeit(lambda: fn(fast))
        t_pure = timeit(lambda: fn(pure))
        rows.append((label, t_fast, t_pure, t_pure / t_fast))

    w = max(len(r[0]) for r in rows)
    print(f"{'case':{w}}  {'compiled':>12}  {'python':>12}  {'speedup':>8}")
    for label, tf, tp, s in rows:
        print(f"{label:{w}}  {tf * 1e3:>10.3f}ms  {tp * 1e3:>10.3f}ms  {s:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
