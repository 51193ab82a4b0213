#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--primes 101 499 1999] [--repeat 5]

Prints one row per (kernel, p) with the best-of-N time for each backend
and the speedup of the compiled version.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from kloosterman import _backend
from kloosterman.identities import verify_second_moment
from kloosterman.modfield import make_modulus


def cases(p: int):
    m = make_modulus(p)
    rng = np.random.default_rng(p)
    x = rng.integers(0, p, p).astype(np.int64)
    y = rng.integers(0, p, p).astype(np.int64)
    inv = m.inv_lookup
    return {
        "inverse_table": lambda k: k.inverse_table(p),
        "cyclic_mul": lambda k: k.cyclic_mul(x, y),
        "affine_histogram": lambda k: k.affine_histogram(m.residues, m.inverses, 1, 7, p),
        "paired_cos_sum": lambda k: k.paired_cos_sum(m.residues, m.inverses, 1, 7, p,
                                                     m.cos_table, m.pair_order),
        "y_histogram": lambda k: k.y_histogram(1, 7, inv, p),
        "batch_direct": lambda k: k.batch_direct(inv, p, m.cos_table),
        "second_moment(exact)": None,  # end to end, goes through the active backend
    }, m


def best_time(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--primes", type=int, nargs="+", default=[101, 499, 1999])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = _backend.available()
    if "cython" not in backends:
        print("compiled kernels not built; only the numpy fallback is available")
    header = f"{'kernel':<22}{'p':>6}" + "".join(f"{b + ' [s]':>16}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for p in args.primes:
        table, m = cases(p)
        for name, fn in table.items():
            if name == "second_moment(exact)" and p > 499:
                continue
            times = []
            for b in backends:
                previous = _backend.use(b)
                try:
                    if fn is None:
                        times.append(best_time(lambda: verify_second_moment(m, 1, 7), args.repeat))
                    else:
                        kern = _backend.kernels()
                        times.append(best_time(lambda: fn(kern), args.repeat))
                finally:
                    _backend.use(previous)
            row = f"{name:<22}{p:>6}" + "".join(f"{t:>16.3e}" for t in times)
            if len(times) == 2:
                py, cy = times[backends.index("python")], times[backends.index("cython")]
                row += f"{py / cy:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
