#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python (numpy) fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from kloosterlab._accel import load_backend


def _tables(kern, q):
    inv = kern.inverse_table(q)
    xs = np.nonzero(inv)[0].astype(np.int64)
    ang = 2 * np.pi * np.arange(q) / q
    return inv, xs, inv[xs], np.cos(ang), np.sin(ang)


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {}
    for name in ("compiled", "python"):
        try:
            backends[name] = load_backend(name)
        except ImportError:
            print(f"backend {name!r} unavailable, skipping")
    if len(backends) < 2:
        print("only one backend present; timing it alone")

    q = 3001
    rng = np.random.default_rng(0)
    ms = rng.integers(0, q, 2000).astype(np.int64)
    ns = rng.integers(0, q, 2000).astype(np.int64)
    p = 4999
    elems = np.sort(rng.choice(p, 150, replace=False)).astype(np.int64)

    cases = {}
    for name, kern in backends.items():
        inv, xs, xinvs, re, im = _tables(kern, q)
        r = kern.diff_hist(elems, p)
        vals = np.nonzero(r)[0].astype(np.int64)
        cnts = r[vals]
        cases[name] = {
            "inverse_table(10^5)": lambda k=kern: k.inverse_table(100003),
            "kloosterman brute x2000 (q=3001)":
                lambda k=kern, t=(xs, xinvs, re, im):
                    k.unit_sum_many(ms, ns, q, *t),
            "j_hist_brute (q=3001, K=1500)":
                lambda k=kern, i=inv: k.j_hist_brute(q, 1500, i),
            "j_hist_fast (q=3001, K=600)":
                lambda k=kern, i=inv: k.j_hist_fast(q, 600, i),
            "diff_hist (|A|=150)": lambda k=kern: k.diff_hist(elems, p),
            "diff-product count (|A|=150)":
                lambda k=kern, v=vals, c=cnts:
                    k.sparse_product_pair_count(v, c, p),
            "interval products (300x300)":
                lambda k=kern: k.interval_product_count(10, 300, 20, 300, p),
            "tau_sieve(10^6)": lambda k=kern: k.tau_sieve(10**6),
        }

    names = list(next(iter(cases.values())))
    width = max(len(n) for n in names)
    header = f"{'kernel':<{width}}  " + "".join(f"{b:>12}" for b in cases)
    if len(cases) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for bench_name in names:
        times = {b: bench(cases[b][bench_name], args.repeat) for b in cases}
        row = f"{bench_name:<{width}}  " + "".join(
            f"{times[b] * 1e3:>10.2f}ms" for b in cases)
        if len(times) == 2:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
