#!/usr/bin/env python3
"""Benchmark the compiled Gray-code kernel against the pure-Python fallback.

Both kernels count sign assignments whose weighted sum lands in a window,
which is the inner loop of the exact council analysis (2^26 assignments per
state for the bundled 27-state roster).  Usage:

    python benchmarks/bench_kernels.py [--max-bits N] [--eu27]

--eu27 additionally times one full exact table on the bundled dataset with
the compiled kernel (all states, both quotas of interest).
"""

import argparse
import random
import time
from array import array

from twotier import _pure

try:
    from twotier import _gray
except ImportError:
    _gray = None


def time_kernel(fn, weights, lo, hi):
    start = time.perf_counter()
    hits = fn(weights, lo, hi)
    return hits, time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-bits", type=int, default=22,
                        help="largest 2^n enumeration for the pure kernel")
    parser.add_argument("--eu27", action="store_true",
                        help="also time the full exact EU27 table (compiled)")
    args = parser.parse_args()

    if _gray is None:
        print("compiled kernel unavailable; timing the pure kernel only")

    rng = random.Random(42)
    print(f"{'n':>4} {'configs':>12} {'pure (s)':>10} {'compiled (s)':>13} "
          f"{'speedup':>8}")
    for n in range(14, args.max_bits + 1, 2):
        weights = array("d", (rng.uniform(0.5, 10.0) for _ in range(n)))
        total = sum(weights)
        lo, hi = -0.2 * total, 0.2 * total
        pure_hits, pure_t = time_kernel(_pure.count_in_window, weights, lo, hi)
        if _gray is not None:
            gray_hits, gray_t = time_kernel(_gray.count_in_window, weights, lo, hi)
            assert gray_hits == pure_hits, "kernels disagree"
            print(f"{n:>4} {1 << n:>12} {pure_t:>10.3f} {gray_t:>13.4f} "
                  f"{pure_t / gray_t:>7.0f}x")
        else:
            print(f"{n:>4} {1 << n:>12} {pure_t:>10.3f} {'-':>13} {'-':>8}")

    if args.eu27 and _gray is not None:
        import twotier

        union = twotier.load_eu27()
        weights = twotier.sqrt_weights(union)
        alpha = [twotier.asymptotic_fair_influence(p) for p in union.populations]
        for quota in (twotier.QuotaSpec.zero(), twotier.jagcom_quota(union)):
            start = time.perf_counter()
            twotier.analyze(weights, quota, alpha, threads=0)
            elapsed = time.perf_counter() - start
            print(f"EU27 exact table at q={quota.q:.4f}: {elapsed:.1f}s "
                  f"(threads=auto)")


if __name__ == "__main__":
    main()
