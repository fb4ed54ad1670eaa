"""Compare the compiled kernels with the pure-Python fallback, and the
closed-form sums with the brute-force oracle.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import itertools
import timeit

import numpy as np

from sl3kloosterman import _kernels, oracle, sums


def bench_kernels(repeat):
    rows = []
    rng = np.random.default_rng(0)
    coords = rng.integers(0, 10**6, size=(20000, 4), dtype=np.int64)
    h1 = rng.integers(0, 5, size=60, dtype=np.int64)
    h2 = rng.integers(0, 5, size=84, dtype=np.int64)
    cases = {
        "kloosterman_histogram(c=9973)": lambda pure: _kernels.kloosterman_histogram(3, 7, 9973, pure=pure),
        "phase_histogram(20000 rows, L=420)": lambda pure: _kernels.phase_histogram(
            coords, (1, -2, 3, 5), 420, pure=pure
        ),
        "accumulate_product(60 x 84, L=420)": lambda pure: _kernels.accumulate_product(
            h1, h2, 7, 5, 3, np.zeros(420, dtype=np.int64), pure=pure
        ),
    }
    for name, fn in cases.items():
        fast = min(timeit.repeat(lambda: fn(False), number=1, repeat=repeat))
        slow = min(timeit.repeat(lambda: fn(True), number=1, repeat=repeat))
        rows.append((name, fast, slow))
    return rows


def bench_sums(repeat):
    chars = [((a, b), (c, d)) for a, b, c, d in itertools.product((-1, 1, 2), repeat=4)]
    rows = []
    for c1, c2 in ((12, 12), (24, 18), (36, 30)):
        oracle._coset_table(c1, c2)  # build the coset list once, outside the timing

        def closed():
            for ch in chars:
                sums.coarse_kloosterman(ch, c1, c2)

        def brute():
            for ch in chars:
                oracle.oracle_coarse(ch, c1, c2)

        t_closed = min(timeit.repeat(closed, number=1, repeat=repeat)) / len(chars)
        t_brute = min(timeit.repeat(brute, number=1, repeat=repeat)) / len(chars)
        build = timeit.timeit(lambda: oracle._coset_table.__wrapped__(c1, c2), number=1)
        rows.append((f"coarse ({c1},{c2})", t_closed, t_brute, build))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"active backend: {_kernels.BACKEND}")
    print(f"{'kernel':40s} {'compiled':>12s} {'python':>12s} {'speedup':>8s}")
    for name, fast, slow in bench_kernels(args.repeat):
        print(f"{name:40s} {fast * 1e3:10.3f}ms {slow * 1e3:10.3f}ms {slow / fast:7.1f}x")
    print()
    print("oracle timings exclude the one-off coset table (last column)")
    print(f"{'sum (per character pair)':28s} {'closed':>10s} {'oracle':>10s} {'coset build':>12s}")
    for name, closed, brute, build in bench_sums(args.repeat):
        print(f"{name:28s} {closed * 1e6:8.1f}us {brute * 1e6:8.1f}us {build * 1e3:10.1f}ms")


if __name__ == "__main__":
    main()
