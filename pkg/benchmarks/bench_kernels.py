"""Benchmark the compiled scoring kernels against the NumPy fallback.

Runs both backends on the same synthetic inputs, checks that the outputs
are equal bit for bit, and prints a timing table:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sizes 1000x50,100000x20 --repeats 9
"""

import argparse
import time

import numpy as np

from piekit.kernels import _pykernels

try:
    from piekit.kernels import _ckernels
except ImportError:
    _ckernels = None


def parse_sizes(text):
    sizes = []
    for part in text.split(","):
        n, _, m = part.strip().partition("x")
        sizes.append((int(n), int(m)))
    return sizes


def best_of(repeats, fn, *args):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_one(n, m, repeats, rng):
    values = rng.standard_normal((n, m)) * 10.0
    means = values.mean(axis=0)
    stds = values.std(axis=0, ddof=1)
    beta = np.abs(rng.standard_normal(m))

    rows = []
    py_t, py_clipped = best_of(repeats, _pykernels.clip_standardize, values, means, stds)
    row = {"op": "clip_standardize", "n": n, "m": m, "python": py_t}
    if _ckernels is not None:
        c_t, c_clipped = best_of(repeats, _ckernels.clip_standardize, values, means, stds)
        assert np.array_equal(py_clipped, c_clipped), "backend outputs differ"
        row["compiled"] = c_t
    rows.append(row)

    py_t, py_out = best_of(repeats, _pykernels.influence, beta, py_clipped)
    row = {"op": "influence", "n": n, "m": m, "python": py_t}
    if _ckernels is not None:
        c_t, c_out = best_of(repeats, _ckernels.influence, beta, py_clipped)
        for a, b in zip(py_out, c_out):
            assert np.array_equal(a, b), "backend outputs differ"
        row["compiled"] = c_t
    rows.append(row)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes",
        default="1000x10,10000x10,100000x10,100000x50",
        help="comma-separated NxM problem sizes",
    )
    parser.add_argument("--repeats", type=int, default=5, help="best-of repeats")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled extension not available; timing the NumPy fallback only")
    rng = np.random.default_rng(args.seed)

    header = f"{'op':<18} {'n':>8} {'m':>4} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n, m in parse_sizes(args.sizes):
        for row in bench_one(n, m, args.repeats, rng):
            python_ms = row["python"] * 1e3
            if "compiled" in row:
                compiled_ms = row["compiled"] * 1e3
                speedup = row["python"] / row["compiled"]
                tail = f"{compiled_ms:>10.3f}ms {speedup:>8.2f}x"
            else:
                tail = f"{'-':>12} {'-':>9}"
            print(f"{row['op']:<18} {row['n']:>8} {row['m']:>4} {python_ms:>10.3f}ms {tail}")
    print("\noutputs verified equal across backends" if _ckernels is not None else "")


if __name__ == "__main__":
    main()
