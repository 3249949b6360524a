"""Timing comparison of the compiled kernel against the numpy fallback.

Both implementations are importable side by side, so the benchmark runs them
in one process on identical inputs: every basis polynomial of a few (n, k)
pairs evaluated on a large block of interior points, which is the same
workload the bound scans and the quadrature loops generate.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --points 200000 --repeats 7
"""

import argparse
import time

import numpy as np

from fem_accuracy import kernels
from fem_accuracy import _kernels_py
from fem_accuracy.basis import build_basis

try:
    from fem_accuracy import _kernels
except ImportError:
    _kernels = None


def _workload(n, k, npts, rng):
    """Term arrays for every basis polynomial plus one shared point block."""
    basis = build_basis(n, k)
    arrays = []
    for poly in basis.polynomials:
        exps, coeffs = poly._float_arrays()
        if exps.shape[0] == 0:
            continue
        arrays.append((exps, coeffs))
    # Interior barycentric points: n + 1 coordinates, positive, summing to 1.
    raw = rng.random((npts, n + 1))
    pts = np.ascontiguousarray(raw / raw.sum(axis=1, keepdims=True))
    return arrays, pts


def _time_impl(impl, arrays, pts, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        acc = 0.0
        for exps, coeffs in arrays:
            acc += impl.max_abs_eval(pts, exps, coeffs)
        best = min(best, time.perf_counter() - t0)
    return best, acc


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=100_000, help="points per evaluation block")
    parser.add_argument("--repeats", type=int, default=5, help="timed repetitions, best is kept")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = [(1, 3), (2, 3), (2, 5), (3, 4)]

    print(f"selected backend at import: {kernels.BACKEND}")
    if _kernels is None:
        print("compiled kernel unavailable, timing the numpy fallback only")
    header = f"{'n':>2} {'k':>2} {'polys':>6} {'points':>8} {'numpy (s)':>10}"
    if _kernels is not None:
        header += f" {'compiled (s)':>13} {'speedup':>8}"
    print(header)

    for n, k in cases:
        arrays, pts = _workload(n, k, args.points, rng)
        t_py, acc_py = _time_impl(_kernels_py, arrays, pts, args.repeats)
        line = f"{n:>2} {k:>2} {len(arrays):>6} {pts.shape[0]:>8} {t_py:>10.4f}"
        if _kernels is not None:
            t_c, acc_c = _time_impl(_kernels, arrays, pts, args.repeats)
            if abs(acc_c - acc_py) > 1e-9 * max(1.0, abs(acc_py)):
                raise AssertionError(f"backend disagreement for n={n} k={k}: {acc_py} vs {acc_c}")
            line += f" {t_c:>13.4f} {t_py / t_c:>7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
