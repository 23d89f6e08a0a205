"""Benchmark the compiled kernels against the pure-Python fallback.

Run with `python -m nuvwalk.benchmark` (add --quick for smaller sizes).
Both backends must produce identical results; this only measures speed.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import _kernels_py
from .models import gen_grid, gen_mean_field, gen_square

try:
    from . import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _cases(quick):
    if quick:
        sq_n, grid_m, mf_n = 400, 15, 120
    else:
        sq_n, grid_m, mf_n = 2000, 40, 400
    square = gen_square(sq_n, seed=1)
    grid = gen_grid(grid_m, seed=2)
    mf = gen_mean_field(mf_n, seed=3)
    pts = np.ascontiguousarray(square.points)
    indptr, indices, weights = grid.csr()
    matrix = np.ascontiguousarray(mf.lengths_matrix)
    return [
        (f"walk_points   square n={sq_n}",
         lambda k: k.walk_points(pts, 0)),
        (f"walk_sparse   grid   m={grid_m}",
         lambda k: k.walk_sparse(indptr, indices, weights, 0, False)),
        (f"walk_dense    m-f    n={mf_n}",
         lambda k: k.walk_dense(matrix, 0, False)),
        (f"sssp_dense    m-f    n={mf_n}",
         lambda k: k.sssp_dense(matrix, 0)),
        (f"greedy_cover  m-f    n={mf_n}",
         lambda k: k.greedy_cover(matrix, float(np.median(matrix)))),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    ap.add_argument("--repeat", type=int, default=3, help="best-of-N timing")
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not available; timing the fallback only",
              file=sys.stderr)

    print(f"{'kernel':34s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, call in _cases(args.quick):
        t_py, res_py = _time(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{label:34s} {t_py * 1e3:9.1f}ms {'-':>10s} {'-':>8s}")
            continue
        t_c, res_c = _time(lambda: call(_kernels), args.repeat)
        # sanity: same visit order / distances from both backends
        a = res_py[0] if isinstance(res_py, tuple) else res_py
        b = res_c[0] if isinstance(res_c, tuple) else res_c
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            raise AssertionError(f"backend mismatch in {label}")
        print(f"{label:34s} {t_py * 1e3:9.1f}ms {t_c * 1e3:9.1f}ms {t_py / t_c:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
