"""Compare the compiled lattice kernel with its pure-Python fallback.

For each case the raw walk is timed with both kernels (best of ``--repeat``
runs, after one warm-up call so compilation is excluded), the outputs are
checked for equality, and the exact reference tracer is timed once for
scale.  Run from the repository root:

    python3 benchmarks/bench_kernel.py [--repeat 3] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import platform
import time
from fractions import Fraction as F

import numpy as np

from tbilliard import kernels
from tbilliard.analysis import prefractal
from tbilliard.flow import Direction, PhasePoint, trace_exact
from tbilliard.geometry import Point
from tbilliard.lattice import _units

CASES = [
    # (level, x0, slope, sx, cap)
    (0, F(2, 3), F(1), 1, 10**5),
    (2, F(1, 3), F(1, 3), 1, 10**5),
    (3, F(2, 7), F(8, 5), -1, 10**5),
    (4, F(4, 9), F(2, 9), 1, 10**5),
    (5, F(5, 11), F(4, 3), 1, 10**5),
    (6, F(1, 3), F(1, 5), -1, 10**5),
    (4, F(1, 127), F(2, 129), 1, 10**5),
    (6, F(1, 127), F(2, 129), 1, 10**5),
    (8, F(1, 255), F(2, 257), 1, 10**6),
]


def _walk(case, use_numba):
    n, x0, m, sx, cap = case
    T = prefractal(n)
    init = PhasePoint(Point(x0, F(0)), Direction(sx, 1, m))
    r, U, a, b, X0, Y0 = _units(T, init)
    return lambda: kernels.walk(r.occ, U, a, b, X0, Y0, sx, 1, cap, use_numba)


def _best(fn, repeat):
    fn()  # warm-up (JIT compile / caches)
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    return a[0] == b[0] and all(np.array_equal(x, y) for x, y in zip(a[1:], b[1:]))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)
    if not kernels.NUMBA_ENABLED:
        print("numba kernel unavailable; only the fallback can be timed")
    rows = []
    hdr = f"{'level':>5} {'x0':>6} {'slope':>6} {'sx':>3} {'steps':>7} {'status':>9} {'numba s':>9} {'python s':>9} {'speedup':>8} {'exact s':>8} same"
    print(hdr)
    print("-" * len(hdr))
    for case in CASES:
        n, x0, m, sx, cap = case
        tp, outp = _best(_walk(case, False), args.repeat)
        if kernels.NUMBA_ENABLED:
            tn, outn = _best(_walk(case, True), args.repeat)
            same = _same(outn, outp)
        else:
            tn, same = float("nan"), True
        t = time.perf_counter()
        ex = trace_exact(prefractal(n), PhasePoint(Point(x0, F(0)), Direction(sx, 1, m)), cap)
        te = time.perf_counter() - t
        steps = len(outp[1]) - 1
        same = same and steps == ex.n_collisions
        status = ex.termination
        row = dict(level=n, x0=str(x0), slope=str(m), sx=sx, steps=steps, status=status,
                   numba_s=tn, python_s=tp, speedup=tp / tn if tn == tn else None, exact_s=te, identical=same)
        rows.append(row)
        sp = f"{tp / tn:7.1f}x" if tn == tn else "    n/a"
        print(f"{n:>5} {str(x0):>6} {str(m):>6} {sx:>+3d} {steps:>7} {status:>9} {tn:>9.5f} {tp:>9.5f} {sp:>8} {te:>8.3f} {same}")
    if args.json:
        meta = dict(python=platform.python_version(), machine=platform.machine(), numba=kernels.NUMBA_ENABLED)
        with open(args.json, "w") as fh:
            json.dump({"meta": meta, "rows": rows}, fh, indent=2)
    return 0 if all(r["identical"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
