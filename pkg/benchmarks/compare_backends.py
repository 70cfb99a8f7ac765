"""Compiled kernels against the pure-Python fallback on identical inputs.

    python benchmarks/compare_backends.py [--N 3000] [--repetitions 3]

Prints wall-clock time of each kernel for both backends, the ratio, and the
largest difference between their outputs.
"""

from __future__ import annotations

import argparse
import math
import statistics
import time

import numpy as np

from fastsle._backend import load
from fastsle.driving import make_partition, sample_driving
from fastsle.trace import make_maps


def timed(fn, reps):
    out, ts = None, []
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t0)
    return out, statistics.median(ts)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=3000)
    ap.add_argument("--kappa", type=float, default=8 / 3)
    ap.add_argument("--discretization", choices=["tilted", "vertical"], default="tilted")
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--repetitions", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        fast = load("cython")
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    slow = load("python")

    N = args.N
    pm = make_maps(sample_driving(make_partition(N), args.kappa, "gaussian", args.seed), args.discretization)
    b = max(1, round(0.12 * math.sqrt(N)))
    L = 10 ** (6 / args.n)
    idx = np.arange(max(1, N // 100), N + 1, max(1, N // 100), dtype=np.int64)

    jobs = {
        "trace_baseline": lambda k: k.trace_baseline(pm.kinds, pm.params, idx),
        "build_blocks": lambda k: k.build_blocks(pm.kinds, pm.params, b, args.n, 1 + 1e-9),
    }
    print(f"N={N} b={b} n={args.n} L={L:.4g} points={len(idx)} discretization={args.discretization}")
    print(f"{'kernel':<16}{'cython [s]':>12}{'python [s]':>12}{'ratio':>9}{'max diff':>12}")
    results = {}
    for name, job in jobs.items():
        rf, tf = timed(lambda: job(fast), args.repetitions)
        rs, ts = timed(lambda: job(slow), args.repetitions)
        results[name] = (rf, rs)
        if name == "build_blocks":
            diff = max(np.abs(rf[0] - rs[0]).max(), np.abs(rf[1] / rs[1] - 1).max())
        else:
            diff = np.abs(rf - rs).max()
        print(f"{name:<16}{tf:>12.4g}{ts:>12.4g}{ts / tf:>9.1f}{diff:>12.3g}")

    (cf, rf), (cs, rs) = results["build_blocks"]
    zf, tf = timed(lambda: fast.trace_fast(pm.kinds, pm.params, cf, rf, b, idx, L), args.repetitions)
    zs, ts = timed(lambda: slow.trace_fast(pm.kinds, pm.params, cs, rs, b, idx, L), args.repetitions)
    print(f"{'trace_fast':<16}{tf:>12.4g}{ts:>12.4g}{ts / tf:>9.1f}{np.abs(zf - zs).max():>12.3g}")


if __name__ == "__main__":
    main()
