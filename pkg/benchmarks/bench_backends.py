"""Benchmark the numba kernels against their pure-numpy fallbacks.

Usage:
    python benchmarks/bench_backends.py [--quick]

The same kernels run through both backends (BACKENDS in rmnest._kernels);
set RMNEST_NO_NUMBA=1 to make the whole package use the numpy path.
"""

import argparse
import time

import numpy as np

from rmnest._kernels import BACKENDS, NUMBA_ENABLED
from rmnest.codes import RmParams, rm_generator


def timeit(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(quick: bool):
    rank_code = rm_generator(RmParams(3, 8 if quick else 10))
    rank_words_mat = np.ascontiguousarray(rank_code.words)
    dist_code = rm_generator(RmParams(2, 5) if quick else RmParams(2, 6))  # dim 16 / 22
    dist_words = np.ascontiguousarray(dist_code.words)
    sweep_n = 18 if quick else 24
    count_n = 16 if quick else 20
    rng = np.random.default_rng(0)
    seeds = rng.integers(0, 1 << sweep_n, size=2000, dtype=np.uint64)
    checks = rng.integers(1, 1 << count_n, size=8, dtype=np.uint64)
    fvals = rng.normal(size=1 << (16 if quick else 20))

    cases = {
        "rank_words": lambda be: be["rank_words"](rank_words_mat.copy(), rank_code.length),
        "min_weight_words": lambda be: be["min_weight_words"](dist_words),
        "up_closure+profile": None,
        "syndrome_weight_counts": lambda be: be["syndrome_weight_counts"](checks, count_n),
        "butterfly": lambda be: be["butterfly"](fvals, 0.3),
    }

    def closure_case(be):
        bits = np.zeros(max(1, 1 << (sweep_n - 6)), dtype=np.uint64)
        np.bitwise_or.at(bits, (seeds >> np.uint64(6)).astype(np.int64), np.uint64(1) << (seeds & np.uint64(63)))
        be["up_closure"](bits, sweep_n)
        return be["weight_profile_bits"](bits, sweep_n)

    cases["up_closure+profile"] = closure_case

    print(f"numba available: {NUMBA_ENABLED}")
    header = f"{'kernel':26s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, call in cases.items():
        t_np, out_np = timeit(call, BACKENDS["numpy"])
        if NUMBA_ENABLED:
            timeit(call, BACKENDS["numba"], repeat=1)  # compile
            t_nb, out_nb = timeit(call, BACKENDS["numba"])
            same = np.allclose(np.asarray(out_np, dtype=np.float64), np.asarray(out_nb, dtype=np.float64))
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(f"{name:26s} {t_np*1e3:9.2f}ms {t_nb*1e3:9.2f}ms {ratio:7.1f}x  agree={same}")
        else:
            print(f"{name:26s} {t_np*1e3:9.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    bench(ap.parse_args().quick)
