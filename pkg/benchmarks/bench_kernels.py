"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row runs the same call on both backends, checks that the answers
match, and reports the best wall time of N runs.
"""

import argparse
import random
import time

from flatforge import kernels
from flatforge.catalog import ag, pg
from flatforge.flats import enumerate_flats


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _rank_sweep(M, backend, masks):
    kern = kernels.rank_kernel(M.p, M.dim, M.vectors, backend=backend)
    return [kern.rank(m) for m in masks] + [kern.closure(m) for m in masks[:500]]


def _flats(M, backend, k):
    kern = kernels.rank_kernel(M.p, M.dim, M.vectors, backend=backend)
    return sorted(kern.flats(k))


def cases():
    rng = random.Random(0)
    for M in (pg(3, 2), pg(4, 2), pg(3, 3)):
        masks = [rng.getrandbits(M.n) for _ in range(5000)]
        yield f"rank+closure {M.p}^{M.dim} n={M.n}", lambda b, M=M, masks=masks: _rank_sweep(M, b, masks)
    for M, k in ((pg(4, 2), 3), (pg(3, 3), 2), (ag(3, 3), 3)):
        yield f"flats k={k} {M.p}^{M.dim} n={M.n}", lambda b, M=M, k=k: _flats(M, b, k)
    for M in (pg(3, 2), ag(2, 3), ag(3, 2)):
        lines = list(enumerate_flats(M, 2))
        yield f"max_flatfree lines n={M.n}", lambda b, n=M.n, f=lines: kernels.max_flatfree(n, f, backend=b)
    P = pg(2, 3)
    lines = list(enumerate_flats(P, 2))
    yield f"free_coloring 2 colours n={P.n}", lambda b: kernels.free_coloring(P.n, lines, 2, backend=b)
    P = pg(3, 2)
    lines = list(enumerate_flats(P, 2))
    yield f"flatfree_sets >=7 n={P.n}", lambda b: kernels.flatfree_sets(P.n, lines, 7, backend=b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; run pip install -e . --no-build-isolation")
    print(f"{'case':40s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in cases():
        tp, out_p = _best(lambda: fn("python"), args.repeat)
        tc, out_c = _best(lambda: fn("cython"), args.repeat)
        if out_p != out_c:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:40s} {tp * 1e3:9.1f}ms {tc * 1e3:9.1f}ms {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
