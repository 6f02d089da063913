"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--samples N]
"""

import argparse
import random
import time
from contextlib import contextmanager

from ivtest import kernels
from ivtest.core import Dims
from ivtest.polyhedra import compatible_polytope, lp_feasible
from ivtest.response import random_cond_dist

NAMES = ("phase_one", "dd_add_row", "pivot_update", "sparse_column", "price", "ratio_test")


@contextmanager
def use_backend(impl):
    saved = {n: getattr(kernels, n) for n in NAMES}
    for n in NAMES:
        setattr(kernels, n, getattr(impl, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def bench_lp(samples):
    rng = random.Random(0)
    dists = [random_cond_dist(Dims(3, 3, 3), rng) for _ in range(samples)]
    start = time.perf_counter()
    verdicts = [lp_feasible(d).feasible for d in dists]
    return time.perf_counter() - start, sum(verdicts)


def bench_dd(_samples):
    compatible_polytope.cache_clear()
    start = time.perf_counter()
    poly = compatible_polytope(Dims(3, 2, 2))
    return time.perf_counter() - start, len(poly.inequalities)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    args = ap.parse_args(argv)

    table = {}
    for name, impl in kernels.backends().items():
        with use_backend(impl):
            for label, fn in (("lp_feasible (3,3,3)", bench_lp), ("facet enumeration (3,2,2)", bench_dd)):
                runs = [fn(args.samples) for _ in range(args.repeat)]
                outputs = {r[1] for r in runs}
                assert len(outputs) == 1, f"{name} is not deterministic"
                table[label, name] = (min(r[0] for r in runs), outputs.pop())

    print(f"default backend: {kernels.BACKEND}")
    print(f"{'workload':28} {'backend':8} {'best s':>9} {'result':>7} {'speedup':>8}")
    for label in dict.fromkeys(k[0] for k in table):
        base = table[label, "python"][0]
        for name in kernels.backends():
            t, out = table[label, name]
            print(f"{label:28} {name:8} {t:9.3f} {out:7} {base / t:7.2f}x")
        results = {table[label, n][1] for n in kernels.backends()}
        if len(results) != 1:
            raise SystemExit(f"backends disagree on {label}: {results}")


if __name__ == "__main__":
    main()
