"""Time the compiled kernels against the pure-Python reference.

    python benchmarks/bench_kernels.py [--repeat 3]

Both backends are imported directly, so the script works whatever
CTX_PURE_PYTHON says; it exits with status 1 if the extension is not built.
"""

import argparse
import sys
import time

import numpy as np

from ctxgraph import _pycore
from ctxgraph.graphs import all_graph_keys, connected_keys

try:
    from ctxgraph import _core
except ImportError:
    _core = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _random_graphs(n, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        upper = np.triu(rng.random((n, n)) < 0.5, 1)
        m = upper | upper.T
        out.append(tuple(int(sum(1 << j for j in range(n) if m[i, j])) for i in range(n)))
    return out


def cases():
    g9 = _random_graphs(9, 300, 1)
    g16 = _random_graphs(16, 50, 2)
    parents7 = np.ascontiguousarray(all_graph_keys(7)[:300])
    keys8 = np.ascontiguousarray(connected_keys(8)[:3000])
    return [
        ("canonical_key  n=9 x300", lambda k: [k.canonical_key(9, a) for a in g9]),
        ("canonical_order n=16 x50", lambda k: [list(k.canonical_order(16, a)) for a in g16]),
        ("expand_level   n=7 x300 parents", lambda k: np.sort(k.expand_level(7, parents7))),
        ("screen_keys    n=8 x3000", lambda k: k.screen_keys(8, keys8)),
        ("maximal_cliques n=16 x50", lambda k: [list(k.maximal_cliques(16, a)) for a in g16]),
        ("independence   n=16 x50", lambda k: [k.independence_number(16, a) for a in g16]),
    ]


def _same(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'kernel':<34}{'python s':>10}{'cython s':>10}{'speedup':>9}  agree")
    for name, fn in cases():
        tp, outp = _time(lambda: fn(_pycore), args.repeat)
        tc, outc = _time(lambda: fn(_core), args.repeat)
        print(f"{name:<34}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x  {_same(outp, outc)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
