"""Time the compiled and pure-Python kernels on the same synthetic graph.

    python benchmarks/bench_backends.py [--m 20000] [--delta 2000]
"""

import argparse
import time

from tempomotif import TemporalGraph, kernels, load_motif, rng
from tempomotif._plan import wedge_plans
from tempomotif.bench import synthetic_edges
from tempomotif.exact import plans_for


def time_counts(mod, g, motif, delta):
    idx = g.index
    plan = plans_for(motif)[motif.l - 1]
    t0 = time.perf_counter()
    total = sum(mod.count_from_edge(idx, plan, pos, delta, 0, g.m - 1)[0] for pos in range(g.m))
    return total, time.perf_counter() - t0


def time_wedges(mod, g, motif, delta, q):
    idx = g.index
    wp = wedge_plans(motif, 2)[0]
    key = rng.stream_key(0, rng.TAG_WEDGE)
    t0 = time.perf_counter()
    total = sum(mod.wedge_sum(idx, wp, pos, delta, 0, g.m - 1, q, key)[0] for pos in range(g.m))
    return total, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--m", type=int, default=20_000)
    ap.add_argument("--span", type=int, default=1_000_000)
    ap.add_argument("--delta", type=int, default=20_000)
    args = ap.parse_args()

    found = kernels.backends()
    if "cython" not in found:
        print("compiled extension not built; only the Python kernels are available")
    g = TemporalGraph.from_edges(synthetic_edges(args.n, args.m, args.span, "uniform", seed=1))
    g.index  # build once, outside the timings

    rows = []
    for name in ("Q1", "Q3", "Q5"):
        motif = load_motif(name)
        res = {b: time_counts(mod, g, motif, args.delta) for b, mod in found.items()}
        rows.append((f"count {name}", res))
    for name in ("Q1", "Q3"):
        motif = load_motif(name)
        res = {b: time_wedges(mod, g, motif, args.delta, 0.5) for b, mod in found.items()}
        rows.append((f"wedge {name}", res))

    print(f"graph: n={g.n} m={g.m} delta={args.delta}")
    print(f"{'kernel':<10} {'result':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, res in rows:
        values = {v for v, _ in res.values()}
        assert len(values) == 1, f"backends disagree on {label}: {res}"
        py = res["python"][1]
        cy = res["cython"][1] if "cython" in res else float("nan")
        print(f"{label:<10} {values.pop():>10} {py:>10.3f} {cy:>10.3f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
