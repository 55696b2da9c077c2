"""Time the compiled geometry kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--points 5000] [--queries 10000] [--repeat 3]

Each kernel is run on the same inputs with both backends; the outputs are
checked for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from terrarough import geometry
from terrarough.rasterize import bin_hash


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(n_points: int, n_queries: int, repeat: int, seed: int = 0) -> list[tuple[str, dict]]:
    rng = np.random.default_rng(seed)
    side = np.sqrt(n_points) * 0.64
    xy = rng.random((n_points, 2)) * side
    z = rng.normal(size=n_points)
    q = np.ascontiguousarray(rng.random((n_queries, 2)) * side)
    tri = geometry.delaunay(xy)
    hashed = bin_hash(xy)

    cases = {
        "delaunay": lambda k: lambda: k.triangulate(xy, geometry.hilbert_order(xy)),
        "locate": lambda k: lambda: k.locate_many(tri.xy, tri.triangles, tri.neighbors, q),
        "natural_grid": lambda k: lambda: k.natural_grid(tri.xy, z, tri.triangles, tri.neighbors, q),
        "tin_grid": lambda k: lambda: k.tin_grid(tri.xy, z, tri.triangles, tri.neighbors, q),
        "nearest_grid": lambda k: lambda: k.nearest_grid(xy, z, q, *hashed),
    }
    backends = geometry.available_backends()
    rows = []
    for name, make in cases.items():
        times = {}
        outs = {}
        for bname, mod in backends.items():
            times[bname], outs[bname] = best_of(make(mod), repeat)
        if len(outs) == 2:
            a, b = outs.values()
            if name == "delaunay":
                a, b = geometry.canonicalize(a), geometry.canonicalize(b)
            if not np.array_equal(a, b, equal_nan=True):
                raise AssertionError(f"{name}: backends disagree")
        rows.append((name, times))
    return rows


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=5000)
    ap.add_argument("--queries", type=int, default=10000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rows = run(args.points, args.queries, args.repeat)
    print(f"{args.points} sites, {args.queries} queries, best of {args.repeat}")
    print(f"{'kernel':<14}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for name, t in rows:
        py = t.get("python", float("nan"))
        cc = t.get("compiled", float("nan"))
        print(f"{name:<14}{py:>12.4f}{cc:>12.4f}{py / cc:>9.1f}x")


if __name__ == "__main__":
    main()
