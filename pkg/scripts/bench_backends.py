"""Benchmark the numba kernels against the pure-numpy fallback lane.

Times the hot range-enumeration kernels (Delaunay pair scan and the full
verify scan) on seeded clustered instances at growing sizes.  Select a lane
with POLYCHROME_BACKEND; this script times both in-process.
"""

import argparse
import random
import time
from fractions import Fraction

import numpy as np

from polychrome import kernels_numba, kernels_numpy
from polychrome.backend import int64_arrays, integer_coordinates
from polychrome.delaunay import condition
from polychrome.geom import Point, unit_square


def clustered(n, seed, den=2048):
    rng = random.Random(seed)
    pts = set()
    cx = cy = 50 * den
    while len(pts) < (9 * n) // 10:
        pts.add((cx + rng.randrange(-2 * den, 2 * den), cy + rng.randrange(-2 * den, 2 * den)))
    while len(pts) < n:
        pts.add((rng.randrange(0, 100 * den), rng.randrange(0, 100 * den)))
    return [Point(Fraction(x, den), Fraction(y, den)) for x, y in sorted(pts)]


def bench(n, seed, repeats):
    cond = condition(clustered(n, seed), unit_square(), seed)
    xs_i, ys_i, _ = integer_coordinates(cond.all_points)
    xs, ys = int64_arrays(xs_i, ys_i)
    ox = np.argsort(xs).astype(np.int64)
    oy = np.argsort(ys).astype(np.int64)
    user = np.asarray([1] * cond.n_user + [0] * len(cond.hull_augment), dtype=np.uint8)
    cat = np.asarray([i % 2 for i in range(len(xs))], dtype=np.uint8)
    rows = []
    for name, mod in (("numba", kernels_numba), ("numpy", kernels_numpy)):
        mod.sq_pairs(xs, ys, ox, oy)  # warm up (JIT compile for numba)
        t0 = time.perf_counter()
        for _ in range(repeats):
            pairs = mod.sq_pairs(xs, ys, ox, oy)
        t_pairs = (time.perf_counter() - t0) / repeats
        t0 = time.perf_counter()
        for _ in range(repeats):
            total, mono, _, _ = mod.sq_verify(xs, ys, ox, oy, user, cat, 10**9)
        t_verify = (time.perf_counter() - t0) / repeats
        rows.append((name, pairs.shape[0], int(total), t_pairs, t_verify))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="60,120,240,300")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    print("%-6s %-7s %10s %12s %14s %14s" % ("n", "lane", "edges", "ranges", "pairs_s", "verify_s"))
    for n in [int(s) for s in args.sizes.split(",")]:
        rows = bench(n, args.seed, args.repeats)
        base = rows[0]
        for name, edges, total, t_pairs, t_verify in rows:
            speed = "" if name == "numba" else "   (x%.1f / x%.1f vs numba)" % (
                t_pairs / max(base[3], 1e-9), t_verify / max(base[4], 1e-9))
            print("%-6d %-7s %10d %12d %14.4f %14.4f%s"
                  % (n, name, edges, total, t_pairs, t_verify, speed))


if __name__ == "__main__":
    main()
