"""Compiled vs pure-Python exact kernels.

Times each kernel on the same random rational inputs under both backends,
then times the oracle on a pipeline output.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from depthcut import kernels
from depthcut.depthgraph import build_depth_graph
from depthcut.exact import Q
from depthcut.pipeline import cut_triangles
from depthcut.scenes import gen_random_triangles


def random_convex(rng, k):
    # points on a circle-ish polygon with rational coordinates, counter-clockwise
    import math

    cx, cy = rng.uniform(-1, 1), rng.uniform(-1, 1)
    angs = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
    pts = []
    for a in angs:
        r = rng.uniform(0.5, 1.0)
        p = (Q(round((cx + r * math.cos(a)) * 997), 997), Q(round((cy + r * math.sin(a)) * 991), 991))
        if not pts or p != pts[-1]:
            pts.append(p)
    return pts


def cases(rng, n):
    out = []
    while len(out) < n:
        a, b = random_convex(rng, 5), random_convex(rng, 4)
        if len(a) >= 3 and len(b) >= 3 and kernels.area2(a) > 0 and kernels.area2(b) > 0:
            out.append((a, b))
    return out


def time_kernels(data, repeat):
    plane_a = (Q(1, 3), Q(-2, 7), Q(5))
    plane_b = (Q(-1, 5), Q(1, 2), Q(-3))
    res = {}
    ops = {
        "clip_convex": lambda a, b: kernels.clip_convex(a, [True] * len(a), b),
        "relate_polys": lambda a, b: kernels.relate_polys(a, plane_a, b, plane_b),
        "polys_separated": lambda a, b: kernels.polys_separated(a, b),
        "segment_clip": lambda a, b: kernels.segment_clip(a[0], a[2], b),
        "point_classes": lambda a, b: kernels.point_classes(b, a),
    }
    for name, fn in ops.items():
        t0 = time.perf_counter()
        for _ in range(repeat):
            for a, b in data:
                fn(a, b)
        res[name] = (time.perf_counter() - t0) / (repeat * len(data)) * 1e6
    return res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=32, help="scene size for the oracle timing")
    args = ap.parse_args()
    data = cases(random.Random(1), 400)
    frags = cut_triangles(gen_random_triangles(args.n, 1), verify=False).fragments
    table = {}
    for b in kernels.available():
        kernels.set_backend(b)
        table[b] = time_kernels(data, args.repeat)
        t0 = time.perf_counter()
        build_depth_graph(frags)
        table[b]["oracle_ms"] = (time.perf_counter() - t0) * 1000
    kernels.set_backend("auto")
    names = list(next(iter(table.values())))
    print(f"{'kernel':18s}" + "".join(f"{b:>12s}" for b in table) + ("     speedup" if len(table) > 1 else ""))
    for k in names:
        row = [table[b][k] for b in table]
        unit = "ms" if k.endswith("_ms") else "us"
        line = f"{k + ' (' + unit + ')':18s}" + "".join(f"{v:12.2f}" for v in row)
        if len(row) > 1:
            line += f"{row[0] / row[1]:12.2f}"
        print(line)
    print(f"oracle input: {len(frags)} fragments from {args.n} random triangles")


if __name__ == "__main__":
    main()
