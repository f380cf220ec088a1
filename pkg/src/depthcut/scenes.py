"""Deterministic scene generators.

Every generator validates its output (pairwise disjointness, non-vertical
objects) before returning, and every declared expectation such as
``has_cycle`` is checked with the oracle rather than trusted.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .depthgraph import build_depth_graph, topological_order
from .exact import Q, fmt, parse
from .geom import Segment3, Triangle3, ValidationError, intersects_3d, segments_intersect_2d, validate_objects


@dataclass
class Scene:
    objects: list
    metadata: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    @property
    def triangles(self):
        return [o for o in self.objects if isinstance(o, Triangle3)]

    @property
    def segments(self):
        return [o for o in self.objects if isinstance(o, Segment3)]

    def __len__(self):
        return len(self.objects)


def _q(v) -> "Q":
    return v if not isinstance(v, (str, int)) else parse(v)


def _finish(objects, metadata, expected=None, check_cycle=True) -> Scene:
    validate_objects(objects)
    expected = dict(expected or {})
    if check_cycle:
        cyclic = topological_order(build_depth_graph(objects)) is None
        if "has_cycle" in expected and expected["has_cycle"] != cyclic:
            raise AssertionError(f"{metadata.get('family')}: declared has_cycle={expected['has_cycle']} but oracle says {cyclic}")
        expected["has_cycle"] = cyclic
    return Scene(list(objects), dict(metadata), expected)


def thin_triangle(p, q, w, id=None) -> Triangle3:
    """Thin triangle around segment p->q: base of half-width ~w at p, apex at q.

    The perpendicular is scaled in the max-norm so everything stays rational;
    the plane is level across the segment, so heights along the centre line
    match the segment.
    """
    dx, dy = q[0] - p[0], q[1] - p[1]
    s = max(abs(dx), abs(dy))
    nx, ny = -dy / s * w, dx / s * w
    return Triangle3((p[0] + nx, p[1] + ny, p[2]), (p[0] - nx, p[1] - ny, p[2]), q, id=id)


def _realize(segs, thin, w):
    """Turn ``(p, q)`` 3-d pairs into Segment3 or thin Triangle3 objects."""
    if thin:
        return [thin_triangle(p, q, w, id=i) for i, (p, q) in enumerate(segs)]
    return [Segment3(p, q, id=i) for i, (p, q) in enumerate(segs)]


def _extent(segs):
    xs = [c for p, q in segs for c in (p[0], q[0])]
    ys = [c for p, q in segs for c in (p[1], q[1])]
    return max(max(xs) - min(xs), max(ys) - min(ys))


def _default_w(segs):
    return _extent(segs) / 1000


# --- paper configurations ------------------------------------------------------


def gen_cyclic_triple() -> Scene:
    """Three triangles, each passing over the next around a triangle of sticks."""
    V = [(Q(0), Q(0)), (Q(6), Q(0)), (Q(3), Q(5))]
    tris = []
    e0, e1, w = Q(15, 100), Q(25, 100), Q(8, 100)
    for i in range(3):
        a, b = V[i], V[(i + 1) % 3]
        ux, uy = b[0] - a[0], b[1] - a[1]
        nx, ny = -uy, ux
        sx, sy = a[0] - e0 * ux, a[1] - e0 * uy
        apex = (b[0] + e1 * ux, b[1] + e1 * uy, Q(0))
        tris.append(Triangle3((sx + w * nx, sy + w * ny, Q(1)), (sx - w * nx, sy - w * ny, Q(1)), apex, id=i))
    return _finish(tris, {"family": "cyclic-triple", "params": {}, "seed": None}, {"has_cycle": True})


def _weave3_segments(scale=Q(1), z0=Q(0)):
    V = [(Q(0), Q(0)), (Q(6), Q(0)), (Q(3), Q(5))]
    out = []
    for i in range(3):
        a, b = V[i], V[(i + 1) % 3]
        ux, uy = b[0] - a[0], b[1] - a[1]
        t0, t1 = Q(-1, 5), Q(6, 5)
        p = (scale * (a[0] + t0 * ux), scale * (a[1] + t0 * uy), z0 + 1 - t0)
        q = (scale * (a[0] + t1 * ux), scale * (a[1] + t1 * uy), z0 + 1 - t1)
        out.append((p, q))
    return out


def gen_weave3(thin=False) -> Scene:
    """Three segments whose projections form a triangle, heights cyclic."""
    segs = _weave3_segments()
    objs = _realize(segs, thin, _default_w(segs))
    return _finish(objs, {"family": "weave3", "params": {"thin": thin}, "seed": None}, {"has_cycle": True})


def gen_bipartite_weaving(m: int, thin=False, w=None) -> Scene:
    """Two families of m near-parallel segments forming an m x m grid of crossings.

    Family A lies level at height 0; family B segment j tilts with slope
    (-1)^j around a non-integer pivot, so the two halves of A are woven
    through alternating members of B.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    segs = []
    c = Q(m - 1, 2) + Q(1, 4)
    tilt = Q(1, 8 * m)
    for i in range(m):
        y = Q(i)
        segs.append(((Q(-1), y + i * tilt, Q(0)), (Q(m), y - i * tilt, Q(0))))
    for j in range(m):
        x = Q(j) + Q(1, 2)
        sgn = 1 if j % 2 == 0 else -1
        y0, y1 = Q(-1), Q(m)
        segs.append(((x + j * tilt, y0, sgn * (y0 - c)), (x - j * tilt, y1, sgn * (y1 - c))))
    w = _q(w) if w is not None else _default_w(segs)
    objs = _realize(segs, thin, w)
    return _finish(objs, {"family": "bipartite-weaving", "params": {"m": m, "thin": thin}, "seed": None}, {"has_cycle": True})


def gen_grid_weaving(m: int, thin=False, w=None) -> Scene:
    """2m long axis-parallel segments; heights alternate family by family."""
    if m < 2:
        raise ValueError("m must be at least 2")
    cx = Q(m - 1, 2) + Q(1, 4)
    cy = Q(m - 1, 2) + Q(1, 3)
    lo, hi = Q(-1), Q(m)
    segs = []
    # the row family is steeper so that a 2x2 block already closes a cycle;
    # the quarter and third offsets keep crossing heights distinct
    for i in range(m):
        s = 4 if i % 2 == 0 else -4
        segs.append(((lo, Q(i), s * (lo - cx)), (hi, Q(i), s * (hi - cx))))
    for j in range(m):
        s = 1 if j % 2 == 0 else -1
        segs.append(((Q(j), lo, s * (lo - cy)), (Q(j), hi, s * (hi - cy))))
    w = _q(w) if w is not None else _default_w(segs)
    objs = _realize(segs, thin, w)
    return _finish(objs, {"family": "grid-weaving", "params": {"m": m, "thin": thin}, "seed": None}, {"has_cycle": True})


def gen_parallel_overlap(k: int, thin=False, w=None) -> Scene:
    """k collinear-projection segments at heights 0..k-1 plus crossing V pairs.

    Each V pair (C_i rising, D_i falling) closes a cycle
    P_i < P_{i+1} < C_i < D_i < P_i through two overlapping parallels.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    segs = []
    for i in range(k):
        segs.append(((Q(i), Q(0), Q(i)), (Q(i + k), Q(0), Q(i))))
    half = Q(1, 2)
    slope = Q(20)
    for i in range(k - 1):
        x1 = Q(i + 1) + Q(1, 3)
        x2 = Q(i + 1) + Q(2, 3)
        hc = Q(i + 1) + half
        hd = Q(i) - half
        segs.append(((x1 - half, -half, hc + slope * half), (x1 + half, half, hc - slope * half)))
        segs.append(((x2 + half, -half, hd - slope * half), (x2 - half, half, hd + slope * half)))
    w = _q(w) if w is not None else _default_w(segs)
    objs = _realize(segs, thin, w)
    return _finish(objs, {"family": "parallel-overlap", "params": {"k": k, "thin": thin}, "seed": None}, {"has_cycle": True})


def gen_concurrent_gadget(k: int = 3) -> Scene:
    """A cyclic three-weave with k extra segments through each crossing point."""
    base = _weave3_segments()
    segs = list(base)
    pts = []
    for i in range(3):
        kind, p = segments_intersect_2d(
            ((base[i][0][0], base[i][0][1]), (base[i][1][0], base[i][1][1])),
            ((base[(i + 1) % 3][0][0], base[(i + 1) % 3][0][1]), (base[(i + 1) % 3][1][0], base[(i + 1) % 3][1][1])),
        )
        pts.append(p)
    for c, p in enumerate(pts):
        for j in range(k):
            dx, dy = Q(1, 2), Q(j + 1, 7) - Q(1, 3)
            z = Q(3) + Q(j, 2) + c * 10
            segs.append(((p[0] - dx, p[1] - dy, z), (p[0] + dx, p[1] + dy, z + Q(1, 10))))
    objs = _realize(segs, False, None)
    return _finish(objs, {"family": "concurrent", "params": {"k": k}, "seed": None}, {"has_cycle": True})


def gen_endpoint_gadget() -> Scene:
    """A cyclic three-weave plus segments with endpoints resting on weave segments.

    Chord i starts above weave segment i+1 and ends below weave segment i,
    closing the cycle s_i < s_{i+1} < chord_i < s_i through endpoint contacts
    only.  An outward spur also rests on each weave segment.
    """
    V = [(Q(0), Q(0)), (Q(6), Q(0)), (Q(3), Q(5))]
    segs = list(_weave3_segments())

    def on(i, t, dz):
        a, b = V[i], V[(i + 1) % 3]
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 1 - t + dz)

    for i in range(3):
        j = (i + 1) % 3
        segs.append((on(j, Q(1, 3), Q(1)), on(i, Q(2, 3), Q(-1))))
    for i in range(3):
        a, b = V[i], V[(i + 1) % 3]
        p = on(i, Q(1, 2), Q(1))
        dx, dy = b[0] - a[0], b[1] - a[1]
        segs.append((p, (p[0] + dy / 4, p[1] - dx / 4, p[2])))
    objs = _realize(segs, False, None)
    return _finish(objs, {"family": "endpoint", "params": {}, "seed": None}, {"has_cycle": True})


# --- random families -------------------------------------------------------------


def _rq(rng, lo, hi, digits=4):
    """Random exact decimal in [lo, hi] with the given number of digits."""
    scale = 10**digits
    return Q(rng.randint(int(lo * scale), int(hi * scale)), scale)


def _random_stick(rng, spread, tilt):
    cx, cy, cz = _rq(rng, 0, 1), _rq(rng, 0, 1), _rq(rng, 0, 1)
    ang = rng.uniform(0, 2 * math.pi)
    L = spread * rng.uniform(0.5, 1.0)
    W = spread * rng.uniform(0.15, 0.5)
    ux, uy = math.cos(ang), math.sin(ang)
    pts = [(-L / 2, -W / 2), (-L / 2, W / 2), (L / 2, rng.uniform(-W / 4, W / 4))]
    a = rng.uniform(-tilt, tilt)
    b = rng.uniform(-tilt / 4, tilt / 4)
    verts = []
    for s, t in pts:
        x = cx + Q(round((s * ux - t * uy) * 10**4), 10**4)
        y = cy + Q(round((s * uy + t * ux) * 10**4), 10**4)
        z = cz + Q(round((a * s + b * t) * 10**4), 10**4)
        verts.append((x, y, z))
    return verts


def gen_random_triangles(n: int, seed: int = 0, spread: Optional[float] = None, tilt: float = 0.6, max_tries: Optional[int] = None) -> Scene:
    """Rejection-sampled disjoint stick-like triangles in the unit square.

    ``spread`` is the typical triangle length (default ``0.9 / sqrt(n)`` so
    the expected overlap depth stays roughly constant across n); ``tilt`` is
    the largest slope along a triangle's long axis.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if spread is None:
        spread = min(0.6, 1.8 / math.sqrt(n))
    rng = random.Random(seed)
    max_tries = max_tries if max_tries is not None else 400 * n
    objs = []
    tries = 0
    while len(objs) < n:
        tries += 1
        if tries > max_tries:
            raise ValidationError(f"could not place {n} disjoint triangles (density infeasible)")
        v = _random_stick(rng, spread, tilt)
        try:
            t = Triangle3(*v, id=len(objs))
        except ValidationError:
            continue
        if any(intersects_3d(t, o) for o in objs):
            continue
        objs.append(t)
    return _finish(objs, {"family": "random", "params": {"n": n, "spread": spread, "tilt": tilt}, "seed": seed})


_FOOTPRINTS = [
    ((0, 0), (10, 0), (4, 8)),
    ((2, 1), (9, 6), (1, 7)),
    ((5, -1), (8, 9), (0, 3)),
]


def gen_parallel_stack(n: int, seed: int = 0) -> Scene:
    """n parallel horizontal triangles at distinct heights over three footprints.

    Acyclic by construction; the projected edges lie on nine lines only.
    """
    rng = random.Random(seed)
    objs = []
    for i in range(n):
        fp = _FOOTPRINTS[rng.randrange(len(_FOOTPRINTS))]
        z = Q(i)
        objs.append(Triangle3(*((Q(x), Q(y), z) for x, y in fp), id=i))
    return _finish(objs, {"family": "parallel", "params": {"n": n}, "seed": seed}, {"has_cycle": False})


def gen_sparse(n: int, seed: int = 0) -> Scene:
    """Small triangles on a jittered grid; each overlaps few neighbours (K ~ n)."""
    rng = random.Random(seed)
    side = math.ceil(math.sqrt(n))
    objs = []
    for i in range(n):
        gx, gy = i % side, i // side
        cx, cy = Q(gx) + _rq(rng, 0.3, 0.7, 3), Q(gy) + _rq(rng, 0.3, 0.7, 3)
        z = Q(i) + _rq(rng, 0, 0.5, 3)
        r = Q(6, 10)
        a = (cx - r, cy - r / 2, z)
        b = (cx + r, cy - r / 3 + _rq(rng, -0.1, 0.1, 3), z + Q(1, 10))
        c = (cx + _rq(rng, -0.2, 0.2, 3), cy + r, z + Q(1, 20))
        objs.append(Triangle3(a, b, c, id=i))
    return _finish(objs, {"family": "sparse", "params": {"n": n}, "seed": seed})


def gen_dense(n: int, seed: int = 0) -> Scene:
    """Long thin horizontal sticks across the square; K grows like n^2."""
    rng = random.Random(seed)
    objs = []
    for i in range(n):
        for _ in range(1000):
            ang = rng.uniform(0, math.pi)
            cx, cy = _rq(rng, 0.35, 0.65), _rq(rng, 0.35, 0.65)
            L = rng.uniform(0.2, 0.45)
            ux, uy = math.cos(ang) * L, math.sin(ang) * L
            px, py = cx - Q(round(ux * 10**4), 10**4), cy - Q(round(uy * 10**4), 10**4)
            qx, qy = cx + Q(round(ux * 10**4), 10**4), cy + Q(round(uy * 10**4), 10**4)
            if (px, py) == (qx, qy):
                continue
            z = Q(i)
            t = thin_triangle((px, py, z), (qx, qy, z), Q(3, 1000), id=i)
            objs.append(t)
            break
    return _finish(objs, {"family": "dense", "params": {"n": n}, "seed": seed})


def gen_parallel_segments(n: int, seed: int = 0) -> Scene:
    """n segments with parallel projections at distinct heights (acyclic)."""
    rng = random.Random(seed)
    objs = []
    for i in range(n):
        x, y = _rq(rng, 0, 1, 3), _rq(rng, 0, 1, 3)
        L = _rq(rng, 0.2, 0.5, 3)
        objs.append(Segment3((x, y, Q(i)), (x + L, y + L / 3, Q(i) + Q(1, 2)), id=i))
    return _finish(objs, {"family": "parallel-segments", "params": {"n": n}, "seed": seed}, {"has_cycle": False})


def gen_random_segments(n: int, seed: int = 0, spread: Optional[float] = None) -> Scene:
    """Random disjoint segments in the unit square with random end heights."""
    rng = random.Random(seed)
    spread = min(0.6, 2.0 / math.sqrt(n)) if spread is None else spread
    objs = []
    tries = 0
    while len(objs) < n:
        tries += 1
        if tries > 400 * n:
            raise ValidationError(f"could not place {n} disjoint segments")
        x, y = _rq(rng, 0, 1, 4), _rq(rng, 0, 1, 4)
        ang = rng.uniform(0, math.pi)
        dx = Q(round(math.cos(ang) * spread * 10**4), 10**4)
        dy = Q(round(math.sin(ang) * spread * 10**4), 10**4)
        if dx == 0 and dy == 0:
            continue
        s = Segment3((x, y, _rq(rng, 0, 1, 4)), (x + dx, y + dy, _rq(rng, 0, 1, 4)), id=len(objs))
        if any(intersects_3d(s, o) for o in objs):
            continue
        objs.append(s)
    return _finish(objs, {"family": "random-segments", "params": {"n": n, "spread": spread}, "seed": seed})


def gen_vertex_free_column(seed: int = 0, k: Optional[int] = None):
    """A cell plus disjoint objects clipped to it, with no vertex inside.

    Objects are thin wedges, segments and wide "cover" triangles whose
    defining points lie on a circle well outside the cell, so after clipping
    every closed edge runs across the cell.  Some columns start from a
    cyclic three-weave through the cell.  Returns ``(cell, objects)``.
    """
    from . import kernels
    from .geom import clip_to_cell

    rng = random.Random(seed)
    k = rng.randint(2, 7) if k is None else k
    if rng.random() < 0.5:
        cell = ((Q(0), Q(0)), (Q(1), Q(0)), (Q(1), Q(1)), (Q(0), Q(1)))
    else:
        cell = ((Q(0), Q(0)), (Q(1), Q(0)), (_rq(rng, 0.2, 0.8, 2), Q(1)))
    c0 = (Q(1, 2), Q(1, 2))
    R = 3

    def rnd(v):
        return Q(round(v * 10**4), 10**4)

    def on_circle(a):
        return c0[0] + rnd(R * math.cos(a)), c0[1] + rnd(R * math.sin(a))

    def realize(p, q, zp, zq, wedge, id):
        """Segment p->q, or a thin wedge with its base at p; clipped to the cell."""
        if wedge:
            dx, dy = q[0] - p[0], q[1] - p[1]
            w = rnd(rng.uniform(0.01, 0.06))
            T = Triangle3((p[0] - w * dy, p[1] + w * dx, zp), (p[0] + w * dy, p[1] - w * dx, zp), (q[0], q[1], zq), id=id)
            return clip_to_cell(T, cell)
        S = Segment3((p[0], p[1], zp), (q[0], q[1], zq), id=id)
        r = kernels.segment_clip(S.pts[0], S.pts[1], cell)
        if r is None or r[0] >= r[1]:
            return None
        return S.sub(r[0], r[1], False, False, id=id)

    objs = []
    if rng.random() < 0.4:
        # three lines around a small triangle in the cell, heights cyclic
        ctr = (_rq(rng, 0.35, 0.55), _rq(rng, 0.3, 0.5))
        rad, phi = rng.uniform(0.08, 0.2), rng.uniform(0, 2 * math.pi)
        V = [(ctr[0] + rnd(rad * math.cos(phi + 2 * math.pi * i / 3)), ctr[1] + rnd(rad * math.sin(phi + 2 * math.pi * i / 3))) for i in range(3)]
        L = 8
        for i in range(3):
            a, b = V[i], V[(i + 1) % 3]
            ux, uy = b[0] - a[0], b[1] - a[1]
            p = (a[0] - L * ux, a[1] - L * uy)
            q = (a[0] + (L + 1) * ux, a[1] + (L + 1) * uy)
            o = realize(p, q, Q(1 + L), Q(-L), rng.random() < 0.5, len(objs))
            if o is not None:
                objs.append(o)
        if any(intersects_3d(a, b) for i, a in enumerate(objs) for b in objs[:i]):
            objs = []
    tries = 0
    while len(objs) < k and tries < 200 * k:
        tries += 1
        th = rng.uniform(0, 2 * math.pi)
        kind = rng.choice(["seg", "wedge", "cover"])
        if kind == "cover":
            pts = [on_circle(th + 2 * math.pi * i / 3 + rng.uniform(-0.3, 0.3)) for i in range(3)]
            z = [_rq(rng, -3, 3) for _ in range(3)]
            try:
                o = clip_to_cell(Triangle3(*[(x, y, zz) for (x, y), zz in zip(pts, z)], id=len(objs)), cell)
            except ValidationError:
                continue
        else:
            p = on_circle(th)
            q = on_circle(th + math.pi + rng.uniform(-0.5, 0.5))
            o = realize(p, q, _rq(rng, -6, 6), _rq(rng, -6, 6), kind == "wedge", len(objs))
        if o is None or any(intersects_3d(o, u) for u in objs):
            continue
        objs.append(o)
    return cell, objs


# --- projected crossings ---------------------------------------------------------


def projected_edges(objects):
    """Planar segments of all triangle edges and segments."""
    out = []
    for o in objects:
        if isinstance(o, Segment3):
            out.append(o.pts)
        else:
            p = o.pts
            out += [(p[i], p[(i + 1) % len(p)]) for i in range(len(p))]
    return out


def count_crossings(objects) -> int:
    """K: pairs of projected edges of different objects meeting in a single point."""
    segs = []
    for k, o in enumerate(objects):
        for s in projected_edges([o]):
            segs.append((k, s))
    boxes = [(min(p[0], q[0]), max(p[0], q[0]), min(p[1], q[1]), max(p[1], q[1])) for _, (p, q) in segs]
    order = sorted(range(len(segs)), key=lambda i: boxes[i][0])
    K = 0
    for a in range(len(order)):
        i = order[a]
        for b in range(a + 1, len(order)):
            j = order[b]
            if boxes[j][0] > boxes[i][1]:
                break
            if segs[i][0] == segs[j][0] or boxes[j][2] > boxes[i][3] or boxes[i][2] > boxes[j][3]:
                continue
            kind, _ = segments_intersect_2d(segs[i][1], segs[j][1])
            if kind == "point":
                K += 1
    return K


# --- golden gadget ------------------------------------------------------------------


def load_scene_json(doc) -> Scene:
    from .formats import scene_from_json

    return scene_from_json(doc)


def gen_fig3_gadget() -> Scene:
    """The frozen three-color gadget (one triangle, two red and two blue sticks)."""
    text = resources.files("depthcut.data").joinpath("fig3_gadget.json").read_text()
    scene = load_scene_json(json.loads(text))
    return _finish(scene.objects, scene.metadata, scene.expected)


def fig3_column(scene):
    """Column cell, green-edge cut point and the pieces of the gadget inside the cell."""
    from .geom import clip_to_cell

    md = scene.metadata
    cell = tuple(tuple(_q(c) for c in p) for p in md["cell"])
    cut = tuple(_q(c) for c in md["cut_point"])
    pieces = [f for f in (clip_to_cell(o, cell) for o in scene.objects) if f is not None]
    return cell, cut, pieces


def fig3_check(scene, planes=None) -> dict:
    """Evaluate the three gadget properties with the oracle.

    ``two_cycles``: green < b1 < b2 < green and green < r1 < r2 < green both hold.
    ``edge_cut``: the column's edge set is cyclic and one cut at the cut point
    on the green edge makes it acyclic.  ``plane_cut``: for each vertical
    plane (a planar line through the cut point by default), slicing the green
    piece still leaves a cycle among the column contents.
    """
    from .cutset import CutSet, apply_cuts
    from .geom import slice_by_vertical_plane
    from .pipeline import column_edges

    g = build_depth_graph(scene.objects)
    idx = {o.id: k for k, o in enumerate(scene.objects)}
    G, B1, B2, R1, R2 = (idx[n] for n in ("green", "b1", "b2", "r1", "r2"))
    two = all(g.has_edge(a, b) for a, b in [(G, B1), (B1, B2), (B2, G), (G, R1), (R1, R2), (R2, G)])

    cell, cut, pieces = fig3_column(scene)
    edges = column_edges(pieces)
    e_cyclic = topological_order(build_depth_graph(edges)) is None
    green_edges = [s for s in edges if s.parent == "green"]
    cs = CutSet(edges)
    for s in green_edges:
        t = s.param(cut)
        if 0 < t < 1 and s.point_at(t)[:2] == cut:
            cs.add(s, t, "exact")
    one_cut = len(cs) == 1 and topological_order(build_depth_graph(apply_cuts(edges, cs))) is not None

    if planes is None:
        planes = [(Q(1), Q(0), -cut[0])]
    plane_results = []
    for pl in planes:
        objs = []
        for f in pieces:
            objs += slice_by_vertical_plane(f, pl) if f.parent == "green" else [f]
        plane_results.append(topological_order(build_depth_graph(objs)) is None)
    return {
        "two_cycles": two,
        "edge_cut": e_cyclic and one_cut,
        "plane_cut": all(plane_results),
        "plane_results": plane_results,
    }


GENERATORS = {
    "cyclic-triple": lambda **kw: gen_cyclic_triple(),
    "weave3": lambda thin=False, **kw: gen_weave3(thin),
    "bipartite-weaving": lambda m=4, thin=False, **kw: gen_bipartite_weaving(m, thin),
    "grid-weaving": lambda m=4, thin=False, **kw: gen_grid_weaving(m, thin),
    "parallel-overlap": lambda k=4, thin=False, **kw: gen_parallel_overlap(k, thin),
    "concurrent": lambda k=3, **kw: gen_concurrent_gadget(k),
    "endpoint": lambda **kw: gen_endpoint_gadget(),
    "random": lambda n=16, seed=0, spread=None, **kw: gen_random_triangles(n, seed, spread),
    "parallel": lambda n=16, seed=0, **kw: gen_parallel_stack(n, seed),
    "sparse": lambda n=16, seed=0, **kw: gen_sparse(n, seed),
    "dense": lambda n=16, seed=0, **kw: gen_dense(n, seed),
    "parallel-segments": lambda n=16, seed=0, **kw: gen_parallel_segments(n, seed),
    "random-segments": lambda n=16, seed=0, spread=None, **kw: gen_random_segments(n, seed, spread),
    "fig3": lambda **kw: gen_fig3_gadget(),
}
