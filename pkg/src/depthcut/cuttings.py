"""Planar cuttings: one-level cuttings, hierarchies, trapezoidal cuttings.

A cell is refined by sampling some of the lines (or segments) crossing it,
building the arrangement (or vertical decomposition) of the sample inside
the cell, and checking the crossing count of every child exactly.  Children
that still exceed the target are refined again with their own crossing
lists.  Sampled lines never cross the interior of a child, so every
recursive step strictly shrinks the list and the procedure terminates.

Crossing counts are weighted: a line carrying several collinear input edges
counts once per edge.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import kernels
from .exact import Q, fmt

DEFAULT_RHO = 4
DEFAULT_A = 0.5
DEFAULT_RETRIES = 2


# --- lines ------------------------------------------------------------------


def normalize_line(a, b, c):
    if a != 0:
        return (Q(1), b / a, c / a)
    if b == 0:
        raise ValueError("degenerate line")
    return (a / b, Q(1), c / b)


def line_through(p, q):
    a, b, c = kernels.edge_line(p, q)
    return normalize_line(a, b, c)


def lines_from_segments(segs2d: Sequence) -> tuple:
    """Collapse the supporting lines of planar segments.

    Returns ``(lines, weights, index)`` where ``index[k]`` is the line of
    segment ``k`` and ``weights[i]`` counts the segments on line ``i``.
    """
    pos: dict = {}
    lines, weights, index = [], [], []
    for p, q in segs2d:
        ln = line_through(p, q)
        i = pos.get(ln)
        if i is None:
            i = pos[ln] = len(lines)
            lines.append(ln)
            weights.append(0)
        weights[i] += 1
        index.append(i)
    return lines, weights, index


def _sample_size(m_weight: int, target: int, rho: int, A: float) -> int:
    if target <= 0:
        return m_weight
    rho_e = max(2.0, min(float(rho), m_weight / target))
    return max(1, math.ceil(A * rho_e * math.log(rho_e)))


def _split_faces(faces, line):
    a, b, c = line
    out = []
    for f in faces:
        pos = neg = False
        for x, y in f:
            v = a * x + b * y + c
            if v > 0:
                pos = True
            elif v < 0:
                neg = True
        if pos and neg:
            out.append(kernels.clip_halfplane(f, None, a, b, c)[0])
            out.append(kernels.clip_halfplane(f, None, -a, -b, -c)[0])
        else:
            out.append(f)
    return out


def _clean(poly):
    """Remove repeated and collinear vertices."""
    pts = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) > 3:
        changed = False
        m = len(pts)
        for i in range(m):
            if kernels.orient(pts[i - 1], pts[i], pts[(i + 1) % m]) == 0:
                del pts[i]
                changed = True
                break
    return pts


def bottom_vertex_triangulation(face):
    """Fan from the lowest (then leftmost) vertex."""
    pts = _clean(face)
    if len(pts) == 3:
        return [tuple(pts)]
    k = min(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))
    pts = pts[k:] + pts[:k]
    return [(pts[0], pts[i], pts[i + 1]) for i in range(1, len(pts) - 1)]


# --- generic refinement ------------------------------------------------------


@dataclass
class _Ctx:
    kind: str  # "lines" or "segments"
    items: list
    weights: list
    rho: int
    A: float
    retries: int
    seed: object
    stats: dict = field(default_factory=lambda: {"retries": 0, "refinements": 0, "violator_splits": 0})

    def weight(self, idx):
        w = self.weights
        return sum(w[i] for i in idx)

    def crossing(self, cell, idx):
        if self.kind == "lines":
            return kernels.lines_crossing(cell, self.items, idx)
        return kernels.segments_crossing(cell, self.items, idx)

    def decompose(self, cell, sample):
        if self.kind == "lines":
            faces = [list(cell)]
            for i in sample:
                faces = _split_faces(faces, self.items[i])
            return [t for f in faces for t in bottom_vertex_triangulation(f)]
        return trapezoidal_decomposition(cell, [self.items[i] for i in sample])


def _refine(ctx: _Ctx, cell, crossing, target, path):
    """Children ``[(cell, crossing)]`` of ``cell`` each of weight <= target."""
    if ctx.weight(crossing) <= target:
        return [(tuple(cell), list(crossing))]
    ctx.stats["refinements"] += 1
    rng = random.Random(f"{ctx.seed}:{path}")
    s = _sample_size(ctx.weight(crossing), target, ctx.rho, ctx.A)
    best = None
    for attempt in range(max(1, ctx.retries + 1)):
        if s >= len(crossing):
            sample = list(crossing)
        else:
            sample = sorted(rng.sample(crossing, s))
        chosen = set(sample)
        rest = [i for i in crossing if i not in chosen]
        kids = []
        excess = 0
        for child in ctx.decompose(cell, sample):
            cr = ctx.crossing(child, rest)
            over = ctx.weight(cr) - target
            if over > 0:
                excess += over
            kids.append((child, cr))
        if best is None or excess < best[0]:
            best = (excess, kids)
        if excess == 0 or s >= len(crossing):
            break
        ctx.stats["retries"] += 1
    out = []
    for k, (child, cr) in enumerate(best[1]):
        if ctx.weight(cr) > target:
            ctx.stats["violator_splits"] += 1
            out.extend(_refine(ctx, child, cr, target, path + (("v", k),)))
        else:
            out.append((tuple(child), cr))
    return out


# --- data types -------------------------------------------------------------


@dataclass
class CuttingLevel:
    """Cells of one cutting with their exact crossing lists."""

    level: int
    cells: list
    crossing: list

    def __len__(self):
        return len(self.cells)


@dataclass
class CuttingNode:
    pts: tuple
    level: int
    parent: int
    crossing: list
    children: list = field(default_factory=list)
    path: tuple = ()


@dataclass
class CuttingHierarchy:
    """Tower of cuttings; ``nodes[0]`` is the root (the clip box)."""

    kind: str
    items: list
    weights: list
    rho: int
    r: int
    k: int
    nodes: list
    levels: list
    seed: object = 0
    A: float = DEFAULT_A
    stats: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return sum(self.weights)

    @property
    def leaves(self):
        return self.levels[self.k]

    @property
    def max_children(self) -> int:
        return max((len(nd.children) for nd in self.nodes), default=0)

    def level(self, i) -> CuttingLevel:
        ids = self.levels[i]
        return CuttingLevel(i, [self.nodes[u].pts for u in ids], [self.nodes[u].crossing for u in ids])

    def bound(self, i) -> int:
        return self.n // self.rho**i

    def level_sizes(self):
        return [len(lv) for lv in self.levels]

    def verify(self) -> None:
        """Check the hierarchy conditions exactly; raise AssertionError on failure."""
        ctx = _Ctx(self.kind, self.items, self.weights, self.rho, self.A, 0, self.seed)
        if not (self.rho ** max(self.k - 1, 0) < self.r <= self.rho**self.k or (self.r == 1 and self.k == 0)):
            raise AssertionError("level count does not match r and rho")
        if len(self.levels[0]) != 1:
            raise AssertionError("level 0 must be the root alone")
        root = self.nodes[self.levels[0][0]]
        full = ctx.crossing(root.pts, range(len(self.items)))
        if sorted(full) != sorted(root.crossing):
            raise AssertionError("root crossing list is wrong")
        for i, ids in enumerate(self.levels):
            total = 0
            for u in ids:
                nd = self.nodes[u]
                if nd.level != i:
                    raise AssertionError("node on the wrong level")
                if ctx.weight(nd.crossing) > self.bound(i):
                    raise AssertionError(f"cell {u} on level {i} exceeds the crossing bound")
                total += kernels.area2(nd.pts)
                if i > 0:
                    par = self.nodes[nd.parent]
                    exact = ctx.crossing(nd.pts, par.crossing)
                    if exact != nd.crossing:
                        raise AssertionError(f"cell {u} has an inexact crossing list")
                    if any(c != 1 and c != 0 for c in kernels.point_classes(par.pts, nd.pts)):
                        raise AssertionError(f"cell {u} is not inside its parent")
            if total != kernels.area2(root.pts):
                raise AssertionError(f"level {i} cells do not tile the root")
        for nd in self.nodes:
            if nd.children:
                s = sum(kernels.area2(self.nodes[v].pts) for v in nd.children)
                if s != kernels.area2(nd.pts):
                    raise AssertionError("children do not tile their parent")

    def to_json(self):
        return {
            "kind": self.kind,
            "rho": self.rho,
            "r": self.r,
            "k": self.k,
            "seed": str(self.seed),
            "levels": self.levels,
            "nodes": [
                {
                    "level": nd.level,
                    "parent": nd.parent,
                    "children": nd.children,
                    "cell": [[fmt(x), fmt(y)] for x, y in nd.pts],
                    "crossing": nd.crossing,
                }
                for nd in self.nodes
            ],
        }


def levels_for(r: int, rho: int) -> int:
    """Smallest k with rho**k >= r."""
    if r < 1:
        raise ValueError("r must be at least 1")
    k = 0
    while rho**k < r:
        k += 1
    return k


def _build(kind, items, weights, r, rho, box, seed, A, retries) -> CuttingHierarchy:
    if rho < 2:
        raise ValueError("rho must be at least 2")
    weights = list(weights) if weights is not None else [1] * len(items)
    ctx = _Ctx(kind, list(items), weights, rho, A, retries, seed)
    k = levels_for(r, rho)
    n = sum(weights)
    root = CuttingNode(tuple(box), 0, -1, ctx.crossing(box, range(len(items))))
    nodes = [root]
    levels = [[0]]
    for i in range(1, k + 1):
        target = n // rho**i
        cur = []
        for u in levels[i - 1]:
            nd = nodes[u]
            kids = _refine(ctx, nd.pts, nd.crossing, target, nd.path)
            for c, (pts, cr) in enumerate(kids):
                v = len(nodes)
                nodes.append(CuttingNode(pts, i, u, cr, [], nd.path + (c,)))
                nd.children.append(v)
                cur.append(v)
        levels.append(cur)
    h = CuttingHierarchy(kind, ctx.items, weights, rho, r, k, nodes, levels, seed, A, dict(ctx.stats))
    return h


def build_hierarchy(lines, r, rho=DEFAULT_RHO, box=None, seed=0, A=DEFAULT_A, retries=DEFAULT_RETRIES, weights=None, verify=True) -> CuttingHierarchy:
    """Hierarchical (1/r)-cutting of lines ``(a, b, c)`` inside ``box``."""
    box = box if box is not None else _default_box_for_lines(lines)
    h = _build("lines", [normalize_line(*ln) for ln in lines], weights, r, rho, box, seed, A, retries)
    if verify:
        h.verify()
    return h


def build_trap_hierarchy(segments, r, rho=DEFAULT_RHO, box=None, seed=0, A=DEFAULT_A, retries=DEFAULT_RETRIES, verify=True) -> CuttingHierarchy:
    """Hierarchy of trapezoidal cuttings for planar segments ``((x, y), (x, y))``."""
    segments = [tuple(s) for s in segments]
    box = box if box is not None else _default_box_for_segments(segments)
    h = _build("segments", segments, None, r, rho, box, seed, A, retries)
    if verify:
        h.verify()
    return h


def one_level_cutting(lines, rho, within, seed=0, A=DEFAULT_A, retries=DEFAULT_RETRIES, weights=None, target=None) -> CuttingLevel:
    """Triangular cells covering ``within``, each crossed by at most |lines|/rho lines."""
    items = [normalize_line(*ln) for ln in lines]
    weights = list(weights) if weights is not None else [1] * len(items)
    ctx = _Ctx("lines", items, weights, rho, A, retries, seed)
    crossing = ctx.crossing(tuple(within), range(len(items)))
    t = sum(weights) // rho if target is None else target
    kids = _refine(ctx, tuple(within), crossing, t, ())
    lv = CuttingLevel(1, [c for c, _ in kids], [cr for _, cr in kids])
    lv.stats = dict(ctx.stats)
    return lv


@dataclass
class TrapCutting:
    cells: list
    crossing: list
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.cells)


def trap_cutting(segments, rho, within, seed=0, A=DEFAULT_A, retries=DEFAULT_RETRIES) -> TrapCutting:
    """Vertical-sided trapezoids covering ``within``, each crossed by at most n/rho segments."""
    items = [tuple(s) for s in segments]
    ctx = _Ctx("segments", items, [1] * len(items), rho, A, retries, seed)
    crossing = ctx.crossing(tuple(within), range(len(items)))
    kids = _refine(ctx, tuple(within), crossing, len(items) // rho, ())
    return TrapCutting([c for c, _ in kids], [cr for _, cr in kids], dict(ctx.stats))


def _default_box_for_lines(lines):
    return ((Q(-1), Q(-1)), (Q(1), Q(-1)), (Q(1), Q(1)), (Q(-1), Q(1)))


def _default_box_for_segments(segments):
    xs = [p[0] for s in segments for p in s] or [Q(0)]
    ys = [p[1] for s in segments for p in s] or [Q(0)]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    ext = max(x1 - x0, y1 - y0) or Q(1)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    h = 3 * ext / 2
    return ((cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h))


# --- trapezoidal decomposition ---------------------------------------------


def _y_at(p, q, x):
    return p[1] + (x - p[0]) * (q[1] - p[1]) / (q[0] - p[0])


def trapezoidal_decomposition(cell, segs):
    """Vertical decomposition of the sample ``segs`` inside the convex ``cell``.

    Returns convex polygons (trapezoids or triangles, counter-clockwise) that
    tile the cell; no sample segment crosses the interior of any of them.
    """
    cell = list(cell)
    m = len(cell)
    pieces = []  # non-vertical, left to right
    walls = []  # vertical pieces: (x, ylo, yhi)
    for p, q in segs:
        r = kernels.segment_clip(p, q, cell)
        if r is None or r[0] >= r[1]:
            continue
        a = (p[0] + r[0] * (q[0] - p[0]), p[1] + r[0] * (q[1] - p[1]))
        b = (p[0] + r[1] * (q[0] - p[0]), p[1] + r[1] * (q[1] - p[1]))
        if a[0] == b[0]:
            walls.append((a[0], min(a[1], b[1]), max(a[1], b[1])))
        else:
            pieces.append((a, b) if a[0] < b[0] else (b, a))
    events = set()
    points = []
    for v in cell:
        events.add(v[0])
        points.append(v)
    for a, b in pieces:
        events.add(a[0])
        events.add(b[0])
        points += [a, b]
    for x, y0, y1 in walls:
        events.add(x)
        points += [(x, y0), (x, y1)]
    allsegs = pieces + [((x, y0), (x, y1)) for x, y0, y1 in walls]
    for i in range(len(allsegs)):
        for j in range(i + 1, len(allsegs)):
            s, t = allsegs[i], allsegs[j]
            if s[1][0] < t[0][0] or t[1][0] < s[0][0]:
                continue
            kind, val = _seg_x(s, t)
            if kind == "point":
                events.add(val[0])
                points.append(val)
    xs = sorted(events)
    pts_at: dict = {}
    for p in points:
        pts_at.setdefault(p[0], []).append(p[1])
    walls_at: dict = {}
    for x, y0, y1 in walls:
        walls_at.setdefault(x, []).append((y0, y1))
    bottom = []
    top = []
    for i in range(m):
        p, q = cell[i], cell[(i + 1) % m]
        if q[0] > p[0]:
            bottom.append((p, q))
        elif q[0] < p[0]:
            top.append((q, p))
    out = []
    open_regions: dict = {}  # key -> (x_start, lo, hi)
    for j in range(len(xs) - 1):
        x0, x1 = xs[j], xs[j + 1]
        xm = (x0 + x1) / 2
        bnd = []
        for k, (p, q) in enumerate(bottom):
            if p[0] <= x0 and q[0] >= x1:
                bnd.append((_y_at(p, q, xm), 0, ("b", k), (p, q)))
                break
        for k, (p, q) in enumerate(top):
            if p[0] <= x0 and q[0] >= x1:
                bnd.append((_y_at(p, q, xm), 2, ("t", k), (p, q)))
                break
        for k, (a, b) in enumerate(pieces):
            if a[0] <= x0 and b[0] >= x1:
                bnd.append((_y_at(a, b, xm), 1, ("s", k), (a, b)))
        bnd.sort(key=lambda e: (e[0], e[1], e[2]))
        uniq = []
        for e in bnd:
            if uniq and uniq[-1][0] == e[0]:
                continue
            uniq.append(e)
        regions = {}
        for k in range(len(uniq) - 1):
            lo, hi = uniq[k], uniq[k + 1]
            regions[(lo[2], hi[2])] = (lo[3], hi[3])
        # close regions that do not continue through x0
        new_open = {}
        for key, (lo, hi) in regions.items():
            prev = open_regions.pop(key, None)
            if prev is not None and not _blocked(x0, lo, hi, pts_at, walls_at):
                new_open[key] = prev
            else:
                if prev is not None:
                    open_regions[key] = prev
                new_open[key] = (x0, lo, hi)
        for key, (xs0, lo, hi) in open_regions.items():
            out.append(_trapezoid(xs0, x0, lo, hi))
        open_regions = new_open
    for key, (xs0, lo, hi) in open_regions.items():
        out.append(_trapezoid(xs0, xs[-1], lo, hi))
    return out


def _seg_x(s, t):
    from .geom import segments_intersect_2d

    return segments_intersect_2d(s, t)


def _blocked(x, lo, hi, pts_at, walls_at) -> bool:
    ylo = _y_at(lo[0], lo[1], x)
    yhi = _y_at(hi[0], hi[1], x)
    for y in pts_at.get(x, ()):
        if ylo <= y <= yhi:
            return True
    for y0, y1 in walls_at.get(x, ()):
        if y0 <= yhi and ylo <= y1:
            return True
    return False


def _trapezoid(xa, xb, lo, hi):
    pts = [(xa, _y_at(lo[0], lo[1], xa)), (xb, _y_at(lo[0], lo[1], xb)), (xb, _y_at(hi[0], hi[1], xb)), (xa, _y_at(hi[0], hi[1], xa))]
    out = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def interior_crossings(cell, segs) -> int:
    """K of a cell: pairs of segments crossing at a point strictly inside it."""
    from .geom import segments_intersect_2d

    k = 0
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            kind, val = segments_intersect_2d(segs[i], segs[j])
            if kind == "point" and kernels.point_classes(cell, [val])[0] == 1:
                k += 1
    return k


def fit_level_constant(sizes, rho, K, n) -> float:
    """Smallest D >= 1 with size_i <= D^i rho^i + 2 D K rho^(2i) / n^2 for all i."""
    best = 1.0
    for i, sz in enumerate(sizes):
        if i == 0:
            continue
        lo, hi = 1.0, 2.0
        f = lambda D: D**i * rho**i + 2 * D * K * rho ** (2 * i) / max(n, 1) ** 2
        while f(hi) < sz:
            hi *= 2
        if f(lo) >= sz:
            continue
        for _ in range(60):
            mid = (lo + hi) / 2
            if f(mid) >= sz:
                hi = mid
            else:
                lo = mid
        best = max(best, hi)
    return best
