"""End-to-end fragmentation procedures.

Triangles go through two phases.  Phase 1 descends a hierarchical cutting
of the projected edge lines and keeps ``cell & T`` at the first node whose
cell lies inside ``T`` (or at a leaf).  Leaf pieces that do not cover their
cell are grouped into prisms, the regions of a leaf column between
consecutive triangles spanning the whole cell.  Phase 2 computes a cut set
for the edges inside each prism and slices that prism's pieces with one
vertical plane per cut point and per triangle vertex inside the prism.
"""

from __future__ import annotations

import itertools
import math
import time
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import kernels
from .cuttings import DEFAULT_RHO, build_hierarchy, build_trap_hierarchy, lines_from_segments
from .cutset import CutSet, apply_cuts, cut_set_for, find_degeneracies
from .depthgraph import build_depth_graph, topological_order, worker_count
from .exact import Q, ZERO
from .geom import (
    ConvexFragment,
    Segment3,
    Triangle3,
    ValidationError,
    clip_box,
    slice_by_vertical_plane,
    validate_objects,
)
from .scenes import count_crossings

STRATEGIES = ("trivial", "greedy", "exact")


# --- phase 1 ----------------------------------------------------------------


@dataclass
class Piece:
    frag: ConvexFragment
    tri: int  # index of the input triangle
    node: int  # hierarchy node holding the piece
    full: bool  # the node's cell lies inside the triangle


def pieces_T1(h, T: ConvexFragment, tri: int = 0) -> list:
    """Pieces of ``T`` from a root-to-leaf descent of the hierarchy ``h``."""
    out = []
    root = h.nodes[0]
    pts, fl = kernels.clip_convex(list(T.pts), list(T.closed), root.pts)
    if not pts:
        return out
    stack = [(0, pts, fl)]
    while stack:
        u, pts, fl = stack.pop()
        nd = h.nodes[u]
        full = kernels.area2(pts) == kernels.area2(nd.pts)
        if full or not nd.children:
            out.append(Piece(T.derive(pts, fl), tri, u, full))
            continue
        for v in reversed(nd.children):
            cp, cf = kernels.clip_convex(pts, fl, h.nodes[v].pts)
            if cp:
                stack.append((v, cp, cf))
    return out


@dataclass
class Prism:
    column: int  # leaf node
    index: int  # number of spanning triangles below
    pieces: list = field(default_factory=list)  # Piece objects
    E: list = field(default_factory=list)  # Segment3 edge pieces used for the cut set
    E_interior: int = 0  # edge pieces through the cell interior
    V: list = field(default_factory=list)  # planar triangle vertices inside the cell


@dataclass
class PrismSubdivision:
    columns: dict  # leaf -> spanning triangle indices, bottom to top
    prisms: list
    pass_through: list  # Piece objects kept whole


def _centroid(pts):
    k = len(pts)
    return (sum((p[0] for p in pts), ZERO) / k, sum((p[1] for p in pts), ZERO) / k)


def edge_segments(frag: ConvexFragment, ids=None) -> list:
    """Closed (original) edges of a fragment as open segments.

    Endpoints are left open: they are either on cut edges, which are open,
    or triangle vertices, which the caller handles with vertex planes.
    """
    out = []
    m = len(frag.pts)
    for i in range(m):
        if not frag.closed[i]:
            continue
        p, q = frag.pts[i], frag.pts[(i + 1) % m]
        sid = (frag.id, i) if ids is None else next(ids)
        out.append(Segment3((p[0], p[1], frag.z_at(p)), (q[0], q[1], frag.z_at(q)), id=sid, closed=(False, False), parent=frag.parent))
    return out


def build_prisms(h, pieces: list, triangles: Sequence) -> PrismSubdivision:
    """Group non-spanning leaf pieces into prisms and fill E and V."""
    below_leaves: dict = {}
    leaf_of = {}
    for lv, u in enumerate(h.leaves):
        leaf_of[u] = lv
    # leaves under each node
    under: dict = {}

    def leaves_under(u):
        if u not in under:
            nd = h.nodes[u]
            under[u] = [u] if not nd.children else [w for v in nd.children for w in leaves_under(v)]
        return under[u]

    spanning: dict = {}
    pass_through = []
    loose: dict = {}
    for pc in pieces:
        if pc.full:
            pass_through.append(pc)
            for leaf in leaves_under(pc.node):
                spanning.setdefault(leaf, []).append(pc.tri)
        else:
            loose.setdefault(pc.node, []).append(pc)
    columns = {}
    prisms = []
    for leaf in sorted(loose):
        cell = h.nodes[leaf].pts
        c = _centroid(cell)
        stack = sorted(spanning.get(leaf, []), key=lambda t: triangles[t].z_at(c))
        columns[leaf] = stack
        groups: dict = {}
        for pc in loose[leaf]:
            w = _centroid(pc.frag.pts)
            z = pc.frag.z_at(w)
            lo, hi = 0, len(stack)
            while lo < hi:
                mid = (lo + hi) // 2
                if triangles[stack[mid]].z_at(w) < z:
                    lo = mid + 1
                else:
                    hi = mid
            groups.setdefault(lo, []).append(pc)
        for k in sorted(groups):
            pr = Prism(leaf, k, groups[k])
            seen_v = set()
            ids = itertools.count()
            for pc in pr.pieces:
                for seg in edge_segments(pc.frag, ids):
                    mid = ((seg.pts[0][0] + seg.pts[1][0]) / 2, (seg.pts[0][1] + seg.pts[1][1]) / 2)
                    if kernels.point_classes(cell, [mid])[0] == 1:
                        pr.E_interior += 1
                    pr.E.append(seg)
                T = triangles[pc.tri]
                for v in T.pts:
                    if v not in seen_v and kernels.point_classes(cell, [v])[0] == 1 and kernels.point_classes(pc.frag.pts, [v])[0] >= 0:
                        seen_v.add(v)
                        pr.V.append(v)
            pr.V.sort()
            prisms.append(pr)
    return PrismSubdivision(columns, prisms, pass_through)


# --- phase 2 ----------------------------------------------------------------


_DELTAS = [ZERO] + [Q(s * 1, d) for d in (16, 12, 10, 9, 8, 7, 6, 5) for s in (1, -1)]


def plane_direction(segments) -> "Q":
    """``d`` such that the planes ``x + d*y = c`` are parallel to no segment."""
    dirs = [(s.pts[1][0] - s.pts[0][0], s.pts[1][1] - s.pts[0][1]) for s in segments]
    for d in _DELTAS:
        if all(dx + d * dy != 0 for dx, dy in dirs):
            return d
    k = 17
    while True:
        d = Q(1, k)
        if all(dx + d * dy != 0 for dx, dy in dirs):
            return d
        k += 1


def step2_cut(pr: Prism, strategy: str = "greedy", seed: int = 0):
    """Slice the prism's pieces with planes through its cut points and vertices.

    Returns ``(fragments, cut set, plane count, degenerate)``.
    """
    segs = pr.E
    degenerate = bool(find_degeneracies(segs).routing()) if segs else False
    X = cut_set_for(segs, strategy, seed) if segs else CutSet()
    pts = {(p[0], p[1]) for p in X.all_points()} | set(pr.V)
    frags = [pc.frag for pc in pr.pieces]
    if not pts:
        return frags, X, 0, degenerate
    d = plane_direction(segs)
    offsets = sorted({p[0] + d * p[1] for p in pts})
    out = []
    for f in frags:
        vals = [p[0] + d * p[1] for p in f.pts]
        lo, hi = min(vals), max(vals)
        parts = [f]
        for c in offsets:
            if not lo < c < hi:
                continue
            nxt = []
            for g in parts:
                nxt += slice_by_vertical_plane(g, (Q(1), d, -c))
            parts = nxt
        out += parts
    return out, X, len(offsets), degenerate


def _step2_job(args):
    pr, strategy, seed = args
    return step2_cut(pr, strategy, seed)


# --- results ----------------------------------------------------------------


@dataclass
class FragmentationResult:
    fragments: list
    stats: dict
    hierarchy: object = None
    subdivision: Optional[PrismSubdivision] = None
    cutset: Optional[CutSet] = None
    inputs: list = field(default_factory=list)

    def depth_graph(self):
        return build_depth_graph(self.fragments)

    def is_acyclic(self) -> bool:
        return topological_order(self.depth_graph()) is not None

    def area_conserved(self) -> bool:
        """Per input triangle, fragment areas add up to its projected area."""
        tot: dict = {}
        for f in self.fragments:
            tot[f.parent] = tot.get(f.parent, ZERO) + kernels.area2(f.pts)
        return all(tot.get(T.id, ZERO) == kernels.area2(T.pts) for T in self.inputs)


def default_r(n: int) -> int:
    return max(1, math.ceil(n**0.75))


def _finalize(frags):
    out = []
    for k, f in enumerate(frags):
        g = ConvexFragment._make(f.pts, f.plane, f.closed, f.parent, k, f.tag)
        out.append(g)
    return out


def _two_phase(tris, h, strategy, seed, stats, timings, workers):
    t0 = time.perf_counter()
    pieces = []
    for i, T in enumerate(tris):
        for pc in pieces_T1(h, T, i):
            pc.frag.tag = f"{T.id}/n{pc.node}"
            pieces.append(pc)
    timings["phase1_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    t0 = time.perf_counter()
    sub = build_prisms(h, pieces, tris)
    timings["prisms_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    t0 = time.perf_counter()
    jobs = [(pr, strategy, seed) for pr in sub.prisms]
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_step2_job, jobs, chunksize=16))
    else:
        results = [_step2_job(j) for j in jobs]
    timings["phase2_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    frags = [pc.frag for pc in sub.pass_through]
    n_x = n_planes = n_degen = 0
    for pr, (fr, X, planes, degen) in zip(sub.prisms, results):
        for f in fr:
            f.tag = f"{f.tag}/p{pr.index}"
        frags += fr
        n_x += len(X)
        n_planes += planes
        n_degen += degen
    n_edges = 3 * len(tris)
    stats.update(
        {
            "T1": len(pieces),
            "T1_pass_through": len(sub.pass_through),
            "prisms": len(sub.prisms),
            "X": n_x,
            "V": sum(len(pr.V) for pr in sub.prisms),
            "planes": n_planes,
            "degenerate_prisms": n_degen,
            "max_E_interior": max((pr.E_interior for pr in sub.prisms), default=0),
            "E_budget": -(-n_edges // stats["r"]),
            "T2": len(frags),
        }
    )
    return _finalize(frags), sub


def _check_triangles(scene_or_tris):
    objs = list(getattr(scene_or_tris, "objects", scene_or_tris))
    tris = [o for o in objs if isinstance(o, ConvexFragment)]
    if len(tris) != len(objs):
        raise ValidationError("triangle pipeline needs a scene of triangles only")
    validate_objects(tris)
    return tris


def cut_triangles(scene, r: Optional[int] = None, rho: int = DEFAULT_RHO, strategy: str = "greedy", seed: int = 0, verify: bool = True, workers: Optional[int] = None) -> FragmentationResult:
    """Phase 1 on a hierarchical cutting of the edge lines, then per-prism cuts."""
    tris = _check_triangles(scene)
    n = len(tris)
    r = default_r(n) if r is None else r
    workers = worker_count() if workers is None else workers
    timings: dict = {}
    t0 = time.perf_counter()
    lines, weights, _ = lines_from_segments([(T.pts[i], T.pts[(i + 1) % 3]) for T in tris for i in range(3)])
    h = build_hierarchy(lines, r, rho, clip_box(tris), seed=seed, weights=weights, verify=verify)
    timings["hierarchy_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    stats = {"n": n, "K": None, "r": r, "rho": rho, "strategy": strategy, "seed": seed, "levels": h.level_sizes()}
    frags, sub = _two_phase(tris, h, strategy, seed, stats, timings, workers)
    res = FragmentationResult(frags, stats, h, sub, None, tris)
    return _finish(res, timings, verify)


def ksensitive_r(n: int, K: int) -> int:
    if K <= 0:
        return n
    return max(1, min(math.ceil(n**1.25 / K**0.25), n))


def cut_triangles_ksensitive(scene, rho: int = DEFAULT_RHO, strategy: str = "greedy", seed: int = 0, r: Optional[int] = None, verify: bool = True, workers: Optional[int] = None) -> FragmentationResult:
    """Same two phases on a trapezoidal hierarchy with r chosen from K."""
    tris = _check_triangles(scene)
    n = len(tris)
    K = count_crossings(tris)
    r = ksensitive_r(n, K) if r is None else r
    workers = worker_count() if workers is None else workers
    timings: dict = {}
    t0 = time.perf_counter()
    segs = [(T.pts[i], T.pts[(i + 1) % 3]) for T in tris for i in range(3)]
    h = build_trap_hierarchy(segs, r, rho, clip_box(tris), seed=seed, verify=verify)
    timings["hierarchy_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    stats = {"n": n, "K": K, "r": r, "rho": rho, "strategy": strategy, "seed": seed, "levels": h.level_sizes()}
    frags, sub = _two_phase(tris, h, strategy, seed, stats, timings, workers)
    res = FragmentationResult(frags, stats, h, sub, None, tris)
    return _finish(res, timings, verify)


def _finish(res, timings, verify):
    if verify:
        t0 = time.perf_counter()
        res.stats["oracle_ok"] = res.is_acyclic()
        timings["oracle_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    res.stats["timings"] = timings
    return res


# --- lines ------------------------------------------------------------------


def _cell_pieces(seg: Segment3, cell):
    """``(t0, t1)`` of the part of ``seg`` assigned to ``cell``, or None.

    A part running along the cell boundary goes to the cell on its left.
    """
    p, q = seg.pts
    r = kernels.segment_clip(p, q, cell)
    if r is None or r[0] == r[1]:
        return None
    t0, t1 = r
    tm = (Q(t0) + t1) / 2
    mid = (p[0] + tm * (q[0] - p[0]), p[1] + tm * (q[1] - p[1]))
    if kernels.point_classes(cell, [mid])[0] == 0:
        if kernels.orient(p, q, _centroid(cell)) <= 0:
            return None
    return t0, t1


def cut_lines(segments: Sequence[Segment3], r: Optional[int] = None, rho: int = DEFAULT_RHO, strategy: str = "greedy", seed: int = 0, verify: bool = True) -> FragmentationResult:
    """Cut at every cell wall of a cutting, then solve each column separately."""
    segs = list(segments)
    validate_objects(segs)
    n = len(segs)
    r = max(1, math.ceil(math.sqrt(n))) if r is None else r
    timings: dict = {}
    t0 = time.perf_counter()
    lines, weights, _ = lines_from_segments([s.pts for s in segs])
    h = build_hierarchy(lines, r, rho, clip_box(segs), seed=seed, weights=weights, verify=verify)
    timings["hierarchy_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    t0 = time.perf_counter()
    total = CutSet(segs)
    n_boundary = 0
    per_column = 0
    for leaf in h.leaves:
        cell = h.nodes[leaf].pts
        parts = []
        for s in segs:
            bb = s.bbox
            r_ = _cell_pieces(s, cell) if _box_hits(bb, cell) else None
            if r_ is None:
                continue
            t0_, t1_ = r_
            for t in (t0_, t1_):
                if 0 < t < 1 and total.add(s, t, "boundary"):
                    n_boundary += 1
            c0 = s.closed[0] if t0_ == 0 else False
            c1 = s.closed[1] if t1_ == 1 else False
            piece = s.sub(t0_, t1_, c0, c1, id=(s.id, leaf))
            parts.append((piece, s, t0_, t1_))
        if len(parts) < 2:
            continue
        cs = cut_set_for([p for p, _, _, _ in parts], strategy, seed)
        for piece, s, a, b in parts:
            for t, tag in zip(cs.params(piece.id), cs.tags(piece.id)):
                if total.add(s, a + t * (b - a), tag):
                    per_column += 1
    timings["columns_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    frags = apply_cuts(segs, total)
    stats = {
        "n": n,
        "K": None,
        "r": r,
        "rho": rho,
        "strategy": strategy,
        "seed": seed,
        "levels": h.level_sizes(),
        "boundary_cuts": n_boundary,
        "X": per_column,
        "cuts": len(total),
        "T2": len(frags),
    }
    res = FragmentationResult(frags, stats, h, None, total, segs)
    return _finish(res, timings, verify)


def _box_hits(bb, cell) -> bool:
    xs = [p[0] for p in cell]
    ys = [p[1] for p in cell]
    return bb[0] <= max(xs) and min(xs) <= bb[2] and bb[1] <= max(ys) and min(ys) <= bb[3]


# --- post-processing and checks ---------------------------------------------


def triangulate(fragments: Sequence[ConvexFragment]) -> list:
    """Fan triangulation from the first vertex; diagonals become open edges."""
    out = []
    for f in fragments:
        m = len(f.pts)
        if m == 3:
            out.append(f)
            continue
        for i in range(1, m - 1):
            pts = (f.pts[0], f.pts[i], f.pts[i + 1])
            fl = (f.closed[0] if i == 1 else False, f.closed[i], f.closed[m - 1] if i == m - 2 else False)
            out.append(ConvexFragment._make(pts, f.plane, fl, f.parent, f"{f.id}.{i - 1}", f.tag))
    return out


@dataclass
class Prop1Outcome:
    ok: bool
    edges_acyclic: bool
    objects_acyclic: bool
    counterexample: Optional[dict] = None


def column_edges(objects, cell=None) -> list:
    """Edges used for the edge-order test of a column's contents."""
    out = []
    ids = itertools.count()
    for o in objects:
        if o.kind == "seg":
            out.append(o)
        else:
            out += edge_segments(o, ids)
    return out


def has_interior_vertex(objects, cell) -> bool:
    """Does an endpoint of some closed edge lie strictly inside ``cell``?

    Such a point is either a triangle vertex or the end of an edge cut short,
    and in both cases the edges no longer cross the column.
    """
    for o in objects:
        if o.kind == "seg":
            if kernels.point_classes(cell, list(o.pts)).count(1):
                return True
            continue
        m = len(o.pts)
        for i in range(m):
            if (o.closed[i - 1] or o.closed[i]) and kernels.point_classes(cell, [o.pts[i]])[0] == 1:
                return True
    return False


def proposition1_check(objects, cell) -> Prop1Outcome:
    """Edges acyclic must imply contents acyclic for a vertex-free column."""
    objs = list(objects)
    if has_interior_vertex(objs, cell):
        raise ValidationError("column contains a vertex in its interior")
    edges = column_edges(objs)
    ea = topological_order(build_depth_graph(edges)) is not None
    oa = topological_order(build_depth_graph(objs)) is not None
    ok = oa or not ea
    cx = None if ok else {"cell": cell, "objects": objs, "edges": edges}
    return Prop1Outcome(ok, ea, oa, cx)
