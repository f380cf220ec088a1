"""Complete cut sets for collections of disjoint segments.

A cut at parameter ``t`` of a segment splits it there; both new endpoints
are open, so the cut point itself belongs to neither piece.  Three
interchangeable strategies are offered (``trivial``, ``greedy``, ``exact``)
plus a wrapper that removes degeneracies by perturbation, solves the
perturbed instance, maps the cuts back and adds segment-tree cuts for
collinear overlapping pieces.
"""

from __future__ import annotations

import bisect
import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cuttings import line_through
from .depthgraph import DepthGraph, build_depth_graph, shortest_cycle, strongly_connected_components, topological_order
from .exact import Q, ZERO, fmt
from .geom import (
    IntersectionError,
    Segment3,
    ValidationError,
    contains,
    relation,
    segments_intersect_2d,
)

TAGS = ("trivial", "greedy", "exact", "mapped", "segtree", "boundary")
DEFAULT_MAX_CANDIDATES = 24
GREEDY_TRIALS = 16


class OverlapError(ValidationError):
    """Two segments overlap in projection; normalize them first."""

    def __init__(self, pairs):
        self.pairs = pairs
        super().__init__(f"{len(pairs)} segment pair(s) overlap in projection, e.g. {pairs[0]}")


class BudgetError(ValueError):
    """The exhaustive search would exceed its candidate budget."""


# --- cut sets ---------------------------------------------------------------


class CutSet:
    """Cut points per segment, kept sorted by their parameter."""

    def __init__(self, segments: Sequence[Segment3] = ()):
        self.segments = {s.id: s for s in segments}
        self._cuts: dict = {}

    def add(self, seg: Segment3, t, tag: str) -> bool:
        if not 0 <= t <= 1:
            raise ValueError("cut parameter outside the segment")
        self.segments.setdefault(seg.id, seg)
        d = self._cuts.setdefault(seg.id, {})
        if t in d:
            return False
        d[t] = tag
        return True

    def add_point(self, seg: Segment3, q, tag: str) -> bool:
        return self.add(seg, seg.param(q), tag)

    def segment_ids(self):
        return [sid for sid in self._cuts if self._cuts[sid]]

    def params(self, sid):
        return sorted(self._cuts.get(sid, {}))

    def points(self, sid):
        s = self.segments[sid]
        return [s.point_at(t) for t in self.params(sid)]

    def tags(self, sid):
        d = self._cuts.get(sid, {})
        return [d[t] for t in sorted(d)]

    def all_points(self):
        return [p for sid in self.segment_ids() for p in self.points(sid)]

    def count(self, tag: Optional[str] = None) -> int:
        return sum(1 for d in self._cuts.values() for g in d.values() if tag is None or g == tag)

    def __len__(self):
        return self.count()

    def union(self, other: "CutSet") -> "CutSet":
        out = CutSet()
        for cs in (self, other):
            for sid in cs.segment_ids():
                s = cs.segments[sid]
                for t, g in zip(cs.params(sid), cs.tags(sid)):
                    out.add(s, t, g)
        return out

    def to_json(self):
        return {
            str(sid): [{"point": [fmt(c) for c in p], "provenance": g} for p, g in zip(self.points(sid), self.tags(sid))]
            for sid in self.segment_ids()
        }


def apply_cuts(segments: Sequence[Segment3], cutset: CutSet, tag=None) -> list:
    """Cut every segment at its cut points; uncut segments are returned as is."""
    out = []
    for s in segments:
        ts = cutset.params(s.id)
        if not ts:
            out.append(s)
            continue
        bounds = [(ZERO, s.closed[0])] if ts[0] != 0 else []
        bounds += [(t, False) for t in ts]
        if ts[-1] != 1:
            bounds.append((Q(1), s.closed[1]))
        for k in range(len(bounds) - 1):
            (t0, c0), (t1, c1) = bounds[k], bounds[k + 1]
            out.append(s.sub(t0, t1, c0, c1, id=f"{s.id}.{k}", tag=tag))
    return out


def is_complete(segments, cutset) -> bool:
    return topological_order(build_depth_graph(apply_cuts(segments, cutset))) is not None


# --- crossing schedules -----------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    t: object  # parameter on this segment
    partner: int
    sign: int  # +1: this segment is below the partner here
    point: tuple


@dataclass
class CrossingSchedule:
    segments: list
    entries: list = field(default_factory=list)
    K: int = 0

    def params(self, i):
        return sorted({c.t for c in self.entries[i]})


def _pairs(segments):
    boxes = [s.bbox for s in segments]
    order = sorted(range(len(segments)), key=lambda i: boxes[i][0])
    for a, i in enumerate(order):
        bi = boxes[i]
        for j in order[a + 1 :]:
            bj = boxes[j]
            if bj[0] > bi[2]:
                break
            if bj[1] <= bi[3] and bi[1] <= bj[3]:
                yield (i, j) if i < j else (j, i)


def crossing_schedule(segments: Sequence[Segment3]) -> CrossingSchedule:
    """Projected contacts along every segment, with the local above/below sign.

    Only contacts that belong to both segments count (open endpoints do not).
    """
    segs = list(segments)
    entries = [[] for _ in segs]
    overlaps = []
    K = 0
    for i, j in _pairs(segs):
        a, b = segs[i], segs[j]
        kind, p = segments_intersect_2d(a.pts, b.pts)
        if kind == "empty":
            continue
        if kind == "overlap":
            overlaps.append((a.id, b.id))
            continue
        if not (contains(a, p) and contains(b, p)):
            continue
        za, zb = a.z_at(p), b.z_at(p)
        if za == zb:
            raise IntersectionError(a, b, p)
        s = 1 if za < zb else -1
        entries[i].append(Crossing(a.param(p), j, s, p))
        entries[j].append(Crossing(b.param(p), i, -s, p))
        K += 1
    if overlaps:
        raise OverlapError(overlaps)
    for e in entries:
        e.sort(key=lambda c: (c.t, c.partner))
    return CrossingSchedule(segs, entries, K)


def gap_candidates(schedule: CrossingSchedule) -> list:
    """``(segment index, t)`` at the midpoint of every gap between crossings."""
    out = []
    for i in range(len(schedule.segments)):
        ps = schedule.params(i)
        out += [(i, (ps[k] + ps[k + 1]) / 2) for k in range(len(ps) - 1)]
    return out


# --- strategies -------------------------------------------------------------


def trivial_cut_set(schedule: CrossingSchedule) -> CutSet:
    """Cut both partners at every crossing."""
    cs = CutSet(schedule.segments)
    for i, s in enumerate(schedule.segments):
        for c in schedule.entries[i]:
            cs.add(s, c.t, "trivial")
    return cs


def _verified(segments, cs, what):
    if not is_complete(segments, cs):
        raise AssertionError(f"{what} cut set failed the acyclicity check")
    return cs


def _cyclic_nodes(n, witness) -> int:
    """Number of nodes lying on some cycle of the graph given by ``witness``."""
    comps = strongly_connected_components(DepthGraph(n, witness))
    return sum(len(c) for c in comps if len(c) > 1)


def greedy_cut_set(segments: Sequence[Segment3], verify: bool = True, max_trials: int = GREEDY_TRIALS) -> CutSet:
    """Break shortest depth cycles one gap cut at a time.

    Each round looks at the gaps between the two crossings a shortest cycle
    uses on each of its fragments, tries up to ``max_trials`` of them and
    keeps the one leaving the fewest nodes on cycles.  Never returns more
    cuts than the trivial strategy.
    """
    segs = list(segments)
    sched = crossing_schedule(segs)
    cs = CutSet(segs)
    params = [sched.params(i) for i in range(len(segs))]
    frags = list(segs)
    span = [(i, ZERO, Q(1)) for i in range(len(segs))]  # fragment -> (segment, lo, hi)
    witness = dict(build_depth_graph(frags).witness)
    nbrs = [set() for _ in frags]
    for i, j in witness:
        nbrs[i].add(j)
        nbrs[j].add(i)

    def split(f, t):
        si, lo, hi = span[f]
        old = frags[f]
        parts = [
            segs[si].sub(lo, t, old.closed[0], False, id=f"{segs[si].id}~{len(frags)}"),
            segs[si].sub(t, hi, False, old.closed[1], id=f"{segs[si].id}~{len(frags) + 1}"),
        ]
        rel = []  # (part, neighbour, part below neighbour?, witness)
        for k, part in enumerate(parts):
            for u in nbrs[f]:
                sg, w = relation(part, frags[u])
                if sg:
                    rel.append((k, u, sg > 0, w))
        return parts, [(si, lo, t), (si, t, hi)], rel

    def with_parts(f, rel, base):
        w2 = {e: w for e, w in witness.items() if f not in e}
        for k, u, up, w in rel:
            w2[(base + k, u) if up else (u, base + k)] = w
        return w2

    def trial(f, t):
        _, _, rel = split(f, t)
        n = len(frags)
        return _cyclic_nodes(n + 2, with_parts(f, rel, n))

    while True:
        cyc = shortest_cycle(DepthGraph(len(frags), witness))
        if cyc is None:
            break
        k = len(cyc)
        cands = []
        for idx, f in enumerate(cyc):
            si, lo, hi = span[f]
            seg = segs[si]
            t_in = seg.param(witness[(cyc[idx - 1], f)])
            t_out = seg.param(witness[(f, cyc[(idx + 1) % k])])
            if t_in == t_out:
                continue
            a, b = min(t_in, t_out), max(t_in, t_out)
            ps = params[si]
            load = sum(1 for t in ps if lo <= t <= hi)
            med = ps[len(ps) // 2]
            for m in range(len(ps) - 1):
                if a <= ps[m] and ps[m + 1] <= b:
                    t = (ps[m] + ps[m + 1]) / 2
                    cands.append(((-load, abs(t - med), f, t), f, t))
        if not cands:
            raise AssertionError("cycle without a separable fragment")
        cands.sort(key=lambda c: c[0])
        cands = cands[:max_trials]
        if len(cands) > 1:
            best = min(cands, key=lambda c: (trial(c[1], c[2]), c[0]))
        else:
            best = cands[0]
        _, f, t = best
        si = span[f][0]
        cs.add(segs[si], t, "greedy")
        parts, spans, rel = split(f, t)
        base = len(frags)
        witness = with_parts(f, rel, base)
        for u in nbrs[f]:
            nbrs[u].discard(f)
        nbrs[f] = set()
        for part, sp in zip(parts, spans):
            frags.append(part)
            span.append(sp)
            nbrs.append(set())
        for k, u, _, _ in rel:
            nbrs[base + k].add(u)
            nbrs[u].add(base + k)

    triv = trivial_cut_set(sched)
    if len(cs) > len(triv):
        cs = triv
    return _verified(segs, cs, "greedy") if verify else cs


def _runs_acyclic(nseg, crossings, cuts) -> bool:
    """Acyclicity of the piece graph induced by gap cuts (no cut on a crossing)."""
    node = {}
    succ = {}
    indeg = {}

    def key(i, t):
        k = (i, bisect.bisect(cuts[i], t))
        if k not in node:
            node[k] = len(node)
            succ[node[k]] = []
            indeg[node[k]] = 0
        return node[k]

    for i, ti, j, tj, s in crossings:
        u, v = key(i, ti), key(j, tj)
        if s < 0:
            u, v = v, u
        succ[u].append(v)
        indeg[v] += 1
    stack = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == len(node)


def exact_small_cut_set(segments: Sequence[Segment3], max_candidates: int = DEFAULT_MAX_CANDIDATES, verify: bool = True) -> CutSet:
    """Minimum number of gap cuts making the pieces acyclic, by exhaustive search.

    Minimal over the gap-midpoint candidates only.
    """
    segs = list(segments)
    sched = crossing_schedule(segs)
    cands = gap_candidates(sched)
    if len(cands) > max_candidates:
        raise BudgetError(f"{len(cands)} candidates exceed the budget of {max_candidates}")
    crossings = [
        (i, c.t, c.partner, segs[c.partner].param(c.point), c.sign)
        for i in range(len(segs))
        for c in sched.entries[i]
        if i < c.partner
    ]
    for size in range(len(cands) + 1):
        for combo in itertools.combinations(range(len(cands)), size):
            cuts = [[] for _ in segs]
            for c in combo:
                i, t = cands[c]
                cuts[i].append(t)
            if _runs_acyclic(len(segs), crossings, cuts):
                cs = CutSet(segs)
                for c in combo:
                    i, t = cands[c]
                    cs.add(segs[i], t, "exact")
                return _verified(segs, cs, "exact") if verify else cs
    raise AssertionError("no candidate subset is complete")


# --- degeneracies -----------------------------------------------------------


@dataclass
class Degeneracies:
    overlaps: list = field(default_factory=list)  # index pairs
    concurrent: list = field(default_factory=list)  # (point, indices)
    endpoint: list = field(default_factory=list)  # (i, j, point, live)

    def __bool__(self):
        return bool(self.overlaps or self.concurrent or self.endpoint)

    def routing(self) -> bool:
        """True when a plain strategy cannot be trusted on the input."""
        return bool(self.overlaps or self.concurrent or any(e[3] for e in self.endpoint))


def _parallel(a, b) -> bool:
    (p, q), (u, v) = a.pts, b.pts
    return (q[0] - p[0]) * (v[1] - u[1]) - (q[1] - p[1]) * (v[0] - u[0]) == 0


def find_degeneracies(segments: Sequence[Segment3]) -> Degeneracies:
    segs = list(segments)
    d = Degeneracies()
    at = {}
    for i, j in _pairs(segs):
        a, b = segs[i], segs[j]
        kind, p = segments_intersect_2d(a.pts, b.pts)
        if kind == "empty":
            continue
        if kind == "overlap":
            d.overlaps.append((i, j))
            continue
        at.setdefault(p, set()).update((i, j))
        if p in a.pts or p in b.pts:
            d.endpoint.append((i, j, p, contains(a, p) and contains(b, p)))
    d.concurrent = [(p, sorted(s)) for p, s in at.items() if len(s) >= 3]
    return d


@dataclass
class PerturbationMap:
    original: list
    perturbed: list
    eps: object = None
    attempts: int = 0

    @property
    def identity(self) -> bool:
        return self.eps is None


def _pow2_below(x):
    e = Q(1)
    while e > x:
        e /= 2
    while e * 2 <= x:
        e *= 2
    return e


def _clearance(segs):
    """A rational lower bound scale for safe perturbations."""
    best = None

    def upd(v):
        nonlocal best
        if v > 0 and (best is None or v < best):
            best = v

    for s in segs:
        (p, q) = s.pts
        upd(max(abs(q[0] - p[0]), abs(q[1] - p[1])) / 4)
    for i, j in _pairs(segs):
        a, b = segs[i], segs[j]
        for s, t in ((a, b), (b, a)):
            u, v = t.pts
            l1 = abs(v[0] - u[0]) + abs(v[1] - u[1])
            for p in s.pts:
                o = (v[0] - u[0]) * (p[1] - u[1]) - (v[1] - u[1]) * (p[0] - u[0])
                upd(abs(o) / l1)
        kind, p = segments_intersect_2d(a.pts, b.pts)
        if kind == "point":
            upd(abs(a.z_at(p) - b.z_at(p)) / 4)
    return best if best is not None else Q(1)


def _perturb_one(s, eps, u):
    (p, q) = s.pts
    L = max(abs(q[0] - p[0]), abs(q[1] - p[1]))
    e = min(eps / L, Q(1, 4))
    t0 = -e if s.closed[0] else e
    t1 = 1 + e if s.closed[1] else 1 - e
    a, b = s.point_at(t0), s.point_at(t1)
    a = (a[0] + eps * u[0], a[1] + eps * u[1], a[2])
    b = (b[0] + eps * u[0], b[1] + eps * u[1], b[2])
    return Segment3(a, b, id=s.id, closed=(True, True), parent=s.parent, tag=s.tag)


def _check_perturbation(S, P) -> bool:
    if find_degeneracies(P):
        return False
    n = len(S)
    try:
        for i in range(n):
            for j in range(i + 1, n):
                par = _parallel(S[i], S[j])
                kind, _ = segments_intersect_2d(P[i].pts, P[j].pts)
                if par:
                    if kind != "empty":
                        return False
                    continue
                if relation(S[i], S[j])[0] != relation(P[i], P[j])[0]:
                    return False
    except IntersectionError:
        return False
    # crossing order along every perturbed segment, weakly preserved
    for i in range(n):
        seq = []
        for j in range(n):
            if j == i or _parallel(S[i], S[j]):
                continue
            kp, pp = segments_intersect_2d(P[i].pts, P[j].pts)
            if kp != "point":
                continue
            ko, po = segments_intersect_2d(S[i].pts, S[j].pts)
            if ko != "point":
                return False
            seq.append((P[i].param(pp), S[i].param(po)))
        seq.sort()
        for k in range(len(seq) - 1):
            if seq[k][1] > seq[k + 1][1]:
                return False
    return True


def degeneracy_normalize(segments: Sequence[Segment3], seed: int = 0, max_attempts: int = 64):
    """Perturb the segments so that no degeneracy remains.

    Closed endpoints are pushed outward and open ones pulled inward by a
    little, then each segment is translated by ``eps`` in a seeded random
    planar direction.  The preservation properties are checked exactly and
    ``eps`` is halved until they hold.
    """
    S = list(segments)
    if not find_degeneracies(S):
        return list(S), PerturbationMap(S, list(S))
    rng = random.Random(seed)
    eps = _pow2_below(_clearance(S) / 8)
    for attempt in range(1, max_attempts + 1):
        dirs = []
        for _ in S:
            while True:
                u = (Q(rng.randint(-1000, 1000), 1000), Q(rng.randint(-1000, 1000), 1000))
                if u != (0, 0):
                    break
            dirs.append(u)
        P = [_perturb_one(s, eps, u) for s, u in zip(S, dirs)]
        if _check_perturbation(S, P):
            return P, PerturbationMap(S, P, eps, attempt)
        eps /= 2
    raise AssertionError("perturbation did not converge")


def map_back_cuts(xp: CutSet, pmap: PerturbationMap) -> CutSet:
    """Move each cut on a perturbed segment to the matching crossing on the original."""
    S, P = pmap.original, pmap.perturbed
    index = {s.id: i for i, s in enumerate(P)}
    out = CutSet(S)
    for sid in xp.segment_ids():
        i = index[sid]
        cr = []
        for j in range(len(P)):
            if j == i:
                continue
            kind, p = segments_intersect_2d(P[i].pts, P[j].pts)
            if kind == "point" and contains(P[i], p) and contains(P[j], p):
                cr.append((P[i].param(p), j))
        if not cr:
            continue  # nothing to separate on this segment
        for t in xp.params(sid):
            _, j = min(cr, key=lambda c: (abs(c[0] - t), c[0], c[1]))
            kind, p = segments_intersect_2d(S[i].pts, S[j].pts)
            if kind != "point":
                continue
            out.add(S[i], S[i].param(p), "mapped")
    return out


# --- segment-tree cuts ------------------------------------------------------


def canonical_intervals(intervals):
    """Segment-tree canonical pieces of each ``(lo, hi)`` over all endpoints.

    Returns one sorted list of breakpoints per interval: the interior
    boundaries between its consecutive canonical node intervals.
    """
    xs = sorted({v for iv in intervals for v in iv})
    m = len(xs) - 1  # elementary intervals [xs[k], xs[k+1]]
    out = []
    for lo, hi in intervals:
        a, b = xs.index(lo), xs.index(hi)
        nodes = []

        def walk(l, r):
            # node covers elementary intervals l..r-1
            if r <= a or b <= l:
                return
            if a <= l and r <= b:
                nodes.append((l, r))
                return
            mid = (l + r) // 2
            walk(l, mid)
            walk(mid, r)

        if m > 0:
            walk(0, m)
        nodes.sort()
        out.append([xs[l] for l, _ in nodes[1:]])
    return out


def _line_axis(s):
    (p, q) = s.pts
    return 0 if p[0] != q[0] else 1


def segment_tree_cuts(fragments: Sequence[Segment3], originals: dict) -> CutSet:
    """Cuts that make collinear overlapping pieces nested or interior-disjoint.

    ``originals`` maps a fragment's ``parent`` to the segment that receives
    the cut.  Only clusters of pieces whose projections overlap are treated.
    """
    groups = {}
    for f in fragments:
        key = line_through(*f.pts)
        groups.setdefault(key, []).append(f)
    out = CutSet(list(originals.values()))
    for frs in groups.values():
        if len(frs) < 2:
            continue
        ax = _line_axis(frs[0])
        ivs = [tuple(sorted((f.pts[0][ax], f.pts[1][ax]))) for f in frs]
        order = sorted(range(len(frs)), key=lambda k: ivs[k])
        clusters, cur, reach = [], [], None
        for k in order:
            if cur and ivs[k][0] < reach:
                cur.append(k)
                reach = max(reach, ivs[k][1])
            else:
                if len(cur) > 1:
                    clusters.append(cur)
                cur, reach = [k], ivs[k][1]
        if len(cur) > 1:
            clusters.append(cur)
        for cl in clusters:
            brk = canonical_intervals([ivs[k] for k in cl])
            for k, bs in zip(cl, brk):
                s = originals[frs[k].parent]
                a, b = s.pts
                for v in bs:
                    out.add(s, (v - a[ax]) / (b[ax] - a[ax]), "segtree")
    return out


# --- the full route ---------------------------------------------------------


@dataclass
class DegenerateResult:
    cutset: CutSet
    X: CutSet
    Y: CutSet
    pmap: PerturbationMap
    fragments: list


def _solve(segs, strategy, max_candidates=DEFAULT_MAX_CANDIDATES):
    if strategy == "trivial":
        return trivial_cut_set(crossing_schedule(segs))
    if strategy == "exact":
        try:
            return exact_small_cut_set(segs, max_candidates)
        except BudgetError:
            return greedy_cut_set(segs)
    if strategy == "greedy":
        return greedy_cut_set(segs)
    raise ValueError(f"unknown strategy {strategy!r}")


def complete_cut_set_degenerate(segments: Sequence[Segment3], strategy: str = "greedy", seed: int = 0, verify: bool = True) -> DegenerateResult:
    """Cut set for arbitrary disjoint segments: perturb, solve, map back, add Y."""
    S = list(segments)
    P, pmap = degeneracy_normalize(S, seed)
    xp = _solve(P, strategy)
    X = map_back_cuts(xp, pmap)
    frags = _fragments_with_owner(S, X)
    Y = segment_tree_cuts(frags, {s.id: s for s in S})
    cs = X.union(Y)
    out = apply_cuts(S, cs)
    if verify and topological_order(build_depth_graph(out)) is None:
        raise AssertionError("degenerate cut set failed the acyclicity check")
    return DegenerateResult(cs, X, Y, pmap, out)


def _fragments_with_owner(S, X):
    """Pieces of S cut at X, each tagged with its owner id in ``parent``."""
    out = []
    for s in S:
        for f in apply_cuts([s], X):
            g = f.sub(ZERO, Q(1), f.closed[0], f.closed[1], id=f.id)
            g.parent = s.id
            out.append(g)
    return out


def cut_set_for(segments: Sequence[Segment3], strategy: str = "greedy", seed: int = 0) -> CutSet:
    """Dispatch: plain strategy on generic input, the degenerate route otherwise."""
    segs = list(segments)
    if find_degeneracies(segs).routing():
        return complete_cut_set_degenerate(segs, strategy, seed).cutset
    return _solve(segs, strategy)
