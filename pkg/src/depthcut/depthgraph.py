"""The below-relation graph, depth orders and depth cycles.

``build_depth_graph`` evaluates ``relation`` on every pair of objects whose
projected bounding boxes meet; pairs with disjoint boxes cannot be related,
so this is the plain quadratic oracle with a cheap filter in front.
"""

from __future__ import annotations

import heapq
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .exact import fmt
from .geom import relation

WORKERS_ENV = "DEPTHCUT_WORKERS"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class DepthGraph:
    """Edges ``(i, j)`` mean object ``i`` is below object ``j``."""

    n: int
    witness: dict = field(default_factory=dict)
    ids: Optional[list] = None

    def __post_init__(self):
        self.succ = [[] for _ in range(self.n)]
        self.pred = [[] for _ in range(self.n)]
        for i, j in sorted(self.witness):
            self.succ[i].append(j)
            self.pred[j].append(i)

    @property
    def edges(self):
        return sorted(self.witness)

    def has_edge(self, i, j) -> bool:
        return (i, j) in self.witness

    def label(self, i):
        return self.ids[i] if self.ids is not None else i


@dataclass
class DepthCycle:
    """Nodes ``o_0 < o_1 < ... < o_{k-1} < o_0`` with one witness per step."""

    nodes: list
    witnesses: list
    ids: Optional[list] = None

    def __len__(self):
        return len(self.nodes)

    def to_json(self):
        ids = self.ids if self.ids is not None else self.nodes
        return {
            "cycle": list(ids),
            "witnesses": [[fmt(w[0]), fmt(w[1])] for w in self.witnesses],
        }


def candidate_pairs(objects: Sequence) -> list:
    """Sorted index pairs whose projected bounding boxes meet (closed boxes).

    Boxes are bucketed on a uniform grid; a pair is reported only from the
    bucket holding the lower-left corner of the boxes' intersection, so no
    pair appears twice.  Bucket indices come from float images of the exact
    corners, which is consistent because that corner is a corner of one box.
    """
    boxes = [o.bbox for o in objects]
    m = len(boxes)
    if m < 2:
        return []
    fb = [tuple(float(v) for v in b) for b in boxes]
    ws = sorted(max(b[2] - b[0], b[3] - b[1]) for b in fb)
    cell = ws[m // 2] or 1.0
    x0 = min(b[0] for b in fb)
    y0 = min(b[1] for b in fb)

    def ix(v):
        return int((v - x0) // cell)

    def iy(v):
        return int((v - y0) // cell)

    grid: dict = {}
    for i, b in enumerate(fb):
        for gx in range(ix(b[0]), ix(b[2]) + 1):
            for gy in range(iy(b[1]), iy(b[3]) + 1):
                grid.setdefault((gx, gy), []).append(i)
    pairs = []
    for (gx, gy), members in grid.items():
        k = len(members)
        for a in range(k):
            i = members[a]
            bi = boxes[i]
            for c in range(a + 1, k):
                j = members[c]
                bj = boxes[j]
                if bj[0] > bi[2] or bi[0] > bj[2] or bj[1] > bi[3] or bi[1] > bj[3]:
                    continue
                cx = i if bi[0] >= bj[0] else j
                cy = i if bi[1] >= bj[1] else j
                if ix(fb[cx][0]) == gx and iy(fb[cy][1]) == gy:
                    pairs.append((i, j) if i < j else (j, i))
    pairs.sort()
    return pairs


def _relate_chunk(objects, pairs):
    out = []
    for i, j in pairs:
        s, w = relation(objects[i], objects[j])
        if s:
            out.append((i, j, s, w))
    return out


_POOL_OBJECTS = None


def _init_pool(objects):
    global _POOL_OBJECTS
    _POOL_OBJECTS = objects


def _pool_chunk(pairs):
    return _relate_chunk(_POOL_OBJECTS, pairs)


def build_depth_graph(objects: Sequence, workers: Optional[int] = None) -> DepthGraph:
    """Evaluate the below-relation on all pairs.

    Raises ``IntersectionError`` when two objects meet in space.
    """
    objects = list(objects)
    pairs = candidate_pairs(objects)
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(pairs) > 20000:
        size = -(-len(pairs) // (4 * workers))
        chunks = [pairs[k : k + size] for k in range(0, len(pairs), size)]
        with ProcessPoolExecutor(workers, initializer=_init_pool, initargs=(objects,)) as ex:
            found = [r for part in ex.map(_pool_chunk, chunks) for r in part]
    else:
        found = _relate_chunk(objects, pairs)
    witness = {}
    for i, j, s, w in found:
        if s > 0:
            witness[(i, j)] = w
        else:
            witness[(j, i)] = w
    return DepthGraph(len(objects), witness, [o.id for o in objects])


def topological_order(g: DepthGraph) -> Optional[list]:
    """Kahn's algorithm with smallest-index-first tie breaking."""
    indeg = [len(p) for p in g.pred]
    heap = [i for i in range(g.n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in g.succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    return order if len(order) == g.n else None


def strongly_connected_components(g: DepthGraph) -> list:
    """Tarjan's algorithm, iterative."""
    index = [-1] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list = []
    comps = []
    counter = 0
    for root in range(g.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, k = work.pop()
            if k == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            succ = g.succ[v]
            if k < len(succ):
                work.append((v, k + 1))
                w = succ[k]
                if index[w] == -1:
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comps


def _cycle_nodes_from(g: DepthGraph, s: int, allowed, limit: Optional[int]):
    """Shortest cycle through ``s`` inside ``allowed`` (BFS), as a node list."""
    parent = {s: None}
    dq = deque([(s, 0)])
    while dq:
        v, d = dq.popleft()
        if limit is not None and d + 1 >= limit:
            return None
        for w in g.succ[v]:
            if w == s:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            if w in allowed and w not in parent:
                parent[w] = v
                dq.append((w, d + 1))
    return None


def shortest_cycle(g: DepthGraph, nodes=None) -> Optional[list]:
    """Shortest directed cycle (ties: smallest start node), restricted to ``nodes``."""
    if nodes is None:
        comps = [c for c in strongly_connected_components(g) if len(c) > 1]
        candidates = sorted(v for c in comps for v in c)
        allowed = set(candidates)
    else:
        allowed = set(nodes)
        candidates = sorted(allowed)
    has_two = any((j, i) in g.witness for (i, j) in g.witness)
    floor = 2 if has_two else 3
    best = None
    for s in candidates:
        cyc = _cycle_nodes_from(g, s, allowed, len(best) if best else None)
        if cyc is not None and (best is None or len(cyc) < len(best)):
            best = cyc
            if len(best) <= floor:
                break
    return best


def _as_cycle(g: DepthGraph, nodes: list, objects=None) -> DepthCycle:
    k = len(nodes)
    ws = [g.witness[(nodes[i], nodes[(i + 1) % k])] for i in range(k)]
    if objects is not None:
        for i in range(k):
            s, _ = relation(objects[nodes[i]], objects[nodes[(i + 1) % k]])
            if s != 1:
                raise AssertionError("reported cycle edge failed re-verification")
    ids = [g.label(v) for v in nodes]
    return DepthCycle(list(nodes), ws, ids)


def find_depth_order(g: DepthGraph, objects=None) -> Union[list, DepthCycle]:
    """A topological order, or a shortest cycle when none exists.

    When ``objects`` is given each reported cycle edge is re-checked.
    """
    order = topological_order(g)
    if order is not None:
        return order
    return _as_cycle(g, shortest_cycle(g), objects)


def _induced_cycle(g: DepthGraph, nodes) -> Optional[list]:
    return shortest_cycle(g, nodes)


def minimal_cycle(g: DepthGraph, objects=None) -> DepthCycle:
    """A cycle no strict node subset of which induces a cycle."""
    cyc = shortest_cycle(g)
    if cyc is None:
        raise ValueError("graph has no cycle")
    shrunk = True
    while shrunk:
        shrunk = False
        for v in list(cyc):
            rest = [u for u in cyc if u != v]
            sub = _induced_cycle(g, rest)
            if sub is not None:
                cyc = sub
                shrunk = True
                break
    return _as_cycle(g, cyc, objects)


def is_acyclic(objects: Sequence) -> bool:
    return topological_order(build_depth_graph(objects)) is not None


def verify_depth_order(objects: Sequence, order: Sequence[int]) -> Optional[tuple]:
    """None if no pair contradicts ``order`` (a permutation of indices).

    Otherwise returns the violating index pair ``(i, j)`` with ``i`` placed
    after ``j`` although ``i`` is below ``j``; the pair whose positions come
    first lexicographically is reported.
    """
    objects = list(objects)
    if sorted(order) != list(range(len(objects))):
        raise ValueError("order is not a permutation of the object indices")
    pos = {v: k for k, v in enumerate(order)}
    worst = None
    for i, j, s, _ in _relate_chunk(objects, candidate_pairs(objects)):
        lo, hi = (i, j) if s > 0 else (j, i)
        if pos[lo] > pos[hi]:
            key = (pos[hi], pos[lo])
            if worst is None or key < worst[0]:
                worst = (key, (lo, hi))
    return None if worst is None else worst[1]
