import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depthcut.cutset import (
    BudgetError,
    CutSet,
    OverlapError,
    apply_cuts,
    canonical_intervals,
    complete_cut_set_degenerate,
    crossing_schedule,
    cut_set_for,
    degeneracy_normalize,
    exact_small_cut_set,
    find_degeneracies,
    gap_candidates,
    greedy_cut_set,
    is_complete,
    map_back_cuts,
    segment_tree_cuts,
    trivial_cut_set,
)
from depthcut.depthgraph import build_depth_graph, topological_order
from depthcut.exact import Q
from depthcut.geom import Segment3, relation, segments_intersect_2d
from depthcut.pipeline import column_edges
from depthcut.scenes import (
    _weave3_segments,
    fig3_column,
    gen_bipartite_weaving,
    gen_concurrent_gadget,
    gen_endpoint_gadget,
    gen_fig3_gadget,
    gen_grid_weaving,
    gen_parallel_overlap,
    gen_weave3,
)


def P(*v):
    return tuple(Q(x) for x in v)


def seg(a, b, id, **kw):
    return Segment3(P(*a), P(*b), id=id, **kw)


def acyclic(objs):
    return topological_order(build_depth_graph(objs)) is not None


def weave(dx=0, prefix="w"):
    return [Segment3((p[0] + dx, p[1], p[2]), (q[0] + dx, q[1], q[2]), id=f"{prefix}{i}") for i, (p, q) in enumerate(_weave3_segments())]


CROSS = [seg((0, 0, 0), (2, 2, 0), "a"), seg((0, 2, 1), (2, 0, 1), "b")]


# --- schedules ----------------------------------------------------------------


def test_schedule_two_crossing():
    sc = crossing_schedule(CROSS)
    assert sc.K == 1
    assert [len(e) for e in sc.entries] == [1, 1]
    assert sc.entries[0][0].sign == 1 and sc.entries[1][0].sign == -1
    assert sc.entries[0][0].t == Q(1, 2)


def test_schedule_convex_position():
    # k chords of a circle-like polygon, pairwise crossing, no three concurrent
    k = 6
    pts = [(math.cos(2 * math.pi * i / (2 * k)), math.sin(2 * math.pi * i / (2 * k))) for i in range(2 * k)]
    pts = [(Q(round(x * 1000), 1000), Q(round(y * 1000), 1000)) for x, y in pts]
    segs = [Segment3((*pts[i], Q(i)), (*pts[i + k], Q(i)), id=i) for i in range(k)]
    sc = crossing_schedule(segs)
    brute = sum(1 for a, b in itertools.combinations(segs, 2) if segments_intersect_2d(a.pts, b.pts)[0] == "point")
    assert sc.K == brute == k * (k - 1) // 2


def test_schedule_parallel_pair_empty():
    segs = [seg((0, 0, 0), (1, 0, 0), "a"), seg((0, 1, 1), (1, 1, 1), "b")]
    sc = crossing_schedule(segs)
    assert sc.K == 0 and sc.entries == [[], []]


def test_schedule_rejects_overlap():
    with pytest.raises(OverlapError):
        crossing_schedule(gen_parallel_overlap(3).segments)


# --- strategies -----------------------------------------------------------------


def test_trivial_examples():
    assert len(trivial_cut_set(crossing_schedule(CROSS))) == 2
    w = weave()
    cs = trivial_cut_set(crossing_schedule(w))
    assert len(cs) == 6 and acyclic(apply_cuts(w, cs))
    far = [seg((0, 0, 0), (1, 0, 0), "a"), seg((5, 5, 0), (6, 6, 0), "b")]
    assert len(trivial_cut_set(crossing_schedule(far))) == 0


def test_weave_single_cut_exhaustive():
    w = weave()
    cands = gap_candidates(crossing_schedule(w))
    # some single gap cut breaks the only cycle
    good = [c for c in cands if is_complete(w, _one(w, *c))]
    assert good
    assert len(greedy_cut_set(w)) == 1
    assert len(exact_small_cut_set(w)) == 1


def _one(segs, i, t):
    cs = CutSet(segs)
    cs.add(segs[i], t, "exact")
    return cs


def test_acyclic_input_needs_no_cuts():
    assert len(greedy_cut_set(CROSS)) == 0
    assert len(exact_small_cut_set(CROSS)) == 0


def test_two_independent_cycles():
    segs = weave(0, "a") + weave(100, "b")
    ex = exact_small_cut_set(segs)
    assert len(ex) == 2
    assert len(greedy_cut_set(segs)) == 2


def test_exact_budget():
    with pytest.raises(BudgetError):
        exact_small_cut_set(gen_grid_weaving(4).segments, max_candidates=4)


@pytest.mark.parametrize("scene", [gen_weave3(), gen_bipartite_weaving(2), gen_bipartite_weaving(3), gen_grid_weaving(2), gen_grid_weaving(3)], ids=lambda s: f"{s.metadata['family']}{s.metadata['params'].get('m', '')}")
def test_quality_ordering(scene):
    segs = scene.segments
    tr = trivial_cut_set(crossing_schedule(segs))
    gr = greedy_cut_set(segs)
    sizes = [len(gr), len(tr)]
    try:
        ex = exact_small_cut_set(segs)
        sizes.insert(0, len(ex))
        assert acyclic(apply_cuts(segs, ex))
    except BudgetError:
        pass
    assert sizes == sorted(sizes)
    assert acyclic(apply_cuts(segs, tr)) and acyclic(apply_cuts(segs, gr))


def test_greedy_gadget_edges():
    scene = gen_fig3_gadget()
    cell, cut, pieces = fig3_column(scene)
    E = column_edges(pieces)
    assert not acyclic(E)
    cs = greedy_cut_set(E)
    assert len(cs) == 1
    (sid,) = cs.segment_ids()
    assert cs.segments[sid].parent == "green"


def test_cutset_json_and_union():
    w = weave()
    a = CutSet(w)
    a.add(w[0], Q(1, 3), "greedy")
    b = CutSet(w)
    b.add(w[0], Q(1, 3), "exact")
    b.add(w[1], Q(1, 2), "exact")
    u = a.union(b)
    assert len(u) == 2
    doc = u.to_json()
    assert doc["w0"][0]["provenance"] == "greedy"
    with pytest.raises(ValueError):
        a.add(w[0], Q(2), "greedy")


def test_apply_cuts_openness():
    w = weave()
    cs = CutSet(w)
    cs.add(w[0], Q(1, 2), "greedy")
    parts = apply_cuts(w, cs)
    p0 = [p for p in parts if str(p.id).startswith("w0.")]
    assert len(p0) == 2
    assert p0[0].closed == (True, False) and p0[1].closed == (False, True)


# --- degeneracies -----------------------------------------------------------------


def test_find_degeneracies():
    assert not find_degeneracies(weave())
    assert find_degeneracies(gen_parallel_overlap(3).segments).overlaps
    assert find_degeneracies(gen_concurrent_gadget(2).segments).concurrent
    assert find_degeneracies(gen_endpoint_gadget().segments).endpoint


def test_normalize_identity_on_generic():
    w = weave()
    out, pmap = degeneracy_normalize(w)
    assert pmap.identity and out == w and pmap.eps is None


def test_normalize_overlap():
    S = gen_parallel_overlap(4).segments
    out, pmap = degeneracy_normalize(S, seed=1)
    assert not find_degeneracies(out)
    for i, j in itertools.combinations(range(len(out)), 2):
        assert segments_intersect_2d(out[i].pts, out[j].pts)[0] != "overlap"


def test_normalize_concurrent_preserves_relations():
    S = gen_concurrent_gadget(3).segments
    out, _ = degeneracy_normalize(S, seed=0)
    assert not find_degeneracies(out)
    for i, j in itertools.combinations(range(len(S)), 2):
        if segments_intersect_2d(S[i].pts, S[j].pts)[0] != "point":
            continue
        s0 = relation(S[i], S[j])[0]
        if s0:
            assert relation(out[i], out[j])[0] == s0


def test_map_back_identity_snaps_to_crossings():
    w = weave()
    _, pmap = degeneracy_normalize(w)
    xp = greedy_cut_set(w)
    X = map_back_cuts(xp, pmap)
    assert len(X) == 1
    (sid,) = X.segment_ids()
    s = X.segments[sid]
    p = X.points(sid)[0][:2]
    assert any(segments_intersect_2d(s.pts, o.pts) == ("point", p) for o in w if o is not s)


def test_map_back_drops_crossing_free():
    a = seg((0, 0, 0), (1, 0, 0), "a")
    _, pmap = degeneracy_normalize([a])
    xp = CutSet([a])
    xp.add(a, Q(1, 2), "greedy")
    assert len(map_back_cuts(xp, pmap)) == 0


def _pieces(iv, brk):
    pts = [iv[0]] + list(brk) + [iv[1]]
    return [(pts[k], pts[k + 1]) for k in range(len(pts) - 1)]


def _nested_or_disjoint(a, b):
    return a[1] <= b[0] or b[1] <= a[0] or (a[0] <= b[0] and b[1] <= a[1]) or (b[0] <= a[0] and a[1] <= b[1])


def test_canonical_two_intervals():
    ivs = [(Q(0), Q(2)), (Q(1), Q(3))]
    brk = canonical_intervals(ivs)
    pieces = [p for iv, b in zip(ivs, brk) for p in _pieces(iv, b)]
    assert all(_nested_or_disjoint(a, b) for a, b in itertools.combinations(pieces, 2))
    assert canonical_intervals([(Q(0), Q(1))]) == [[]]


@given(st.lists(st.tuples(st.integers(0, 30), st.integers(1, 12)), min_size=1, max_size=8))
def test_canonical_nested_or_disjoint(raw):
    ivs = [(Q(a), Q(a + l)) for a, l in raw]
    brk = canonical_intervals(ivs)
    pieces = [p for iv, b in zip(ivs, brk) for p in _pieces(iv, b)]
    assert all(_nested_or_disjoint(a, b) for a, b in itertools.combinations(pieces, 2))
    f = len(ivs)
    assert sum(map(len, brk)) <= 2 * f * max(1, math.log2(2 * f))


def test_segment_tree_eight_collinear():
    S = [seg((i, 0, i), (i + 5, 0, i), f"p{i}") for i in range(8)]
    frags = []
    for s in S:
        g = s.sub(Q(0), Q(1), True, True, id=s.id)
        g.parent = s.id
        frags.append(g)
    Y = segment_tree_cuts(frags, {s.id: s for s in S})
    assert len(Y) <= 2 * 8 * math.log2(8)
    pieces = apply_cuts(S, Y)
    ivs = [tuple(sorted((p.pts[0][0], p.pts[1][0]))) for p in pieces]
    assert all(_nested_or_disjoint(a, b) for a, b in itertools.combinations(ivs, 2))
    # single fragment: nothing to do
    assert len(segment_tree_cuts(frags[:1], {S[0].id: S[0]})) == 0


def test_degenerate_generic_weave():
    res = complete_cut_set_degenerate(weave())
    assert len(res.X) == 1 and len(res.Y) == 0
    assert acyclic(res.fragments)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_degenerate_parallel_overlap(k):
    S = gen_parallel_overlap(k).segments
    res = complete_cut_set_degenerate(S)
    assert len(res.Y) > 0
    assert acyclic(res.fragments)


def test_degenerate_acyclic_input():
    S = [seg((i, 0, i), (i + 3, 0, i), f"p{i}") for i in range(4)]
    assert acyclic(S)
    res = complete_cut_set_degenerate(S)
    assert len(res.X) == 0 and acyclic(res.fragments)


@pytest.mark.parametrize("scene", [gen_concurrent_gadget(2), gen_endpoint_gadget()], ids=["concurrent", "endpoint"])
def test_cut_set_for_routes_degenerate(scene):
    S = scene.segments
    assert find_degeneracies(S).routing()
    cs = cut_set_for(S)
    assert acyclic(apply_cuts(S, cs))
