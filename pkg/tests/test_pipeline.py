import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depthcut import kernels
from depthcut.cuttings import build_hierarchy, lines_from_segments
from depthcut.depthgraph import build_depth_graph, topological_order
from depthcut.exact import Q
from depthcut.geom import Segment3, Triangle3, ValidationError, clip_box, slice_by_vertical_plane
from depthcut.pipeline import (
    Prism,
    Piece,
    build_prisms,
    column_edges,
    cut_lines,
    cut_triangles,
    cut_triangles_ksensitive,
    default_r,
    has_interior_vertex,
    ksensitive_r,
    pieces_T1,
    proposition1_check,
    step2_cut,
    triangulate,
)
from depthcut.scenes import (
    fig3_column,
    gen_cyclic_triple,
    gen_fig3_gadget,
    gen_grid_weaving,
    gen_parallel_segments,
    gen_random_triangles,
    gen_sparse,
    gen_vertex_free_column,
    gen_weave3,
)


def P(*v):
    return tuple(Q(x) for x in v)


def acyclic(objs):
    return topological_order(build_depth_graph(objs)) is not None


def hierarchy_for(tris, r, rho=4):
    lines, w, _ = lines_from_segments([(T.pts[i], T.pts[(i + 1) % 3]) for T in tris for i in range(3)])
    return build_hierarchy(lines, r, rho, clip_box(tris), weights=w)


def test_default_r():
    assert default_r(16) == 8
    assert default_r(1) == 1
    assert default_r(256) == 64
    assert ksensitive_r(64, 0) == 64
    assert ksensitive_r(64, 64) == math.ceil(64**1.25 / 64**0.25)


# --- phase 1 -------------------------------------------------------------------


def test_pieces_single_leaf_and_area():
    tris = gen_random_triangles(12, seed=1).objects
    h = hierarchy_for(tris, 8)
    for i, T in enumerate(tris):
        ps = pieces_T1(h, T, i)
        assert sum(kernels.area2(p.frag.pts) for p in ps) == kernels.area2(T.pts)
        for p in ps:
            assert p.full or not h.nodes[p.node].children


def test_pieces_cover_box():
    tris = gen_random_triangles(6, seed=2).objects
    h = hierarchy_for(tris, 4)
    x0, y0, x1, y1 = [v * 10 for v in (-1, -1, 2, 2)]
    big = Triangle3(P(x0, y0, -5), P(x1 * 3, y0, -5), P(x0, y1 * 3, -5), id="big")
    ps = pieces_T1(h, big)
    assert len(ps) == 1 and ps[0].node == 0 and ps[0].full


def test_prisms_without_slicers():
    tris = gen_random_triangles(10, seed=3).objects
    h = hierarchy_for(tris, 8)
    pieces = [pc for i, T in enumerate(tris) for pc in pieces_T1(h, T, i)]
    sub = build_prisms(h, pieces, tris)
    for pr in sub.prisms:
        assert pr.index <= len(sub.columns[pr.column])
    if not sub.pass_through:
        assert all(pr.index == 0 for pr in sub.prisms)


def test_prism_edge_budget_on_grid():
    scene = gen_grid_weaving(6, thin=True)
    res = cut_triangles(scene)
    n_edges = 3 * len(scene.objects)
    assert res.stats["max_E_interior"] <= -(-n_edges // res.stats["r"])
    for pr in res.subdivision.prisms:
        assert pr.E_interior <= -(-n_edges // res.stats["r"])


# --- step 2 ----------------------------------------------------------------------


def _prism(objs, cell):
    pr = Prism(0, 0)
    for i, o in enumerate(objs):
        pr.pieces.append(Piece(o, i, 0, False))
    pr.E = column_edges(objs)
    pr.V = sorted({v for o in objs for v in o.pts if kernels.point_classes(cell, [v])[0] == 1})
    return pr


def test_step2_acyclic_no_vertices():
    cell, objs = gen_vertex_free_column(seed=1)  # acyclic edges, two relations
    assert acyclic(column_edges(objs)) and len(build_depth_graph(objs).edges) >= 2
    frags, X, planes, _ = step2_cut(_prism(objs, cell))
    assert planes == 0 and len(X) == 0 and frags == objs


def test_step2_vertex_plane():
    T = Triangle3(P(0, 0, 0), P(4, 0, 0), P(0, 4, 0), id="t")
    S = Triangle3(P(1, 1, 1), P(9, 1, 1), P(1, 9, 1), id="s")
    cell = (P(-5, -5), P(20, -5), P(20, 20), P(-5, 20))
    pr = _prism([T, S], cell)
    frags, X, planes, _ = step2_cut(pr)
    assert planes >= 1
    assert len(frags) > 2
    assert acyclic(frags)


def test_step2_breaks_weave():
    tris = gen_weave3(thin=True).objects
    cell = (P(-10, -10), P(20, -10), P(20, 20), P(-10, 20))
    pr = _prism(tris, cell)
    pr.V = []  # thin wedge tips sit inside; only the cut set is under test
    assert not acyclic(pr.E)
    frags, X, planes, _ = step2_cut(pr)
    assert len(X) >= 1 and planes >= 1


# --- whole pipelines --------------------------------------------------------------


def test_single_triangle():
    T = Triangle3(P(0, 0, 0), P(1, 0, 0), P(0, 1, 0), id="t")
    res = cut_triangles([T])
    assert res.stats["oracle_ok"] and len(res.fragments) >= 1
    assert res.area_conserved()


def test_cyclic_triple():
    res = cut_triangles(gen_cyclic_triple())
    assert res.stats["oracle_ok"]
    assert len(res.fragments) >= 4
    assert res.area_conserved()
    tri = triangulate(res.fragments)
    assert all(len(t.pts) == 3 for t in tri)
    assert acyclic(tri)


@pytest.mark.parametrize("strategy", ["trivial", "greedy", "exact"])
def test_strategies_random(strategy):
    res = cut_triangles(gen_random_triangles(24, seed=4), strategy=strategy)
    assert res.stats["oracle_ok"] and res.area_conserved()


def test_ksensitive_and_straight_agree_on_acyclicity():
    scene = gen_sparse(24, seed=1)
    a = cut_triangles(scene)
    b = cut_triangles_ksensitive(scene)
    assert a.stats["oracle_ok"] and b.stats["oracle_ok"]
    assert b.stats["K"] is not None and b.area_conserved()


def test_triangle_pipeline_rejects_segments():
    with pytest.raises(ValidationError):
        cut_triangles(gen_weave3().objects)


def test_lines_two_crossing():
    segs = [Segment3(P(0, 0, 0), P(2, 2, 0), id="a"), Segment3(P(0, 2, 1), P(2, 0, 1), id="b")]
    res = cut_lines(segs)
    assert res.stats["oracle_ok"]
    assert res.stats["X"] <= 1


def test_lines_parallel():
    res = cut_lines(gen_parallel_segments(20, seed=0).segments)
    assert res.stats["oracle_ok"] and res.stats["X"] == 0
    assert res.stats["cuts"] == res.stats["boundary_cuts"]


def test_lines_weave():
    res = cut_lines(gen_weave3().segments)
    assert res.stats["oracle_ok"]


def test_lines_grid():
    segs = gen_grid_weaving(5).segments
    res = cut_lines(segs)
    assert res.stats["oracle_ok"] and res.cutset is not None


def test_triangulate_quad():
    from depthcut.geom import ConvexFragment

    q = ConvexFragment((P(0, 0), P(1, 0), P(1, 1), P(0, 1)), P(0, 0, 0), [True, False, True, True], id="q")
    ts = triangulate([q])
    assert len(ts) == 2
    assert sum(t.area() for t in ts) == 1
    # the diagonal is open in both halves
    assert ts[0].closed == (True, False, False) and ts[1].closed == (False, True, True)


# --- column property --------------------------------------------------------------


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_vertex_free_columns(seed):
    cell, objs = gen_vertex_free_column(seed)
    assert not has_interior_vertex(objs, cell)
    out = proposition1_check(objs, cell)
    assert out.ok, out.counterexample
    if not out.edges_acyclic:
        assert out.counterexample is None


def test_interior_vertex_rejected():
    cell = (P(0, 0), P(1, 0), P(1, 1), P(0, 1))
    T = Triangle3(P(Q(1, 2), Q(1, 2), 0), P(3, 0, 0), P(0, 3, 0), id="t")
    with pytest.raises(ValidationError):
        proposition1_check([T], cell)


def test_gadget_plane_leaves_interior_endpoint():
    # slicing the green piece puts edge endpoints inside the column, so the
    # sliced column is outside the vertex-free hypothesis
    scene = gen_fig3_gadget()
    cell, cut, pieces = fig3_column(scene)
    objs = []
    for f in pieces:
        objs += slice_by_vertical_plane(f, (Q(1), Q(0), -cut[0])) if f.parent == "green" else [f]
    assert not acyclic(objs)
    assert has_interior_vertex(objs, cell)
    with pytest.raises(ValidationError):
        proposition1_check(objs, cell)
