"""Build, check and freeze the three-colour gadget.

The green triangle lies in z = 0 above its edge on y = 0.  Four sticks
(thin triangles over y in [-6, 6]) cross that edge: b1 and r1 rise above
the green triangle, b2 and r2 stay below it, b1 passes under b2 and r1
under r2 at y = -4, and every blue stick passes under every red one.
Cutting the green edge at x = 10 separates the crossings with b1, r1 from
those with b2, r2, which breaks both edge cycles; but r1 and b2 cross over
the green triangle at (10, 2), so no vertical plane separates both pairs.

Writes src/depthcut/data/fig3_gadget.json and fig3_gadget.txt.
"""

from pathlib import Path

from depthcut.exact import Q, fmt
from depthcut.formats import dump, scene_to_json
from depthcut.scenes import Scene, fig3_check, thin_triangle
from depthcut.geom import Triangle3, validate_objects
from depthcut.depthgraph import build_depth_graph, minimal_cycle

DATA = Path(__file__).resolve().parents[1] / "src" / "depthcut" / "data"
W = Q(1, 50)


def stick(x0, dx, z0, dz, name):
    # centre line x = x0 + dx*y, z = z0 + dz*y, base at y = -6, apex at y = 6
    y0, y1 = Q(-6), Q(6)
    p = (x0 + dx * y0, y0, z0 + dz * y0)
    q = (x0 + dx * y1, y1, z0 + dz * y1)
    return thin_triangle(p, q, W, id=name)


def build():
    green = Triangle3((Q(-100), Q(0), Q(0)), (Q(120), Q(0), Q(0)), (Q(10), Q(200), Q(0)), id="green")
    objs = [
        green,
        stick(Q(4), Q(-3), Q(1), Q(2), "b1"),
        stick(Q(12), Q(-1), Q(-1), Q(-1, 2), "b2"),
        stick(Q(8), Q(1), Q(1), Q(1, 2), "r1"),
        stick(Q(16), Q(3), Q(-1), Q(-1), "r2"),
    ]
    validate_objects(objs)
    md = {
        "family": "fig3",
        "cell": [["0", "-5"], ["20", "-5"], ["20", "5"], ["0", "5"]],
        "cut_point": ["10", "0"],
        "plane": ["1", "0", "-10"],
    }
    return Scene(objs, md, {})


def main():
    scene = build()
    res = fig3_check(scene)
    g = build_depth_graph(scene.objects)
    cyc = minimal_cycle(g, scene.objects)
    lines = [
        "fig3 gadget transcript",
        f"objects: {[o.id for o in scene.objects]}",
        f"below edges: {[(g.label(i), g.label(j)) for i, j in g.edges]}",
        f"minimal cycle: {cyc.ids} witnesses {[[fmt(c) for c in w] for w in cyc.witnesses]}",
        f"two_cycles: {res['two_cycles']}",
        f"edge_cut (cyclic edges, one cut at (10, 0) completes): {res['edge_cut']}",
        f"plane_cut (x = 10 leaves a cycle): {res['plane_cut']}",
    ]
    if not (res["two_cycles"] and res["edge_cut"] and res["plane_cut"]):
        raise SystemExit("\n".join(lines + ["FAILED"]))
    scene.expected = {"has_cycle": True, "minimal_cycle_length": len(cyc), **{k: res[k] for k in ("two_cycles", "edge_cut", "plane_cut")}}
    dump(scene_to_json(scene), DATA / "fig3_gadget.json")
    (DATA / "fig3_gadget.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))


if __name__ == "__main__":
    main()
