"""Command-line interface: ``depthcut gen|cut|order|render|bench|verify``.

Exit codes: 0 ok, 2 validation failure, 3 oracle failure.  The number of
worker processes comes from ``DEPTHCUT_WORKERS`` (default 1).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as benchmod
from . import formats, kernels, render
from .depthgraph import DepthCycle, build_depth_graph, find_depth_order, verify_depth_order
from .geom import Segment3, ValidationError, validate_objects
from .pipeline import STRATEGIES, cut_lines, cut_triangles, cut_triangles_ksensitive, triangulate
from .scenes import GENERATORS, fig3_check

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ORACLE = 3


class OracleError(Exception):
    pass


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _report(obj) -> None:
    print(json.dumps(obj, indent=1, default=str))


# --- gen ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    params = {k: v for k, v in (("n", args.n), ("m", args.m), ("k", args.k), ("spread", args.spread)) if v is not None}
    scene = GENERATORS[args.family](seed=args.seed, thin=args.thin, **params)
    formats.dump(formats.scene_to_json(scene), args.out)
    return EXIT_OK


# --- cut ---------------------------------------------------------------------


def cmd_cut(args) -> int:
    objs = formats.load_objects(args.input)
    kw = dict(strategy=args.strategy, seed=args.seed, rho=args.rho, verify=not args.no_verify)
    if args.r is not None:
        kw["r"] = args.r
    if args.algorithm == "lines":
        if not all(isinstance(o, Segment3) for o in objs):
            raise ValidationError("the lines algorithm needs a scene of segments")
        res = cut_lines(objs, **kw)
    elif args.algorithm == "triangles-k":
        res = cut_triangles_ksensitive(objs, **kw)
    else:
        res = cut_triangles(objs, **kw)
    frags = triangulate(res.fragments) if args.triangulate and args.algorithm != "lines" else res.fragments
    formats.dump(formats.fragments_to_json(frags, res.stats), args.out)
    if args.stats:
        formats.dump(res.stats, args.stats)
    if args.cutset:
        if res.cutset is None:
            raise ValidationError("--cutset is only available for the lines algorithm")
        formats.dump(formats.cutset_to_json(res.cutset), args.cutset)
    if args.export_obj:
        Path(args.export_obj).write_text(formats.to_obj(frags))
    if not args.no_verify and not res.stats.get("oracle_ok"):
        raise OracleError("the oracle found a depth cycle in the output")
    return EXIT_OK


# --- order -------------------------------------------------------------------


def cmd_order(args) -> int:
    objs = formats.load_objects(args.input)
    res = find_depth_order(build_depth_graph(objs), objs)
    if isinstance(res, DepthCycle):
        _report({"acyclic": False, **res.to_json()})
        return EXIT_OK
    if verify_depth_order(objs, res) is not None:
        raise OracleError("computed order failed verification")
    _report({"acyclic": True, "order": [objs[i].id for i in res]})
    return EXIT_OK


# --- render ------------------------------------------------------------------


def cmd_render(args) -> int:
    objs = formats.load_objects(args.input)
    view = render.View.around(objs, args.width, args.height)
    if args.mode == "diff":
        rep = render.compare(render.painter(objs, view=view), render.zbuffer(objs, view=view))
        _report(rep.to_json())
        if rep.differing:
            raise OracleError(f"{rep.differing} pixels differ between painter and z-buffer")
        return EXIT_OK
    if args.mode == "painter":
        raster = render.painter(objs, view=view)
    else:
        raster = render.zbuffer(objs, view=view)
    data = render.to_ppm(raster, objs, show_mask=args.show_mask)
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.out).write_bytes(data)
    return EXIT_OK


# --- bench -------------------------------------------------------------------


def cmd_bench(args) -> int:
    rows = benchmod.sweep(args.families, args.n, args.seeds, args.strategies, args.algorithm, args.rho)
    fits = benchmod.fit(rows)
    _write_text(args.out, benchmod.rows_to_csv(rows))
    if args.fit:
        Path(args.fit).write_text(benchmod.fits_to_json(fits) + "\n")
    if args.out not in (None, "-") or args.fit:
        for f in fits:
            print(f"{f.family}/{f.algorithm}/{f.strategy}: slope {f.slope:.3f} intercept {f.intercept:.3f} R2 {f.r2:.3f} ({f.points} rows)", file=sys.stderr)
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    doc = formats.load(args.input)
    scene = formats.scene_from_json(doc)
    validate_objects(scene.objects)
    g = build_depth_graph(scene.objects)
    res = find_depth_order(g, scene.objects)
    acyclic = not isinstance(res, DepthCycle)
    report = {"objects": len(scene.objects), "valid": True, "acyclic": acyclic, "backend": kernels.backend()}
    ok = True
    if not acyclic:
        report["cycle"] = res.to_json()
    if doc.get("kind") == "fragments" or args.acyclic:
        ok = ok and acyclic
    if "has_cycle" in scene.expected:
        report["expected_has_cycle"] = scene.expected["has_cycle"]
        ok = ok and scene.expected["has_cycle"] == (not acyclic)
    if scene.metadata.get("family") == "fig3":
        props = fig3_check(scene)
        report["fig3"] = props
        ok = ok and props["two_cycles"] and props["edge_cut"] and props["plane_cut"]
    report["ok"] = ok
    _report(report)
    return EXIT_OK if ok else EXIT_ORACLE


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="depthcut", description="Cut triangles and segments in 3-space into depth-orderable fragments.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a scene")
    g.add_argument("family", choices=sorted(GENERATORS))
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int, help="grid size for weaving families")
    g.add_argument("--k", type=int, help="parameter of parallel-overlap and concurrent")
    g.add_argument("--spread", type=float)
    g.add_argument("--thin", action="store_true", help="realize segments as thin triangles")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", default="-")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cut", help="cut a scene into acyclic fragments")
    c.add_argument("input")
    c.add_argument("--algorithm", choices=["triangles", "triangles-k", "lines"], default="triangles")
    c.add_argument("--strategy", choices=STRATEGIES, default="greedy")
    c.add_argument("--r", type=int)
    c.add_argument("--rho", type=int, default=4)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--triangulate", action="store_true")
    c.add_argument("--export-obj", metavar="FILE")
    c.add_argument("--stats", metavar="FILE")
    c.add_argument("--cutset", metavar="FILE")
    c.add_argument("--no-verify", action="store_true", help="skip the oracle")
    c.add_argument("-o", "--out", default="-")
    c.set_defaults(func=cmd_cut)

    o = sub.add_parser("order", help="print a depth order or a cycle")
    o.add_argument("input")
    o.set_defaults(func=cmd_order)

    r = sub.add_parser("render", help="rasterize to PPM or compare painter and z-buffer")
    r.add_argument("input")
    r.add_argument("--mode", choices=["painter", "zbuffer", "diff"], default="painter")
    r.add_argument("--width", type=int, default=128)
    r.add_argument("--height", type=int, default=128)
    r.add_argument("--show-mask", action="store_true")
    r.add_argument("-o", "--out", default="-")
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("bench", help="sweep n and fit log-log slopes")
    b.add_argument("--families", nargs="+", default=["random"], choices=sorted(GENERATORS))
    b.add_argument("--n", nargs="+", type=int, default=[16, 32, 64])
    b.add_argument("--seeds", nargs="+", type=int, default=[0])
    b.add_argument("--strategies", nargs="+", choices=STRATEGIES, default=["greedy"])
    b.add_argument("--algorithm", choices=["triangles", "triangles-k", "lines"])
    b.add_argument("--rho", type=int, default=4)
    b.add_argument("--fit", metavar="FILE", help="write the fit summary as JSON")
    b.add_argument("-o", "--out", default="-")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify", help="validate a scene or fragment file with the oracle")
    v.add_argument("input")
    v.add_argument("--acyclic", action="store_true", help="require an acyclic depth graph")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, json.JSONDecodeError, KeyError, FileNotFoundError) as e:
        print(f"depthcut: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except render.CycleError as e:
        print(f"depthcut: painter needs a depth order: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except (OracleError, benchmod.OracleFailure) as e:
        print(f"depthcut: oracle failure: {e}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
