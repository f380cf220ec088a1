"""JSON scene, fragment and cut-set files.

All coordinates are written as exact strings: a finite decimal when the
rational has one, otherwise ``"p/q"``.  Reading accepts the same forms.
"""

from __future__ import annotations

import json
from pathlib import Path

from .exact import fmt, parse
from .geom import ConvexFragment, Segment3, Triangle3, ValidationError, plane_through

VERSION = 1


def _pt(p):
    return [fmt(c) for c in p]


def _read_pt(v, dim=3):
    if len(v) != dim:
        raise ValidationError(f"expected {dim} coordinates, got {v!r}")
    return tuple(parse(c) for c in v)


def object_to_json(o) -> dict:
    if isinstance(o, Triangle3):
        return {"id": o.id, "kind": "triangle", "vertices": [_pt(v) for v in o.vertices]}
    if isinstance(o, Segment3):
        d = {"id": o.id, "kind": "segment", "vertices": [_pt(o.a), _pt(o.b)]}
        if o.closed != (True, True):
            d["closed"] = list(o.closed)
        if o.parent != o.id:
            d["parent"] = o.parent
        return d
    d = {
        "id": o.id,
        "kind": "fragment",
        "parent": o.parent,
        "vertices": [_pt(v) for v in o.boundary],
        "edges": ["original" if c else "cut" for c in o.closed],
    }
    if o.tag is not None:
        d["provenance"] = o.tag
    return d


def object_from_json(d):
    kind = d.get("kind")
    vs = d.get("vertices")
    if kind == "triangle":
        if len(vs) != 3:
            raise ValidationError("a triangle needs three vertices")
        return Triangle3(*(_read_pt(v) for v in vs), id=d["id"])
    if kind == "segment":
        if len(vs) != 2:
            raise ValidationError("a segment needs two vertices")
        closed = tuple(d.get("closed", (True, True)))
        return Segment3(_read_pt(vs[0]), _read_pt(vs[1]), id=d["id"], closed=closed, parent=d.get("parent"))
    if kind == "fragment":
        pts3 = [_read_pt(v) for v in vs]
        plane = _plane_of(pts3)
        for p in pts3:
            if plane[0] * p[0] + plane[1] * p[1] + plane[2] != p[2]:
                raise ValidationError(f"fragment {d['id']!r} is not planar")
        flags = [e == "original" for e in d.get("edges", ["original"] * len(pts3))]
        return ConvexFragment([(p[0], p[1]) for p in pts3], plane, flags, parent=d.get("parent"), id=d["id"], tag=d.get("provenance"))
    raise ValidationError(f"unknown object kind {kind!r}")


def _plane_of(pts3):
    n = len(pts3)
    for i in range(1, n):
        for j in range(i + 1, n):
            try:
                return plane_through(pts3[0], pts3[i], pts3[j])
            except ValidationError:
                continue
    raise ValidationError("fragment is vertical or degenerate")


def scene_to_json(scene) -> dict:
    md = dict(scene.metadata)
    if scene.expected:
        md["expected"] = scene.expected
    return {"version": VERSION, "objects": [object_to_json(o) for o in scene.objects], "metadata": md}


def scene_from_json(doc):
    from .scenes import Scene

    if not isinstance(doc, dict) or "objects" not in doc:
        raise ValidationError("not a scene document")
    objs = [object_from_json(d) for d in doc["objects"]]
    ids = [o.id for o in objs]
    if len(set(map(repr, ids))) != len(ids):
        raise ValidationError("object ids are not unique")
    md = dict(doc.get("metadata", {}))
    expected = md.pop("expected", {})
    return Scene(objs, md, expected)


def fragments_to_json(fragments, stats=None) -> dict:
    return {
        "version": VERSION,
        "kind": "fragments",
        "objects": [object_to_json(o) for o in fragments],
        "stats": stats or {},
    }


def cutset_to_json(cutset) -> dict:
    return {
        "version": VERSION,
        "kind": "cutset",
        "cuts": {
            str(sid): [{"point": _pt(p), "provenance": tag} for p, tag in zip(cutset.points(sid), cutset.tags(sid))]
            for sid in cutset.segment_ids()
        },
    }


def dump(doc, path) -> None:
    text = json.dumps(doc, indent=1, sort_keys=False)
    if str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def load(path):
    return json.loads(Path(path).read_text())


def load_objects(path):
    """Objects from a scene or fragment file."""
    doc = load(path)
    return scene_from_json(doc).objects


def to_obj(objects) -> str:
    """Geometry-only Wavefront OBJ: one face per polygon, one line per segment.

    Coordinates are written as floats; OBJ has no exact number format.
    """
    lines = ["# depthcut fragments"]
    k = 1
    for o in objects:
        if o.kind == "seg":
            pts = [o.a, o.b]
        else:
            pts = list(o.boundary)
        lines.append(f"o {o.id}")
        for p in pts:
            lines.append("v " + " ".join(repr(float(c)) for c in p))
        idx = " ".join(str(k + i) for i in range(len(pts)))
        lines.append(("l " if o.kind == "seg" else "f ") + idx)
        k += len(pts)
    return "\n".join(lines) + "\n"
