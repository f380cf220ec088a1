"""Exact geometric objects, predicates, clipping and the below-relation.

Points are plain tuples: ``(x, y)`` in the plane and ``(x, y, z)`` in space,
with exact rational coordinates.  Non-vertical planar objects carry their
supporting plane as ``(a, b, c)`` meaning ``z = a*x + b*y + c``.

Openness follows one rule throughout: edges created by cutting are open,
original edges are closed, and a polygon vertex is part of the object only
when both edges meeting there are closed.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterable, Optional, Sequence

from . import kernels
from .exact import Q, ZERO, parse

Point2 = tuple
Point3 = tuple
Cell2 = tuple  # convex polygon, counter-clockwise tuple of Point2


class ValidationError(ValueError):
    """Input violates a precondition (vertical or degenerate object, ...)."""


class IntersectionError(ValidationError):
    """Two objects that should be disjoint intersect in space."""

    def __init__(self, a, b, point=None):
        self.pair = (a, b)
        self.point = point
        super().__init__(f"objects {getattr(a, 'id', a)!r} and {getattr(b, 'id', b)!r} intersect")


class Below(IntEnum):
    A_BELOW_B = 1
    B_BELOW_A = -1
    UNRELATED = 0


# --- primitives -------------------------------------------------------------


def orient2d(p, q, r) -> int:
    return kernels.orient(p, q, r)


def _lex_key(p):
    return (p[0], p[1])


def _on_closed_segment(p, q, r) -> bool:
    """r collinear with p, q assumed; is it between them?"""
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def segments_intersect_2d(s, t):
    """Classify the intersection of closed planar segments ``s`` and ``t``.

    Returns ``("empty", None)``, ``("point", p)`` or ``("overlap", (p, q))``.
    """
    p, q = s
    u, v = t
    d1 = kernels.orient(u, v, p)
    d2 = kernels.orient(u, v, q)
    if d1 == 0 and d2 == 0:
        lo1, hi1 = sorted((p, q), key=_lex_key)
        lo2, hi2 = sorted((u, v), key=_lex_key)
        if kernels.orient(p, q, u) != 0:
            return "empty", None
        lo = max(lo1, lo2, key=_lex_key)
        hi = min(hi1, hi2, key=_lex_key)
        if _lex_key(lo) > _lex_key(hi):
            return "empty", None
        if lo == hi:
            return "point", lo
        return "overlap", (lo, hi)
    if d1 * d2 > 0:
        return "empty", None
    d3 = kernels.orient(p, q, u)
    d4 = kernels.orient(p, q, v)
    if d3 * d4 > 0:
        return "empty", None
    if d1 == 0:
        return "point", p
    if d2 == 0:
        return "point", q
    if d3 == 0:
        return "point", u
    if d4 == 0:
        return "point", v
    rx, ry = q[0] - p[0], q[1] - p[1]
    sx, sy = v[0] - u[0], v[1] - u[1]
    t_ = ((u[0] - p[0]) * sy - (u[1] - p[1]) * sx) / (rx * sy - ry * sx)
    return "point", (p[0] + t_ * rx, p[1] + t_ * ry)


def plane_through(a, b, c):
    """Coefficients ``(pa, pb, pc)`` with ``z = pa*x + pb*y + pc`` through three points."""
    ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
    vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
    nx = uy * vz - uz * vy
    ny = uz * vx - ux * vz
    nz = ux * vy - uy * vx
    if nz == 0:
        raise ValidationError("vertical or degenerate triangle")
    pa = -nx / nz
    pb = -ny / nz
    return pa, pb, a[2] - pa * a[0] - pb * a[1]


def _as_point(p, dim):
    if len(p) != dim:
        raise ValidationError(f"expected a {dim}-d point, got {p!r}")
    return tuple(parse(v) if not isinstance(v, type(ZERO)) else v for v in p)


# --- objects ----------------------------------------------------------------


class Segment3:
    """A non-vertical segment in space with per-endpoint openness."""

    kind = "seg"
    __slots__ = ("a", "b", "id", "closed", "pts", "parent", "tag", "_bbox")

    def __init__(self, a, b, id=None, closed=(True, True), parent=None, tag=None):
        a = _as_point(a, 3)
        b = _as_point(b, 3)
        if a[0] == b[0] and a[1] == b[1]:
            raise ValidationError(f"segment {id!r} is vertical or degenerate")
        self.a = a
        self.b = b
        self.id = id
        self.closed = (bool(closed[0]), bool(closed[1]))
        self.pts = ((a[0], a[1]), (b[0], b[1]))
        self.parent = id if parent is None else parent
        self.tag = tag
        self._bbox = None

    def __repr__(self):
        return f"Segment3({self.id!r}, {self.a}, {self.b}, closed={self.closed})"

    @property
    def any_closed(self) -> bool:
        return True

    @property
    def bbox(self):
        if self._bbox is None:
            (x0, y0), (x1, y1) = self.pts
            self._bbox = (min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1))
        return self._bbox

    def param(self, q) -> "Q":
        """Parameter of the projected point ``q`` along a->b (0 at a, 1 at b)."""
        dx = self.b[0] - self.a[0]
        dy = self.b[1] - self.a[1]
        if abs(dx) >= abs(dy):
            return (q[0] - self.a[0]) / dx
        return (q[1] - self.a[1]) / dy

    def point_at(self, t):
        a, b = self.a, self.b
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2]))

    def z_at(self, q):
        return self.point_at(self.param(q))[2]

    def sub(self, t0, t1, closed0, closed1, id=None, tag=None) -> "Segment3":
        s = Segment3.__new__(Segment3)
        s.a = self.point_at(t0) if t0 != 0 else self.a
        s.b = self.point_at(t1) if t1 != 1 else self.b
        s.id = id
        s.closed = (closed0, closed1)
        s.pts = ((s.a[0], s.a[1]), (s.b[0], s.b[1]))
        s.parent = self.parent
        s.tag = tag
        s._bbox = None
        return s


class ConvexFragment:
    """A convex planar polygon lying in a non-vertical plane.

    ``pts`` are the projected vertices in counter-clockwise order, ``plane``
    gives the height, ``closed[i]`` tells whether edge ``i`` (from vertex i to
    vertex i+1) is an original, closed edge.
    """

    kind = "poly"
    __slots__ = ("pts", "plane", "closed", "parent", "id", "tag", "_bbox")

    def __init__(self, pts, plane, closed=None, parent=None, id=None, tag=None):
        pts = [_as_point(p, 2) for p in pts]
        plane = tuple(parse(v) if not isinstance(v, type(ZERO)) else v for v in plane)
        closed = [True] * len(pts) if closed is None else [bool(c) for c in closed]
        if len(closed) != len(pts):
            raise ValidationError("one openness flag per edge is required")
        pts, closed = _normalize_polygon(pts, closed)
        self.pts = tuple(pts)
        self.plane = plane
        self.closed = tuple(closed)
        self.parent = parent
        self.id = id
        self.tag = tag
        self._bbox = None

    @classmethod
    def _make(cls, pts, plane, closed, parent, id=None, tag=None):
        f = cls.__new__(cls)
        f.pts = tuple(pts)
        f.plane = plane
        f.closed = tuple(closed)
        f.parent = parent
        f.id = id
        f.tag = tag
        f._bbox = None
        return f

    def __repr__(self):
        return f"ConvexFragment({self.id!r}, parent={self.parent!r}, n={len(self.pts)})"

    @property
    def any_closed(self) -> bool:
        return True in self.closed

    @property
    def bbox(self):
        if self._bbox is None:
            xs = [p[0] for p in self.pts]
            ys = [p[1] for p in self.pts]
            self._bbox = (min(xs), min(ys), max(xs), max(ys))
        return self._bbox

    def z_at(self, q):
        a, b, c = self.plane
        return a * q[0] + b * q[1] + c

    @property
    def boundary(self):
        return tuple((x, y, self.z_at((x, y))) for x, y in self.pts)

    def area(self):
        return kernels.area2(self.pts) / 2

    def derive(self, pts, closed, id=None, tag=None) -> "ConvexFragment":
        return ConvexFragment._make(pts, self.plane, closed, self.parent, id, tag)


class Triangle3(ConvexFragment):
    """An input triangle: a fragment whose three edges are all original."""

    __slots__ = ("vertices",)

    def __init__(self, a, b, c, id=None):
        a, b, c = (_as_point(v, 3) for v in (a, b, c))
        plane = plane_through(a, b, c)
        pts = [(a[0], a[1]), (b[0], b[1]), (c[0], c[1])]
        if kernels.area2(pts) < 0:
            pts.reverse()
        self.vertices = (a, b, c)
        self.pts = tuple(pts)
        self.plane = plane
        self.closed = (True, True, True)
        self.parent = id
        self.id = id
        self.tag = None
        self._bbox = None

    def __repr__(self):
        return f"Triangle3({self.id!r}, {self.vertices})"


def _normalize_polygon(pts, closed):
    """Drop repeated vertices, orient counter-clockwise, check convexity."""
    out, fl = [], []
    n = len(pts)
    for i in range(n):
        if pts[i] != pts[(i + 1) % n]:
            out.append(pts[i])
            fl.append(closed[i])
    if len(out) < 3:
        raise ValidationError("polygon has fewer than three distinct vertices")
    a2 = kernels.area2(out)
    if a2 == 0:
        raise ValidationError("polygon has zero area (vertical or degenerate)")
    if a2 < 0:
        # reversing vertex order maps edge i -> edge n-2-i (mod n)
        m = len(out)
        out = out[::-1]
        fl = [fl[(m - 2 - i) % m] for i in range(m)]
    m = len(out)
    for i in range(m):
        if kernels.orient(out[i - 1], out[i], out[(i + 1) % m]) < 0:
            raise ValidationError("polygon is not convex")
    return out, fl


def project(obj):
    """Vertical projection onto the xy-plane."""
    if isinstance(obj, tuple):
        return (obj[0], obj[1])
    if isinstance(obj, Segment3):
        return obj.pts
    if isinstance(obj, Triangle3):
        return tuple((v[0], v[1]) for v in obj.vertices)
    return obj.pts


def polygon_vertices_closed(obj):
    """Per-vertex membership flags of a polygon (both incident edges closed)."""
    c = obj.closed
    return [c[i - 1] and c[i] for i in range(len(c))]


# --- membership and witnesses ----------------------------------------------


def contains(obj, q) -> bool:
    """Is the planar point ``q`` in the projection of ``obj`` (openness respected)?"""
    if obj.kind == "seg":
        p0, p1 = obj.pts
        if kernels.orient(p0, p1, q) != 0 or not _on_closed_segment(p0, p1, q):
            return False
        if q == p0:
            return obj.closed[0]
        if q == p1:
            return obj.closed[1]
        return True
    pts = obj.pts
    m = len(pts)
    on = []
    for i in range(m):
        s = kernels.orient(pts[i], pts[(i + 1) % m], q)
        if s < 0:
            return False
        if s == 0:
            on.append(i)
    for i in on:
        if not obj.closed[i] and _on_closed_segment(pts[i], pts[(i + 1) % m], q):
            return False
    return True


def _extremes(points):
    pts = sorted(set(points), key=_lex_key)
    if not pts:
        return None
    if len(pts) == 1:
        return (pts[0],)
    return (pts[0], pts[-1])


def _poly_contact(pa, pb):
    """Closed intersection of two convex polygons with disjoint interiors."""
    pts = []
    m = len(pb)
    for i in range(m):
        u = pb[i]
        v = pb[(i + 1) % m]
        r = kernels.segment_clip(u, v, pa)
        if r is None:
            continue
        for t in r:
            pts.append((u[0] + t * (v[0] - u[0]), u[1] + t * (v[1] - u[1])))
    return _extremes(pts)


def _seg_poly_contact(seg, poly):
    p, q = seg.pts
    r = kernels.segment_clip(p, q, poly.pts)
    if r is None:
        return None
    t0, t1 = r
    a = (p[0] + t0 * (q[0] - p[0]), p[1] + t0 * (q[1] - p[1]))
    if t0 == t1:
        return (a,)
    b = (p[0] + t1 * (q[0] - p[0]), p[1] + t1 * (q[1] - p[1]))
    return (a, b)


def closed_contact(A, B):
    """Closed intersection of the projections when it has no interior.

    Returns None, ``(p,)`` or ``(p, q)``.  For two polygons with overlapping
    interiors use ``kernels.convex_overlap`` instead.
    """
    if A.kind == "poly" and B.kind == "poly":
        return _poly_contact(A.pts, B.pts)
    if A.kind == "seg" and B.kind == "seg":
        kind, val = segments_intersect_2d(A.pts, B.pts)
        if kind == "empty":
            return None
        return (val,) if kind == "point" else val
    seg, poly = (A, B) if A.kind == "seg" else (B, A)
    return _seg_poly_contact(seg, poly)


def _vertices_of(obj):
    return obj.pts


def witness_on(contact, A, B):
    """A point of the closed contact set that belongs to both objects, or None."""
    if contact is None:
        return None
    if len(contact) == 1:
        q = contact[0]
        return q if contains(A, q) and contains(B, q) else None
    u, v = contact
    mid = ((u[0] + v[0]) / 2, (u[1] + v[1]) / 2)
    if contains(A, mid) and contains(B, mid):
        return mid
    lo, hi = sorted((u, v), key=_lex_key)
    cand = {u, v}
    for obj in (A, B):
        for p in _vertices_of(obj):
            if kernels.orient(u, v, p) == 0 and _lex_key(lo) < _lex_key(p) < _lex_key(hi):
                cand.add(p)
    cand = sorted(cand, key=_lex_key)
    for i, p in enumerate(cand):
        if contains(A, p) and contains(B, p):
            return p
        if i + 1 < len(cand):
            r = cand[i + 1]
            m = ((p[0] + r[0]) / 2, (p[1] + r[1]) / 2)
            if contains(A, m) and contains(B, m):
                return m
    return None


def shared_witness(A, B):
    """Deterministic witness point in the shared projection, or None."""
    if A.kind == "poly" and B.kind == "poly":
        ov = kernels.convex_overlap(A.pts, B.pts)
        if ov:
            k = len(ov)
            return (sum((p[0] for p in ov), ZERO) / k, sum((p[1] for p in ov), ZERO) / k)
        if not (A.any_closed and B.any_closed):
            return None
    elif A.kind != B.kind:
        seg, poly = (A, B) if A.kind == "seg" else (B, A)
        c = _seg_poly_contact(seg, poly)
        if c is not None and len(c) == 2:
            mid = ((c[0][0] + c[1][0]) / 2, (c[0][1] + c[1][1]) / 2)
            if kernels.point_classes(poly.pts, [mid])[0] == 1:
                return mid
        return witness_on(c, A, B)
    return witness_on(closed_contact(A, B), A, B)


def _boxes_meet(ba, bb) -> bool:
    return ba[0] <= bb[2] and bb[0] <= ba[2] and ba[1] <= bb[3] and bb[1] <= ba[3]


def _closed_edge_meets(A, B) -> bool:
    pts = A.pts
    m = len(pts)
    for i in range(m):
        if A.closed[i] and kernels.segment_clip(pts[i], pts[i + 1 if i + 1 < m else 0], B.pts) is not None:
            return True
    return False


def relation(A, B):
    """``(s, w)``: s = 1 if A is below B, -1 if B is below A, 0 if unrelated.

    Raises IntersectionError if the objects have equal height at the witness.
    """
    if not _boxes_meet(A.bbox, B.bbox):
        return 0, None
    if A.kind == "poly" and B.kind == "poly":
        s, w = kernels.relate_polys(A.pts, A.plane, B.pts, B.plane)
        if s is not None:
            if s == 0:
                raise IntersectionError(A, B, w)
            return s, w
        if not (A.any_closed and B.any_closed) or kernels.polys_separated(A.pts, B.pts):
            return 0, None
        # with disjoint interiors a shared point lies on a closed edge of each
        if not (_closed_edge_meets(A, B) and _closed_edge_meets(B, A)):
            return 0, None
        w = witness_on(_poly_contact(A.pts, B.pts), A, B)
    else:
        w = shared_witness(A, B)
    if w is None:
        return 0, None
    za = A.z_at(w)
    zb = B.z_at(w)
    if za == zb:
        raise IntersectionError(A, B, w)
    return (1 if za < zb else -1), w


def below(A, B) -> Below:
    return Below(relation(A, B)[0])


# --- disjointness -----------------------------------------------------------


def _zero_subset(contact, f):
    """Part of a contact segment/point where the affine function f vanishes."""
    if contact is None:
        return None
    if len(contact) == 1:
        return contact if f(contact[0]) == 0 else None
    u, v = contact
    fu, fv = f(u), f(v)
    if fu == 0 and fv == 0:
        return contact
    if (fu > 0 and fv > 0) or (fu < 0 and fv < 0):
        return None
    t = fu / (fu - fv)
    return ((u[0] + t * (v[0] - u[0]), u[1] + t * (v[1] - u[1])),)


def intersects_3d(A, B) -> bool:
    """Exact test whether two objects share a point in space."""
    if not _boxes_meet(A.bbox, B.bbox):
        return False

    def f(q):
        return A.z_at(q) - B.z_at(q)

    if A.kind == "poly" and B.kind == "poly":
        ov = kernels.convex_overlap(A.pts, B.pts)
        if ov:
            vals = [f(p) for p in ov]
            if all(v > 0 for v in vals) or all(v < 0 for v in vals):
                return False
            if all(v == 0 for v in vals):
                return True
            zs = []
            k = len(ov)
            for i in range(k):
                p, q = ov[i], ov[(i + 1) % k]
                vp, vq = vals[i], vals[(i + 1) % k]
                if vp == 0:
                    zs.append(p)
                elif (vp > 0 > vq) or (vp < 0 < vq):
                    t = vp / (vp - vq)
                    zs.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            return witness_on(_extremes(zs), A, B) is not None
        contact = _poly_contact(A.pts, B.pts)
    else:
        contact = closed_contact(A, B)
    return witness_on(_zero_subset(contact, f), A, B) is not None


def pairwise_disjoint_3d(objects: Sequence) -> Optional[tuple]:
    """None when all pairs are disjoint, else the first violating index pair."""
    objs = list(objects)
    order = sorted(range(len(objs)), key=lambda i: objs[i].bbox[0])
    bad = []
    active: list = []
    for i in order:
        bi = objs[i].bbox
        active = [j for j in active if objs[j].bbox[2] >= bi[0]]
        for j in active:
            if intersects_3d(objs[i], objs[j]):
                bad.append((min(i, j), max(i, j)))
        active.append(i)
    return min(bad) if bad else None


def validate_objects(objects: Iterable) -> None:
    """Raise ValidationError unless the objects are disjoint and non-vertical."""
    objs = list(objects)
    ids = [o.id for o in objs]
    if len(set(ids)) != len(ids):
        raise ValidationError("object ids are not unique")
    bad = pairwise_disjoint_3d(objs)
    if bad is not None:
        i, j = bad
        raise IntersectionError(objs[i], objs[j])


# --- clipping ---------------------------------------------------------------


def clip_to_cell(F, cell) -> Optional[ConvexFragment]:
    """Part of ``F`` whose projection lies in ``cell``; None if it has no interior."""
    pts, flags = kernels.clip_convex(list(F.pts), list(F.closed), cell)
    if not pts:
        return None
    return F.derive(pts, flags, tag=F.tag)


def x_plane(c):
    """The vertical plane ``x = c`` as a planar line (kept side x >= c)."""
    return (Q(1), ZERO, -c)


def plane_through_points(p, q):
    """Vertical plane through two planar points, as a line."""
    return kernels.edge_line(p, q)


def slice_by_vertical_plane(F, plane) -> list:
    """Split ``F`` by a vertical plane given as a planar line ``(a, b, c)``."""
    a, b, c = plane
    left, lf = kernels.clip_halfplane(list(F.pts), list(F.closed), -a, -b, -c)
    if not left:
        return [F]
    right, rf = kernels.clip_halfplane(list(F.pts), list(F.closed), a, b, c)
    if not right:
        return [F]
    return [F.derive(left, lf, tag=F.tag), F.derive(right, rf, tag=F.tag)]


def bbox_of(objects):
    xs0, ys0, xs1, ys1 = zip(*(o.bbox for o in objects))
    return min(xs0), min(ys0), max(xs1), max(ys1)


def clip_box(objects) -> Cell2:
    """Axis-aligned box three times the projected extent, centred on the scene."""
    x0, y0, x1, y1 = bbox_of(objects)
    w = x1 - x0
    h = y1 - y0
    ext = max(w, h)
    if ext == 0:
        ext = Q(1)
    w = w if w > 0 else ext
    h = h if h > 0 else ext
    cx = (x0 + x1) / 2
    cy = (y0 + y1) / 2
    hw = 3 * w / 2
    hh = 3 * h / 2
    return ((cx - hw, cy - hh), (cx + hw, cy - hh), (cx + hw, cy + hh), (cx - hw, cy + hh))


def z_range(objects):
    zs = []
    for o in objects:
        if o.kind == "seg":
            zs += [o.a[2], o.b[2]]
        else:
            zs += [o.z_at(p) for p in o.pts]
    return min(zs), max(zs)
