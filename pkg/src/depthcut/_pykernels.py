"""Pure-Python exact kernels.

These are the reference implementations of the hot loops.  The compiled
module ``_ckernels`` exposes the same functions with identical results; the
choice between them is made in ``depthcut.kernels``.

Conventions: points are ``(x, y)`` tuples of exact rationals, polygons are
lists of points in counter-clockwise order, and a line ``(a, b, c)`` is the
set ``a*x + b*y + c = 0`` with the kept side ``a*x + b*y + c >= 0``.
Polygon edge ``i`` runs from vertex ``i`` to vertex ``i + 1``; its flag is
True for an original (closed) edge and False for a cut (open) edge.
"""

BACKEND = "python"


def orient(p, q, r):
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def area2(pts):
    """Twice the signed area."""
    n = len(pts)
    s = 0
    for i in range(n):
        x0, y0 = pts[i - 1]
        x1, y1 = pts[i]
        s += x0 * y1 - x1 * y0
    return s


def clip_halfplane(pts, flags, a, b, c):
    """Clip a convex polygon to the closed half-plane ``a*x+b*y+c >= 0``.

    ``flags`` may be None, in which case None is returned for the flags.
    Returns ``([], [])`` when the result has no interior.
    """
    vals = [a * x + b * y + c for x, y in pts]
    if min(vals) >= 0:
        return list(pts), (list(flags) if flags is not None else None)
    if max(vals) <= 0:
        return [], ([] if flags is not None else None)
    n = len(pts)
    out = []
    oflags = [] if flags is not None else None
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        vp = vals[i]
        vq = vals[j]
        f = flags[i] if flags is not None else None
        if vp > 0:
            out.append(pts[i])
            if oflags is not None:
                oflags.append(f)
            if vq < 0:
                t = vp / (vp - vq)
                p = pts[i]
                q = pts[j]
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
                if oflags is not None:
                    oflags.append(False)
        elif vp == 0:
            out.append(pts[i])
            if oflags is not None:
                oflags.append(False if vq < 0 else f)
        elif vq > 0:
            t = vp / (vp - vq)
            p = pts[i]
            q = pts[j]
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            if oflags is not None:
                oflags.append(f)
    return out, oflags


def edge_line(p, q):
    """Line through p and q whose kept side is to the left of p->q."""
    a = p[1] - q[1]
    b = q[0] - p[0]
    return a, b, -(a * p[0] + b * p[1])


def clip_convex(pts, flags, cell):
    """Clip convex polygon ``pts`` to the closed convex polygon ``cell``."""
    m = len(cell)
    for i in range(m):
        p = cell[i]
        q = cell[i + 1 if i + 1 < m else 0]
        a = p[1] - q[1]
        b = q[0] - p[0]
        pts, flags = clip_halfplane(pts, flags, a, b, -(a * p[0] + b * p[1]))
        if not pts:
            break
    return pts, flags


def convex_overlap(pa, pb):
    """Intersection of two convex polygons if it has positive area, else []."""
    return clip_convex(pa, None, pb)[0]


def polys_separated(pa, pb):
    """True when the closed convex polygons are disjoint.

    For convex polygons some edge line of one of them then has the other
    strictly on its outer side.
    """
    for P, R in ((pa, pb), (pb, pa)):
        m = len(P)
        for i in range(m):
            a, b, c = edge_line(P[i], P[i + 1 if i + 1 < m else 0])
            if all(a * x + b * y + c < 0 for x, y in R):
                return True
    return False


def lines_crossing(cell, lines, idx):
    """Indices ``i`` in ``idx`` whose line ``lines[i]`` crosses the cell interior."""
    out = []
    for i in idx:
        a, b, c = lines[i]
        pos = neg = False
        for x, y in cell:
            v = a * x + b * y + c
            if v > 0:
                pos = True
            elif v < 0:
                neg = True
        if pos and neg:
            out.append(i)
    return out


def segment_clip(p, q, cell):
    """Parameter interval ``(t0, t1)`` of segment p->q inside the closed cell.

    Returns None when the segment misses the cell.
    """
    t0 = 0
    t1 = 1
    m = len(cell)
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    for i in range(m):
        u = cell[i]
        w = cell[i + 1 if i + 1 < m else 0]
        a = u[1] - w[1]
        b = w[0] - u[0]
        c = -(a * u[0] + b * u[1])
        v0 = a * p[0] + b * p[1] + c
        dv = a * dx + b * dy
        if dv == 0:
            if v0 < 0:
                return None
            continue
        t = -v0 / dv
        if dv > 0:
            if t > t0:
                t0 = t
        elif t < t1:
            t1 = t
        if t0 > t1:
            return None
    return t0, t1


def segments_crossing(cell, segs, idx):
    """Indices ``i`` in ``idx`` whose segment ``segs[i]`` meets the cell interior.

    A segment meets the interior when its clipped part has positive length
    and its midpoint is strictly inside the cell.
    """
    out = []
    m = len(cell)
    for i in idx:
        p, q = segs[i]
        r = segment_clip(p, q, cell)
        if r is None or r[0] >= r[1]:
            continue
        # t0 and t1 may be plain ints; keep the arithmetic in the point type
        ts = r[0] + r[1]
        x = p[0] + ts * (q[0] - p[0]) / 2
        y = p[1] + ts * (q[1] - p[1]) / 2
        inside = True
        for k in range(m):
            u = cell[k]
            w = cell[k + 1 if k + 1 < m else 0]
            if (w[0] - u[0]) * (y - u[1]) - (w[1] - u[1]) * (x - u[0]) <= 0:
                inside = False
                break
        if inside:
            out.append(i)
    return out


def relate_polys(pa, plane_a, pb, plane_b):
    """Compare two non-vertical convex polygons over their projected overlap.

    Returns ``(s, w)`` where ``w`` is the vertex centroid of the positive-area
    overlap and ``s`` is the sign of ``z_b(w) - z_a(w)``; ``(None, None)``
    when the overlap has no interior.
    """
    ov = clip_convex(pa, None, pb)[0]
    if not ov:
        return None, None
    k = len(ov)
    sx = 0
    sy = 0
    for x, y in ov:
        sx += x
        sy += y
    wx = sx / k
    wy = sy / k
    d = (plane_b[0] - plane_a[0]) * wx + (plane_b[1] - plane_a[1]) * wy + (plane_b[2] - plane_a[2])
    return (d > 0) - (d < 0), (wx, wy)


def point_classes(pts, qs):
    """Classify points against a closed convex polygon.

    Returns a list with 1 (strictly inside), 0 (on the boundary) or -1.
    """
    m = len(pts)
    edges = [edge_line(pts[i], pts[i + 1 if i + 1 < m else 0]) for i in range(m)]
    out = []
    for x, y in qs:
        cls = 1
        for a, b, c in edges:
            v = a * x + b * y + c
            if v < 0:
                cls = -1
                break
            if v == 0:
                cls = 0
        out.append(cls)
    return out
