# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact kernels on GMP rationals.

Same functions and results as ``_pykernels``.  Polygons are copied into C
arrays of ``mpq_t`` once, clipped in place, and converted back at the end.
Inputs that are not ``mpq`` are converted on entry.
"""

from libc.stdlib cimport malloc, free
from gmpy2 cimport *
import gmpy2

import_gmpy2()

BACKEND = "compiled"

cdef extern from "gmp.h":
    void mpq_init(mpq_t)
    void mpq_clear(mpq_t)
    void mpq_set(mpq_t, const mpq_t)
    void mpq_set_si(mpq_t, long, unsigned long)
    void mpq_add(mpq_t, const mpq_t, const mpq_t)
    void mpq_sub(mpq_t, const mpq_t, const mpq_t)
    void mpq_mul(mpq_t, const mpq_t, const mpq_t)
    void mpq_div(mpq_t, const mpq_t, const mpq_t)
    void mpq_neg(mpq_t, const mpq_t)
    int mpq_cmp(const mpq_t, const mpq_t)
    int mpq_sgn(const mpq_t)


cdef inline mpq _q(object v):
    if type(v) is mpq:
        return <mpq>v
    return <mpq>gmpy2.mpq(v)


cdef inline object _new(mpq_t v):
    cdef mpq r = GMPy_MPQ_New(NULL)
    mpq_set(MPQ(r), v)
    return r


# --- C polygons -------------------------------------------------------------

cdef struct Poly:
    int n
    int cap
    mpq_t* x
    mpq_t* y
    char* f


cdef int poly_alloc(Poly* p, int cap) except -1:
    cdef int i
    p.n = 0
    p.cap = cap
    p.x = <mpq_t*>malloc(cap * sizeof(mpq_t))
    p.y = <mpq_t*>malloc(cap * sizeof(mpq_t))
    p.f = <char*>malloc(cap * sizeof(char))
    if p.x == NULL or p.y == NULL or p.f == NULL:
        raise MemoryError()
    for i in range(cap):
        mpq_init(p.x[i])
        mpq_init(p.y[i])
    return 0


cdef void poly_free(Poly* p):
    cdef int i
    if p.x != NULL:
        for i in range(p.cap):
            mpq_clear(p.x[i])
            mpq_clear(p.y[i])
        free(p.x)
        free(p.y)
        free(p.f)
    p.x = NULL


cdef int poly_load(Poly* p, object pts, object flags) except -1:
    cdef int i = 0
    cdef mpq vx, vy
    for pt in pts:
        vx = _q(pt[0])
        vy = _q(pt[1])
        mpq_set(p.x[i], MPQ(vx))
        mpq_set(p.y[i], MPQ(vy))
        p.f[i] = 1 if (flags is not None and flags[i]) else 0
        i += 1
    p.n = i
    return 0


cdef object poly_points(Poly* p):
    cdef int i
    return [(_new(p.x[i]), _new(p.y[i])) for i in range(p.n)]


cdef object poly_flags(Poly* p):
    cdef int i
    return [bool(p.f[i]) for i in range(p.n)]


cdef int clip_hp(Poly* src, Poly* dst, mpq_t a, mpq_t b, mpq_t c, mpq_t* vals, mpq_t t1, mpq_t t2) except -1:
    """Clip src to a*x+b*y+c >= 0 into dst.  Returns 1 if unchanged, 0 otherwise."""
    cdef int i, j, n = src.n, sp, sq, neg = 0, pos = 0
    for i in range(n):
        mpq_mul(t1, a, src.x[i])
        mpq_mul(t2, b, src.y[i])
        mpq_add(t1, t1, t2)
        mpq_add(vals[i], t1, c)
        sp = mpq_sgn(vals[i])
        if sp < 0:
            neg = 1
        elif sp > 0:
            pos = 1
    if not neg:
        return 1
    dst.n = 0
    if not pos:
        return 0
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        sp = mpq_sgn(vals[i])
        sq = mpq_sgn(vals[j])
        if sp > 0:
            mpq_set(dst.x[dst.n], src.x[i])
            mpq_set(dst.y[dst.n], src.y[i])
            dst.f[dst.n] = src.f[i]
            dst.n += 1
            if sq < 0:
                _cross(src, dst, i, j, vals, t1, t2)
                dst.f[dst.n] = 0
                dst.n += 1
        elif sp == 0:
            mpq_set(dst.x[dst.n], src.x[i])
            mpq_set(dst.y[dst.n], src.y[i])
            dst.f[dst.n] = 0 if sq < 0 else src.f[i]
            dst.n += 1
        elif sq > 0:
            _cross(src, dst, i, j, vals, t1, t2)
            dst.f[dst.n] = src.f[i]
            dst.n += 1
    return 0


cdef inline void _cross(Poly* src, Poly* dst, int i, int j, mpq_t* vals, mpq_t t1, mpq_t t2):
    # t = vp / (vp - vq); point = p + t (q - p)
    mpq_sub(t1, vals[i], vals[j])
    mpq_div(t1, vals[i], t1)
    mpq_sub(t2, src.x[j], src.x[i])
    mpq_mul(t2, t2, t1)
    mpq_add(dst.x[dst.n], src.x[i], t2)
    mpq_sub(t2, src.y[j], src.y[i])
    mpq_mul(t2, t2, t1)
    mpq_add(dst.y[dst.n], src.y[i], t2)


cdef struct Work:
    Poly a
    Poly b
    mpq_t* vals
    int cap
    mpq_t la
    mpq_t lb
    mpq_t lc
    mpq_t t1
    mpq_t t2


cdef int work_alloc(Work* w, int cap) except -1:
    cdef int i
    poly_alloc(&w.a, cap)
    poly_alloc(&w.b, cap)
    w.cap = cap
    w.vals = <mpq_t*>malloc(cap * sizeof(mpq_t))
    for i in range(cap):
        mpq_init(w.vals[i])
    mpq_init(w.la)
    mpq_init(w.lb)
    mpq_init(w.lc)
    mpq_init(w.t1)
    mpq_init(w.t2)
    return 0


cdef void work_free(Work* w):
    cdef int i
    poly_free(&w.a)
    poly_free(&w.b)
    for i in range(w.cap):
        mpq_clear(w.vals[i])
    free(w.vals)
    mpq_clear(w.la)
    mpq_clear(w.lb)
    mpq_clear(w.lc)
    mpq_clear(w.t1)
    mpq_clear(w.t2)


# Buffers shared by the hot entry points; they only grow.  Entry points never
# call each other, so one set suffices.
cdef Work _W
cdef Poly _C
cdef int _wcap = 0
cdef int _ccap = 0


cdef Work* shared_work(int cap) except NULL:
    global _wcap
    if cap > _wcap:
        if _wcap:
            work_free(&_W)
        cap = max(cap, 16)
        work_alloc(&_W, cap)
        _wcap = cap
    return &_W


cdef Poly* shared_cell(int cap) except NULL:
    global _ccap
    if cap > _ccap:
        if _ccap:
            poly_free(&_C)
        cap = max(cap, 16)
        poly_alloc(&_C, cap)
        _ccap = cap
    return &_C


cdef inline void edge_coeffs(Work* w, mpq_t px, mpq_t py, mpq_t qx, mpq_t qy):
    # a = p.y - q.y, b = q.x - p.x, c = -(a p.x + b p.y)
    mpq_sub(w.la, py, qy)
    mpq_sub(w.lb, qx, px)
    mpq_mul(w.t1, w.la, px)
    mpq_mul(w.t2, w.lb, py)
    mpq_add(w.t1, w.t1, w.t2)
    mpq_neg(w.lc, w.t1)


cdef Poly* clip_cell(Work* w, Poly* cell, int* changed) except? NULL:
    """Clip w.a by every edge of cell; the result is in the returned buffer."""
    cdef Poly* src = &w.a
    cdef Poly* dst = &w.b
    cdef Poly* tmp
    cdef int i, j, m = cell.n
    for i in range(m):
        j = i + 1 if i + 1 < m else 0
        edge_coeffs(w, cell.x[i], cell.y[i], cell.x[j], cell.y[j])
        if clip_hp(src, dst, w.la, w.lb, w.lc, w.vals, w.t1, w.t2) == 0:
            changed[0] = 1
            tmp = src
            src = dst
            dst = tmp
            if src.n == 0:
                break
    return src


# --- public functions -------------------------------------------------------


def orient(p, q, r):
    cdef mpq px = _q(p[0]), py = _q(p[1]), qx = _q(q[0]), qy = _q(q[1]), rx = _q(r[0]), ry = _q(r[1])
    cdef mpq_t t1, t2, t3
    cdef int s
    mpq_init(t1)
    mpq_init(t2)
    mpq_init(t3)
    mpq_sub(t1, MPQ(qx), MPQ(px))
    mpq_sub(t2, MPQ(ry), MPQ(py))
    mpq_mul(t1, t1, t2)
    mpq_sub(t2, MPQ(qy), MPQ(py))
    mpq_sub(t3, MPQ(rx), MPQ(px))
    mpq_mul(t2, t2, t3)
    mpq_sub(t1, t1, t2)
    s = mpq_sgn(t1)
    mpq_clear(t1)
    mpq_clear(t2)
    mpq_clear(t3)
    return s


def area2(pts):
    cdef list P = list(pts)
    cdef int n = len(P), i
    cdef mpq x0, y0, x1, y1
    cdef mpq_t s, t1, t2
    mpq_init(s)
    mpq_init(t1)
    mpq_init(t2)
    for i in range(n):
        x0 = _q(P[i - 1 if i > 0 else n - 1][0])
        y0 = _q(P[i - 1 if i > 0 else n - 1][1])
        x1 = _q(P[i][0])
        y1 = _q(P[i][1])
        mpq_mul(t1, MPQ(x0), MPQ(y1))
        mpq_mul(t2, MPQ(x1), MPQ(y0))
        mpq_sub(t1, t1, t2)
        mpq_add(s, s, t1)
    r = _new(s)
    mpq_clear(s)
    mpq_clear(t1)
    mpq_clear(t2)
    return r


def clip_halfplane(pts, flags, a, b, c):
    cdef list P = list(pts)
    cdef int n = len(P)
    cdef Work w
    cdef mpq qa = _q(a), qb = _q(b), qc = _q(c)
    cdef int unchanged
    if n == 0:
        return [], ([] if flags is not None else None)
    work_alloc(&w, 2 * n + 2)
    try:
        poly_load(&w.a, P, flags)
        unchanged = clip_hp(&w.a, &w.b, MPQ(qa), MPQ(qb), MPQ(qc), w.vals, w.t1, w.t2)
        if unchanged:
            return P, (list(flags) if flags is not None else None)
        if w.b.n == 0:
            return [], ([] if flags is not None else None)
        return poly_points(&w.b), (poly_flags(&w.b) if flags is not None else None)
    finally:
        work_free(&w)


def clip_convex(pts, flags, cell):
    cdef list P = list(pts)
    cdef list C = list(cell)
    cdef int n = len(P), m = len(C)
    cdef Work* w
    cdef Poly* pc
    cdef Poly* res
    cdef int changed = 0
    if n == 0:
        return [], ([] if flags is not None else None)
    w = shared_work(n + m + 2)
    pc = shared_cell(m)
    poly_load(&w.a, P, flags)
    poly_load(pc, C, None)
    res = clip_cell(w, pc, &changed)
    if res.n == 0:
        return [], ([] if flags is not None else None)
    if not changed:
        return P, (list(flags) if flags is not None else None)
    return poly_points(res), (poly_flags(res) if flags is not None else None)

def convex_overlap(pa, pb):
    return clip_convex(pa, None, pb)[0]


cdef int _outside_some_edge(Work* w, Poly* P, Poly* R):
    cdef int i, j, k
    for i in range(P.n):
        j = i + 1 if i + 1 < P.n else 0
        edge_coeffs(w, P.x[i], P.y[i], P.x[j], P.y[j])
        for k in range(R.n):
            mpq_mul(w.t1, w.la, R.x[k])
            mpq_mul(w.t2, w.lb, R.y[k])
            mpq_add(w.t1, w.t1, w.t2)
            mpq_add(w.t1, w.t1, w.lc)
            if mpq_sgn(w.t1) >= 0:
                break
        else:
            return 1
    return 0


def polys_separated(pa, pb):
    cdef list A = list(pa)
    cdef list B = list(pb)
    cdef Work* w
    cdef Poly* pb_
    w = shared_work(len(A))
    pb_ = shared_cell(len(B))
    poly_load(&w.a, A, None)
    poly_load(pb_, B, None)
    return bool(_outside_some_edge(w, &w.a, pb_) or _outside_some_edge(w, pb_, &w.a))

def lines_crossing(cell, lines, idx):
    cdef list C = list(cell)
    cdef int m = len(C), k, pos, neg, s
    cdef Poly pc
    cdef mpq a, b, c
    cdef mpq_t t1, t2
    cdef list out = []
    poly_alloc(&pc, m)
    mpq_init(t1)
    mpq_init(t2)
    try:
        poly_load(&pc, C, None)
        for i in idx:
            ln = lines[i]
            a = _q(ln[0])
            b = _q(ln[1])
            c = _q(ln[2])
            pos = 0
            neg = 0
            for k in range(m):
                mpq_mul(t1, MPQ(a), pc.x[k])
                mpq_mul(t2, MPQ(b), pc.y[k])
                mpq_add(t1, t1, t2)
                mpq_add(t1, t1, MPQ(c))
                s = mpq_sgn(t1)
                if s > 0:
                    pos = 1
                elif s < 0:
                    neg = 1
                if pos and neg:
                    out.append(i)
                    break
    finally:
        mpq_clear(t1)
        mpq_clear(t2)
        poly_free(&pc)
    return out


cdef int seg_clip(mpq_t px, mpq_t py, mpq_t qx, mpq_t qy, Poly* cell, mpq_t t0, mpq_t t1, Work* w) except -1:
    """Liang-Barsky on exact rationals; returns 0 when the segment misses the cell."""
    cdef int i, j, m = cell.n, sdv
    cdef mpq_t dx, dy, v0, dv, t
    mpq_init(dx)
    mpq_init(dy)
    mpq_init(v0)
    mpq_init(dv)
    mpq_init(t)
    mpq_set_si(t0, 0, 1)
    mpq_set_si(t1, 1, 1)
    mpq_sub(dx, qx, px)
    mpq_sub(dy, qy, py)
    cdef int ok = 1
    for i in range(m):
        j = i + 1 if i + 1 < m else 0
        edge_coeffs(w, cell.x[i], cell.y[i], cell.x[j], cell.y[j])
        mpq_mul(v0, w.la, px)
        mpq_mul(t, w.lb, py)
        mpq_add(v0, v0, t)
        mpq_add(v0, v0, w.lc)
        mpq_mul(dv, w.la, dx)
        mpq_mul(t, w.lb, dy)
        mpq_add(dv, dv, t)
        sdv = mpq_sgn(dv)
        if sdv == 0:
            if mpq_sgn(v0) < 0:
                ok = 0
                break
            continue
        mpq_div(t, v0, dv)
        mpq_neg(t, t)
        if sdv > 0:
            if mpq_cmp(t, t0) > 0:
                mpq_set(t0, t)
        elif mpq_cmp(t, t1) < 0:
            mpq_set(t1, t)
        if mpq_cmp(t0, t1) > 0:
            ok = 0
            break
    mpq_clear(dx)
    mpq_clear(dy)
    mpq_clear(v0)
    mpq_clear(dv)
    mpq_clear(t)
    return ok


def segment_clip(p, q, cell):
    cdef list C = list(cell)
    cdef Poly* pc
    cdef Work* w
    cdef mpq px = _q(p[0]), py = _q(p[1]), qx = _q(q[0]), qy = _q(q[1])
    cdef mpq_t t0, t1
    w = shared_work(1)
    pc = shared_cell(len(C))
    mpq_init(t0)
    mpq_init(t1)
    try:
        poly_load(pc, C, None)
        if not seg_clip(MPQ(px), MPQ(py), MPQ(qx), MPQ(qy), pc, t0, t1, w):
            return None
        return _new(t0), _new(t1)
    finally:
        mpq_clear(t0)
        mpq_clear(t1)


def segments_crossing(cell, segs, idx):
    cdef list C = list(cell)
    cdef int m = len(C), k, kk, inside
    cdef Poly pc
    cdef Work w
    cdef mpq px, py, qx, qy
    cdef mpq_t t0, t1, tm, x, y, a1, a2
    cdef list out = []
    work_alloc(&w, 1)
    poly_alloc(&pc, m)
    mpq_init(t0)
    mpq_init(t1)
    mpq_init(tm)
    mpq_init(x)
    mpq_init(y)
    mpq_init(a1)
    mpq_init(a2)
    try:
        poly_load(&pc, C, None)
        for i in idx:
            s = segs[i]
            px = _q(s[0][0])
            py = _q(s[0][1])
            qx = _q(s[1][0])
            qy = _q(s[1][1])
            if not seg_clip(MPQ(px), MPQ(py), MPQ(qx), MPQ(qy), &pc, t0, t1, &w):
                continue
            if mpq_cmp(t0, t1) >= 0:
                continue
            mpq_add(tm, t0, t1)
            mpq_set_si(a1, 1, 2)
            mpq_mul(tm, tm, a1)
            mpq_sub(x, MPQ(qx), MPQ(px))
            mpq_mul(x, x, tm)
            mpq_add(x, x, MPQ(px))
            mpq_sub(y, MPQ(qy), MPQ(py))
            mpq_mul(y, y, tm)
            mpq_add(y, y, MPQ(py))
            inside = 1
            for k in range(m):
                kk = k + 1 if k + 1 < m else 0
                # (w - u) x (pt - u)
                mpq_sub(a1, pc.x[kk], pc.x[k])
                mpq_sub(a2, y, pc.y[k])
                mpq_mul(a1, a1, a2)
                mpq_sub(a2, pc.y[kk], pc.y[k])
                mpq_sub(tm, x, pc.x[k])
                mpq_mul(a2, a2, tm)
                mpq_sub(a1, a1, a2)
                if mpq_sgn(a1) <= 0:
                    inside = 0
                    break
            if inside:
                out.append(i)
    finally:
        mpq_clear(t0)
        mpq_clear(t1)
        mpq_clear(tm)
        mpq_clear(x)
        mpq_clear(y)
        mpq_clear(a1)
        mpq_clear(a2)
        poly_free(&pc)
        work_free(&w)
    return out


def relate_polys(pa, plane_a, pb, plane_b):
    cdef list A = list(pa)
    cdef list B = list(pb)
    cdef int n = len(A), m = len(B), i, s
    cdef Work* w
    cdef Poly* pc
    cdef Poly* res
    cdef mpq_t sx, sy, kq, d, t
    cdef int changed = 0
    cdef mpq a0 = _q(plane_a[0]), a1 = _q(plane_a[1]), a2 = _q(plane_a[2])
    cdef mpq b0 = _q(plane_b[0]), b1 = _q(plane_b[1]), b2 = _q(plane_b[2])
    w = shared_work(n + m + 2)
    pc = shared_cell(m)
    mpq_init(sx)
    mpq_init(sy)
    mpq_init(kq)
    mpq_init(d)
    mpq_init(t)
    try:
        poly_load(&w.a, A, None)
        poly_load(pc, B, None)
        res = clip_cell(w, pc, &changed)
        if res.n == 0:
            return None, None
        for i in range(res.n):
            mpq_add(sx, sx, res.x[i])
            mpq_add(sy, sy, res.y[i])
        mpq_set_si(kq, res.n, 1)
        mpq_div(sx, sx, kq)
        mpq_div(sy, sy, kq)
        mpq_sub(d, MPQ(b0), MPQ(a0))
        mpq_mul(d, d, sx)
        mpq_sub(t, MPQ(b1), MPQ(a1))
        mpq_mul(t, t, sy)
        mpq_add(d, d, t)
        mpq_sub(t, MPQ(b2), MPQ(a2))
        mpq_add(d, d, t)
        s = mpq_sgn(d)
        return s, (_new(sx), _new(sy))
    finally:
        mpq_clear(sx)
        mpq_clear(sy)
        mpq_clear(kq)
        mpq_clear(d)
        mpq_clear(t)


def point_classes(pts, qs):
    cdef list P = list(pts)
    cdef int m = len(P), i, j, cls, s
    cdef Poly pc
    cdef Work w
    cdef mpq qx, qy
    cdef mpq_t t
    cdef list out = []
    work_alloc(&w, 1)
    poly_alloc(&pc, m)
    mpq_init(t)
    try:
        poly_load(&pc, P, None)
        for q in qs:
            qx = _q(q[0])
            qy = _q(q[1])
            cls = 1
            for i in range(m):
                j = i + 1 if i + 1 < m else 0
                edge_coeffs(&w, pc.x[i], pc.y[i], pc.x[j], pc.y[j])
                mpq_mul(t, w.la, MPQ(qx))
                mpq_mul(w.t1, w.lb, MPQ(qy))
                mpq_add(t, t, w.t1)
                mpq_add(t, t, w.lc)
                s = mpq_sgn(t)
                if s < 0:
                    cls = -1
                    break
                if s == 0:
                    cls = 0
            out.append(cls)
    finally:
        mpq_clear(t)
        poly_free(&pc)
        work_free(&w)
    return out
