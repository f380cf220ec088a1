"""Exact software rasterizer: painter's algorithm against a z-buffer.

The camera looks straight down the z-axis, so higher objects hide lower
ones.  Pixels are sampled at their centres, which are exact rationals, and
every inside test and depth comparison is exact.  A pixel whose centre lies
on the boundary of some projected object is masked in both modes, so no
tie-breaking rule is needed at shared edges.
"""

from __future__ import annotations

import colorsys
import zlib
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .depthgraph import DepthCycle, build_depth_graph, find_depth_order
from .exact import Q
from .geom import ValidationError, bbox_of

BACKGROUND = (0, 0, 0)


class CycleError(RuntimeError):
    """Painter mode needs a depth order but the input has a cycle."""

    def __init__(self, cycle: DepthCycle):
        super().__init__(f"depth cycle {cycle.ids}")
        self.cycle = cycle


@dataclass
class View:
    x0: "Q"
    y0: "Q"
    x1: "Q"
    y1: "Q"
    width: int
    height: int

    @classmethod
    def around(cls, objects, width: int, height: int) -> "View":
        # an odd margin keeps pixel centres off the round coordinates
        x0, y0, x1, y1 = bbox_of(objects)
        mx = (x1 - x0) / 37 + Q(1, 1009)
        my = (y1 - y0) / 37 + Q(1, 1013)
        return cls(x0 - mx, y0 - my, x1 + mx, y1 + my, width, height)

    def centre(self, i: int, j: int):
        """Centre of column ``i``, row ``j`` (row 0 at the top)."""
        return self.xs[i], self.ys[j]

    @cached_property
    def xs(self) -> list:
        dx = self.x1 - self.x0
        return [self.x0 + dx * Q(2 * i + 1, 2 * self.width) for i in range(self.width)]

    @cached_property
    def ys(self) -> list:
        dy = self.y1 - self.y0
        return [self.y1 - dy * Q(2 * j + 1, 2 * self.height) for j in range(self.height)]

    def columns(self, lo, hi):
        """Columns whose centre x lies in ``[lo, hi]``."""
        return range(bisect_left(self.xs, lo), bisect_right(self.xs, hi))

    @cached_property
    def _ys_up(self) -> list:
        return self.ys[::-1]

    def rows(self, lo, hi):
        """Rows whose centre y lies in ``[lo, hi]``; ys decrease with the row."""
        n = self.height
        return range(n - bisect_right(self._ys_up, hi), n - bisect_left(self._ys_up, lo))


@dataclass
class Raster:
    """Per-pixel index of the visible object (-1 for background) plus the mask."""

    view: View
    winner: list
    mask: list

    @property
    def masked(self) -> int:
        return sum(self.mask)


def _row_span(pts, y):
    """Exact x-range of a convex polygon on the horizontal line at ``y``."""
    lo = hi = None
    m = len(pts)
    for i in range(m):
        (px, py), (qx, qy) = pts[i], pts[(i + 1) % m]
        if py == qy:
            if py == y:
                a, b = (px, qx) if px < qx else (qx, px)
                lo = a if lo is None or a < lo else lo
                hi = b if hi is None or b > hi else hi
            continue
        if (py <= y <= qy) or (qy <= y <= py):
            x = px + (y - py) * (qx - px) / (qy - py)
            lo = x if lo is None or x < lo else lo
            hi = x if hi is None or x > hi else hi
    return lo, hi


def _coverage(obj, view: View):
    """Yield ``(k, cls, centre)`` for pixels near ``obj``; cls 1 inside, 0 on boundary.

    Scanline form of the point classification: on each pixel row the closed
    projection is one exact x-interval, its ends are boundary, and a row
    through the lowest or highest point of the polygon is boundary throughout.
    """
    bx0, by0, bx1, by1 = obj.bbox
    rows = view.rows(by0, by1)
    if not rows or not view.columns(bx0, bx1):
        return
    xs, W = view.xs, view.width
    if obj.kind == "seg":
        (px, py), (qx, qy) = obj.pts
        for j in rows:
            y = view.ys[j]
            if py == qy:
                lo, hi = (px, qx) if px < qx else (qx, px)
                for i in view.columns(lo, hi):
                    yield j * W + i, 0, (xs[i], y)
                continue
            x = px + (y - py) * (qx - px) / (qy - py)
            i = bisect_left(xs, x)
            if i < W and xs[i] == x:
                yield j * W + i, 0, (x, y)
        return
    pts = obj.pts
    for j in rows:
        y = view.ys[j]
        lo, hi = _row_span(pts, y)
        if lo is None:
            continue
        edge = y == by0 or y == by1
        for i in view.columns(lo, hi):
            x = xs[i]
            yield j * W + i, 0 if edge or x == lo or x == hi else 1, (x, y)


def _rasterize(objects, view: View, order: Optional[Sequence[int]]):
    npx = view.width * view.height
    winner = [-1] * npx
    mask = [False] * npx
    depth: list = [None] * npx
    seq = range(len(objects)) if order is None else order
    for idx in seq:
        obj = objects[idx]
        for k, cls, c in _coverage(obj, view):
            if cls == 0:
                mask[k] = True
                continue
            if order is not None:
                winner[k] = idx
                continue
            z = obj.z_at(c)
            if depth[k] is None or z > depth[k]:
                depth[k] = z
                winner[k] = idx
            elif z == depth[k]:
                raise ValidationError(f"objects {objects[winner[k]].id!r} and {obj.id!r} meet above pixel {k}")
    return Raster(view, winner, mask)


def painter(objects: Sequence, width: int = 128, height: int = 128, view: Optional[View] = None, order=None) -> Raster:
    """Draw back to front in a depth order (computed unless given)."""
    objects = list(objects)
    if order is None:
        res = find_depth_order(build_depth_graph(objects), objects)
        if isinstance(res, DepthCycle):
            raise CycleError(res)
        order = res
    view = view or View.around(objects, width, height)
    return _rasterize(objects, view, order)


def zbuffer(objects: Sequence, width: int = 128, height: int = 128, view: Optional[View] = None) -> Raster:
    """Keep the highest object at every pixel centre."""
    objects = list(objects)
    view = view or View.around(objects, width, height)
    return _rasterize(objects, view, None)


@dataclass
class DiffReport:
    differing: int
    masked: int
    total: int

    @property
    def masked_fraction(self) -> float:
        return self.masked / self.total

    def to_json(self):
        return {"differing": self.differing, "masked": self.masked, "total": self.total, "masked_fraction": self.masked_fraction}


def compare(a: Raster, b: Raster) -> DiffReport:
    """Count unmasked pixels whose visible object differs."""
    mask = [x or y for x, y in zip(a.mask, b.mask)]
    diff = sum(1 for k, m in enumerate(mask) if not m and a.winner[k] != b.winner[k])
    return DiffReport(diff, sum(mask), len(mask))


def diff(objects: Sequence, width: int = 128, height: int = 128, order=None) -> DiffReport:
    """Painter against z-buffer; ``order`` skips recomputing a known depth order."""
    objects = list(objects)
    view = View.around(objects, width, height)
    return compare(painter(objects, view=view, order=order), zbuffer(objects, view=view))


# --- colour and output --------------------------------------------------------


def colour(obj) -> tuple:
    """Hue from the parent id so every fragment of one input shares a hue."""
    parent = obj.parent if obj.parent is not None else obj.id
    hue = (zlib.crc32(repr(parent).encode()) % 3600) / 3600
    val = 0.6 + 0.4 * ((zlib.crc32(repr(obj.id).encode()) % 1000) / 1000)
    r, g, b = colorsys.hsv_to_rgb(hue, 0.75, val)
    return int(r * 255), int(g * 255), int(b * 255)


def to_ppm(raster: Raster, objects: Sequence, show_mask: bool = False) -> bytes:
    """Binary PPM (P6).  Masked pixels are drawn white when ``show_mask``."""
    cols = [colour(o) for o in objects]
    out = bytearray()
    for k, w in enumerate(raster.winner):
        if show_mask and raster.mask[k]:
            out += b"\xff\xff\xff"
        else:
            out += bytes(BACKGROUND if w < 0 else cols[w])
    v = raster.view
    return b"P6\n%d %d\n255\n" % (v.width, v.height) + bytes(out)


def read_ppm(data: bytes):
    """``(width, height, pixel bytes)`` of a P6 image written by ``to_ppm``."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = map(int, parts[1].split())
    return w, h, parts[3]
