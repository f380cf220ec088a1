import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from depthcut import _pykernels as PY
from depthcut import kernels

from _helpers import hull

needs_compiled = pytest.mark.skipif("compiled" not in kernels.available(), reason="compiled kernels not built")

q = st.builds(mpq, st.integers(-40, 40), st.integers(1, 7))

convex = st.lists(st.tuples(q, q), min_size=3, max_size=8).map(hull).filter(lambda h: len(h) >= 3)
line = st.tuples(q, q, q).filter(lambda l: l[0] != 0 or l[1] != 0)


def test_backend_switch():
    before = kernels.backend()
    try:
        kernels.set_backend("python")
        assert kernels.backend() == "python"
        kernels.set_backend("auto")
        assert kernels.backend() in kernels.available()
        with pytest.raises(ValueError):
            kernels.set_backend("fortran")
    finally:
        kernels.set_backend(before)


def test_auto_prefers_compiled():
    before = kernels.backend()
    try:
        kernels.set_backend("auto")
        assert kernels.backend() == ("compiled" if "compiled" in kernels.available() else "python")
    finally:
        kernels.set_backend(before)


def test_clip_halfplane_flags():
    sq = [(mpq(0), mpq(0)), (mpq(2), mpq(0)), (mpq(2), mpq(2)), (mpq(0), mpq(2))]
    pts, fl = PY.clip_halfplane(sq, [True] * 4, mpq(-1), mpq(0), mpq(1))  # x <= 1
    assert pts == [(0, 0), (1, 0), (1, 2), (0, 2)]
    assert fl == [True, False, True, True]


def test_segment_clip_and_classes():
    sq = [(mpq(0), mpq(0)), (mpq(2), mpq(0)), (mpq(2), mpq(2)), (mpq(0), mpq(2))]
    assert PY.segment_clip((mpq(-1), mpq(1)), (mpq(3), mpq(1)), sq) == (mpq(1, 4), mpq(3, 4))
    assert PY.segment_clip((mpq(-1), mpq(3)), (mpq(3), mpq(3)), sq) is None
    assert PY.point_classes(sq, [(1, 1), (0, 1), (3, 3)]) == [1, 0, -1]


@settings(suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.large_base_example])
@given(convex, convex)
def test_overlap_lies_in_both(a, b):
    ov = PY.convex_overlap(a, b)
    for p in ov:
        assert PY.point_classes(a, [p])[0] >= 0
        assert PY.point_classes(b, [p])[0] >= 0
    # vertices of a strictly inside b survive the clip
    for p, c in zip(a, PY.point_classes(b, a)):
        if c == 1:
            assert p in ov
    if ov:
        assert 0 < PY.area2(ov) <= min(PY.area2(a), PY.area2(b))
        assert not PY.polys_separated(a, b)


@settings(suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.large_base_example])
@given(convex, line)
def test_halfplane_split_conserves_area(a, l):
    x, y, c = l
    left = PY.clip_halfplane(a, None, x, y, c)[0]
    right = PY.clip_halfplane(a, None, -x, -y, -c)[0]
    assert PY.area2(left) + PY.area2(right) == PY.area2(a)


@needs_compiled
@settings(suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.large_base_example])
@given(convex, convex, line, st.lists(st.booleans(), min_size=8, max_size=8))
def test_backends_agree(a, b, l, bits):
    import depthcut._ckernels as C

    fl = bits[: len(a)]
    mid = ((b[0][0] + b[1][0]) / 2, (b[0][1] + b[1][1]) / 2)
    cases = [
        ("orient", (a[0], a[1], b[0])),
        ("area2", (a,)),
        ("clip_halfplane", (a, fl, *l)),
        ("clip_halfplane", (a, None, *l)),
        ("clip_convex", (a, fl, b)),
        ("convex_overlap", (a, b)),
        ("polys_separated", (a, b)),
        ("lines_crossing", (b, [l, (mpq(1), mpq(0), -a[0][0])], [0, 1])),
        ("segment_clip", (a[0], a[1], b)),
        ("segments_crossing", (b, [(a[0], a[1]), (b[0], a[-1])], [0, 1])),
        ("relate_polys", (a, l, b, (l[2], l[0], l[1]))),
        ("point_classes", (b, a + [b[0], mid])),
    ]
    for name, args in cases:
        assert getattr(PY, name)(*args) == getattr(C, name)(*args), name
