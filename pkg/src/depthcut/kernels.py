"""Backend selection for the exact kernels.

The compiled ``_ckernels`` extension is used when it imports cleanly;
otherwise the pure-Python ``_pykernels`` module is used.  ``set_backend``
switches at runtime (tests and the kernel benchmark use it to compare both).
"""

from __future__ import annotations

import importlib

from . import _pykernels

_NAMES = (
    "orient",
    "area2",
    "clip_halfplane",
    "clip_convex",
    "convex_overlap",
    "polys_separated",
    "lines_crossing",
    "segment_clip",
    "segments_crossing",
    "relate_polys",
    "point_classes",
)


def _load_compiled():
    try:
        mod = importlib.import_module("depthcut._ckernels")
    except ImportError:
        return None
    if any(not hasattr(mod, n) for n in _NAMES):
        return None
    return mod


_compiled = _load_compiled()
_active = None


def available() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def backend() -> str:
    return _active.BACKEND if _active is not None else "none"


def set_backend(name: str) -> None:
    """Select ``"compiled"``, ``"python"`` or ``"auto"``."""
    global _active
    if name == "auto":
        mod = _compiled or _pykernels
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        mod = _compiled
    elif name == "python":
        mod = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    _active = mod
    g = globals()
    for n in _NAMES:
        g[n] = getattr(mod, n)


set_backend("auto")
edge_line = _pykernels.edge_line
