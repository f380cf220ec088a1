"""Cut triangles and segments in 3-space into fragments that admit a depth order."""

from .cutset import CutSet, apply_cuts, complete_cut_set_degenerate, crossing_schedule, cut_set_for, exact_small_cut_set, greedy_cut_set, trivial_cut_set
from .depthgraph import DepthCycle, DepthGraph, build_depth_graph, find_depth_order, minimal_cycle, verify_depth_order
from .geom import ConvexFragment, IntersectionError, Segment3, Triangle3, ValidationError, relation
from .pipeline import FragmentationResult, cut_lines, cut_triangles, cut_triangles_ksensitive
from .scenes import GENERATORS, Scene

__version__ = "0.1.0"

__all__ = [
    "ConvexFragment",
    "CutSet",
    "DepthCycle",
    "DepthGraph",
    "FragmentationResult",
    "GENERATORS",
    "IntersectionError",
    "Scene",
    "Segment3",
    "Triangle3",
    "ValidationError",
    "apply_cuts",
    "build_depth_graph",
    "complete_cut_set_degenerate",
    "crossing_schedule",
    "cut_lines",
    "cut_set_for",
    "cut_triangles",
    "cut_triangles_ksensitive",
    "exact_small_cut_set",
    "find_depth_order",
    "greedy_cut_set",
    "minimal_cycle",
    "relation",
    "trivial_cut_set",
    "verify_depth_order",
]
