"""fatrange: spatial indexes for fat orthogonal queries on integer grids.

Structures: a quadtree-subdivision index for 2-d fat-rectangle reporting, a
recursive uniform-grid index for 3-d fat-box reporting, and an octree
stabbing index for fat 3-d boxes, all verified against brute-force oracles.
"""

from .counters import Counters
from .geometry import (AspectBound, Box3, Point2, Point3, Rect2, Universe,
                       decompose_fat_box3, decompose_fat_rect2, normalize_universe)
from .oracle import OracleConfig, brute_range2, brute_range3, brute_spanning, brute_stab3
from .range2d import Range2DIndex, RectClass, build2d, classify_rectangle, query_fat_rect, query_square, spanning_candidates
from .range3d import GridNode3D, build3d, decompose_query_cube, query_cube3d, query_fat_box3
from .smallset import SmallSetIndex, build_small, query_small
from .stabbing import OctreeStabIndex, assign_relevant_nodes, build_stab, query_stab

__version__ = "0.1.0"

__all__ = [
    "AspectBound", "Box3", "Counters", "GridNode3D", "OctreeStabIndex",
    "OracleConfig", "Point2", "Point3", "Range2DIndex", "Rect2", "RectClass",
    "SmallSetIndex", "Universe", "assign_relevant_nodes", "brute_range2",
    "brute_range3", "brute_spanning", "brute_stab3", "build2d", "build3d",
    "build_small", "build_stab", "classify_rectangle", "decompose_fat_box3",
    "decompose_fat_rect2", "decompose_query_cube", "normalize_universe",
    "query_cube3d", "query_fat_box3", "query_fat_rect", "query_small",
    "query_square", "query_stab", "spanning_candidates",
]
