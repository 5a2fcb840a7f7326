"""Brute-force reference implementations.

These are the semantic definition of every query in the library; the real
structures are tested for set-equality against them.  They are vectorized
with numpy so the test suites stay fast, but contain no indexing cleverness.
"""

from dataclasses import dataclass

import numpy as np

from .errors import OracleGuardError
from .geometry import Box3, Rect2


@dataclass(frozen=True)
class OracleConfig:
    """Feasibility guards; oracles refuse anything bigger."""

    max_points: int = 100_000
    max_boxes: int = 100_000
    max_octree_log2: int = 8

    def __post_init__(self):
        if self.max_points <= 0 or self.max_boxes <= 0 or self.max_octree_log2 <= 0:
            raise ValueError("oracle guards must be positive")


DEFAULT_CONFIG = OracleConfig()


def _guard(n, limit, what):
    if n > limit:
        raise OracleGuardError(f"{what} size {n} exceeds oracle guard {limit}")


class PointArray2:
    """Column view of a 2-d point list for repeated brute scans."""

    def __init__(self, points):
        self.points = list(points)
        arr = np.asarray(self.points if self.points else np.empty((0, 2)), dtype=np.int64)
        self.xs = arr[:, 0] if len(arr) else np.empty(0, dtype=np.int64)
        self.ys = arr[:, 1] if len(arr) else np.empty(0, dtype=np.int64)

    def scan(self, q: Rect2):
        if not self.points:
            return []
        mask = (self.xs >= q.x_lo) & (self.xs <= q.x_hi) & (self.ys >= q.y_lo) & (self.ys <= q.y_hi)
        return [self.points[i] for i in np.nonzero(mask)[0]]


class PointArray3:
    def __init__(self, points):
        self.points = list(points)
        arr = np.asarray(self.points if self.points else np.empty((0, 3)), dtype=np.int64)
        self.cols = [arr[:, i] if len(arr) else np.empty(0, dtype=np.int64) for i in range(3)]

    def scan(self, q: Box3):
        if not self.points:
            return []
        mask = np.ones(len(self.points), dtype=bool)
        for col, lo, hi in zip(self.cols, q.los, q.his):
            mask &= (col >= lo) & (col <= hi)
        return [self.points[i] for i in np.nonzero(mask)[0]]


def brute_range2(points, q: Rect2, config: OracleConfig = DEFAULT_CONFIG):
    """All points inside the closed rectangle, by linear scan."""
    if isinstance(points, PointArray2):
        _guard(len(points.points), config.max_points, "point set")
        return points.scan(q)
    _guard(len(points), config.max_points, "point set")
    return [p for p in points if q.contains(p)]


def brute_range3(points, q: Box3, config: OracleConfig = DEFAULT_CONFIG):
    """3-d analogue of brute_range2."""
    if isinstance(points, PointArray3):
        _guard(len(points.points), config.max_points, "point set")
        return points.scan(q)
    _guard(len(points), config.max_points, "point set")
    return [p for p in points if q.contains(p)]


class BoxArray3:
    """Column view of a box list for repeated stabbing scans."""

    def __init__(self, boxes):
        self.boxes = list(boxes)
        if self.boxes:
            lo = np.array([b.los for b in self.boxes], dtype=np.int64)
            hi = np.array([b.his for b in self.boxes], dtype=np.int64)
        else:
            lo = hi = np.empty((0, 3), dtype=np.int64)
        self.lo, self.hi = lo, hi

    def scan(self, q):
        if not self.boxes:
            return []
        mask = np.all((self.lo <= q) & (self.hi >= q), axis=1)
        return [i for i in np.nonzero(mask)[0]]


def brute_stab3(boxes, q, config: OracleConfig = DEFAULT_CONFIG):
    """Indices of all boxes that contain the probe point (closed bounds)."""
    if isinstance(boxes, BoxArray3):
        _guard(len(boxes.boxes), config.max_boxes, "box set")
        return boxes.scan(q)
    _guard(len(boxes), config.max_boxes, "box set")
    return [i for i, b in enumerate(boxes) if b.contains(q)]


class SpanningArrays:
    """Column view of a subdivision's rectangle bounds for repeated
    vectorized spanning scans (same inequalities as brute_spanning)."""

    def __init__(self, subdivision):
        self.rects = subdivision.rects
        n = len(self.rects)
        self.left = np.fromiter((r.x_lo for r in self.rects), np.int64, n)
        self.right = np.fromiter((r.x_hi - 1 for r in self.rects), np.int64, n)
        self.bot = np.fromiter((r.y_lo for r in self.rects), np.int64, n)
        self.top = np.fromiter((r.y_hi - 1 for r in self.rects), np.int64, n)

    def scan(self, q: Rect2):
        if not len(self.rects):
            return []
        overlap = ((self.right >= q.x_lo) & (self.left <= q.x_hi)
                   & (self.top >= q.y_lo) & (self.bot <= q.y_hi))
        corner = np.zeros(len(self.rects), dtype=bool)
        for cx, cy in q.corners():
            corner |= ((self.left <= cx) & (cx <= self.right)
                       & (self.bot <= cy) & (cy <= self.top))
        crosses = (((self.bot <= q.y_lo) & (self.top >= q.y_hi))
                   | ((self.left <= q.x_lo) & (self.right >= q.x_hi)))
        mask = overlap & ~corner & crosses
        return [self.rects[i] for i in np.nonzero(mask)[0]]


def brute_spanning(subdivision, q: Rect2):
    """Canonical rectangles crossing two opposite sides of a square query
    while holding none of its corners.

    Deliberately written as raw inequalities, independent of the structure
    module's classifier, so the two act as a cross-check on each other.
    """
    if not q.is_square():
        raise ValueError("spanning oracle is defined for square queries")
    if isinstance(subdivision, SpanningArrays):
        return subdivision.scan(q)
    out = []
    for rect in subdivision.rects:
        left, right = rect.x_lo, rect.x_hi - 1
        bot, top = rect.y_lo, rect.y_hi - 1
        if right < q.x_lo or left > q.x_hi or top < q.y_lo or bot > q.y_hi:
            continue
        corner = False
        for cx, cy in q.corners():
            if left <= cx <= right and bot <= cy <= top:
                corner = True
                break
        if corner:
            continue
        crosses_tb = bot <= q.y_lo and top >= q.y_hi
        crosses_lr = left <= q.x_lo and right >= q.x_hi
        if crosses_tb or crosses_lr:
            out.append(rect)
    return out


def brute_relevant_nodes(box: Box3, log2_universe: int, config: OracleConfig = DEFAULT_CONFIG):
    """All octree nodes holding `box` under corner-containment assignment.

    Enumerates the full uncompressed octree level by level (restricted to
    cells that overlap the box, which is exhaustive: a disjoint cell cannot
    contribute a corner).  A node qualifies when the box contains one of the
    cell's extreme grid corners and no ancestor cell's corner.
    """
    if log2_universe > config.max_octree_log2:
        raise OracleGuardError(
            f"octree enumeration above 2^{config.max_octree_log2} is guarded"
        )

    los, his = box.los, box.his

    def cell_corner_in(level, idx):
        side = 1 << (log2_universe - level)
        for bits in range(8):
            ok = True
            for axis in range(3):
                base = idx[axis] * side
                c = base + side - 1 if (bits >> axis) & 1 else base
                if not (los[axis] <= c <= his[axis]):
                    ok = False
                    break
            if ok:
                return True
        return False

    out = []
    for level in range(log2_universe + 1):
        side = 1 << (log2_universe - level)
        ranges = []
        for axis in range(3):
            lo_i = max(0, los[axis] // side)
            hi_i = min((1 << level) - 1, his[axis] // side)
            ranges.append(range(lo_i, hi_i + 1))
        for ix in ranges[0]:
            for iy in ranges[1]:
                for iz in ranges[2]:
                    idx = (ix, iy, iz)
                    if not cell_corner_in(level, idx):
                        continue
                    blocked = False
                    for up in range(1, level + 1):
                        anc = (ix >> up, iy >> up, iz >> up)
                        if cell_corner_in(level - up, anc):
                            blocked = True
                            break
                    if not blocked:
                        out.append((level, idx))
    return out
