"""Fat-rectangle range reporting in the plane.

A query square is answered in three legs against the canonical-rectangle
subdivision: rectangles holding a query corner are found by point location
and answered from their small-set indexes; rectangles crossing two opposite
sides are pulled from four interval reporters over (left, right, top/bot)
side tuples and filtered by the classifier; everything else with a point in
the query exposes one of its four extreme points to the representative
reporter, after which a single sorted-list walk inside the rectangle emits
its members.  Fat rectangles decompose into a constant number of squares
first.
"""

import enum
import math

from .counters import Counters
from .errors import ContractError
from .geometry import AspectBound, Rect2, Universe, decompose_fat_rect2, normalize_universe
from .quadtree import (RECTS_PER_NODE_CAP, build_compressed_quadtree, build_subdivision,
                       mark_nodes, point_locate)
from .reporters import RangeTree2D, VectorScan3D


class RectClass(enum.Enum):
    CORNER = "corner"
    INTERNAL = "internal"
    SPANNING = "spanning"
    DISJOINT = "disjoint"


def _closed_bounds(rect):
    if hasattr(rect, "closed"):
        return rect.closed
    if isinstance(rect, Rect2):
        return (rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi)
    return tuple(rect)


def classify_rectangle(rect, q: Rect2) -> RectClass:
    """Classify a rectangle against a query: corner if it holds a query
    corner, spanning if it covers the query's full extent on one axis while
    holding no corner, internal otherwise.  Covering counts as crossing, so
    the classes are exhaustive and mutually exclusive for every overlap."""
    left, right, bot, top = _closed_bounds(rect)
    if right < q.x_lo or left > q.x_hi or top < q.y_lo or bot > q.y_hi:
        return RectClass.DISJOINT
    for cx, cy in q.corners():
        if left <= cx <= right and bot <= cy <= top:
            return RectClass.CORNER
    crosses_tb = bot <= q.y_lo and top >= q.y_hi
    crosses_lr = left <= q.x_lo and right >= q.x_hi
    if crosses_tb or crosses_lr:
        return RectClass.SPANNING
    return RectClass.INTERNAL


class Range2DIndex:
    def __init__(self, points, universe, d, sub, rep_reporter, side_reporters):
        self.points = points
        self.universe = universe
        self.d = d
        self.sub = sub
        self.rep_reporter = rep_reporter
        self.r1, self.r2, self.r3, self.r4 = side_reporters

    @property
    def rects(self):
        return self.sub.rects

    def digest(self):
        return self.sub.digest()


def build2d(points, universe: Universe = None, d: int = None, *,
            rep_factory=RangeTree2D, side_factory=VectorScan3D,
            small_cap=None) -> Range2DIndex:
    """Build the full 2-d index: subdivision, representative reporter, and
    the four side-tuple reporters."""
    points = list(points)
    if universe is None:
        universe = normalize_universe(points) if points else Universe(0)
    if d is None:
        d = max(1, int(math.log2(len(points)))) if points else 1
    root = build_compressed_quadtree(points, universe)
    marking = mark_nodes(root, d)
    sub = build_subdivision(root, marking, d, small_cap=small_cap, universe=universe)

    rep_items = []
    for rect in sub.rects:
        for p in sorted(rect.extremes()):
            rep_items.append((p, rect.idx))
    rep_reporter = rep_factory(rep_items)

    side_reporters = []
    for key in (lambda c: (c[0], c[1], c[3]),   # (left, right, top)
                lambda c: (c[0], c[1], c[2]),   # (left, right, bot)
                lambda c: (c[0], c[2], c[3]),   # (left, bot, top)
                lambda c: (c[1], c[2], c[3])):  # (right, bot, top)
        side_reporters.append(side_factory([(key(r.closed), r.idx) for r in sub.rects]))
    return Range2DIndex(points, universe, d, sub, rep_reporter, side_reporters)


def spanning_candidates(idx: Range2DIndex, q: Rect2, counters: Counters = None):
    """Rectangles that truly span the square query.

    The four side reporters return every rectangle with a side spanning the
    query, which also catches rectangles holding two query corners; those are
    filtered out here and handled by the corner leg instead.
    """
    if not q.is_square():
        raise ContractError("spanning candidates are defined for square queries only")
    a, b, c, d = q.x_lo, q.x_hi, q.y_lo, q.y_hi
    raw = []
    idx.r1.query(((None, a), (b, None), (c, d)), out=raw)
    idx.r2.query(((None, a), (b, None), (c, d)), out=raw)
    idx.r3.query(((a, b), (None, c), (d, None)), out=raw)
    idx.r4.query(((a, b), (None, c), (d, None)), out=raw)
    if counters is not None:
        counters.structures_probed += 4
        counters.spanning_candidates += len(raw)
        counters.candidates_examined += len(raw)
    out = []
    for rid in dict.fromkeys(raw):
        rect = idx.rects[rid]
        if classify_rectangle(rect, q) is RectClass.SPANNING:
            out.append(rect)
    if counters is not None:
        counters.spanning_true += len(out)
    return out


def _walk_internal(rect, q, counters):
    """Report rect's points in q by walking the sorted list on the axis the
    query cuts; for a true internal rectangle every touched point matches."""
    a, b, c, d = q.x_lo, q.x_hi, q.y_lo, q.y_hi
    left, right, bot, top = rect.closed
    out = []
    if a > left or b < right:
        lo = _bisect_points(rect.lx, a, axis=0)
        hi = _bisect_points_hi(rect.lx, b, axis=0)
        touched = hi - lo
        for p in rect.lx[lo:hi]:
            if c <= p[1] <= d:
                out.append(p)
    elif c > bot or d < top:
        lo = _bisect_points(rect.ly, c, axis=1)
        hi = _bisect_points_hi(rect.ly, d, axis=1)
        touched = hi - lo
        for p in rect.ly[lo:hi]:
            if a <= p[0] <= b:
                out.append(p)
    else:
        touched = len(rect.lx)
        out.extend(rect.lx)
    if counters is not None:
        counters.structures_probed += 1
        counters.candidates_examined += touched
        counters.walk_touched_max = max(counters.walk_touched_max, touched)
        counters.walk_excess_max = max(counters.walk_excess_max, touched - len(out))
        counters.internal_rects += 1
    return out


def _bisect_points(pts, val, axis):
    lo, hi = 0, len(pts)
    while lo < hi:
        mid = (lo + hi) // 2
        if pts[mid][axis] < val:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _bisect_points_hi(pts, val, axis):
    lo, hi = 0, len(pts)
    while lo < hi:
        mid = (lo + hi) // 2
        if pts[mid][axis] <= val:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _query_square_into(idx, q, hit, counters):
    from . import smallset

    if idx.sub.root is None:
        return
    a, b, c, d = q.x_lo, q.x_hi, q.y_lo, q.y_hi

    # internal rectangles via representative points
    reps = idx.rep_reporter.query(a, b, c, d)
    if counters is not None:
        counters.structures_probed += 1
        counters.candidates_examined += len(reps)
    for rid in dict.fromkeys(reps):
        rect = idx.rects[rid]
        if classify_rectangle(rect, q) is not RectClass.INTERNAL:
            continue
        for p in _walk_internal(rect, q, counters):
            if counters is not None:
                counters.raw_multiplicity += 1
            hit.add(p)

    # corner rectangles via point location
    corner_rects = {}
    for corner in dict.fromkeys(q.corners()):
        rect = point_locate(idx.sub, corner, counters)
        if rect is not None:
            corner_rects[rect.idx] = rect
    if counters is not None:
        counters.corner_rects += len(corner_rects)
    small_q = Rect2(a, b, c, d)
    for rect in corner_rects.values():
        got = smallset.query_small(rect.small, small_q, counters)
        if counters is not None:
            counters.raw_multiplicity += len(got)
        hit.update(got)

    # spanning rectangles
    for rect in spanning_candidates(idx, q, counters):
        got = smallset.query_small(rect.small, small_q, counters)
        if counters is not None:
            counters.raw_multiplicity += len(got)
        hit.update(got)


def query_square(idx: Range2DIndex, q: Rect2, counters: Counters = None):
    """All stored points in the closed square q."""
    if not q.is_square():
        raise ContractError("query_square requires a square range")
    hit = set()
    _query_square_into(idx, q, hit, counters)
    out = sorted(hit)
    if counters is not None:
        counters.reported_k = len(out)
    return out


def query_fat_rect(idx: Range2DIndex, q: Rect2, bound: AspectBound,
                   counters: Counters = None):
    """All stored points in a fat closed rectangle (union of square covers;
    overlap between covers is deduplicated here)."""
    hit = set()
    for square in decompose_fat_rect2(q, bound):
        _query_square_into(idx, square, hit, counters)
    out = sorted(hit)
    if counters is not None:
        counters.reported_k = len(out)
    return out


SPANNING_CAP = 2 * RECTS_PER_NODE_CAP
