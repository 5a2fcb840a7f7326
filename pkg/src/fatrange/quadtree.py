"""Compressed quadtree, node marking, and the canonical-rectangle subdivision.

The tree is a point quadtree over a power-of-two universe, path-compressed so
that every internal node splits its points across at least two quadrants (the
universe root is kept even when it does not split, so the subdivision always
covers the whole universe cell).  Marking selects every d-th leaf and
propagates upward; each marked node then contributes the guillotine pieces of
its cell minus the cells of its direct marked descendants.
"""

import hashlib
from dataclasses import dataclass, field

from .errors import DuplicatePointError, InputDomainError
from .geometry import Universe
from . import smallset

# Worst case of the guillotine scheme below: centre cut, then per half at most
# two removed cells, each isolated inside its strip with two cuts (3 pieces)
# plus one clean middle strip: 2 * (3 + 1 + 3) = 14.
RECTS_PER_NODE_CAP = 14


class QuadNode:
    __slots__ = ("x0", "y0", "side", "children", "point", "idx", "marked", "special")

    def __init__(self, x0, y0, side, point=None):
        self.x0 = x0
        self.y0 = y0
        self.side = side
        self.children = []
        self.point = point
        self.idx = -1
        self.marked = False
        self.special = False

    @property
    def is_leaf(self):
        return not self.children

    @property
    def cell(self):
        return (self.x0, self.y0, self.side)

    def cell_contains(self, p):
        return self.x0 <= p[0] < self.x0 + self.side and self.y0 <= p[1] < self.y0 + self.side

    def __repr__(self):
        kind = "leaf" if self.is_leaf else "node"
        return f"<{kind} cell=({self.x0},{self.y0},{self.side})>"


def _split_cell(points):
    """Smallest power-of-two aligned square cell containing all points."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span = max(min(xs) ^ max(xs), min(ys) ^ max(ys))
    h = span.bit_length()
    side = 1 << h
    return ((min(xs) >> h) << h, (min(ys) >> h) << h, side)


def _quadrant_split(x0, y0, side, points):
    """Partition points among the four half-side quadrants, Z-ordered."""
    half = side // 2
    buckets = [[], [], [], []]
    for p in points:
        q = ((p[1] - y0 >= half) << 1) | (p[0] - x0 >= half)
        buckets[q].append(p)
    cells = (
        (x0, y0, half),
        (x0 + half, y0, half),
        (x0, y0 + half, half),
        (x0 + half, y0 + half, half),
    )
    return [(cells[q], buckets[q]) for q in range(4) if buckets[q]]


def _subtree(points, fallback_cell):
    if len(points) == 1:
        return QuadNode(*fallback_cell, point=points[0])
    node = QuadNode(*_split_cell(points))
    for cell, pts in _quadrant_split(node.x0, node.y0, node.side, points):
        node.children.append(_subtree(pts, cell))
    return node


def build_compressed_quadtree(points, universe: Universe):
    """Build the compressed tree; returns None for an empty input.

    The root always carries the universe cell.  Every other internal node has
    between two and four children; the root may have a single child when all
    points share one universe quadrant.
    """
    points = list(points)
    if len(set(points)) != len(points):
        raise DuplicatePointError("input points must be distinct")
    for p in points:
        if not universe.contains2(p):
            raise InputDomainError(f"point {p} outside universe of side {universe.side}")
    if not points:
        return None
    root_cell = (0, 0, universe.side)
    if len(points) == 1:
        root = QuadNode(*root_cell, point=points[0])
    else:
        root = QuadNode(*root_cell)
        split = _quadrant_split(0, 0, universe.side, points)
        if len(split) == 1:
            cell, pts = split[0]
            root.children.append(_subtree(pts, cell))
        else:
            for cell, pts in split:
                root.children.append(_subtree(pts, cell))
    for i, node in enumerate(iter_dfs(root)):
        node.idx = i
    return root


def iter_dfs(root):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def iter_leaves(root):
    for node in iter_dfs(root):
        if node.is_leaf:
            yield node


@dataclass
class MarkingState:
    d: int
    marked_leaves: int = 0
    marked_internal: int = 0
    special_count: int = 0

    @property
    def marked_total(self):
        return self.marked_leaves + self.marked_internal


def mark_nodes(root, d: int) -> MarkingState:
    """Mark every d-th leaf (leftmost first), then propagate in post-order:
    a node with two or more marked-or-special children is marked, with
    exactly one it is special."""
    if d < 1:
        raise ValueError("marking stride d must be >= 1")
    state = MarkingState(d=d)
    if root is None:
        return state
    for node in iter_dfs(root):
        node.marked = False
        node.special = False
    for rank, leaf in enumerate(iter_leaves(root)):
        if rank % d == 0:
            leaf.marked = True
            state.marked_leaves += 1

    def visit(node):
        for child in node.children:
            visit(child)
        if node.is_leaf:
            return
        live = sum(1 for c in node.children if c.marked or c.special)
        if live >= 2:
            node.marked = True
            state.marked_internal += 1
        elif live == 1:
            node.special = True
            state.special_count += 1

    visit(root)
    return state


def direct_marked_descendants(node):
    """First marked node at or below each marked-or-special child."""
    out = []
    for child in node.children:
        cur = child
        while cur is not None:
            if cur.marked:
                out.append(cur)
                break
            if not cur.special:
                break
            cur = next(c for c in cur.children if c.marked or c.special)
    return out


def _strip_minus_cell(sx0, sx1, sy0, sy1, w):
    wx0, wy0, wside = w
    wx1, wy1 = wx0 + wside, wy0 + wside
    pieces = []
    if wx0 > sx0:
        pieces.append((sx0, wx0, sy0, sy1))
    if wx1 < sx1:
        pieces.append((wx1, sx1, sy0, sy1))
    if wy0 > sy0:
        pieces.append((wx0, wx1, sy0, wy0))
    if wy1 < sy1:
        pieces.append((wx0, wx1, wy1, sy1))
    return pieces


def _half_pieces(hx0, hx1, y0, y1, cells):
    if not cells:
        return [(hx0, hx1, y0, y1)]
    cells = sorted(cells, key=lambda c: c[1])
    cuts = []
    for c in cells:
        cy0, cy1 = c[1], c[1] + c[2]
        # isolate the cell inside the strip nearest its own quadrant edge
        cuts.append(cy1 if cy0 - y0 <= y1 - cy1 else cy0)
    bounds = sorted({y0, y1, *cuts})
    pieces = []
    for sy0, sy1 in zip(bounds, bounds[1:]):
        inside = [c for c in cells if c[1] >= sy0 and c[1] + c[2] <= sy1]
        if not inside:
            pieces.append((hx0, hx1, sy0, sy1))
        else:
            pieces.extend(_strip_minus_cell(hx0, hx1, sy0, sy1, inside[0]))
    return pieces


def guillotine_pieces(cell, removed):
    """Cut `cell` minus the removed sub-cells into at most 14 rectangles.

    Removed cells are disjoint and each lies inside a distinct quadrant, so a
    centre cut splits them two-and-two; each half then needs one horizontal
    cut per cell plus two vertical cuts to carve the cell out of its strip.
    All rectangles are half-open.
    """
    x0, y0, side = cell
    x1, y1 = x0 + side, y0 + side
    if not removed:
        return [(x0, x1, y0, y1)]
    xmid = x0 + side // 2
    left = [c for c in removed if c[0] + c[2] <= xmid]
    right = [c for c in removed if c[0] >= xmid]
    assert len(left) + len(right) == len(removed)
    pieces = _half_pieces(x0, xmid, y0, y1, left)
    pieces += _half_pieces(xmid, x1, y0, y1, right)
    return [p for p in pieces if p[0] < p[1] and p[2] < p[3]]


class CanonicalRectangle:
    """One half-open piece of the subdivision, with its point lists."""

    __slots__ = ("x_lo", "x_hi", "y_lo", "y_hi", "idx", "owner", "points",
                 "lx", "ly", "top", "bottom", "leftmost", "rightmost", "small")

    def __init__(self, bounds, idx, owner):
        self.x_lo, self.x_hi, self.y_lo, self.y_hi = bounds
        self.idx = idx
        self.owner = owner
        self.points = []
        self.lx = []
        self.ly = []
        self.top = None
        self.bottom = None
        self.leftmost = None
        self.rightmost = None
        self.small = None

    def contains(self, p):
        return self.x_lo <= p[0] < self.x_hi and self.y_lo <= p[1] < self.y_hi

    @property
    def closed(self):
        """(left, right, bot, top) on the inclusive integer grid."""
        return (self.x_lo, self.x_hi - 1, self.y_lo, self.y_hi - 1)

    def finalize(self, small_cap=None):
        self.lx = sorted(self.points)
        self.ly = sorted(self.points, key=lambda p: (p[1], p[0]))
        if self.points:
            self.leftmost = self.lx[0]
            self.rightmost = self.lx[-1]
            self.bottom = self.ly[0]
            self.top = self.ly[-1]
        self.small = smallset.build_small(self.points, cap=small_cap)

    def extremes(self):
        if not self.points:
            return []
        return list({self.top, self.bottom, self.leftmost, self.rightmost})

    def __repr__(self):
        return f"<rect #{self.idx} [{self.x_lo},{self.x_hi})x[{self.y_lo},{self.y_hi}) n={len(self.points)}>"


@dataclass
class Subdivision:
    universe: Universe
    d: int
    root: object
    rects: list = field(default_factory=list)
    rect_of_point: dict = field(default_factory=dict)
    nav: dict = field(default_factory=dict)  # node idx -> (dm list, piece idx list)
    marked_node_count: int = 0

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"U={self.universe.side};d={self.d};".encode())
        for r in self.rects:
            h.update(f"{r.x_lo},{r.x_hi},{r.y_lo},{r.y_hi}:{r.points};".encode())
        return h.hexdigest()


def build_subdivision(root, marking: MarkingState, d: int, small_cap=None,
                      universe: Universe = None) -> Subdivision:
    """Emit the canonical rectangles of every marked node (root force-marked)
    and assign each point to the unique rectangle containing it."""
    if universe is None and root is not None:
        universe = Universe(root.side.bit_length() - 1)
    sub = Subdivision(universe=universe, d=d, root=root)
    if root is None:
        return sub
    if small_cap is None:
        small_cap = 6 * d

    def is_owner(node):
        return node.marked or node is root

    def emit(node):
        dms = direct_marked_descendants(node) if not node.is_leaf else []
        if node.is_leaf:
            pieces = [(node.x0, node.x0 + node.side, node.y0, node.y0 + node.side)]
        else:
            pieces = guillotine_pieces(node.cell, [dm.cell for dm in dms])
        rects = []
        for b in pieces:
            rect = CanonicalRectangle(b, idx=len(sub.rects), owner=node.idx)
            sub.rects.append(rect)
            rects.append(rect)
        # points owned by this node: leaves reachable without entering a
        # marked descendant's subtree
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur is not node and cur.marked:
                continue
            if cur.is_leaf:
                p = cur.point
                for rect in rects:
                    if rect.contains(p):
                        rect.points.append(p)
                        sub.rect_of_point[p] = rect.idx
                        break
                else:
                    raise AssertionError(f"point {p} fell outside owner pieces")
                continue
            stack.extend(cur.children)
        for rect in rects:
            rect.finalize(small_cap=small_cap)
        sub.nav[node.idx] = ([(dm.cell, dm.idx) for dm in dms], [r.idx for r in rects])
        sub.marked_node_count += 1
        for dm in dms:
            emit(dm)

    emit(root)
    return sub


def point_locate(sub: Subdivision, p, counters=None):
    """Descend from the root through marked nodes to the rectangle holding p."""
    if sub.root is None or not sub.universe.contains2(p):
        return None
    node_idx = sub.root.idx
    while True:
        if counters is not None:
            counters.nodes_visited += 1
        dms, piece_ids = sub.nav[node_idx]
        descended = False
        for (cx0, cy0, cside), child_idx in dms:
            if cx0 <= p[0] < cx0 + cside and cy0 <= p[1] < cy0 + cside:
                node_idx = child_idx
                descended = True
                break
        if descended:
            continue
        for rid in piece_ids:
            if sub.rects[rid].contains(p):
                return sub.rects[rid]
        return None
