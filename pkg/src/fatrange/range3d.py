"""3-d fat-box reporting over a recursive uniform grid.

Each node splits its cube into r^3 cells (r is a power of two derived from
the node side and the split parameter b, van-Emde-Boas style).  Nonempty
cells recurse; the cell labels themselves are indexed by another node of the
same kind so a grid-aligned core can be answered by recursing on labels; and
each of the 3r grid slabs carries a point store for the off-grid residue of
a query.  A query descends while it fits inside one cell, then splits into
at most one aligned core plus at most six residual pieces, one per slab.
"""

from dataclasses import dataclass

from .counters import Counters
from .errors import ContractError, DuplicatePointError, InputDomainError
from .geometry import (AspectBound, Box3, Universe, decompose_fat_box3,
                       normalize_universe)
from .reporters import SlabPoints3D

BASE_SIDE = 8
BASE_COUNT = 32


def branch_factor(side: int, b: int) -> int:
    """r = side^(1/b) rounded to a power of two, at least 2."""
    k = side.bit_length() - 1
    return 1 << max(1, round(k / b))


def max_probe_depth(side: int, b: int, base_side: int = BASE_SIDE) -> int:
    """Levels in the chain side -> r(side) -> r(r(side)) -> ... down to the
    flat base; bounds both label descents and decompose rounds per query."""
    depth = 0
    while side > base_side:
        depth += 1
        side = branch_factor(side, b)
    return depth


class GridNode3D:
    __slots__ = ("origin", "side", "b", "mode", "points",
                 "r", "cell_side", "cells", "children", "labels", "slabs", "flat")

    def __init__(self, origin, side, b):
        self.origin = origin
        self.side = side
        self.b = b
        self.mode = "flat"
        self.points = []
        self.r = 1
        self.cell_side = side
        self.cells = None
        self.children = None
        self.labels = None
        self.slabs = None
        self.flat = None

    def label_of(self, p):
        return tuple((c - o) // self.cell_side for c, o in zip(p, self.origin))

    def __repr__(self):
        return f"<grid3d {self.mode} side={self.side} n={len(self.points)}>"


@dataclass
class BuildStats3D:
    n: int = 0
    point_refs: int = 0
    label_refs: int = 0
    grid_levels: int = 0
    nodes: int = 0


def _build_node(points, origin, side, b, base_side, base_count, depth, stats, counting):
    node = GridNode3D(origin, side, b)
    node.points = points
    stats.nodes += 1
    if side <= base_side or len(points) <= base_count:
        node.flat = SlabPoints3D(points)
        if counting:
            stats.point_refs += len(points)
        return node
    node.mode = "grid"
    node.r = branch_factor(side, b)
    node.cell_side = side // node.r
    stats.grid_levels = max(stats.grid_levels, depth + 1)
    cells = {}
    for p in points:
        cells.setdefault(node.label_of(p), []).append(p)
    node.cells = cells
    if counting:
        stats.point_refs += len(points)
    node.children = {}
    for label, pts in cells.items():
        child_origin = tuple(o + i * node.cell_side for o, i in zip(node.origin, label))
        node.children[label] = _build_node(pts, child_origin, node.cell_side, b,
                                           base_side, base_count, depth + 1, stats, counting)
    label_pts = sorted(cells)
    if counting:
        stats.label_refs += len(label_pts)
    node.labels = _build_node(label_pts, (0, 0, 0), node.r, b,
                              base_side, base_count, depth + 1, stats, False)
    node.slabs = {}
    for axis in range(3):
        buckets = {}
        for p in points:
            buckets.setdefault((p[axis] - node.origin[axis]) // node.cell_side, []).append(p)
        for i, pts in buckets.items():
            node.slabs[(axis, i)] = SlabPoints3D(pts)
    if counting:
        stats.point_refs += 3 * len(points)
    return node


def build3d(points, universe: Universe = None, b: int = 2, *,
            base_side: int = BASE_SIDE, base_count: int = BASE_COUNT):
    """Build the recursion; returns (root, stats)."""
    points = list(points)
    if len(set(points)) != len(points):
        raise DuplicatePointError("input points must be distinct")
    if b < 2:
        raise InputDomainError("split parameter b must be >= 2")
    if universe is None:
        universe = normalize_universe(points) if points else Universe(0)
    for p in points:
        if not universe.contains3(p):
            raise InputDomainError(f"point {p} outside universe of side {universe.side}")
    stats = BuildStats3D(n=len(points))
    root = _build_node(points, (0, 0, 0), universe.side, b,
                       base_side, base_count, 0, stats, True)
    return root, stats


def _aligned_range(lo, hi1, origin, cell):
    """Aligned [al, ah) inside the half-open [lo, hi1); al > ah when the
    range holds no cell boundary at all."""
    al = origin + cell * (-(-(lo - origin) // cell))
    ah = origin + cell * ((hi1 - origin) // cell)
    return al, ah


def _decompose(node, q: Box3):
    """Split a box (not inside one cell) into slab pieces and an aligned
    core.  Returns (core_label_ranges or None, [(axis, slab_idx, Box3)]).

    Pieces for an axis span the cores of earlier axes and the full query
    range on later axes; an axis without any boundary contributes no side
    pieces and spans the whole range inside one slab, so when all other
    cores are nonempty the core region itself is routed to that axis's slab
    reporter instead of the label recursion.
    """
    c = node.cell_side
    los = q.los
    hi1s = tuple(h + 1 for h in q.his)
    core = []
    aligned = []
    for axis in range(3):
        al, ah = _aligned_range(los[axis], hi1s[axis], node.origin[axis], c)
        if al > ah:
            core.append((los[axis], hi1s[axis]))
            aligned.append(False)
        else:
            core.append((al, ah))
            aligned.append(True)

    pieces = []

    def emit(axis, lo, hi1):
        if lo >= hi1:
            return
        rngs = []
        for a2 in range(3):
            if a2 == axis:
                rngs.append((lo, hi1))
            elif a2 < axis:
                rngs.append(core[a2])
            else:
                rngs.append((los[a2], hi1s[a2]))
        if any(r0 >= r1 for r0, r1 in rngs):
            return
        slab_idx = (lo - node.origin[axis]) // c
        pieces.append((axis, slab_idx,
                       Box3(rngs[0][0], rngs[0][1] - 1, rngs[1][0], rngs[1][1] - 1,
                            rngs[2][0], rngs[2][1] - 1)))

    for axis in range(3):
        if not aligned[axis]:
            continue
        al, ah = core[axis]
        emit(axis, los[axis], al)
        emit(axis, ah, hi1s[axis])

    if all(r0 < r1 for r0, r1 in core):
        if all(aligned):
            label_ranges = tuple(
                ((r0 - node.origin[a]) // c, (r1 - node.origin[a]) // c - 1)
                for a, (r0, r1) in enumerate(core)
            )
            return label_ranges, pieces
        # core exists but is pinned inside one slab of a boundary-free axis
        axis = aligned.index(False)
        slab_idx = (los[axis] - node.origin[axis]) // c
        pieces.append((axis, slab_idx,
                       Box3(core[0][0], core[0][1] - 1, core[1][0], core[1][1] - 1,
                            core[2][0], core[2][1] - 1)))
    return None, pieces


def _fits_one_cell(node, q: Box3):
    c = node.cell_side
    label = []
    for lo, hi, o in zip(q.los, q.his, node.origin):
        il, ih = (lo - o) // c, (hi - o) // c
        if il != ih:
            return None
        label.append(il)
    return tuple(label)


def _fits_one_cell_bitwise(node, q: Box3):
    # cells are globally aligned powers of two, so agreement of the high
    # bits decides containment without division
    shift = node.cell_side.bit_length() - 1
    spread = (q.x_lo ^ q.x_hi) | (q.y_lo ^ q.y_hi) | (q.z_lo ^ q.z_hi)
    if spread >> shift:
        return None
    return tuple((lo - o) >> shift for lo, o in zip(q.los, node.origin))


def decompose_query_cube(node: GridNode3D, q: Box3):
    """Public view of the split: (aligned core box or None, piece boxes)."""
    if node.mode != "grid":
        raise ContractError("decompose is defined on grid nodes")
    if _fits_one_cell(node, q) is not None:
        raise ContractError("query fits in a single grid cell; descend instead")
    label_ranges, pieces = _decompose(node, q)
    core_box = None
    if label_ranges is not None:
        c = node.cell_side
        lo = [node.origin[a] + r0 * c for a, (r0, _) in enumerate(label_ranges)]
        hi = [node.origin[a] + (r1 + 1) * c - 1 for a, (_, r1) in enumerate(label_ranges)]
        core_box = Box3(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2])
    return core_box, [p for _, _, p in pieces]


def _query_box(node, q: Box3, hit, counters, bitwise):
    if counters is not None:
        counters.nodes_visited += 1
    if node.mode == "flat":
        got = node.flat.query(q)
        if counters is not None:
            counters.structures_probed += 1
            counters.candidates_examined += len(node.points)
            counters.raw_multiplicity += len(got)
        hit.update(got)
        return
    label = _fits_one_cell_bitwise(node, q) if bitwise else _fits_one_cell(node, q)
    if label is not None:
        child = node.children.get(label)
        if child is not None:
            _query_box(child, q, hit, counters, bitwise)
        return
    label_ranges, pieces = _decompose(node, q)
    for axis, idx, box in pieces:
        if counters is not None:
            counters.slab_probes += 1
            counters.structures_probed += 1
        slab = node.slabs.get((axis, idx))
        if slab is None:
            continue
        got = slab.query(box)
        if counters is not None:
            counters.candidates_examined += len(slab)
            counters.raw_multiplicity += len(got)
        hit.update(got)
    if label_ranges is not None:
        if counters is not None:
            counters.label_descents += 1
        lq = Box3(label_ranges[0][0], label_ranges[0][1], label_ranges[1][0],
                  label_ranges[1][1], label_ranges[2][0], label_ranges[2][1])
        found_labels = set()
        _query_box(node.labels, lq, found_labels, counters, bitwise)
        for lab in found_labels:
            members = node.cells[lab]
            if counters is not None:
                counters.candidates_examined += len(members)
                counters.raw_multiplicity += len(members)
            hit.update(members)


def _clip_to_universe(q: Box3, side: int):
    lo = [max(0, v) for v in q.los]
    hi = [min(side - 1, v) for v in q.his]
    if any(l > h for l, h in zip(lo, hi)):
        return None
    return Box3(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2])


def query_cube3d(node: GridNode3D, q: Box3, counters: Counters = None,
                 lca_jump: bool = False):
    """All stored points in the closed cube q (clipped to the universe)."""
    if not q.is_cube():
        raise ContractError("query_cube3d requires a cube range")
    return _query_public(node, q, counters, lca_jump)


def _query_public(node, q, counters, lca_jump):
    clipped = _clip_to_universe(q, node.side)
    hit = set()
    if clipped is not None:
        _query_box(node, clipped, hit, counters, lca_jump)
    out = sorted(hit)
    if counters is not None:
        counters.reported_k = len(out)
    return out


def query_fat_box3(node: GridNode3D, q: Box3, bound: AspectBound,
                   counters: Counters = None, lca_jump: bool = False):
    """All stored points in a fat closed box, via its cube cover."""
    hit = set()
    for cube in decompose_fat_box3(q, bound):
        clipped = _clip_to_universe(cube, node.side)
        if clipped is not None:
            _query_box(node, clipped, hit, counters, lca_jump)
    out = sorted(hit)
    if counters is not None:
        counters.reported_k = len(out)
    return out


def four_sided_to_cube(x_lo, x_hi1, y_top1, z_top1, universe_side):
    """Equivalent cube for the half-open region
    [x_lo, x_hi1) x (-inf, y_top1) x (-inf, z_top1), valid whenever the
    x-width exceeds the (unstretched) universe side."""
    width = x_hi1 - x_lo
    if width <= universe_side:
        raise ContractError("reduction requires x-width greater than the universe side")
    return Box3(x_lo, x_hi1 - 1, y_top1 - width, y_top1 - 1, z_top1 - width, z_top1 - 1)


def stretch_points_x(points, universe_side):
    """Stretch the x axis so any 4-sided query becomes wide enough to reduce."""
    return [(p[0] * universe_side, p[1], p[2]) for p in points]
