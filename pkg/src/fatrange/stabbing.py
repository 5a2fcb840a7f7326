"""Stabbing queries on fat 3-d boxes via a lazily materialized octree.

A box is assigned to every octree node whose cell has an extreme grid corner
inside the box while no ancestor cell does; those nodes form an antichain,
so a root-to-leaf walk meets each stored box at most once per assignment.
At a node the box is filed under every cell corner it covers, keyed by the
corner's orientation, which turns the stabbing test for probes inside the
cell into a per-corner dominance test against the opposite box corner.
Only nodes that receive assignments are materialized; the query walk
addresses them arithmetically by level and cell index.
"""

from dataclasses import dataclass, field

from .counters import Counters
from .errors import FatnessError, InputDomainError
from .geometry import AspectBound, Box3, Universe, decompose_fat_box3, normalize_universe
from .reporters import SortedDominance

RELEVANT_PER_CUBE_CAP = 18  # verified tight; see tests for a worst-case instance


def covering_cell_size(s: int) -> int:
    """The unique power of two ell with s < ell <= 2s."""
    if s < 1:
        raise InputDomainError("cube size must be positive")
    return 1 << s.bit_length()


def _corner_coords(origin, side, code):
    return tuple(o + side - 1 if (code >> axis) & 1 else o
                 for axis, o in enumerate(origin))


def _box_has_corner(box, origin, side):
    """Any extreme grid corner of the cell inside the closed box.  Axes are
    independent, so per-axis feasibility of either end is exact."""
    los, his = box.los, box.his
    for axis in range(3):
        o = origin[axis]
        if not (los[axis] <= o <= his[axis] or los[axis] <= o + side - 1 <= his[axis]):
            return False
    return True


def _overlaps(box, origin, side):
    return all(o <= h and o + side - 1 >= l
               for o, l, h in zip(origin, box.los, box.his))


def relevant_nodes_for_region(box: Box3, region: Box3, log2_side: int):
    """Nodes whose cell corner lies in `box`, no ancestor corner in `box`,
    restricted to cells overlapping `region` (the pruning window)."""
    out = []

    def walk(level, idx):
        side = 1 << (log2_side - level)
        origin = tuple(i * side for i in idx)
        if not _overlaps(region, origin, side):
            return
        if _box_has_corner(box, origin, side):
            out.append((level, idx))
            return
        if side == 1:
            return
        for dx in (0, 1):
            for dy in (0, 1):
                for dz in (0, 1):
                    walk(level + 1, (idx[0] * 2 + dx, idx[1] * 2 + dy, idx[2] * 2 + dz))

    walk(0, (0, 0, 0))
    return out


def per_cube_relevant_counts(box: Box3, bound: AspectBound, universe: Universe):
    """Assignment fan-out of each decomposition cube taken on its own."""
    return [len(relevant_nodes_for_region(cube, cube, universe.log2))
            for cube in decompose_fat_box3(box, bound)]


def assign_relevant_nodes(box: Box3, bound: AspectBound, universe: Universe):
    """All (node, cell corner, opposite box corner) entries for one box.

    Each decomposition cube prunes its own descent; the corner tests run
    against the whole box, so the union over cubes is exactly the set of
    nodes where corner containment first occurs on the root path.
    """
    for v in (*box.los, *box.his):
        if not isinstance(v, int) or v < 0 or v >= universe.side:
            raise InputDomainError(f"box corner {v} off the universe grid")
    nodes = {}
    for cube in decompose_fat_box3(box, bound):
        for key in relevant_nodes_for_region(box, cube, universe.log2):
            nodes[key] = None
    entries = []
    for level, idx in nodes:
        side = 1 << (universe.log2 - level)
        origin = tuple(i * side for i in idx)
        for code in range(8):
            corner = _corner_coords(origin, side, code)
            if box.contains(corner):
                mu = tuple(box.los[a] if (code >> a) & 1 else box.his[a] for a in range(3))
                entries.append(((level, idx), code, mu))
    return entries


@dataclass
class OctreeStabIndex:
    universe: Universe
    bound: AspectBound
    boxes: list = field(default_factory=list)
    rejected: list = field(default_factory=list)
    nodes: dict = field(default_factory=dict)  # (level, idx) -> {code: reporter}
    entries_per_box: list = field(default_factory=list)
    total_entries: int = 0

    def node_count(self):
        return len(self.nodes)


def build_stab(boxes, universe: Universe = None, bound: AspectBound = None,
               reporter_factory=SortedDominance) -> OctreeStabIndex:
    """Index fat boxes for stabbing; non-fat or off-grid boxes are rejected
    individually and reported on the index."""
    boxes = list(boxes)
    if bound is None:
        bound = AspectBound(2)
    if universe is None:
        universe = normalize_universe(boxes) if boxes else Universe(0)
    idx = OctreeStabIndex(universe=universe, bound=bound)
    raw = {}
    for i, box in enumerate(boxes):
        idx.boxes.append(box)
        try:
            if min(box.extents) > 1 and not bound.admits(box.extents):
                raise FatnessError(f"box {i} aspect exceeds alpha={bound.alpha}")
            entries = assign_relevant_nodes(box, bound, universe)
        except (FatnessError, InputDomainError) as err:
            idx.rejected.append((i, str(err)))
            idx.entries_per_box.append([])
            continue
        idx.entries_per_box.append([key for key, _, _ in entries])
        for key, code, mu in entries:
            raw.setdefault(key, {}).setdefault(code, []).append((mu, i))
            idx.total_entries += 1
    for key, by_code in raw.items():
        idx.nodes[key] = {code: reporter_factory(items) for code, items in by_code.items()}
    return idx


def query_stab(idx: OctreeStabIndex, q, counters: Counters = None):
    """Ids of all accepted boxes containing the probe point."""
    if not idx.universe.contains3(q):
        return []
    log2 = idx.universe.log2
    found = set()
    for level in range(log2 + 1):
        if counters is not None:
            counters.nodes_visited += 1
        shift = log2 - level
        key = (level, (q[0] >> shift, q[1] >> shift, q[2] >> shift))
        node = idx.nodes.get(key)
        if node is None:
            continue
        for code, reporter in node.items():
            if counters is not None:
                counters.dominance_probes += 1
                counters.structures_probed += 1
            signs = tuple(not ((code >> a) & 1) for a in range(3))
            got = reporter.query(q, signs, counters=counters)
            if counters is not None:
                counters.raw_multiplicity += len(got)
            found.update(got)
    out = sorted(found)
    if counters is not None:
        counters.reported_k = len(out)
    return out
