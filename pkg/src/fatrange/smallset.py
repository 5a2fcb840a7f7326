"""Range reporting on small point sets via rank space and a shared memo.

Sets up to `micro_cap` points are answered from a process-wide memo table
keyed by the set's combinatorial structure (the x-rank to y-rank permutation)
and the rank-space query, so combinatorially identical sets share entries.
Larger sets are cut into balanced rank columns and rows; a query touches the
two boundary columns and rows plus a meta-query over the occupied (column,
row) cells, whose lists are dumped whole.  The meta set is handled by the
same machinery one level down, and is forced into memo mode at depth two so
the recursion always terminates.

Work accounting: `candidates_examined` counts points surfaced on the lookup
path (memo answers, boundary answers, cell dumps).  Memo fills are amortized
preprocessing and tracked separately in `micro_memo_fills`.
"""

import math
import threading
from bisect import bisect_left, bisect_right

from .errors import CapacityError
from .geometry import Rect2

MICRO_CAP = 16
MEMO_BUDGET = 2_000_000
_MAX_GRID_DEPTH = 2

_MEMO = {}
_MEMO_LOCK = threading.Lock()


def memo_stats():
    return {"entries": len(_MEMO)}


def clear_memo():
    with _MEMO_LOCK:
        _MEMO.clear()


def check_memo_budget(budget: int = MEMO_BUDGET) -> bool:
    return len(_MEMO) <= budget


def micro_recompute(perm, qx_lo, qx_hi, qy_lo, qy_hi):
    """Reference recomputation of a memo entry (used to audit memo hits)."""
    return tuple(x for x in range(qx_lo, qx_hi + 1) if qy_lo <= perm[x] <= qy_hi)


def _micro_query(perm, qx_lo, qx_hi, qy_lo, qy_hi, counters=None):
    key = (perm, qx_lo, qx_hi, qy_lo, qy_hi)
    ans = _MEMO.get(key)
    if ans is None:
        with _MEMO_LOCK:
            ans = _MEMO.get(key)
            if ans is None:
                ans = micro_recompute(perm, qx_lo, qx_hi, qy_lo, qy_hi)
                _MEMO[key] = ans
                if counters is not None:
                    counters.micro_memo_fills += 1
    if counters is not None:
        counters.candidates_examined += len(ans)
    return ans


class SmallSetIndex:
    __slots__ = ("points", "m", "mode", "depth",
                 "order_x", "order_y", "xrank", "yrank", "xs_sorted", "ys_sorted",
                 "perm",
                 "block", "n_cols", "n_rows", "columns", "col_members",
                 "rows", "row_members", "cells", "top", "top_keys")

    def __init__(self, points, micro_cap, depth):
        self.points = list(points)
        self.m = len(self.points)
        self.depth = depth
        m = self.m
        if m == 0:
            self.mode = "empty"
            return
        pts = self.points
        self.order_x = sorted(range(m), key=lambda i: (pts[i][0], pts[i][1], i))
        self.order_y = sorted(range(m), key=lambda i: (pts[i][1], pts[i][0], i))
        self.xrank = [0] * m
        self.yrank = [0] * m
        for r, i in enumerate(self.order_x):
            self.xrank[i] = r
        for r, i in enumerate(self.order_y):
            self.yrank[i] = r
        self.xs_sorted = [pts[i][0] for i in self.order_x]
        self.ys_sorted = [pts[i][1] for i in self.order_y]

        if m <= micro_cap or depth >= _MAX_GRID_DEPTH:
            self.mode = "micro"
            self.perm = tuple(self.yrank[i] for i in self.order_x)
            return

        self.mode = "grid"
        g = 4 * max(1, math.ceil(math.log2(m)))
        self.block = -(-m // g)
        q = self.block
        self.n_cols = -(-m // q)
        self.n_rows = -(-m // q)
        self.col_members = [self.order_x[c * q:(c + 1) * q] for c in range(self.n_cols)]
        self.row_members = [self.order_y[r * q:(r + 1) * q] for r in range(self.n_rows)]
        # nested structures live in this set's rank space
        self.columns = [
            SmallSetIndex([(self.xrank[i], self.yrank[i]) for i in mem], micro_cap, depth + 1)
            for mem in self.col_members
        ]
        self.rows = [
            SmallSetIndex([(self.xrank[i], self.yrank[i]) for i in mem], micro_cap, depth + 1)
            for mem in self.row_members
        ]
        self.cells = {}
        for i in range(m):
            key = (self.xrank[i] // q, self.yrank[i] // q)
            self.cells.setdefault(key, []).append(i)
        self.top_keys = sorted(self.cells)
        self.top = SmallSetIndex(self.top_keys, micro_cap, depth + 1)

    # -- queries ---------------------------------------------------------

    def _rank_interval_x(self, lo, hi):
        return bisect_left(self.xs_sorted, lo), bisect_right(self.xs_sorted, hi) - 1

    def _rank_interval_y(self, lo, hi):
        return bisect_left(self.ys_sorted, lo), bisect_right(self.ys_sorted, hi) - 1

    def query(self, x_lo, x_hi, y_lo, y_hi, counters=None):
        """Indices of member points inside the closed value rectangle."""
        if self.mode == "empty":
            return []
        rx_lo, rx_hi = self._rank_interval_x(x_lo, x_hi)
        ry_lo, ry_hi = self._rank_interval_y(y_lo, y_hi)
        return self.query_ranks(rx_lo, rx_hi, ry_lo, ry_hi, counters)

    def query_ranks(self, rx_lo, rx_hi, ry_lo, ry_hi, counters=None):
        """Same query in this set's own rank space."""
        if self.mode == "empty":
            return []
        rx_lo, rx_hi = max(rx_lo, 0), min(rx_hi, self.m - 1)
        ry_lo, ry_hi = max(ry_lo, 0), min(ry_hi, self.m - 1)
        if rx_lo > rx_hi or ry_lo > ry_hi:
            return []
        if counters is not None:
            counters.structures_probed += 1
        if self.mode == "micro":
            ans = _micro_query(self.perm, rx_lo, rx_hi, ry_lo, ry_hi, counters)
            return [self.order_x[x] for x in ans]

        q = self.block
        f, r = rx_lo // q, rx_hi // q
        l, t = ry_lo // q, ry_hi // q
        if f == r:
            local = self.columns[f].query(rx_lo, rx_hi, ry_lo, ry_hi, counters)
            return [self.col_members[f][j] for j in local]
        if l == t:
            local = self.rows[l].query(rx_lo, rx_hi, ry_lo, ry_hi, counters)
            return [self.row_members[l][j] for j in local]

        hit = set()
        for c in (f, r):
            for j in self.columns[c].query(rx_lo, rx_hi, ry_lo, ry_hi, counters):
                hit.add(self.col_members[c][j])
        for w in (l, t):
            for j in self.rows[w].query(rx_lo, rx_hi, ry_lo, ry_hi, counters):
                hit.add(self.row_members[w][j])
        if r - f >= 2 and t - l >= 2:
            for j in self.top.query(f + 1, r - 1, l + 1, t - 1, counters):
                cell = self.top_keys[j]
                members = self.cells[cell]
                if counters is not None:
                    counters.candidates_examined += len(members)
                hit.update(members)
        return sorted(hit)


def build_small(points, cap=None, micro_cap=None) -> SmallSetIndex:
    """Index a small point set; errors out when `cap` is exceeded."""
    points = list(points)
    if cap is not None and len(points) > cap:
        raise CapacityError(f"{len(points)} points exceed small-set cap {cap}")
    return SmallSetIndex(points, micro_cap if micro_cap is not None else MICRO_CAP, 0)


def query_small(idx: SmallSetIndex, rect: Rect2, counters=None):
    """Points of the indexed set inside the closed query rectangle."""
    got = idx.query(rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi, counters)
    return [idx.points[i] for i in got]


def query_small_ranks(idx: SmallSetIndex, rx_lo, rx_hi, ry_lo, ry_hi, counters=None):
    """Rank-space entry point (queries phrased on {0..m-1} per axis)."""
    got = idx.query_ranks(rx_lo, rx_hi, ry_lo, ry_hi, counters)
    return [idx.points[i] for i in got]
