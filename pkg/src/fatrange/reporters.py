"""Pluggable reporter structures behind the composite indexes.

Every reporter family has a default implementation plus a deliberately dumb
linear-scan twin; contract tests assert the two agree so faster structures
can be swapped in without output drift.  Bounds of None mean "unbounded on
that side".
"""

from bisect import bisect_left, bisect_right

import numpy as np


class RangeTree2D:
    """Balanced static range tree on x with y-sorted canonical lists."""

    def __init__(self, items):
        # items: iterable of ((x, y), payload)
        items = sorted(items, key=lambda it: (it[0][0], it[0][1]))
        self.n = len(items)
        self.xs = [it[0][0] for it in items]
        self.items = items
        self._ys = {}
        if self.n:
            self._build(0, self.n)

    def _build(self, lo, hi):
        pairs = sorted(((it[0][1], it[1]) for it in self.items[lo:hi]), key=lambda t: t[0])
        self._ys[(lo, hi)] = ([y for y, _ in pairs], [pl for _, pl in pairs])
        if hi - lo > 1:
            mid = (lo + hi) // 2
            self._build(lo, mid)
            self._build(mid, hi)

    def query(self, x_lo, x_hi, y_lo, y_hi, out=None):
        out = [] if out is None else out
        if not self.n:
            return out
        i0 = bisect_left(self.xs, x_lo)
        i1 = bisect_right(self.xs, x_hi)
        if i0 >= i1:
            return out

        def rec(lo, hi):
            if hi <= i0 or lo >= i1:
                return
            if i0 <= lo and hi <= i1:
                ys, pls = self._ys[(lo, hi)]
                a = bisect_left(ys, y_lo)
                b = bisect_right(ys, y_hi)
                out.extend(pls[a:b])
                return
            mid = (lo + hi) // 2
            if hi - lo == 1:
                return
            rec(lo, mid)
            rec(mid, hi)

        rec(0, self.n)
        return out


class LinearScan2D:
    """Reference twin of RangeTree2D."""

    def __init__(self, items):
        self.items = list(items)

    def query(self, x_lo, x_hi, y_lo, y_hi, out=None):
        out = [] if out is None else out
        for (x, y), payload in self.items:
            if x_lo <= x <= x_hi and y_lo <= y <= y_hi:
                out.append(payload)
        return out


_NEG = np.iinfo(np.int64).min
_POS = np.iinfo(np.int64).max


class VectorScan3D:
    """Vectorized interval scan over 3-field tuples (default for the
    four-sided spanning reporters; the tuple sets are small, a mask beats
    tree navigation by a wide margin at this scale)."""

    def __init__(self, items):
        items = list(items)
        self.payloads = [pl for _, pl in items]
        if items:
            arr = np.array([key for key, _ in items], dtype=np.int64)
        else:
            arr = np.empty((0, 3), dtype=np.int64)
        self.cols = [arr[:, i] for i in range(3)]

    def query(self, bounds, out=None):
        # bounds: ((lo, hi), (lo, hi), (lo, hi)) with None for open sides
        out = [] if out is None else out
        if not self.payloads:
            return out
        mask = np.ones(len(self.payloads), dtype=bool)
        for col, (lo, hi) in zip(self.cols, bounds):
            if lo is not None:
                mask &= col >= lo
            if hi is not None:
                mask &= col <= hi
        for i in np.nonzero(mask)[0]:
            out.append(self.payloads[i])
        return out


class LinearScan3D:
    """Reference twin of VectorScan3D."""

    def __init__(self, items):
        self.items = list(items)

    def query(self, bounds, out=None):
        out = [] if out is None else out
        for key, payload in self.items:
            ok = True
            for v, (lo, hi) in zip(key, bounds):
                if (lo is not None and v < lo) or (hi is not None and v > hi):
                    ok = False
                    break
            if ok:
                out.append(payload)
        return out


class SlabPoints3D:
    """Per-slab point store answering boxes clipped to the slab (five-sided
    in the regular case) by vectorized scan."""

    def __init__(self, points):
        self.points = list(points)
        if self.points:
            arr = np.array(self.points, dtype=np.int64)
        else:
            arr = np.empty((0, 3), dtype=np.int64)
        self.cols = [arr[:, i] for i in range(3)]

    def __len__(self):
        return len(self.points)

    def query(self, box, out=None):
        out = [] if out is None else out
        if not self.points:
            return out
        mask = np.ones(len(self.points), dtype=bool)
        for col, lo, hi in zip(self.cols, box.los, box.his):
            mask &= (col >= lo) & (col <= hi)
        for i in np.nonzero(mask)[0]:
            out.append(self.points[i])
        return out


class SortedDominance:
    """Dominance reporter: sorted on axis 0, prefix/suffix scan on the rest.

    `signs` has one bool per axis; True asks for item >= probe on that axis,
    False for item <= probe.
    """

    def __init__(self, items):
        # items: list of (key3, payload)
        self.items = sorted(items, key=lambda it: it[0][0])
        self.axis0 = [it[0][0] for it in self.items]

    def __len__(self):
        return len(self.items)

    def query(self, probe, signs, out=None, counters=None):
        out = [] if out is None else out
        if not self.items:
            return out
        if signs[0]:
            lo, hi = bisect_left(self.axis0, probe[0]), len(self.items)
        else:
            lo, hi = 0, bisect_right(self.axis0, probe[0])
        if counters is not None:
            counters.candidates_examined += hi - lo
        for key, payload in self.items[lo:hi]:
            ok = True
            for axis in (1, 2):
                if signs[axis]:
                    if key[axis] < probe[axis]:
                        ok = False
                        break
                elif key[axis] > probe[axis]:
                    ok = False
                    break
            if ok:
                out.append(payload)
        return out


class LinearScanDominance:
    """Reference twin of SortedDominance."""

    def __init__(self, items):
        self.items = list(items)

    def __len__(self):
        return len(self.items)

    def query(self, probe, signs, out=None, counters=None):
        out = [] if out is None else out
        if counters is not None:
            counters.candidates_examined += len(self.items)
        for key, payload in self.items:
            ok = True
            for axis in range(3):
                if signs[axis]:
                    if key[axis] < probe[axis]:
                        ok = False
                        break
                elif key[axis] > probe[axis]:
                    ok = False
                    break
            if ok:
                out.append(payload)
        return out
