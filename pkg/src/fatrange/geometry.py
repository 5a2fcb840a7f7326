"""Integer grid primitives: universe, boxes, and fat-box decomposition.

Conventions used across the whole library:

* stored points are integer tuples in [0, U) per axis, U a power of two;
* query ranges are closed ([lo, hi] contains both ends);
* tree/grid cells are half-open [lo, lo + side);
* the "extent" of a closed range is the number of grid values it covers,
  hi - lo + 1, and aspect ratios are ratios of extents.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import FatnessError, InputDomainError

Point2 = tuple
Point3 = tuple


@dataclass(frozen=True)
class Universe:
    """Power-of-two grid side; every coordinate lives in [0, side)."""

    log2: int

    def __post_init__(self):
        if self.log2 < 0:
            raise InputDomainError("universe exponent must be nonnegative")

    @property
    def side(self) -> int:
        return 1 << self.log2

    def contains2(self, p) -> bool:
        return 0 <= p[0] < self.side and 0 <= p[1] < self.side

    def contains3(self, p) -> bool:
        return all(0 <= c < self.side for c in p)


@dataclass(frozen=True)
class Rect2:
    """Closed query rectangle [x_lo, x_hi] x [y_lo, y_hi]."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise InputDomainError(f"empty rectangle bounds: {self}")

    @property
    def extents(self):
        return (self.x_hi - self.x_lo + 1, self.y_hi - self.y_lo + 1)

    def is_square(self) -> bool:
        ex, ey = self.extents
        return ex == ey

    def contains(self, p) -> bool:
        return self.x_lo <= p[0] <= self.x_hi and self.y_lo <= p[1] <= self.y_hi

    def corners(self):
        return (
            (self.x_lo, self.y_lo),
            (self.x_lo, self.y_hi),
            (self.x_hi, self.y_lo),
            (self.x_hi, self.y_hi),
        )


@dataclass(frozen=True)
class Box3:
    """Closed query box, one [lo, hi] pair per axis."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int
    z_lo: int
    z_hi: int

    def __post_init__(self):
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi or self.z_lo > self.z_hi:
            raise InputDomainError(f"empty box bounds: {self}")

    @property
    def los(self):
        return (self.x_lo, self.y_lo, self.z_lo)

    @property
    def his(self):
        return (self.x_hi, self.y_hi, self.z_hi)

    @property
    def extents(self):
        return tuple(h - l + 1 for l, h in zip(self.los, self.his))

    def is_cube(self) -> bool:
        e = self.extents
        return e[0] == e[1] == e[2]

    def contains(self, p) -> bool:
        return all(l <= c <= h for c, l, h in zip(p, self.los, self.his))

    def corners(self):
        out = []
        for x in (self.x_lo, self.x_hi):
            for y in (self.y_lo, self.y_hi):
                for z in (self.z_lo, self.z_hi):
                    out.append((x, y, z))
        return out


@dataclass(frozen=True)
class AspectBound:
    """Maximum allowed ratio of longest to shortest box edge (>= 1)."""

    alpha: Fraction

    def __init__(self, alpha=1):
        object.__setattr__(self, "alpha", Fraction(alpha))
        if self.alpha < 1:
            raise InputDomainError("aspect bound must be >= 1")

    @property
    def ceil(self) -> int:
        return math.ceil(self.alpha)

    def admits(self, extents) -> bool:
        lo, hi = min(extents), max(extents)
        # exact rational comparison: hi/lo <= alpha
        return hi * self.alpha.denominator <= lo * self.alpha.numerator


def _iter_coords(items):
    for it in items:
        if isinstance(it, Rect2):
            yield from (it.x_lo, it.x_hi, it.y_lo, it.y_hi)
        elif isinstance(it, Box3):
            yield from it.los
            yield from it.his
        else:
            yield from it


def normalize_universe(points_or_boxes) -> Universe:
    """Smallest power-of-two universe strictly containing every coordinate."""
    top = -1
    seen = False
    for c in _iter_coords(points_or_boxes):
        seen = True
        if c < 0:
            raise InputDomainError(f"negative coordinate {c}")
        if c > top:
            top = c
    if not seen:
        raise InputDomainError("cannot normalize an empty input")
    log2 = 0
    while (1 << log2) <= top:
        log2 += 1
    return Universe(log2)


def _axis_offsets(lo, hi, side):
    """Start offsets of length-`side` closed windows tiling [lo, hi].

    Windows are laid at stride `side`; the last one is aligned to the far
    edge, so consecutive windows may overlap but the union is exact.
    """
    extent = hi - lo + 1
    count = -(-extent // side)
    if count == 1:
        return [lo]
    return [lo + i * side for i in range(count - 1)] + [hi - side + 1]


def decompose_fat_rect2(q: Rect2, bound: AspectBound):
    """Cover a fat rectangle with at most ceil(alpha) equal-extent squares.

    Degenerate ranges (extent 1 on some axis) are always accepted; they
    decompose with window side 1, which is the caller's cost to bear.
    """
    if min(q.extents) > 1 and not bound.admits(q.extents):
        raise FatnessError(f"aspect of {q} exceeds alpha={bound.alpha}")
    side = min(q.extents)
    xs = _axis_offsets(q.x_lo, q.x_hi, side)
    ys = _axis_offsets(q.y_lo, q.y_hi, side)
    return [Rect2(x, x + side - 1, y, y + side - 1) for x in xs for y in ys]


def decompose_fat_box3(q: Box3, bound: AspectBound):
    """3-d analogue: at most ceil(alpha)^2 equal-extent cubes covering q."""
    if min(q.extents) > 1 and not bound.admits(q.extents):
        raise FatnessError(f"aspect of {q} exceeds alpha={bound.alpha}")
    side = min(q.extents)
    xs = _axis_offsets(q.x_lo, q.x_hi, side)
    ys = _axis_offsets(q.y_lo, q.y_hi, side)
    zs = _axis_offsets(q.z_lo, q.z_hi, side)
    return [
        Box3(x, x + side - 1, y, y + side - 1, z, z + side - 1)
        for x in xs
        for y in ys
        for z in zs
    ]
