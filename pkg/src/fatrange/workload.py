"""Synthetic datasets, query workloads, and the line-based file format.

Files start with the header ``fatrange-v1 <kind> <n> <U>`` followed by one
base-10 record per line: ``x y`` (points2), ``x y z`` (points3),
``x1 x2 y1 y2`` (rects2), ``x1 x2 y1 y2 z1 z2`` (boxes3).  Generation is a
pure function of the spec, so equal seeds give byte-identical files.
"""

import math
import random
from dataclasses import dataclass

from .errors import InputDomainError
from .geometry import Box3, Rect2

FORMAT_TAG = "fatrange-v1"
KINDS = ("points2", "points3", "rects2", "boxes3")


@dataclass(frozen=True)
class DatasetSpec:
    kind: str  # points2 | points3 | boxes3
    n: int
    u: int
    seed: int = 0
    distribution: str = "uniform"  # uniform | clustered
    centers: int = 8
    spread: float = 0.05
    alpha: float = 2.0  # box datasets only

    def __post_init__(self):
        if self.kind not in ("points2", "points3", "boxes3"):
            raise InputDomainError(f"unknown dataset kind {self.kind!r}")
        if self.n < 0 or self.u < 1 or self.u & (self.u - 1):
            raise InputDomainError("need n >= 0 and a power-of-two universe")
        if self.distribution not in ("uniform", "clustered"):
            raise InputDomainError(f"unknown distribution {self.distribution!r}")


@dataclass(frozen=True)
class QuerySpec:
    shape: str  # square | rect | cube | box | point
    count: int
    u: int
    seed: int = 0
    alpha: float = 2.0
    size_dist: str = "loguniform"  # loguniform | uniform

    def __post_init__(self):
        if self.shape not in ("square", "rect", "cube", "box", "point"):
            raise InputDomainError(f"unknown query shape {self.shape!r}")
        if self.count < 0 or self.u < 1 or self.u & (self.u - 1):
            raise InputDomainError("need count >= 0 and a power-of-two universe")


def _distinct_uniform(rng, u, n, dim):
    if n > u ** dim:
        raise InputDomainError("more points requested than grid positions")
    flat = rng.sample(range(u ** dim), n)
    out = []
    for v in flat:
        p = []
        for _ in range(dim):
            p.append(v % u)
            v //= u
        out.append(tuple(p))
    return out


def _distinct_clustered(rng, u, n, dim, centers, spread):
    ctrs = [tuple(rng.randrange(u) for _ in range(dim)) for _ in range(max(1, centers))]
    sigma = max(1.0, spread * u)
    seen = set()
    out = []
    while len(out) < n:
        c = ctrs[rng.randrange(len(ctrs))]
        p = tuple(min(u - 1, max(0, int(round(rng.gauss(cc, sigma))))) for cc in c)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _size(rng, spec, max_side):
    if spec.size_dist == "uniform":
        return rng.randint(1, max_side)
    s = int(round(math.exp(rng.uniform(0.0, math.log(max_side)))))
    return min(max(s, 1), max_side)


def _fat_extents(rng, spec, dim):
    base = _size(rng, spec, max(1, spec.u // 4))
    cap = max(base, int(spec.alpha * base))
    exts = [base] + [min(rng.randint(base, cap), spec.u) for _ in range(dim - 1)]
    rng.shuffle(exts)
    return exts


def generate_dataset(spec: DatasetSpec):
    """Records for a dataset spec: point tuples or Box3 values."""
    rng = random.Random(spec.seed)
    if spec.kind in ("points2", "points3"):
        dim = 2 if spec.kind == "points2" else 3
        if spec.distribution == "uniform":
            return _distinct_uniform(rng, spec.u, spec.n, dim)
        return _distinct_clustered(rng, spec.u, spec.n, dim, spec.centers, spec.spread)
    qspec = QuerySpec(shape="box", count=spec.n, u=spec.u, seed=spec.seed, alpha=spec.alpha)
    boxes = []
    for _ in range(spec.n):
        exts = _fat_extents(rng, qspec, 3)
        lo = [rng.randint(0, spec.u - e) for e in exts]
        boxes.append(Box3(lo[0], lo[0] + exts[0] - 1, lo[1], lo[1] + exts[1] - 1,
                          lo[2], lo[2] + exts[2] - 1))
    return boxes


def generate_queries(spec: QuerySpec):
    """Query records: Rect2 (square/rect), Box3 (cube/box), tuples (point)."""
    rng = random.Random(spec.seed)
    out = []
    for _ in range(spec.count):
        if spec.shape == "point":
            out.append(tuple(rng.randrange(spec.u) for _ in range(3)))
            continue
        if spec.shape in ("square", "cube"):
            dim = 2 if spec.shape == "square" else 3
            s = _size(rng, spec, spec.u // 2)
            lo = [rng.randint(0, spec.u - s) for _ in range(dim)]
            exts = [s] * dim
        else:
            dim = 2 if spec.shape == "rect" else 3
            exts = _fat_extents(rng, spec, dim)
            lo = [rng.randint(0, spec.u - e) for e in exts]
        if dim == 2:
            out.append(Rect2(lo[0], lo[0] + exts[0] - 1, lo[1], lo[1] + exts[1] - 1))
        else:
            out.append(Box3(lo[0], lo[0] + exts[0] - 1, lo[1], lo[1] + exts[1] - 1,
                            lo[2], lo[2] + exts[2] - 1))
    return out


def _record_kind(rec):
    if isinstance(rec, Rect2):
        return "rects2"
    if isinstance(rec, Box3):
        return "boxes3"
    return "points2" if len(rec) == 2 else "points3"


def _record_fields(rec):
    if isinstance(rec, Rect2):
        return (rec.x_lo, rec.x_hi, rec.y_lo, rec.y_hi)
    if isinstance(rec, Box3):
        return (rec.x_lo, rec.x_hi, rec.y_lo, rec.y_hi, rec.z_lo, rec.z_hi)
    return rec


def write_file(path, records, u, kind=None):
    """Write records under the versioned header; returns the kind written."""
    records = list(records)
    if kind is None:
        if not records:
            raise InputDomainError("cannot infer kind of an empty record list")
        kind = _record_kind(records[0])
    if kind not in KINDS:
        raise InputDomainError(f"unknown file kind {kind!r}")
    with open(path, "w") as fh:
        fh.write(f"{FORMAT_TAG} {kind} {len(records)} {u}\n")
        for rec in records:
            fh.write(" ".join(str(v) for v in _record_fields(rec)) + "\n")
    return kind


_WIDTH = {"points2": 2, "points3": 3, "rects2": 4, "boxes3": 6}


def read_file(path):
    """Parse a workload file; returns (kind, universe_side, records)."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != FORMAT_TAG or header[1] not in KINDS:
            raise InputDomainError(f"{path}: bad header {' '.join(header)!r}")
        kind, n, u = header[1], int(header[2]), int(header[3])
        records = []
        for line in fh:
            vals = [int(v) for v in line.split()]
            if len(vals) != _WIDTH[kind]:
                raise InputDomainError(f"{path}: bad {kind} record {line.rstrip()!r}")
            if kind == "rects2":
                records.append(Rect2(vals[0], vals[1], vals[2], vals[3]))
            elif kind == "boxes3":
                records.append(Box3(*vals))
            else:
                records.append(tuple(vals))
    if len(records) != n:
        raise InputDomainError(f"{path}: header says {n} records, found {len(records)}")
    return kind, u, records
