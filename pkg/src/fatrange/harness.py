"""Verification and benchmarking drivers shared by the CLI and the tests.

Verify mode rebuilds a structure from a dataset, replays a query workload
against the brute-force oracles, and checks the structural bounds the
library promises (per-rectangle point cap, spanning and corner caps, walk
overshoot, slab/label budgets, dominance-probe budgets).  Bench mode times
queries and emits one CSV row of counters per query.
"""

import math
import statistics
import time
from dataclasses import dataclass, field

from . import oracle, range2d, range3d, stabbing
from .counters import COUNTER_COLUMNS, Counters
from .errors import InputDomainError, OracleGuardError
from .geometry import AspectBound, Universe
from .quadtree import RECTS_PER_NODE_CAP

STRUCTURES = ("range2d", "range3d", "stab")


@dataclass
class VerifyReport:
    structure: str
    queries: int = 0
    mismatches: list = field(default_factory=list)
    bound_violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.mismatches and not self.bound_violations

    def lines(self):
        out = [f"verify {self.structure}: {self.queries} queries, "
               f"{len(self.mismatches)} mismatches, "
               f"{len(self.bound_violations)} bound violations"]
        for qid, detail in self.mismatches[:20]:
            out.append(f"  mismatch query={qid}: {detail}")
        for qid, detail in self.bound_violations[:20]:
            out.append(f"  bound query={qid}: {detail}")
        out.append("PASS" if self.ok else "FAIL")
        return out


def _universe_for(u_side):
    log2 = u_side.bit_length() - 1
    if (1 << log2) != u_side:
        raise InputDomainError(f"universe side {u_side} is not a power of two")
    return Universe(log2)


def build_structure(structure, records, u_side, d=None, b=2, alpha=2):
    universe = _universe_for(u_side)
    if structure == "range2d":
        return range2d.build2d(records, universe=universe, d=d)
    if structure == "range3d":
        root, stats = range3d.build3d(records, universe=universe, b=b)
        return root
    if structure == "stab":
        return stabbing.build_stab(records, universe=universe, bound=AspectBound(alpha))
    raise InputDomainError(f"unknown structure {structure!r}")


def run_query(structure, index, query, alpha=2, counters=None, lca_jump=False):
    if structure == "range2d":
        if query.is_square():
            return range2d.query_square(index, query, counters)
        return range2d.query_fat_rect(index, query, AspectBound(alpha), counters)
    if structure == "range3d":
        if query.is_cube():
            return range3d.query_cube3d(index, query, counters, lca_jump=lca_jump)
        return range3d.query_fat_box3(index, query, AspectBound(alpha), counters,
                                      lca_jump=lca_jump)
    return stabbing.query_stab(index, query, counters)


def _check_bounds_2d(index, query, counters, report, qid):
    if counters.corner_rects > 4 * _squares_in(query):
        report.bound_violations.append((qid, f"corner rectangles {counters.corner_rects}"))
    cap = 2 * RECTS_PER_NODE_CAP * _squares_in(query)
    if counters.spanning_true > cap:
        report.bound_violations.append((qid, f"spanning rectangles {counters.spanning_true} > {cap}"))
    if counters.walk_excess_max > 2:
        report.bound_violations.append((qid, f"list walk overshoot {counters.walk_excess_max}"))


def _squares_in(query):
    ex, ey = query.extents
    lo = min(ex, ey)
    return -(-max(ex, ey) // lo)


def verify_range2d(index, points, queries, alpha=2, oracle_cfg=oracle.DEFAULT_CONFIG,
                   check_spanning=True):
    report = VerifyReport(structure="range2d")
    parr = oracle.PointArray2(points)
    for rect in index.rects:
        if len(rect.points) > 6 * index.d:
            report.bound_violations.append(
                ("build", f"rectangle {rect.idx} holds {len(rect.points)} > 6d points"))
    for qid, q in enumerate(queries):
        counters = Counters()
        got = run_query("range2d", index, q, alpha=alpha, counters=counters)
        want = sorted(map(tuple, oracle.brute_range2(parr, q, oracle_cfg)))
        if got != want:
            report.mismatches.append((qid, f"{len(got)} reported vs {len(want)} expected"))
        if check_spanning and q.is_square():
            mine = {r.idx for r in range2d.spanning_candidates(index, q)}
            ref = {r.idx for r in oracle.brute_spanning(index.sub, q)}
            if mine != ref:
                report.mismatches.append((qid, f"spanning sets differ: {mine ^ ref}"))
        _check_bounds_2d(index, q, counters, report, qid)
        report.queries += 1
    return report


def verify_range3d(index, points, queries, alpha=2, b=2,
                   oracle_cfg=oracle.DEFAULT_CONFIG):
    report = VerifyReport(structure="range3d")
    parr = oracle.PointArray3(points)
    depth = range3d.max_probe_depth(index.side, b)
    for qid, q in enumerate(queries):
        counters = Counters()
        got = run_query("range3d", index, q, alpha=alpha, counters=counters)
        want = sorted(map(tuple, oracle.brute_range3(parr, q, oracle_cfg)))
        if got != want:
            report.mismatches.append((qid, f"{len(got)} reported vs {len(want)} expected"))
        pieces = _cubes_in(q)
        if counters.slab_probes > 6 * depth * pieces:
            report.bound_violations.append((qid, f"slab probes {counters.slab_probes}"))
        if counters.label_descents > depth * pieces:
            report.bound_violations.append((qid, f"label descents {counters.label_descents}"))
        report.queries += 1
    return report


def _cubes_in(query):
    exts = query.extents
    lo = min(exts)
    return math.prod(-(-e // lo) for e in exts)


def verify_stab(index, queries, oracle_cfg=oracle.DEFAULT_CONFIG):
    report = VerifyReport(structure="stab")
    accepted = [b for i, b in enumerate(index.boxes)
                if i not in {j for j, _ in index.rejected}]
    if len(accepted) != len(index.boxes):
        report.bound_violations.append(
            ("build", f"{len(index.rejected)} boxes rejected at build"))
    barr = oracle.BoxArray3(index.boxes)
    rejected_ids = {j for j, _ in index.rejected}
    path_cap = index.universe.log2 + 1
    for qid, q in enumerate(queries):
        counters = Counters()
        got = run_query("stab", index, q, counters=counters)
        want = sorted(i for i in oracle.brute_stab3(barr, q, oracle_cfg)
                      if i not in rejected_ids)
        if got != want:
            report.mismatches.append((qid, f"{len(got)} reported vs {len(want)} expected"))
        if counters.nodes_visited > path_cap:
            report.bound_violations.append((qid, f"visited {counters.nodes_visited} nodes"))
        if counters.dominance_probes > 8 * path_cap:
            report.bound_violations.append((qid, f"{counters.dominance_probes} dominance probes"))
        report.queries += 1
    return report


def verify(structure, records, u_side, queries, d=None, b=2, alpha=2,
           oracle_cfg=oracle.DEFAULT_CONFIG):
    """Build + replay + check; the one-stop entry used by the CLI."""
    if structure not in STRUCTURES:
        raise InputDomainError(f"unknown structure {structure!r}")
    limit = oracle_cfg.max_boxes if structure == "stab" else oracle_cfg.max_points
    if len(records) > limit:
        raise OracleGuardError("dataset exceeds oracle guards; refusing to verify")
    index = build_structure(structure, records, u_side, d=d, b=b, alpha=alpha)
    if structure == "range2d":
        return verify_range2d(index, records, queries, alpha=alpha, oracle_cfg=oracle_cfg)
    if structure == "range3d":
        return verify_range3d(index, records, queries, alpha=alpha, b=b, oracle_cfg=oracle_cfg)
    return verify_stab(index, queries, oracle_cfg=oracle_cfg)


BENCH_COLUMNS = ["query_id", "wall_time_ns"] + COUNTER_COLUMNS


def bench(structure, index, queries, alpha=2, repetitions=1):
    """Per-query timing rows plus a median summary row.

    Counters must not depend on the repetition; a drift between repetitions
    is reported as a nondeterminism error.
    """
    rows = []
    for qid, q in enumerate(queries):
        times = []
        baseline = None
        for _ in range(max(1, repetitions)):
            counters = Counters()
            t0 = time.perf_counter_ns()
            run_query(structure, index, q, alpha=alpha, counters=counters)
            times.append(time.perf_counter_ns() - t0)
            row = counters.as_row()
            row.pop("micro_memo_fills")  # warm-up dependent by design
            if baseline is None:
                baseline = row
            elif row != baseline:
                raise AssertionError(f"nondeterministic counters on query {qid}")
        out = {"query_id": qid, "wall_time_ns": int(statistics.median(times)),
               "micro_memo_fills": 0}
        out.update(baseline)
        rows.append(out)
    summary = {"query_id": "median", "micro_memo_fills": 0}
    for col in BENCH_COLUMNS[1:]:
        vals = [r[col] for r in rows]
        summary[col] = int(statistics.median(vals)) if vals else 0
    return rows, summary


def scaling_sweep(n=2000, u_logs=range(10, 21), queries_per_u=300, seed=1234, d=None):
    """Median per-query candidate work for one point count across growing
    universes; query sides are uniform in [1, U/2] so the relative size
    distribution (and therefore k) is the same at every U."""
    from .workload import DatasetSpec, QuerySpec, generate_dataset, generate_queries

    rows = []
    for lg in u_logs:
        u = 1 << lg
        pts = generate_dataset(DatasetSpec(kind="points2", n=n, u=u, seed=seed))
        queries = generate_queries(QuerySpec(shape="square", count=queries_per_u,
                                             u=u, seed=seed + 1, size_dist="uniform"))
        index = build_structure("range2d", pts, u, d=d)
        cand, ks = [], []
        for q in queries:
            counters = Counters()
            range2d.query_square(index, q, counters)
            cand.append(counters.candidates_examined)
            ks.append(counters.reported_k)
        rows.append({"u_log2": lg, "u": u,
                     "median_candidates": statistics.median(cand),
                     "median_k": statistics.median(ks)})
    return rows
