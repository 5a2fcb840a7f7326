"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

All tolerances are exact set comparisons or integer caps; the only numeric
knobs are the pinned work constant BETA for the small-set layer and the
guillotine piece cap imported from the library.

Known-red criterion: the stabbing assignment fan-out cap of 8 per
decomposition cube is not achievable with exact corner-containment
semantics on a shared integer grid (the verified tight cap is 18, see
test_stabbing.py::test_per_cube_fanout_cap_is_18 and notes in the failure
message).  The check is asserted as specified and fails honestly.
"""

import math
import random
import time

import pytest

from fatrange import oracle, range2d, range3d, smallset, stabbing, workload
from fatrange.counters import Counters
from fatrange.geometry import AspectBound, Box3, Universe
from fatrange.harness import scaling_sweep
from fatrange.quadtree import (RECTS_PER_NODE_CAP, build_compressed_quadtree,
                               build_subdivision, mark_nodes)
from fatrange.range3d import max_probe_depth

BETA = 8  # small-set work bound: candidates_examined <= BETA * (k + 1)

_here = None


def _line(name, detail=""):
    print(f"\nACCEPTANCE {name}: PASS {detail}".rstrip())


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="module")
def run2d():
    n, u_log, total = 10_000, 20, 10_000
    pts = workload.generate_dataset(workload.DatasetSpec("points2", n, 1 << u_log, seed=2001))
    d = int(math.log2(n))
    t0 = time.perf_counter()
    idx = range2d.build2d(pts, universe=Universe(u_log), d=d)
    squares = workload.generate_queries(
        workload.QuerySpec("square", total // 2, 1 << u_log, seed=2002))
    rects = workload.generate_queries(
        workload.QuerySpec("rect", total - total // 2, 1 << u_log, seed=2003, alpha=3))
    parr = oracle.PointArray2(pts)
    bound = AspectBound(3)
    mismatches = 0
    per_query = []
    for q in squares + rects:
        counters = Counters()
        if q.is_square():
            got = range2d.query_square(idx, q, counters)
        else:
            got = range2d.query_fat_rect(idx, q, bound, counters)
        want = sorted(map(tuple, oracle.brute_range2(parr, q)))
        mismatches += got != want
        per_query.append((q.is_square(), counters))
    elapsed = time.perf_counter() - t0
    return {"index": idx, "d": d, "mismatches": mismatches,
            "per_query": per_query, "elapsed": elapsed, "n_queries": total}


@pytest.fixture(scope="module")
def builds100():
    rng = random.Random(2100)
    out = []
    for _ in range(100):
        n = 1 << rng.randint(6, 14)
        u_log = max(n.bit_length() + 2, 10)
        pts = workload.generate_dataset(
            workload.DatasetSpec("points2", n, 1 << u_log, seed=rng.randrange(1 << 30)))
        d = max(1, int(math.log2(len(pts))))
        universe = Universe(u_log)
        root = build_compressed_quadtree(pts, universe)
        marking = mark_nodes(root, d)
        sub = build_subdivision(root, marking, d, universe=universe)
        out.append((len(pts), d, sub))
    return out


@pytest.fixture(scope="module")
def run3d():
    n, u_log, total = 10_000, 15, 10_000
    pts = workload.generate_dataset(workload.DatasetSpec("points3", n, 1 << u_log, seed=2301))
    t0 = time.perf_counter()
    root, stats = range3d.build3d(pts, universe=Universe(u_log), b=2)
    cubes = workload.generate_queries(
        workload.QuerySpec("cube", total // 2, 1 << u_log, seed=2302))
    boxes = workload.generate_queries(
        workload.QuerySpec("box", total - total // 2, 1 << u_log, seed=2303, alpha=2))
    parr = oracle.PointArray3(pts)
    bound = AspectBound(2)
    mismatches = 0
    cube_counters = []
    for q in cubes:
        counters = Counters()
        got = range3d.query_cube3d(root, q, counters)
        mismatches += got != sorted(map(tuple, oracle.brute_range3(parr, q)))
        cube_counters.append(counters)
    for q in boxes:
        counters = Counters()
        got = range3d.query_fat_box3(root, q, bound, counters)
        mismatches += got != sorted(map(tuple, oracle.brute_range3(parr, q)))
    elapsed = time.perf_counter() - t0
    return {"root": root, "stats": stats, "mismatches": mismatches,
            "cube_counters": cube_counters, "elapsed": elapsed,
            "depth_cap": max_probe_depth(1 << u_log, 2), "n_queries": total}


@pytest.fixture(scope="module")
def run_stab():
    u_log, n_boxes, n_probes = 16, 1000, 10_000
    bound = AspectBound(2)
    boxes = workload.generate_dataset(
        workload.DatasetSpec("boxes3", n_boxes, 1 << u_log, seed=2401, alpha=2))
    idx = stabbing.build_stab(boxes, universe=Universe(u_log), bound=bound)
    probes = workload.generate_queries(
        workload.QuerySpec("point", n_probes, 1 << u_log, seed=2402))
    barr = oracle.BoxArray3(boxes)
    mismatches = 0
    per_probe = []
    for q in probes:
        counters = Counters()
        got = stabbing.query_stab(idx, q, counters)
        mismatches += got != sorted(oracle.brute_stab3(barr, q))
        per_probe.append(counters)
    return {"index": idx, "boxes": boxes, "bound": bound, "mismatches": mismatches,
            "per_probe": per_probe, "u_log": u_log}


# ---------------------------------------------------------------- criteria

def test_2d_correctness_oracle_equivalence(run2d):
    assert run2d["mismatches"] == 0, f"{run2d['mismatches']} queries disagreed with brute force"
    assert run2d["elapsed"] < 60.0, f"2-d workload took {run2d['elapsed']:.1f}s"
    _line("2-d correctness",
          f"({run2d['n_queries']} queries, {run2d['elapsed']:.1f}s)")


def test_point_cap_per_canonical_rectangle(builds100):
    worst = 0
    for n, d, sub in builds100:
        for rect in sub.rects:
            assert len(rect.points) <= 6 * d, (
                f"n={n} d={d}: rectangle {rect.idx} holds {len(rect.points)} points")
            worst = max(worst, len(rect.points) / d)
    _line("canonical-rectangle point cap", f"(100 builds, worst {worst:.2f}d of 6d)")


def test_subdivision_size_bounds(builds100):
    for n, d, sub in builds100:
        owners = 2 * math.ceil(n / d)
        assert sub.marked_node_count <= owners
        assert len(sub.rects) <= RECTS_PER_NODE_CAP * owners
    _line("subdivision size", f"(marked <= 2*ceil(n/d), rects <= {RECTS_PER_NODE_CAP}x)")


def test_spanning_bound_and_equivalence():
    n, u_log, d, total = 4096, 16, 12, 100_000
    pts = workload.generate_dataset(workload.DatasetSpec("points2", n, 1 << u_log, seed=2201))
    idx = range2d.build2d(pts, universe=Universe(u_log), d=d)
    sarr = oracle.SpanningArrays(idx.sub)
    queries = workload.generate_queries(
        workload.QuerySpec("square", total, 1 << u_log, seed=2202))
    cap = 2 * RECTS_PER_NODE_CAP
    worst = 0
    for q in queries:
        ref = oracle.brute_spanning(sarr, q)
        assert len(ref) <= cap, f"{len(ref)} spanning rectangles for {q}"
        got = {r.idx for r in range2d.spanning_candidates(idx, q)}
        assert got == {r.idx for r in ref}
        worst = max(worst, len(ref))
    _line("spanning bound", f"({total} queries, worst {worst} of cap {cap})")


def test_corner_rectangle_cap(run2d):
    worst = 0
    for is_square, counters in run2d["per_query"]:
        if is_square:
            assert counters.corner_rects <= 4
            worst = max(worst, counters.corner_rects)
    _line("corner cap", f"(<= 4 per square query, worst {worst})")


def test_small_set_structure():
    rng = random.Random(2250)
    sets = 500
    checked = 0
    worst_ratio = 0.0
    for _ in range(sets):
        m = rng.randint(1, 32)
        pts = [(rng.randrange(1 << 16), rng.randrange(1 << 16)) for _ in range(m)]
        idx = smallset.build_small(pts, cap=6 * 32)
        if m <= 10:
            rank_queries = [(a, b, c, d)
                            for a in range(m) for b in range(a, m)
                            for c in range(m) for d in range(c, m)]
        else:
            rank_queries = [tuple(sorted((rng.randrange(m), rng.randrange(m))))
                            + tuple(sorted((rng.randrange(m), rng.randrange(m))))
                            for _ in range(800)]
            rank_queries = [(a, b, c, d) for (a, b), (c, d) in
                            ((q[:2], q[2:]) for q in rank_queries)]
        xs = sorted(range(m), key=lambda i: (pts[i][0], pts[i][1], i))
        ys = sorted(range(m), key=lambda i: (pts[i][1], pts[i][0], i))
        xrank = {i: r for r, i in enumerate(xs)}
        yrank = {i: r for r, i in enumerate(ys)}
        for a, b, c, d in rank_queries:
            counters = Counters()
            got = sorted(smallset.query_small_ranks(idx, a, b, c, d, counters))
            want = sorted(pts[i] for i in range(m)
                          if a <= xrank[i] <= b and c <= yrank[i] <= d)
            assert got == want
            k = len(set(got))
            ratio = counters.candidates_examined / (k + 1)
            assert ratio <= BETA, (m, (a, b, c, d), counters.candidates_examined, k)
            worst_ratio = max(worst_ratio, ratio)
            checked += 1
    _line("small-set structure",
          f"({sets} sets, {checked} rank queries, beta worst {worst_ratio:.2f} of {BETA})")


def test_3d_correctness_oracle_equivalence(run3d):
    assert run3d["mismatches"] == 0
    assert run3d["elapsed"] < 120.0, f"3-d workload took {run3d['elapsed']:.1f}s"
    # decomposition pieces are voxel-exact on a small universe
    pts = [(0, 0, 0), (63, 63, 63)]
    root, _ = range3d.build3d(pts, universe=Universe(6), b=3, base_side=4, base_count=1)
    rng = random.Random(2304)
    checked = 0
    for _ in range(300):
        s = rng.randint(2, 63)
        lo = [rng.randint(0, 64 - s) for _ in range(3)]
        q = Box3(lo[0], lo[0] + s - 1, lo[1], lo[1] + s - 1, lo[2], lo[2] + s - 1)
        try:
            core, pieces = range3d.decompose_query_cube(root, q)
        except Exception:
            continue
        parts = ([core] if core is not None else []) + pieces
        assert len(parts) <= 7
        seen = set()
        for part in parts:
            for x in range(part.x_lo, part.x_hi + 1):
                for y in range(part.y_lo, part.y_hi + 1):
                    for z in range(part.z_lo, part.z_hi + 1):
                        assert (x, y, z) not in seen
                        seen.add((x, y, z))
        assert len(seen) == s ** 3
        checked += 1
    assert checked > 100
    _line("3-d correctness",
          f"({run3d['n_queries']} queries, {run3d['elapsed']:.1f}s, "
          f"{checked} voxel-verified decompositions)")


def test_3d_query_cost_counters(run3d):
    cap = run3d["depth_cap"]
    for counters in run3d["cube_counters"]:
        assert counters.slab_probes <= 6 * cap
        assert counters.label_descents <= cap
    _line("3-d query-cost counters",
          f"(slab <= {6 * cap}, label <= {cap} per cube query)")


def test_four_sided_reduction_property():
    u, n, total = 256, 2000, 1000
    rng = random.Random(2320)
    pts = list({(rng.randrange(u), rng.randrange(u), rng.randrange(u)) for _ in range(n)})
    stretched = range3d.stretch_points_x(pts, u)
    root, _ = range3d.build3d(stretched, universe=Universe(16), b=2)
    for _ in range(total):
        x_lo = rng.randrange(u - 1) * u
        x_hi1 = rng.randrange(x_lo // u + 2, u + 1) * u  # width > u by construction
        y = rng.randrange(1, u + 1)
        z = rng.randrange(1, u + 1)
        cube = range3d.four_sided_to_cube(x_lo, x_hi1, y, z, u)
        got = range3d.query_cube3d(root, cube)
        want = sorted((p[0] * u, p[1], p[2]) for p in pts
                      if x_lo <= p[0] * u < x_hi1 and p[1] < y and p[2] < z)
        assert got == want
    _line("4-sided reduction", f"({total} stretched queries)")


def test_stabbing_correctness(run_stab):
    assert run_stab["mismatches"] == 0
    assert not run_stab["index"].rejected
    # assignment equals the definitional brute force on the full octree
    rng = random.Random(2410)
    u = Universe(8)
    checked = 0
    for _ in range(25):
        s = rng.randint(1, 12)
        exts = [rng.randint(s, 2 * s) for _ in range(3)]
        exts[rng.randrange(3)] = s
        lo = [rng.randint(0, 256 - e) for e in exts]
        box = Box3(lo[0], lo[0] + exts[0] - 1, lo[1], lo[1] + exts[1] - 1,
                   lo[2], lo[2] + exts[2] - 1)
        ours = sorted({key for key, _, _ in
                       stabbing.assign_relevant_nodes(box, AspectBound(2), u)})
        assert ours == sorted(oracle.brute_relevant_nodes(box, 8))
        checked += 1
    _line("stabbing correctness",
          f"({len(run_stab['per_probe'])} probes, {checked} assignments brute-checked)")


def test_stabbing_query_path_bounds(run_stab):
    cap = run_stab["u_log"] + 1
    for counters in run_stab["per_probe"]:
        assert counters.nodes_visited <= cap
        assert counters.dominance_probes <= 8 * cap
    _line("stabbing query-path bounds",
          f"(visits <= {cap}, dominance probes <= {8 * cap})")


def test_stabbing_per_cube_assignment_cap_of_8(run_stab):
    """Specified cap: every decomposition cube is assigned to at most 8
    octree nodes.  This is not satisfiable together with exact assignment
    semantics: with cell corners on the shared integer grid, a cube such as
    [1,6]x[3,8]x[3,8] in a 16-universe is corner-relevant to 2*3*3 = 18
    pairwise-incomparable cells (two grid columns bear corner values on one
    axis and three on each of the others, while the covering cell size sees
    none on the first axis, so no ancestor blocks them).  Exact assignment
    is required by the correctness criteria above; the verified tight cap
    is 18 (stabbing.RELEVANT_PER_CUBE_CAP).  Kept as specified, failing."""
    worst = 0
    offender = None
    for box in run_stab["boxes"]:
        for c in stabbing.per_cube_relevant_counts(box, run_stab["bound"],
                                                   run_stab["index"].universe):
            if c > worst:
                worst, offender = c, box
    constructed = Box3(1, 6, 3, 8, 3, 8)
    counts = stabbing.per_cube_relevant_counts(constructed, AspectBound(1), Universe(4))
    worst = max(worst, max(counts))
    assert worst <= 8, (
        f"per-cube relevant-node count reached {worst} (> 8); the 8-node cap "
        f"is unattainable under exact corner-containment assignment (tight cap "
        f"{stabbing.RELEVANT_PER_CUBE_CAP}; worst workload box: {offender}; "
        f"constructed witness: {constructed} -> {max(counts)}). "
        f"See tests/test_stabbing.py::test_per_cube_fanout_cap_is_18.")
    _line("stabbing per-cube assignment cap", f"(worst {worst})")


def test_scaling_candidates_sublinear_in_universe(tmp_path):
    rows = scaling_sweep(n=2000, u_logs=range(10, 21), queries_per_u=300, seed=2500)
    from fatrange.report import write_scaling_csv
    path = write_scaling_csv(tmp_path / "scaling_u.csv", rows)
    meds = [r["median_candidates"] for r in rows]
    u_ratio = rows[-1]["u"] / rows[0]["u"]  # 1024x
    growth = max(meds) / max(min(meds), 1)
    assert growth < u_ratio, f"candidate work grew {growth:.1f}x over a {u_ratio:.0f}x universe"
    assert growth <= 32, f"superlinear-looking trend: {meds}"
    _line("scaling sanity",
          f"(median candidates {meds[0]} -> {meds[-1]} over U x{u_ratio:.0f}, csv {path})")
