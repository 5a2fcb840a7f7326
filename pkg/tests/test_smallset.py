import random
import threading

import pytest

from fatrange import smallset
from fatrange.counters import Counters
from fatrange.errors import CapacityError
from fatrange.geometry import Rect2
from fatrange.smallset import (build_small, check_memo_budget, memo_stats,
                               micro_recompute, query_small, query_small_ranks)

BETA = 8  # pinned work bound: candidates <= BETA * (k + 1) per query


def brute(pts, a, b, c, d):
    return sorted(p for p in pts if a <= p[0] <= b and c <= p[1] <= d)


def test_single_point():
    idx = build_small([(5, 9)])
    assert idx.mode == "micro"
    assert query_small(idx, Rect2(0, 10, 0, 10)) == [(5, 9)]
    assert query_small(idx, Rect2(6, 10, 0, 10)) == []


def test_grid_mode_row_and_column_balance():
    # collinear input still splits into balanced rank blocks
    pts = [(i, 3) for i in range(40)]
    idx = build_small(pts, micro_cap=8)
    assert idx.mode == "grid"
    cap = idx.block
    assert all(len(m) <= cap for m in idx.col_members)
    assert all(len(m) <= cap for m in idx.row_members)


def test_cells_partition_the_set():
    rng = random.Random(1)
    pts = [(rng.randrange(50), rng.randrange(50)) for _ in range(60)]
    idx = build_small(pts, micro_cap=8)
    seen = sorted(i for members in idx.cells.values() for i in members)
    assert seen == list(range(len(pts)))


def test_whole_cell_and_empty_gap_queries():
    pts = [(2, 2), (4, 40), (40, 4), (41, 41)]
    idx = build_small(pts)
    assert query_small(idx, Rect2(0, 63, 0, 63)) == sorted(pts)
    assert query_small(idx, Rect2(5, 39, 5, 39)) == []


def test_random_sets_match_brute_force():
    rng = random.Random(2)
    for _ in range(500):
        m = rng.randrange(1, 65)
        pts = [(rng.randrange(64), rng.randrange(64)) for _ in range(m)]
        idx = build_small(pts)
        a, b = sorted(rng.randrange(64) for _ in range(2))
        c, d = sorted(rng.randrange(64) for _ in range(2))
        assert sorted(query_small(idx, Rect2(a, b, c, d))) == brute(pts, a, b, c, d)


def test_rank_space_queries_exhaustive_small():
    rng = random.Random(3)
    for _ in range(40):
        m = rng.randrange(1, 9)
        pts = [(rng.randrange(16), rng.randrange(16)) for _ in range(m)]
        idx = build_small(pts)
        xs = sorted((p[0], p[1], i) for i, p in enumerate(pts))
        ys = sorted((p[1], p[0], i) for i, p in enumerate(pts))
        for rx0 in range(m):
            for rx1 in range(rx0, m):
                for ry0 in range(m):
                    for ry1 in range(ry0, m):
                        got = sorted(query_small_ranks(idx, rx0, rx1, ry0, ry1))
                        want = sorted(
                            pts[i] for i in range(m)
                            if rx0 <= xs.index((pts[i][0], pts[i][1], i)) <= rx1
                            and ry0 <= ys.index((pts[i][1], pts[i][0], i)) <= ry1)
                        assert got == want


def test_work_bound_beta():
    rng = random.Random(4)
    for _ in range(400):
        m = rng.randrange(1, 100)
        pts = [(rng.randrange(128), rng.randrange(128)) for _ in range(m)]
        idx = build_small(pts)
        a, b = sorted(rng.randrange(128) for _ in range(2))
        c, d = sorted(rng.randrange(128) for _ in range(2))
        counters = Counters()
        got = query_small(idx, Rect2(a, b, c, d), counters)
        k = len(set(got))
        assert counters.candidates_examined <= BETA * (k + 1), (
            m, (a, b, c, d), counters.candidates_examined, k)


def test_memo_hit_matches_forced_recompute():
    pts = [(3, 7), (9, 1), (4, 4), (8, 8)]
    idx = build_small(pts)
    q = Rect2(3, 9, 1, 8)
    first = query_small(idx, q)
    again = query_small(idx, q)  # memo hit
    assert first == again
    key = next(k for k in smallset._MEMO if k[0] == idx.perm)
    assert smallset._MEMO[key] == micro_recompute(*key)


def test_capacity_error():
    with pytest.raises(CapacityError):
        build_small([(i, i) for i in range(10)], cap=9)
    build_small([(i, i) for i in range(10)], cap=10)


def test_memo_budget_and_sharing():
    smallset.clear_memo()
    # combinatorially identical sets share memo entries
    a = build_small([(0, 0), (10, 10), (20, 20)])
    b = build_small([(5, 1), (6, 2), (900, 700)])
    q = Rect2(0, 1000, 0, 1000)
    query_small(a, q)
    grew = memo_stats()["entries"]
    query_small(b, q)
    assert memo_stats()["entries"] == grew  # same permutation, same rank query
    assert check_memo_budget()


def test_concurrent_queries_agree_with_serial():
    rng = random.Random(5)
    pts = [(rng.randrange(200), rng.randrange(200)) for _ in range(80)]
    idx = build_small(pts)
    queries = []
    for _ in range(200):
        a, b = sorted(rng.randrange(200) for _ in range(2))
        c, d = sorted(rng.randrange(200) for _ in range(2))
        queries.append(Rect2(a, b, c, d))
    serial = [sorted(query_small(idx, q)) for q in queries]
    results = [None] * len(queries)

    def worker(lo, hi):
        for i in range(lo, hi):
            results[i] = sorted(query_small(idx, queries[i]))

    threads = [threading.Thread(target=worker, args=(i * 50, (i + 1) * 50)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == serial


def test_meta_recursion_depth_capped():
    # spread-out points force a populated top set; depth never exceeds two
    rng = random.Random(6)
    pts = [(rng.randrange(4000), rng.randrange(4000)) for _ in range(300)]
    idx = build_small(pts, micro_cap=4)
    assert idx.mode == "grid"
    level1 = idx.top
    assert level1.depth == 1
    if level1.mode == "grid":
        assert level1.top.depth == 2
        assert level1.top.mode == "micro"
