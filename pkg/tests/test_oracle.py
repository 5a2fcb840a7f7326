import random

import pytest

from fatrange import oracle, range2d
from fatrange.errors import OracleGuardError
from fatrange.geometry import Box3, Rect2, Universe
from fatrange.oracle import (OracleConfig, brute_range2, brute_range3,
                             brute_relevant_nodes, brute_spanning, brute_stab3)

from conftest import random_points2, random_square


def test_brute_range2_trivia():
    assert brute_range2([], Rect2(0, 5, 0, 5)) == []
    pts = [(0, 0), (3, 3), (5, 5)]
    assert brute_range2(pts, Rect2(0, 5, 0, 5)) == pts
    assert brute_range2([(5, 5)], Rect2(5, 9, 5, 9)) == [(5, 5)]  # corner is closed


def test_brute_range3_trivia():
    assert brute_range3([], Box3(0, 5, 0, 5, 0, 5)) == []
    pts = [(0, 0, 0), (5, 5, 5)]
    assert brute_range3(pts, Box3(0, 5, 0, 5, 0, 5)) == pts
    assert brute_range3([(2, 3, 5)], Box3(0, 2, 3, 9, 5, 5)) == [(2, 3, 5)]


def test_brute_stab3_trivia():
    assert brute_stab3([], (1, 1, 1)) == []
    boxes = [Box3(0, 4, 0, 4, 0, 4), Box3(1, 3, 1, 3, 1, 3)]
    assert brute_stab3(boxes, (4, 4, 4)) == [0]
    assert brute_stab3(boxes, (2, 2, 2)) == [0, 1]


def test_guards_refuse_oversized_inputs():
    cfg = OracleConfig(max_points=10, max_boxes=5, max_octree_log2=4)
    with pytest.raises(OracleGuardError):
        brute_range2([(i, i) for i in range(11)], Rect2(0, 20, 0, 20), cfg)
    with pytest.raises(OracleGuardError):
        brute_stab3([Box3(0, 1, 0, 1, 0, 1)] * 6, (0, 0, 0), cfg)
    with pytest.raises(OracleGuardError):
        brute_relevant_nodes(Box3(0, 1, 0, 1, 0, 1), 5, cfg)


def test_spanning_oracle_universe_empty_and_square_only():
    rng = random.Random(51)
    pts = random_points2(rng, 60, 128)
    idx = range2d.build2d(pts, universe=Universe(7), d=3)
    assert brute_spanning(idx.sub, Rect2(0, 127, 0, 127)) == []
    with pytest.raises(ValueError):
        brute_spanning(idx.sub, Rect2(0, 10, 0, 4))


def test_spanning_oracle_cross_checks_classifier():
    # two independent implementations of the same geometry must agree
    rng = random.Random(52)
    pts = random_points2(rng, 250, 512)
    idx = range2d.build2d(pts, universe=Universe(9), d=4)
    for _ in range(500):
        q = random_square(rng, 512)
        via_oracle = {r.idx for r in brute_spanning(idx.sub, q)}
        via_classify = {r.idx for r in idx.rects
                        if range2d.classify_rectangle(r, q) is range2d.RectClass.SPANNING}
        assert via_oracle == via_classify


def test_array_views_match_plain_lists(rng):
    pts = random_points2(rng, 300, 1024)
    arr = oracle.PointArray2(pts)
    for _ in range(100):
        q = random_square(rng, 1024)
        assert sorted(map(tuple, brute_range2(arr, q))) == sorted(brute_range2(pts, q))
