import random

import pytest

from fatrange.geometry import Box3, Rect2


@pytest.fixture
def rng():
    return random.Random(0xFA7)


def random_points2(rng, n, u):
    return list({(rng.randrange(u), rng.randrange(u)) for _ in range(n)})


def random_points3(rng, n, u):
    return list({(rng.randrange(u), rng.randrange(u), rng.randrange(u)) for _ in range(n)})


def random_square(rng, u, max_side=None):
    s = rng.randint(1, max_side or u // 2)
    x = rng.randint(0, u - s)
    y = rng.randint(0, u - s)
    return Rect2(x, x + s - 1, y, y + s - 1)


def random_cube(rng, u, max_side=None):
    s = rng.randint(1, max_side or u // 2)
    lo = [rng.randint(0, u - s) for _ in range(3)]
    return Box3(lo[0], lo[0] + s - 1, lo[1], lo[1] + s - 1, lo[2], lo[2] + s - 1)


def rect_voxels(r: Rect2):
    return {(x, y) for x in range(r.x_lo, r.x_hi + 1) for y in range(r.y_lo, r.y_hi + 1)}


def box_voxels(b: Box3):
    return {(x, y, z)
            for x in range(b.x_lo, b.x_hi + 1)
            for y in range(b.y_lo, b.y_hi + 1)
            for z in range(b.z_lo, b.z_hi + 1)}
