from fractions import Fraction as F

from tbilliard.geometry import Point
from tbilliard.hausdorff import directed_hausdorff_squared, hausdorff_distance_squared_max


def P(x, y):
    return Point(F(x), F(y))


def test_identical_paths():
    a = [P(0, 0), P(1, 0), P(1, 1)]
    r = hausdorff_distance_squared_max(a, a)
    assert r.exact and r.squared == 0


def test_parallel_segments():
    r = hausdorff_distance_squared_max([P(0, 0), P(1, 0)], [P(0, 1), P(1, 1)])
    assert r.exact and r.squared == 1


def test_prefix_extension():
    a = [P(0, 0), P(1, 0)]
    b = [P(0, 0), P(1, 0), P(1, 2)]
    r = hausdorff_distance_squared_max(a, b)
    assert r.exact and r.squared == 4


def test_directed_is_asymmetric():
    a = [P(0, 0), P(1, 0)]
    b = [P(0, 0), P(2, 0)]
    assert directed_hausdorff_squared(a, b)[0] == 0
    assert directed_hausdorff_squared(b, a)[0] == 1


def test_crossing_maximiser():
    # the farthest point of a from b is the midpoint of a, equidistant from both b segments
    a = [P(0, 1), P(2, 1)]
    b = [P(0, 0), P(1, 0), P(1, 0), P(2, 0)]
    r = hausdorff_distance_squared_max(a, b)
    assert r.squared == 1
