"""Self-cover construction: count bound, exact coverage, interior avoidance."""

import random
from fractions import Fraction

import pytest

from polychrome.geom import Homothet, Point, pt, reference_triangle, unit_square
from polychrome.selfcover import check_self_cover, cover_square, cover_triangle

SQ = unit_square()


def _random_avoid(l, seed, den=64):
    rng = random.Random(seed)
    xs = rng.sample(range(1, den), l)
    ys = rng.sample(range(1, den), l)
    return [Point(Fraction(x, den), Fraction(y, den)) for x, y in zip(xs, ys)]


def test_empty_avoid_single_piece():
    target = Homothet(SQ, 2, (1, 1))
    cover = cover_square(target, [])
    assert cover.pieces == [target]


def test_center_point_needs_exactly_four_quarters():
    target = Homothet(SQ, 1, (0, 0))
    cover = cover_square(target, [pt(Fraction(1, 2), Fraction(1, 2))])
    assert len(cover.pieces) == 4
    assert all(p.scale == Fraction(1, 2) for p in cover.pieces)


@pytest.mark.parametrize("l,seed", [(1, 0), (2, 1), (3, 2), (5, 3), (8, 4), (12, 5)])
def test_random_covers_within_bound(l, seed):
    target = Homothet(SQ, 1, (0, 0))
    avoid = _random_avoid(l, seed)
    cover = cover_square(target, avoid)
    assert len(cover.pieces) <= 2 * l + 2
    check_self_cover(cover)  # raises on any violation


def test_scaled_target_roundtrip():
    target = Homothet(SQ, 4, (10, 20))
    avoid = [pt(11, 21), pt(12, 23)]
    cover = cover_square(target, avoid)
    assert len(cover.pieces) <= 6
    check_self_cover(cover)


def test_sandwiched_interior_instance():
    # edge-anchored squares alone cannot cover the center here; the search
    # fallback (or an interior piece) must appear
    target = Homothet(SQ, 1, (0, 0))
    den = Fraction(1, 100)
    avoid = [
        Point(Fraction(30, 100), Fraction(49, 100)),
        Point(Fraction(70, 100), Fraction(51, 100)),
        Point(Fraction(31, 100), Fraction(52, 100)),
        Point(Fraction(69, 100), Fraction(48, 100)),
    ]
    cover = cover_square(target, avoid)
    assert len(cover.pieces) <= 10
    check_self_cover(cover)


def test_avoid_on_boundary_rejected():
    from polychrome.errors import PositionError

    target = Homothet(SQ, 1, (0, 0))
    with pytest.raises(PositionError):
        cover_square(target, [pt(0, Fraction(1, 2))])


@pytest.mark.parametrize("l,seed", [(0, 0), (1, 1), (2, 2), (3, 3)])
def test_triangle_cover_search(l, seed):
    target = Homothet(reference_triangle(), 1, (0, 0))
    rng = random.Random(seed)
    avoid = []
    while len(avoid) < l:
        x = Fraction(rng.randrange(1, 128), 128) * 2
        y = Fraction(rng.randrange(1, 128), 128) * 2
        p = Point(x, y)
        from polychrome.geom import Containment, containment

        if containment(target, p) is Containment.INTERIOR and all(
            q.x != p.x and q.y != p.y for q in avoid
        ):
            avoid.append(p)
    cover = cover_triangle(target, avoid)
    assert len(cover.pieces) <= 2 * l + 1
    check_self_cover(cover)
