"""Adversarial construction: structural invariants, Delaunay path shape,
and the universal-goodness failure witness."""

import pytest
from fractions import Fraction

from polychrome.adversary import build_adversarial, verify_adversarial
from polychrome.errors import PositionError
from polychrome.geom import (
    Containment,
    ConvexShape,
    Homothet,
    containment,
    regular_polygon,
    unit_square,
)


def test_rejects_square_and_triangle():
    with pytest.raises(PositionError):
        build_adversarial(unit_square(), 8)
    with pytest.raises(PositionError):
        build_adversarial(ConvexShape([(0, 0), (4, 0), (0, 4)]), 8)


def test_rejects_bad_c():
    with pytest.raises(PositionError):
        build_adversarial(regular_polygon(5), 10)


def test_pentagon_c8_instance():
    pent = regular_polygon(5)
    inst = build_adversarial(pent, 8)
    assert len(inst.path_points) == 8
    assert len(inst.outer_points) == 8
    # every witness homothet stays inside the polygon
    big = Homothet(pent, 1, (0, 0))
    for h in inst.witness_homothets:
        for v in h.vertices:
            assert containment(big, v) is not Containment.OUTSIDE
    # outer points are strictly outside
    for q in inst.outer_points:
        assert containment(big, q) is Containment.OUTSIDE
    # scales shrink strictly
    scales = [h.scale for h in inst.witness_homothets]
    assert all(a > b for a, b in zip(scales, scales[1:]))
    report = verify_adversarial(inst)
    assert report["witnesses"] >= 1
    assert report["bad_even_centers"] == 3


def test_hexagon_c8_instance():
    inst = build_adversarial(regular_polygon(6), 8)
    report = verify_adversarial(inst)
    assert report["witnesses"] >= 1


def test_trapezoid_needs_mirror_or_not():
    # an irregular quadrilateral that is not a parallelogram
    quad = ConvexShape([(0, 0), (6, 0), (5, 4), (2, 5)])
    inst = build_adversarial(quad, 8)
    report = verify_adversarial(inst)
    assert report["witnesses"] >= 1


def test_pair_witnesses_realize_exactly_their_pairs():
    inst = build_adversarial(regular_polygon(5), 8)
    pts = inst.all_points
    c = inst.c
    for i, hw in enumerate(inst.pair_witnesses):
        inside = [
            j for j, p in enumerate(pts) if containment(hw, p) is not Containment.OUTSIDE
        ]
        assert inside == sorted([i, c + i])
