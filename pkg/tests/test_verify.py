"""Verifier exhaustiveness against the oracle, polychromatic checks, and
the structural invariant suites."""

import random

import pytest

from polychrome.coloring import k_color, two_color
from polychrome.delaunay import build_dt, condition
from polychrome.geom import unit_square
from polychrome.ranges import enumerate_ranges
from polychrome.verify import (
    brute_force_oracle,
    edge_split_violations,
    quadrant_exclusion_violations,
    scan_universal_goodness,
    tree_range_structure_violations,
    verify,
    verify_polychromatic,
)

from helpers import random_points, staircase_points

SQUARE = unit_square()


@pytest.mark.parametrize("seed", range(5))
def test_verifier_matches_brute_force_on_small_sets(seed):
    rng = random.Random(seed)
    pts = random_points(9, seed + 70)
    labels = [rng.randrange(2) for _ in pts]
    m = 4
    report = verify(pts, SQUARE, labels, m=m, seed=0)
    oracle = brute_force_oracle(pts, SQUARE)
    expected = set()
    for r in oracle.ranges:
        mem = r.point_indices
        if len(mem) >= m and len({labels[i] for i in mem}) == 1:
            expected.add(mem)
    got = {tuple(v["indices"]) for v in report.violations}
    assert got == expected
    exp_max = max(
        (len(r.point_indices) for r in oracle.ranges
         if len({labels[i] for i in r.point_indices}) == 1),
        default=0,
    )
    assert report.max_monochromatic_size == exp_max


def test_oracle_size_guard():
    from polychrome.errors import EnumerationError

    with pytest.raises(EnumerationError):
        brute_force_oracle(random_points(11, 0), SQUARE)


def test_verify_polychromatic_k1_and_k2():
    pts = random_points(25, 44)
    k1 = k_color(pts, SQUARE, 1, seed=0)
    rep1 = verify_polychromatic(pts, SQUARE, k1, seed=0)
    assert rep1.ok
    assert rep1.polychromatic["empirical_min_all_colors"] == 1
    k2 = k_color(pts, SQUARE, 2, seed=0)
    rep2 = verify_polychromatic(pts, SQUARE, k2, seed=0)
    assert rep2.ok  # m_2 = 215 is out of reach for 25 points
    res = two_color(pts, SQUARE, seed=0)
    assert k2.labels == res.labels


@pytest.mark.parametrize("seed", range(3))
def test_structure_suite_clean_on_random_and_staircase(seed):
    for pts in (random_points(25, seed + 10), staircase_points(24, seed)):
        dt = build_dt(condition(pts, SQUARE, seed=seed))
        assert tree_range_structure_violations(dt) == []
        assert quadrant_exclusion_violations(dt) == []


def test_edge_split_suite_small():
    pts = random_points(14, 3)
    dt = build_dt(condition(pts, SQUARE, seed=1))
    assert edge_split_violations(dt) == []


def test_scan_goodness_pentagon_adversary_has_witness():
    from polychrome.adversary import build_adversarial
    from polychrome.geom import regular_polygon

    inst = build_adversarial(regular_polygon(5), 8)
    report = scan_universal_goodness(inst.all_points, inst.polygon, 8, seed=0)
    assert not report.universally_good_here
    assert report.witnesses
