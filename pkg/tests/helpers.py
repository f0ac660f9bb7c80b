"""Shared test utilities: seeded point-set generators with exact rational
coordinates."""

import random
from fractions import Fraction

from polychrome.geom import Point

DEN = 2048


def random_points(n, seed, span=100, den=DEN):
    """n distinct random points on a fine rational grid."""
    rng = random.Random(seed)
    pts = set()
    while len(pts) < n:
        pts.add((rng.randrange(0, span * den), rng.randrange(0, span * den)))
    return [Point(Fraction(x, den), Fraction(y, den)) for x, y in sorted(pts)]


def clustered_points(n, seed, clusters=1, span=100, spread=2, den=DEN):
    """Most points packed into tiny clusters, the rest scattered."""
    rng = random.Random(seed)
    pts = set()
    centers = [
        (rng.randrange(span * den // 4, 3 * span * den // 4),
         rng.randrange(span * den // 4, 3 * span * den // 4))
        for _ in range(clusters)
    ]
    n_clustered = (9 * n) // 10
    while len(pts) < n_clustered:
        cx, cy = centers[rng.randrange(clusters)]
        pts.add((cx + rng.randrange(-spread * den, spread * den),
                 cy + rng.randrange(-spread * den, spread * den)))
    while len(pts) < n:
        pts.add((rng.randrange(0, span * den), rng.randrange(0, span * den)))
    return [Point(Fraction(x, den), Fraction(y, den)) for x, y in sorted(pts)]


def staircase_points(n, seed, den=DEN):
    """x- and y-monotone staircase with jitter; produces path-like Delaunay
    graphs whose induced subgraphs are trees."""
    rng = random.Random(seed)
    pts = []
    x = y = 0
    for _ in range(n):
        x += rng.randrange(den // 2, 3 * den)
        y += rng.randrange(den // 2, 3 * den)
        pts.append(Point(Fraction(x, den), Fraction(y, den)))
    return pts
