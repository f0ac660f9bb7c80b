"""Exact-arithmetic geometric primitives.

Points are pairs of ``fractions.Fraction``; every predicate is decided with
exact rational arithmetic, never floating point.  Convex polygons are stored
with clockwise vertex order (y axis pointing up), so the outward normal of a
directed side ``d`` is ``rot90(d) = (-d.y, d.x)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from .errors import DegenerateShapeError, GeometryError, PositionError

Rational = Fraction


def rational(value) -> Fraction:
    """Parse a value into an exact Fraction.

    Accepts ints, Fractions, decimal strings ("1.25"), and "num/den" strings.
    Floats are rejected: they would smuggle rounding into exact predicates.
    """
    if isinstance(value, float):
        raise GeometryError("floats are not accepted as exact coordinates: %r" % (value,))
    return Fraction(value)


def fmt_rational(q: Fraction) -> str:
    return "%d/%d" % (q.numerator, q.denominator)


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, k: Fraction) -> "Point":
        return Point(self.x * k, self.y * k)


def pt(x, y) -> Point:
    return Point(rational(x), rational(y))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def dot(a: Point, b: Point) -> Fraction:
    return a.x * b.x + a.y * b.y


class ShapeKind(enum.Enum):
    TRIANGLE = "triangle"
    PARALLELOGRAM = "parallelogram"
    GENERAL = "general"


class Openness(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"


class Containment(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Quadrant(enum.Enum):
    NE = "NE"
    NW = "NW"
    SE = "SE"
    SW = "SW"


_QUADRANT_OPPOSITE = {
    Quadrant.NE: Quadrant.SW,
    Quadrant.SW: Quadrant.NE,
    Quadrant.NW: Quadrant.SE,
    Quadrant.SE: Quadrant.NW,
}


def quadrant(origin: Point, q: Point) -> Quadrant:
    """Open-quadrant classification of q relative to origin.

    Ties on either coordinate mean the input was not position-conditioned.
    """
    if q.x == origin.x or q.y == origin.y:
        raise PositionError(
            "quadrant undefined: %s shares a coordinate with origin %s" % (q, origin)
        )
    if q.x > origin.x:
        return Quadrant.NE if q.y > origin.y else Quadrant.SE
    return Quadrant.NW if q.y > origin.y else Quadrant.SW


def opposite_quadrant(qd: Quadrant) -> Quadrant:
    return _QUADRANT_OPPOSITE[qd]


class ConvexShape:
    """A closed (or open) strictly convex polygon with clockwise vertices."""

    def __init__(self, vertices: Iterable, openness: Openness = Openness.CLOSED):
        verts = [Point(rational(v[0]), rational(v[1])) for v in vertices]
        if len(verts) < 3:
            raise DegenerateShapeError("a convex shape needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise DegenerateShapeError("repeated vertex")
        area2 = sum(
            verts[i].x * verts[(i + 1) % len(verts)].y
            - verts[(i + 1) % len(verts)].x * verts[i].y
            for i in range(len(verts))
        )
        if area2 == 0:
            raise DegenerateShapeError("zero area")
        if area2 > 0:  # counter-clockwise input: reverse, keeping the first vertex
            verts = [verts[0]] + verts[1:][::-1]
        self.vertices: Tuple[Point, ...] = tuple(verts)
        self.openness = openness
        self._validate_strict_convexity()
        self.kind = self._classify()
        # outward normal and offset per side i (from vertex i to vertex i+1):
        # a point p is inside iff normals[i] . p <= offsets[i] for all i.
        self.normals: Tuple[Point, ...] = tuple(
            Point(-(self._v(i + 1).y - self._v(i).y), self._v(i + 1).x - self._v(i).x)
            for i in range(len(self.vertices))
        )
        self.offsets: Tuple[Fraction, ...] = tuple(
            dot(self.normals[i], self.vertices[i]) for i in range(len(self.vertices))
        )

    def _v(self, i: int) -> Point:
        return self.vertices[i % len(self.vertices)]

    def _validate_strict_convexity(self) -> None:
        n = len(self.vertices)
        for i in range(n):
            a, b = self._v(i), self._v(i + 1)
            for j, p in enumerate(self.vertices):
                if p == a or p == b:
                    continue
                # clockwise: every other vertex strictly right of each edge
                if cross(a, b, p) >= 0:
                    raise DegenerateShapeError(
                        "not strictly convex clockwise at edge %d (vertex %d)" % (i, j)
                    )

    def _classify(self) -> ShapeKind:
        n = len(self.vertices)
        if n == 3:
            return ShapeKind.TRIANGLE
        if n == 4:
            v = self.vertices
            if v[1] - v[0] == v[2] - v[3] and v[2] - v[1] == v[3] - v[0]:
                return ShapeKind.PARALLELOGRAM
        return ShapeKind.GENERAL

    @property
    def n_sides(self) -> int:
        return len(self.vertices)

    def side(self, i: int) -> Tuple[Point, Point]:
        return self._v(i), self._v(i + 1)

    def __eq__(self, other):
        return (
            isinstance(other, ConvexShape)
            and self.vertices == other.vertices
            and self.openness == other.openness
        )

    def __hash__(self):
        return hash((self.vertices, self.openness))

    def __repr__(self):
        return "ConvexShape(%s, %s, %s)" % (
            self.kind.value,
            [(str(v.x), str(v.y)) for v in self.vertices],
            self.openness.value,
        )


UNIT_SQUARE_VERTICES = ((0, 0), (0, 1), (1, 1), (1, 0))

#: Rational stand-in for the equilateral reference triangle (clockwise).
#: Exact rationals cannot express an equilateral triangle; every guarantee we
#: rely on is affine-invariant, so a fixed near-equilateral rational triangle
#: serves as the normalization target.
REFERENCE_TRIANGLE_VERTICES = ((0, 0), (1, 2), (2, 0))


def unit_square(openness: Openness = Openness.CLOSED) -> ConvexShape:
    return ConvexShape(UNIT_SQUARE_VERTICES, openness)


def regular_polygon(n: int, openness: Openness = Openness.CLOSED,
                    denominator: int = 1 << 20) -> ConvexShape:
    """Rational approximation of the regular n-gon (clockwise, radius 1).

    Exact rationals cannot carry a true regular polygon; the approximation is
    itself an honest strictly convex polygon and every downstream computation
    on it is exact.  The small rotation keeps sides away from the axes.
    """
    import math

    if n < 3:
        raise DegenerateShapeError("need at least 3 vertices")
    verts = []
    for k in range(n):
        theta = 0.3 - 2 * math.pi * k / n
        verts.append(
            (
                Fraction(round(math.cos(theta) * denominator), denominator),
                Fraction(round(math.sin(theta) * denominator), denominator),
            )
        )
    return ConvexShape(verts, openness)


def reference_triangle(openness: Openness = Openness.CLOSED) -> ConvexShape:
    return ConvexShape(REFERENCE_TRIANGLE_VERTICES, openness)


# Side indices of the normalized unit square, fixed by UNIT_SQUARE_VERTICES.
SQUARE_LEFT, SQUARE_TOP, SQUARE_RIGHT, SQUARE_BOTTOM = 0, 1, 2, 3


@dataclass(frozen=True)
class AffineMap:
    """(x, y) -> (a x + b y + tx, c x + d y + ty), all entries rational."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    tx: Fraction
    ty: Fraction

    def apply(self, p: Point) -> Point:
        return Point(self.a * p.x + self.b * p.y + self.tx, self.c * p.x + self.d * p.y + self.ty)

    def apply_all(self, pts: Sequence[Point]) -> Tuple[Point, ...]:
        return tuple(self.apply(p) for p in pts)

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "AffineMap":
        det = self.det()
        if det == 0:
            raise GeometryError("affine map is singular")
        ia, ib, ic, id_ = self.d / det, -self.b / det, -self.c / det, self.a / det
        return AffineMap(ia, ib, ic, id_, -(ia * self.tx + ib * self.ty), -(ic * self.tx + id_ * self.ty))

    @staticmethod
    def identity() -> "AffineMap":
        one, zero = Fraction(1), Fraction(0)
        return AffineMap(one, zero, zero, one, zero, zero)


class Homothet:
    """scale * shape + translation, with scale > 0."""

    def __init__(self, shape: ConvexShape, scale, translation) -> None:
        self.shape = shape
        self.scale = rational(scale)
        if self.scale <= 0:
            raise GeometryError("homothet scale must be positive, got %s" % self.scale)
        self.translation = Point(rational(translation[0]), rational(translation[1]))
        self._offsets: Optional[Tuple[Fraction, ...]] = None

    @property
    def vertices(self) -> Tuple[Point, ...]:
        t = self.translation
        k = self.scale
        return tuple(Point(v.x * k + t.x, v.y * k + t.y) for v in self.shape.vertices)

    @property
    def offsets(self) -> Tuple[Fraction, ...]:
        if self._offsets is None:
            t = self.translation
            self._offsets = tuple(
                self.scale * self.shape.offsets[i] + dot(self.shape.normals[i], t)
                for i in range(self.shape.n_sides)
            )
        return self._offsets

    def side(self, i: int) -> Tuple[Point, Point]:
        a, b = self.shape.side(i)
        t, k = self.translation, self.scale
        return Point(a.x * k + t.x, a.y * k + t.y), Point(b.x * k + t.x, b.y * k + t.y)

    def __eq__(self, other):
        return (
            isinstance(other, Homothet)
            and self.shape == other.shape
            and self.scale == other.scale
            and self.translation == other.translation
        )

    def __hash__(self):
        return hash((self.shape, self.scale, self.translation))

    def __repr__(self):
        return "Homothet(scale=%s, t=(%s, %s))" % (self.scale, self.translation.x, self.translation.y)


def containment(h: Homothet, p: Point) -> Containment:
    """Exact classification of p against the closed region of h.

    For open shapes callers must treat BOUNDARY as not contained.
    """
    on_boundary = False
    for n, c in zip(h.shape.normals, h.offsets):
        d = n.x * p.x + n.y * p.y - c
        if d > 0:
            return Containment.OUTSIDE
        if d == 0:
            on_boundary = True
    return Containment.BOUNDARY if on_boundary else Containment.INTERIOR


def contains(h: Homothet, p: Point) -> bool:
    """Closed containment (boundary counts)."""
    return containment(h, p) is not Containment.OUTSIDE


def _segments_cross(a: Point, b: Point, c: Point, d: Point) -> str:
    """Classify segment intersection: 'none', 'proper', 'touch', 'overlap'."""
    o1, o2 = cross(a, b, c), cross(a, b, d)
    o3, o4 = cross(c, d, a), cross(c, d, b)
    if o1 == 0 and o2 == 0:
        # collinear: overlap if the 1-d intervals intersect in more than a point
        lo1, hi1 = sorted([(a.x, a.y), (b.x, b.y)])
        lo2, hi2 = sorted([(c.x, c.y), (d.x, d.y)])
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo < hi:
            return "overlap"
        if lo == hi:
            return "touch"
        return "none"
    if o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)):
            return "proper"
        return "none"
    if (
        (o1 == 0 and _between(a, b, c))
        or (o2 == 0 and _between(a, b, d))
        or (o3 == 0 and _between(c, d, a))
        or (o4 == 0 and _between(c, d, b))
    ):
        return "touch"
    return "none"


def _between(a: Point, b: Point, p: Point) -> bool:
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def boundary_crossings(h1: Homothet, h2: Homothet) -> int:
    """Count proper crossing points of the two polygon boundaries.

    Raises if the boundaries overlap along a segment or meet tangentially at
    a vertex: those configurations are excluded by position conditioning.
    """
    count = 0
    n1, n2 = h1.shape.n_sides, h2.shape.n_sides
    for i in range(n1):
        a, b = h1.side(i)
        for j in range(n2):
            c, d = h2.side(j)
            kind = _segments_cross(a, b, c, d)
            if kind == "proper":
                count += 1
            elif kind == "overlap":
                raise PositionError("homothet boundaries overlap along a segment")
            elif kind == "touch":
                raise PositionError("homothet boundaries touch at a vertex; perturb inputs")
    return count


def _solve_linear_map(e1: Point, f1: Point, e2: Point, f2: Point):
    """Return the 2x2 rational matrix M with M e1 = f1 and M e2 = f2."""
    det = e1.x * e2.y - e1.y * e2.x
    if det == 0:
        raise DegenerateShapeError("degenerate basis for affine normalization")
    a = (f1.x * e2.y - f2.x * e1.y) / det
    b = (f2.x * e1.x - f1.x * e2.x) / det
    c = (f1.y * e2.y - f2.y * e1.y) / det
    d = (f2.y * e1.x - f1.y * e2.x) / det
    return a, b, c, d


def normalize(shape: ConvexShape) -> Tuple[AffineMap, ConvexShape]:
    """Affine map sending parallelograms to the closed unit square and
    triangles to the fixed reference triangle; general polygons map to
    themselves by the identity.

    The map fixes the lexicographically-least vertex to the origin, which
    makes normalization deterministic.
    """
    if shape.kind is ShapeKind.GENERAL:
        return AffineMap.identity(), shape
    verts = shape.vertices
    i0 = min(range(len(verts)), key=lambda i: (verts[i].x, verts[i].y))
    ordered = [verts[(i0 + k) % len(verts)] for k in range(len(verts))]
    v0 = ordered[0]
    if shape.kind is ShapeKind.PARALLELOGRAM:
        targets = [Point(rational(x), rational(y)) for x, y in UNIT_SQUARE_VERTICES]
        e1, e2 = ordered[1] - v0, ordered[3] - v0
        f1, f2 = targets[1], targets[3]
        out_vertices = UNIT_SQUARE_VERTICES
    else:
        targets = [Point(rational(x), rational(y)) for x, y in REFERENCE_TRIANGLE_VERTICES]
        e1, e2 = ordered[1] - v0, ordered[2] - v0
        f1, f2 = targets[1], targets[2]
        out_vertices = REFERENCE_TRIANGLE_VERTICES
    a, b, c, d = _solve_linear_map(e1, f1, e2, f2)
    tx = -(a * v0.x + b * v0.y)
    ty = -(c * v0.x + d * v0.y)
    amap = AffineMap(a, b, c, d, tx, ty)
    normalized = ConvexShape(out_vertices, shape.openness)
    for src, tgt in zip(ordered, normalized.vertices):
        if amap.apply(src) != tgt:
            raise GeometryError("normalization failed to hit target vertices")
    return amap, normalized


def _angle_ge_two_pi(dot_v: Fraction, cross_v: Fraction, max_k: int = 4096) -> int:
    """Smallest k with k*angle >= 2*pi for the angle arg(dot_v + i*cross_v).

    The angle is taken in (0, pi].  Uses exact complex powers and counts
    positive-real-axis wraps, so the result is exact.
    """
    if cross_v < 0:
        cross_v = -cross_v
    if cross_v == 0:
        if dot_v < 0:
            return 2  # angle == pi
        raise GeometryError("zero angle")
    # cumulative product z^k; count wraps past the positive real axis
    re, im = dot_v, cross_v
    prev_upper = True  # im > 0 after one step
    wraps = 0
    k = 1
    while k < max_k:
        if wraps >= 1:
            return k
        k += 1
        re, im = re * dot_v - im * cross_v, re * cross_v + im * dot_v
        upper = im > 0 or (im == 0 and re < 0)
        if im == 0 and re > 0:
            return k  # k*angle is an exact multiple of 2*pi
        if prev_upper is False and upper is True:
            wraps += 1
        prev_upper = upper
    raise GeometryError("angle too small for degree-bound computation")


def min_angle_degree_bound(shape: ConvexShape) -> int:
    """n + ceil(2*pi / alpha) where alpha is the smallest angle formed by
    three vertices of the shape; exact."""
    verts = shape.vertices
    n = len(verts)
    best = None  # (dot, cross) with maximal angle-key smallness
    best_k = 0
    for bi in range(n):
        for ai in range(n):
            for ci in range(n):
                if len({ai, bi, ci}) != 3:
                    continue
                u = verts[ai] - verts[bi]
                v = verts[ci] - verts[bi]
                d = dot(u, v)
                c = u.x * v.y - u.y * v.x
                if c < 0:
                    c = -c
                if c == 0 and d > 0:
                    continue  # zero angle cannot happen for convex distinct vertices
                k = _angle_ge_two_pi(d, c)
                if k > best_k:
                    best_k = k
                    best = (d, c)
    if best is None:
        raise GeometryError("no angle found")
    return n + best_k


@dataclass(frozen=True)
class ShapeConstants:
    """Derived constants controlling the coloring pipeline."""

    degree_bound: int
    min_angle: Optional[float]
    goodness_constant: Optional[int]
    self_cover_slope: Optional[int]
    cover_function: Optional[Tuple[int, int]]  # f(l) = a*l + b
    threshold: Optional[int]

    def f(self, l: int) -> int:
        if self.cover_function is None:
            raise GeometryError("no self-cover function for this shape kind")
        a, b = self.cover_function
        return a * l + b


def shape_constants(shape: ConvexShape) -> ShapeConstants:
    n = shape.n_sides
    if shape.kind is ShapeKind.PARALLELOGRAM:
        c_g, cover = 22, (2, 2)
        m = (c_g - 1) * (cover[0] * n + cover[1]) + n + 1
        return ShapeConstants(4, 90.0, c_g, 4, cover, m)
    if shape.kind is ShapeKind.TRIANGLE:
        c_g, cover = 7382, (2, 1)
        m = (c_g - 1) * (cover[0] * n + cover[1]) + n + 1
        return ShapeConstants(9, 60.0, c_g, 3, cover, m)
    return ShapeConstants(min_angle_degree_bound(shape), None, None, None, None, None)


def threshold_for_k(shape: ConvexShape, k: int) -> int:
    """m_k = m * f(m-1)^(ceil(log2 k) - 1) for the recursive k-coloring."""
    consts = shape_constants(shape)
    if consts.threshold is None:
        raise GeometryError("no coloring threshold for general convex polygons")
    if k < 1:
        raise GeometryError("k must be >= 1")
    m = consts.threshold
    if k == 1:
        return m
    levels = (k - 1).bit_length()  # ceil(log2 k)
    return m * (consts.f(m - 1)) ** (levels - 1)
