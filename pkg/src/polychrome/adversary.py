"""Adversarial generator: for a convex polygon that is neither a triangle
nor a parallelogram, build a point set whose Delaunay graph restricted to a
chosen homothet is a long path with no good 3-path.

Construction sketch (all exact rationals): pick a "bottom" side uv, the
"top" edge yz (possibly a degenerate vertex), a right-chain vertex x and the
point y0 on the left chain at x's height.  Nested homothets P_1..P_c
alternate between two one-parameter families anchored at x: "up" homothets
with their uv-side on the segment y0-x and their (x-,x)-side pressed into
the polygon's (x-,x) side, and "down" homothets mirrored below the segment
with their (x,x+)-side pressed.  Path points sit at base/top vertices of
the P_i on the segment, outer points sit just outside the pressed sides,
and a final microscopic perturbation pushes odd path points slightly below
the segment and even ones slightly above, with offsets growing in i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import EnumerationError, PositionError
from .geom import (
    Containment,
    ConvexShape,
    Homothet,
    Point,
    ShapeKind,
    containment,
    cross,
)

SHRINK_RATIO = Fraction(1, 8)
SNAP_BITS_BASE = 48
SNAP_BITS_STEP = 8


@dataclass
class AdversarialInstance:
    polygon: ConvexShape
    c: int
    path_points: List[Point]
    outer_points: List[Point]
    witness_homothets: List[Homothet]  # exact nested P_i (pre-perturbation)
    pair_witnesses: List[Homothet]  # inflated P'_i with exactly {p_i, q_i}
    epsilon: Fraction
    mirrored: bool
    roles: Dict[str, Tuple[Fraction, Fraction]] = field(default_factory=dict)

    @property
    def all_points(self) -> List[Point]:
        return list(self.path_points) + list(self.outer_points)


def _reflect_matrix(n: Point):
    """Reflection across the line through the origin spanned by n."""
    d = n.x * n.x + n.y * n.y
    a = (n.x * n.x - n.y * n.y) / d
    b = 2 * n.x * n.y / d
    return a, b  # matrix [[a, b], [b, -a]]


def _apply_reflect(mat, p: Point) -> Point:
    a, b = mat
    return Point(a * p.x + b * p.y, b * p.x - a * p.y)


def _line_intersection(n1: Point, c1: Fraction, n2: Point, c2: Fraction) -> Point:
    det = n1.x * n2.y - n1.y * n2.x
    if det == 0:
        raise EnumerationError("parallel lines in adversarial frame")
    return Point((c1 * n2.y - c2 * n1.y) / det, (n1.x * c2 - n2.x * c1) / det)


class _Frame:
    """Role assignment (u, v, y, z, x, y0) for one choice of bottom side."""

    def __init__(self, shape: ConvexShape, e: int):
        self.shape = shape
        n = shape.n_sides
        verts = shape.vertices
        if n == 4:
            d = verts[(e + 1) % n] - verts[e]
            for k in range(n):
                if k == e:
                    continue
                dk = verts[(k + 1) % n] - verts[k]
                if d.x * dk.y - d.y * dk.x == 0:
                    raise PositionError("side parallel to another side")
        self.e = e
        self.v_idx, self.u_idx = e, (e + 1) % n
        self.u, self.v = verts[self.u_idx], verts[self.v_idx]
        self.n_uv = shape.normals[e]
        self.c_uv = shape.offsets[e]
        self.d_uv = self.v - self.u

        def height(p: Point) -> Fraction:
            return self.c_uv - (self.n_uv.x * p.x + self.n_uv.y * p.y)

        self.height = height
        hmax = max(height(w) for w in verts)
        top = [k for k in range(n) if height(verts[k]) == hmax]
        if len(top) == 1:
            self.iy = self.iz = top[0]
        elif len(top) == 2 and (top[1] - top[0]) % n in (1, n - 1):
            a, b = top
            if (a + 1) % n == b:
                self.iy, self.iz = a, b
            else:
                self.iy, self.iz = b, a
        else:
            raise PositionError("ambiguous top edge")
        # x: first vertex clockwise after z, strictly between z and v
        self.ix = (self.iz + 1) % n
        if self.ix == self.v_idx or self.ix in (self.u_idx, self.iy, self.iz):
            raise PositionError("no usable vertex on the right chain")
        self.x = verts[self.ix]
        self.hx = height(self.x)
        if not (0 < self.hx < hmax):
            raise PositionError("x is not strictly between the top and bottom")
        # y0 on the clockwise chain u -> ... -> y at x's height
        self.y0 = self._left_chain_at_height(self.hx)
        self.s_up = (self.ix - 1) % n  # side (x-, x)
        self.s_down = self.ix  # side (x, x+)
        # family anchors (see module docstring)
        self.A_up = _line_intersection(
            shape.normals[self.s_up], shape.offsets[self.s_up], self.n_uv, self.c_uv
        )
        top_line_c = self.c_uv - hmax  # n_uv . p = c_uv - hmax on the top line
        self.A_down = _line_intersection(
            shape.normals[self.s_down], shape.offsets[self.s_down], self.n_uv, top_line_c
        )
        # the shifted-corner condition: scaling P about x toward A_up/A_down
        # must stay inside the other side through x
        for (A, other_side) in ((self.A_up, self.s_down), (self.A_down, self.s_up)):
            nm = shape.normals[other_side]
            if nm.x * A.x + nm.y * A.y < shape.offsets[other_side]:
                raise PositionError("family anchor on the wrong side of x")

    def _left_chain_at_height(self, h: Fraction) -> Point:
        verts = self.shape.vertices
        n = self.shape.n_sides
        k = self.u_idx
        while k != self.iy:
            a, b = verts[k], verts[(k + 1) % n]
            ha, hb = self.height(a), self.height(b)
            if ha <= h <= hb and ha != hb:
                t = (h - ha) / (hb - ha)
                return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
            k = (k + 1) % n
        raise PositionError("no left-chain point at the required height")

    def rho(self, p: Point) -> Fraction:
        return self.d_uv.x * p.x + self.d_uv.y * p.y


def _family_homothet(frame: _Frame, anchor: Point, up: bool, snap_bits: int) -> Homothet:
    """Largest grid-snapped homothet of the up/down family whose on-line edge
    sits inside the open segment (anchor, x)."""
    shape = frame.shape
    A = frame.A_up if up else frame.A_down
    x = frame.x
    # containment bound: alpha <= (c_m - n_m.x) / (n_m.(w - A)) where den > 0
    alpha_max: Optional[Fraction] = None
    for w in shape.vertices:
        for m in range(shape.n_sides):
            nm = shape.normals[m]
            den = nm.x * (w.x - A.x) + nm.y * (w.y - A.y)
            num = shape.offsets[m] - (nm.x * x.x + nm.y * x.y)
            if den > 0:
                bound = num / den
                if alpha_max is None or bound < alpha_max:
                    alpha_max = bound
    if alpha_max is None or alpha_max <= 0:
        raise EnumerationError("empty homothet family")
    # anchor bound: both on-line vertices strictly inside (anchor, x)
    rho_x = frame.rho(x)
    rho_anchor = frame.rho(anchor)
    if rho_anchor >= rho_x:
        raise EnumerationError("anchor is not left of x")
    pair = (frame.u_idx, frame.v_idx) if up else (frame.iy, frame.iz)
    for idx in pair:
        w = shape.vertices[idx]
        coef = frame.rho(Point(w.x - A.x, w.y - A.y))
        # rho(image) = rho_x + alpha * coef must stay in (rho_anchor, rho_x)
        if coef >= 0:
            raise EnumerationError("family does not approach x from the left")
        bound = (rho_anchor - rho_x) / coef
        if bound < alpha_max:
            alpha_max = bound
    alpha = alpha_max * SHRINK_RATIO
    den = 1 << snap_bits
    alpha = Fraction(max(1, (alpha.numerator * den) // alpha.denominator), den)
    if alpha >= alpha_max:
        raise EnumerationError("snap grid too coarse for the family step")
    t = Point(x.x - alpha * A.x, x.y - alpha * A.y)
    return Homothet(shape, alpha, t)


def _vertex_of(h: Homothet, idx: int) -> Point:
    v = h.shape.vertices[idx]
    return Point(h.scale * v.x + h.translation.x, h.scale * v.y + h.translation.y)


def _assert_edge_in_side(frame: _Frame, h: Homothet, vidx_a: int, vidx_b: int, side: int):
    shape = frame.shape
    nm = shape.normals[side]
    cm = shape.offsets[side]
    sa, sb = shape.side(side)
    lo = min(frame_param(sa, sb, sa), frame_param(sa, sb, sb))
    hi = max(frame_param(sa, sb, sa), frame_param(sa, sb, sb))
    for vidx in (vidx_a, vidx_b):
        p = _vertex_of(h, vidx)
        if nm.x * p.x + nm.y * p.y != cm:
            raise EnumerationError("pressed edge not on the polygon side")
        t = frame_param(sa, sb, p)
        if not (lo <= t <= hi):
            raise EnumerationError("pressed edge leaves the side segment")


def frame_param(a: Point, b: Point, p: Point) -> Fraction:
    d = b - a
    return d.x * (p.x - a.x) + d.y * (p.y - a.y)


def build_adversarial(polygon: ConvexShape, c: int, seed: int = 0) -> AdversarialInstance:
    """Point set proving the polygon is not universally good at count c."""
    if polygon.kind is not ShapeKind.GENERAL:
        raise PositionError("adversarial construction needs a polygon that is "
                            "neither a triangle nor a parallelogram")
    if c % 4 != 0 or c < 8:
        raise PositionError("c must be a positive multiple of 4 (and at least 8)")
    last_error: Optional[Exception] = None
    for mirrored in (False, True):
        if mirrored:
            # reflect across the first side's normal direction, rebuild, and
            # reflect the outputs back
            mat = _reflect_matrix(polygon.normals[0])
            refl = ConvexShape([_apply_reflect(mat, v) for v in polygon.vertices],
                               polygon.openness)
            try:
                inst = _build_oriented(refl, c)
            except (PositionError, EnumerationError) as exc:
                last_error = exc
                continue
            return AdversarialInstance(
                polygon=polygon,
                c=c,
                path_points=[_apply_reflect(mat, p) for p in inst.path_points],
                outer_points=[_apply_reflect(mat, p) for p in inst.outer_points],
                witness_homothets=[
                    Homothet(polygon, h.scale, _apply_reflect(mat, h.translation))
                    for h in inst.witness_homothets
                ],
                pair_witnesses=[
                    Homothet(polygon, h.scale, _apply_reflect(mat, h.translation))
                    for h in inst.pair_witnesses
                ],
                epsilon=inst.epsilon,
                mirrored=True,
                roles=inst.roles,
            )
        try:
            return _build_oriented(polygon, c)
        except (PositionError, EnumerationError) as exc:
            last_error = exc
    raise EnumerationError("adversarial construction failed: %s" % last_error)


def _build_oriented(polygon: ConvexShape, c: int) -> AdversarialInstance:
    frame: Optional[_Frame] = None
    last: Optional[Exception] = None
    for e in range(polygon.n_sides):
        try:
            frame = _Frame(polygon, e)
            break
        except PositionError as exc:
            last = exc
    if frame is None:
        raise PositionError("no usable bottom side: %s" % last)
    # nested homothets P_1..P_c
    homothets: List[Homothet] = []
    anchors = frame.y0
    anchor = frame.y0
    p_points: List[Point] = []
    for i in range(1, c + 1):
        up = i % 2 == 1
        snap = SNAP_BITS_BASE + SNAP_BITS_STEP * i
        h = _family_homothet(frame, anchor, up, snap)
        homothets.append(h)
        if up:
            _assert_edge_in_side(frame, h, (frame.ix - 1) % polygon.n_sides, frame.ix, frame.s_up)
            p_points.append(_vertex_of(h, frame.u_idx))
            anchor = _vertex_of(h, frame.v_idx)
        else:
            _assert_edge_in_side(frame, h, frame.ix, (frame.ix + 1) % polygon.n_sides, frame.s_down)
            p_points.append(_vertex_of(h, frame.iy))
            anchor = _vertex_of(h, frame.iz)
    _assert_same_order(frame, homothets)
    _assert_path_order(frame, p_points)
    # outer points q_i just outside the pressed sides
    eps = _base_epsilon(polygon, homothets)
    for _try in range(8):
        try:
            return _finish_instance(polygon, frame, homothets, p_points, eps, c)
        except EnumerationError as exc:
            eps = eps / 16
            last = exc
    raise EnumerationError("adversarial witnesses failed: %s" % last)


def _assert_same_order(frame: _Frame, homothets: List[Homothet]) -> None:
    shape = frame.shape
    sa, sb = shape.side(frame.s_up)
    params = [
        frame_param(sa, sb, _vertex_of(h, (frame.ix - 1) % shape.n_sides))
        for h in homothets[0::2]
    ]
    if params != sorted(params):
        raise EnumerationError("odd pressed vertices out of order on the (x-,x) side")
    sa2, sb2 = shape.side(frame.s_down)
    params2 = [
        frame_param(sa2, sb2, _vertex_of(h, (frame.ix + 1) % shape.n_sides))
        for h in homothets[1::2]
    ]
    if params2 != sorted(params2, reverse=True):
        raise EnumerationError("even pressed vertices out of order on the (x,x+) side")


def _assert_path_order(frame: _Frame, p_points: List[Point]) -> None:
    rhos = [frame.rho(p) for p in p_points]
    if rhos != sorted(rhos):
        raise EnumerationError("path points are not ordered toward x")
    for p in p_points:
        if frame.height(p) != frame.hx:
            raise EnumerationError("path point off the y0-x segment")


def _base_epsilon(polygon: ConvexShape, homothets: List[Homothet]) -> Fraction:
    pts = [v for h in homothets for v in h.vertices] + list(polygon.vertices)
    best: Optional[Fraction] = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = max(abs(pts[i].x - pts[j].x), abs(pts[i].y - pts[j].y))
            if d > 0 and (best is None or d < best):
                best = d
    if best is None:
        raise EnumerationError("degenerate construction")
    return best / (1 << 16)


def _finish_instance(polygon, frame, homothets, p_points, eps, c) -> AdversarialInstance:
    n = polygon.n_sides
    mu = eps / (1 << 10)
    lat = mu / (1 << 6)
    n_uv = frame.n_uv
    scale_uv = max(abs(n_uv.x), abs(n_uv.y))
    d_uv = frame.d_uv
    scale_d = max(abs(d_uv.x), abs(d_uv.y))
    perturbed: List[Point] = []
    for i0, p in enumerate(p_points):
        i = i0 + 1
        sign = 1 if i % 2 == 1 else -1  # odd below (outward normal side)
        off = Fraction(sign * i) * mu / scale_uv
        offl = Fraction(i) * lat / scale_d
        perturbed.append(
            Point(p.x + off * n_uv.x + offl * d_uv.x, p.y + off * n_uv.y + offl * d_uv.y)
        )
    outer: List[Point] = []
    for i0, h in enumerate(homothets):
        i = i0 + 1
        if i % 2 == 1:
            base = _vertex_of(h, (frame.ix - 1) % n)
            nm = polygon.normals[frame.s_up]
        else:
            base = _vertex_of(h, (frame.ix + 1) % n)
            nm = polygon.normals[frame.s_down]
        sc = max(abs(nm.x), abs(nm.y))
        q = Point(base.x + Fraction(i) * eps * nm.x / sc, base.y + Fraction(i) * eps * nm.y / sc)
        if containment(Homothet(polygon, 1, (0, 0)), q) is not Containment.OUTSIDE:
            raise EnumerationError("outer point fell inside the polygon")
        outer.append(q)
    all_pts = perturbed + outer
    if len({(p.x, p.y) for p in all_pts}) != len(all_pts):
        raise EnumerationError("coincident construction points")
    # witnesses: inflate P_i about its centroid until it holds q_i (and the
    # perturbed p_i), then check it contains exactly those two
    witnesses = []
    for i0, h in enumerate(homothets):
        i = i0 + 1
        g = _centroid(h)
        lam = Fraction(1)
        for target in (outer[i0], perturbed[i0]):
            for m in range(n):
                nm = polygon.normals[m]
                den = h.offsets[m] - (nm.x * g.x + nm.y * g.y)
                num = (nm.x * target.x + nm.y * target.y) - (nm.x * g.x + nm.y * g.y)
                if den <= 0:
                    raise EnumerationError("degenerate witness inflation")
                need = Fraction(num, 1) / den
                if need > lam:
                    lam = need
        lam = lam * (Fraction(1) + Fraction(1, 1 << 12))
        hw = Homothet(polygon, h.scale * lam, Point(g.x + lam * (h.translation.x - g.x),
                                                    g.y + lam * (h.translation.y - g.y)))
        inside = [j for j, p in enumerate(all_pts) if containment(hw, p) is not Containment.OUTSIDE]
        if inside != sorted({i0, c + i0}):
            raise EnumerationError(
                "pair witness %d contains %s instead of {p_%d, q_%d}" % (i, inside, i, i)
            )
        witnesses.append(hw)
    roles = {
        "u": (frame.u.x, frame.u.y),
        "v": (frame.v.x, frame.v.y),
        "x": (frame.x.x, frame.x.y),
        "y0": (frame.y0.x, frame.y0.y),
    }
    return AdversarialInstance(
        polygon=polygon,
        c=c,
        path_points=perturbed,
        outer_points=outer,
        witness_homothets=homothets,
        pair_witnesses=witnesses,
        epsilon=eps,
        mirrored=False,
        roles=roles,
    )


def _centroid(h: Homothet) -> Point:
    vs = h.vertices
    return Point(sum(v.x for v in vs) / len(vs), sum(v.y for v in vs) / len(vs))


def verify_adversarial(inst: AdversarialInstance, seed: int = 0) -> Dict:
    """Exact validation of the instance: the Delaunay graph restricted to the
    path points is the c-path, every (p_i, q_i) is an edge, and no 3-path
    among the path points is good (every even-centered 2-path is bad)."""
    from .coloring import bad_sides_of_2path
    from .delaunay import build_dt, condition
    from .verify import scan_universal_goodness

    c = inst.c
    pts = inst.all_points
    cond = condition(pts, inst.polygon, seed)
    dt = build_dt(cond)
    path_edges = {(i, i + 1) for i in range(c - 1)}
    induced = {e for e in dt.edges if e[0] < c and e[1] < c}
    if induced != path_edges:
        raise EnumerationError(
            "Delaunay restriction to the path points is not the path: extra %s missing %s"
            % (sorted(induced - path_edges), sorted(path_edges - induced))
        )
    for i in range(c):
        if not dt.has_edge(i, c + i):
            raise EnumerationError("missing pair edge (p_%d, q_%d)" % (i + 1, i + 1))
    bad_centers = 0
    for i in range(1, c - 1):
        if i % 2 == 1:  # p_{i+1} with even 1-based index
            bad = bad_sides_of_2path(dt.points, i - 1, i, i + 1, inst.polygon)
            if not bad:
                raise EnumerationError("even-centered 2-path %d is good" % (i + 1))
            bad_centers += 1
    scan = scan_universal_goodness(pts, inst.polygon, c, seed=seed, conditioned=cond)
    if not scan.witnesses:
        raise EnumerationError("goodness scan found no witness range")
    return {
        "c": c,
        "points": len(pts),
        "bad_even_centers": bad_centers,
        "witnesses": len(scan.witnesses),
        "ranges_scanned": scan.ranges_scanned,
        "trees_scanned": scan.trees_scanned,
        "mirrored": inst.mirrored,
    }
