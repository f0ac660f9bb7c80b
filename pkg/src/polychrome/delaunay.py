"""Position conditioning and the generalized Delaunay triangulation DT(C,S).

Two points are DT-adjacent iff some homothet of the shape contains exactly
those two; edges are taken straight-line in the (normalized) plane.  After
hull augmentation with a large homothet of -P the triangulation is "nice":
the outer face boundary is that convex polygon.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import backend
from .errors import ConditioningError, EnumerationError, PositionError
from .geom import (
    AffineMap,
    Containment,
    ConvexShape,
    Homothet,
    Point,
    ShapeKind,
    containment,
    cross,
    normalize,
)
from .ranges import RangeEngine, position_failures

PERTURB_GRID = 1 << 21
MAX_ATTEMPTS = 64
EXPLICIT_PRESERVATION_LIMIT = 32


@dataclass
class ConditionedSet:
    """Input points plus a hull augmentation, in very general position.

    `perturbed` and `hull_augment` live in the normalized shape frame;
    `original` keeps the caller's coordinates (indices correspond).
    """

    original: Tuple[Point, ...]
    perturbed: Tuple[Point, ...]
    hull_augment: Tuple[Point, ...]
    seed: int
    perturbation_magnitude: Fraction
    amap: AffineMap
    inv: AffineMap
    shape: ConvexShape  # original shape
    shape_norm: ConvexShape
    preservation: str = "identity"
    attempts: int = 0

    @property
    def all_points(self) -> List[Point]:
        return list(self.perturbed) + list(self.hull_augment)

    @property
    def n_user(self) -> int:
        return len(self.perturbed)

    def user_mask(self) -> List[bool]:
        return [True] * len(self.perturbed) + [False] * len(self.hull_augment)


def _min_positive_gap(sorted_vals: List) -> Optional[Fraction]:
    best = None
    for a, b in zip(sorted_vals, sorted_vals[1:]):
        d = b - a
        if d > 0 and (best is None or d < best):
            best = d
    return best


def _critical_margin(pts: Sequence[Point], shape_norm: ConvexShape) -> Fraction:
    """A positive bound such that any perturbation below margin/8 preserves
    every realized range of the input (each realizing homothet can be
    inflated by twice the perturbation without capturing an excluded point,
    because all exclusion margins are differences from this family)."""
    n = len(pts)
    if n < 2:
        return Fraction(1)
    cands: List[Fraction] = []
    if shape_norm.kind is ShapeKind.PARALLELOGRAM:
        xs = sorted(p.x for p in pts)
        ys = sorted(p.y for p in pts)
        for g in (_min_positive_gap(xs), _min_positive_gap(ys)):
            if g is not None:
                cands.append(g)
        xd = {b - a for i, a in enumerate(xs) for b in xs[i + 1 :] if b != a}
        yd = {b - a for i, a in enumerate(ys) for b in ys[i + 1 :] if b != a}
        # min positive |xdiff - ydiff|: attained by adjacent entries of the
        # merged sorted sequence coming from different sides
        merged = sorted([(v, 0) for v in xd] + [(v, 1) for v in yd])
        best = None
        for i, (va, sa) in enumerate(merged):
            for j in (i + 1, i + 2):  # values repeat at most twice (one per side)
                if j >= len(merged):
                    break
                vb, sb = merged[j]
                if sa != sb and vb != va:
                    d = vb - va
                    if best is None or d < best:
                        best = d
                    break
        if best is not None:
            cands.append(best)
        scale = Fraction(1)
    else:
        norm1 = max(abs(nv.x) + abs(nv.y) for nv in shape_norm.normals)
        best = None
        for k in range(shape_norm.n_sides):
            nk = shape_norm.normals[k]
            dots = sorted(nk.x * p.x + nk.y * p.y for p in pts)
            g = _min_positive_gap(dots)
            if g is not None and (best is None or g < best):
                best = g
        if best is not None:
            cands.append(best)
        scale = Fraction(norm1)
    if not cands:
        return Fraction(1)
    return min(cands) / scale


def _bbox(pts: Sequence[Point]):
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return min(xs), min(ys), max(xs), max(ys)


def _dyadic_floor(x: Fraction) -> Fraction:
    """Largest power of two <= x; keeps perturbation denominators dyadic so
    integer rescaling stays within the int64 kernel range."""
    if x <= 0:
        raise ConditioningError("nonpositive perturbation bound")
    e = 0
    v = Fraction(1)
    while v > x:
        v /= 2
        e += 1
        if e > 256:
            raise ConditioningError("perturbation bound underflow")
    while v * 2 <= x:
        v *= 2
    return v


def _hull_augment_points(pts: Sequence[Point], shape_norm: ConvexShape) -> List[Point]:
    """Vertices of a large homothet of -P placed around the points, so the
    Delaunay triangulation of the union is nice."""
    x0, y0, x1, y1 = _bbox(pts)
    diam = max(x1 - x0, y1 - y0, Fraction(1))
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    verts = shape_norm.vertices
    gx = sum(v.x for v in verts) / len(verts)
    gy = sum(v.y for v in verts) / len(verts)
    # inradius lower bound of (shape - centroid) in L-inf terms
    r_bound = min(
        (shape_norm.offsets[k] - (shape_norm.normals[k].x * gx + shape_norm.normals[k].y * gy))
        / (abs(shape_norm.normals[k].x) + abs(shape_norm.normals[k].y))
        for k in range(shape_norm.n_sides)
    )
    alpha = (8 * (diam + 1)) / r_bound
    for _ in range(16):
        hull = [Point(cx - alpha * (v.x - gx), cy - alpha * (v.y - gy)) for v in verts]
        if _poly_contains_box(hull, x0 - 2 * diam - 1, y0 - 2 * diam - 1, x1 + 2 * diam + 1, y1 + 2 * diam + 1):
            return hull
        alpha *= 2
    raise ConditioningError("failed to place hull augmentation")


def _poly_contains_box(hull: List[Point], x0, y0, x1, y1) -> bool:
    # hull is clockwise (image of a clockwise polygon under -alpha scaling,
    # which preserves orientation); a point is strictly inside iff it is
    # strictly right of every directed edge
    n = len(hull)
    for cxv, cyv in ((x0, y0), (x0, y1), (x1, y0), (x1, y1)):
        p = Point(cxv, cyv)
        for i in range(n):
            a, b = hull[i], hull[(i + 1) % n]
            if cross(a, b, p) >= 0:
                return False
    return True


def condition(points: Sequence[Point], shape: ConvexShape, seed: int) -> ConditionedSet:
    """Deterministic seeded perturbation into very general position, plus
    hull augmentation.  The perturbation magnitude stays below an eighth of
    the smallest critical coordinate margin, which preserves every realized
    range of the original set; for small degenerate inputs the preservation
    is additionally checked range by range."""
    pts_in = [Point(p[0], p[1]) for p in points]
    if len({(p.x, p.y) for p in pts_in}) != len(pts_in):
        raise ConditioningError("duplicate input points")
    amap, shape_norm = normalize(shape)
    inv = amap.inverse()
    pts = [amap.apply(p) for p in pts_in]
    rng = random.Random(seed)
    fails = position_failures(pts, shape_norm)
    margin = _critical_margin(pts, shape_norm)
    x0b, y0b, x1b, y1b = _bbox(pts) if pts else (0, 0, 1, 1)
    diam = max(x1b - x0b, y1b - y0b, Fraction(1))
    delta0 = _dyadic_floor(min(diam / (1 << 20), margin / 8))
    perturbed = list(pts)
    magnitude = Fraction(0)
    attempts = 0
    if fails:
        delta = delta0
        ok = False
        for attempt in range(MAX_ATTEMPTS):
            attempts = attempt + 1
            perturbed = [
                Point(
                    p.x + Fraction(rng.randrange(-PERTURB_GRID, PERTURB_GRID + 1), PERTURB_GRID) * delta,
                    p.y + Fraction(rng.randrange(-PERTURB_GRID, PERTURB_GRID + 1), PERTURB_GRID) * delta,
                )
                for p in pts
            ]
            if not position_failures(perturbed, shape_norm):
                ok = True
                break
            delta /= 2
        if not ok:
            raise ConditioningError("could not reach very general position in %d attempts" % MAX_ATTEMPTS)
        magnitude = delta
    preservation = "identity" if not fails else "margin-bound"
    if fails and len(pts) <= EXPLICIT_PRESERVATION_LIMIT:
        try:
            _check_preservation(pts, perturbed, shape_norm)
            preservation = "checked"
        except EnumerationError:
            pass  # reference enumeration over budget; the margin bound stands
    # hull augmentation, perturbed until the union passes all predicates; a
    # coarse magnitude is safe because the hull sits several diameters away
    # from every homothet realizing a user range
    hull0 = _hull_augment_points(perturbed if perturbed else [Point(Fraction(0), Fraction(0))], shape_norm)
    hdelta = _dyadic_floor(diam / (1 << 10))
    hull = hull0
    ok = False
    for attempt in range(MAX_ATTEMPTS):
        if not position_failures(perturbed + hull, shape_norm):
            ok = True
            break
        hull = [
            Point(
                p.x + Fraction(rng.randrange(-PERTURB_GRID, PERTURB_GRID + 1), PERTURB_GRID) * hdelta,
                p.y + Fraction(rng.randrange(-PERTURB_GRID, PERTURB_GRID + 1), PERTURB_GRID) * hdelta,
            )
            for p in hull0
        ]
        hdelta /= 2
    if not ok:
        raise ConditioningError("hull augmentation could not reach very general position")
    for orig, pert in zip(pts, perturbed):
        if magnitude == 0:
            assert orig == pert
        else:
            assert abs(orig.x - pert.x) <= magnitude and abs(orig.y - pert.y) <= magnitude
    return ConditionedSet(
        original=tuple(pts_in),
        perturbed=tuple(perturbed),
        hull_augment=tuple(hull),
        seed=seed,
        perturbation_magnitude=magnitude,
        amap=amap,
        inv=inv,
        shape=shape,
        shape_norm=shape_norm,
        preservation=preservation,
        attempts=attempts,
    )


def _check_preservation(pts, perturbed, shape_norm):
    """Every range realized by the raw input stays realized afterwards."""
    from .ranges import (
        _degenerate_square_subsets,
        _degenerate_triangle_subsets,
    )

    if shape_norm.kind is ShapeKind.PARALLELOGRAM:
        before = set(_degenerate_square_subsets(pts))
    elif shape_norm.kind is ShapeKind.TRIANGLE:
        before = set(_degenerate_triangle_subsets(pts))
    else:
        return
    engine = RangeEngine(perturbed, shape_norm)
    after = set(engine.all_subsets())
    missing = before - after
    if missing:
        raise ConditioningError(
            "perturbation lost %d realized ranges (first: %s)" % (len(missing), sorted(missing)[0])
        )


# ---------------------------------------------------------------------------
# Delaunay graph
# ---------------------------------------------------------------------------


@dataclass
class DelaunayGraph:
    conditioned: ConditionedSet
    points: List[Point]  # perturbed + hull (normalized frame)
    n_user: int
    edges: Set[Tuple[int, int]]
    rotation: List[List[int]]  # clockwise neighbor order per vertex
    inner_faces: List[Tuple[int, int, int]]
    outer_boundary: List[int]
    engine: RangeEngine

    @property
    def n(self) -> int:
        return len(self.points)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.rotation[v])


def _ccw_neighbor_order(points: List[Point], v: int, nbrs: List[int]) -> List[int]:
    origin = points[v]

    def half(i):
        d = points[i] - origin
        return 0 if (d.y > 0 or (d.y == 0 and d.x > 0)) else 1

    import functools

    def cmp(i, j):
        hi, hj = half(i), half(j)
        if hi != hj:
            return -1 if hi < hj else 1
        di = points[i] - origin
        dj = points[j] - origin
        c = di.x * dj.y - di.y * dj.x
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return sorted(nbrs, key=functools.cmp_to_key(cmp))


def build_dt(conditioned: ConditionedSet, check: bool = True) -> DelaunayGraph:
    """Edges are exactly the two-point realized ranges of the augmented set."""
    pts = conditioned.all_points
    shape_norm = conditioned.shape_norm
    engine = RangeEngine(pts, shape_norm)
    pairs = engine.pair_ranges()
    edges = {tuple(sorted(p)) for p in pairs}
    n = len(pts)
    adj: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    rotation = [list(reversed(_ccw_neighbor_order(pts, v, adj[v]))) for v in range(n)]
    inner_faces, outer = _trace_faces(pts, rotation)
    dt = DelaunayGraph(
        conditioned=conditioned,
        points=pts,
        n_user=conditioned.n_user,
        edges=edges,
        rotation=rotation,
        inner_faces=inner_faces,
        outer_boundary=outer,
        engine=engine,
    )
    if check:
        check_dt_invariants(dt)
    return dt


def _trace_faces(points, rotation):
    """Face cycles of the plane straight-line graph via rotation traversal.

    Walks each directed edge once: the successor of (u, v) is (v, w) where w
    immediately follows u in the clockwise rotation of v.  With that
    convention inner faces come out counter-clockwise (positive area).
    """
    n = len(points)
    pos = [{u: k for k, u in enumerate(rotation[v])} for v in range(n)]
    visited = set()
    inner = []
    outer = None
    for v0 in range(n):
        for u0 in rotation[v0]:
            if (v0, u0) in visited:
                continue
            face = []
            u, v = v0, u0
            while (u, v) not in visited:
                visited.add((u, v))
                face.append(u)
                k = pos[v][u]
                w = rotation[v][(k + 1) % len(rotation[v])]
                u, v = v, w
            area2 = Fraction(0)
            for i in range(len(face)):
                a = points[face[i]]
                b = points[face[(i + 1) % len(face)]]
                area2 += a.x * b.y - b.x * a.y
            if area2 > 0:
                inner.append(tuple(face))
            else:
                if outer is not None:
                    raise EnumerationError("multiple outer faces: graph is disconnected")
                outer = list(face)
    if outer is None:
        raise EnumerationError("no outer face found")
    return inner, outer


def check_dt_invariants(dt: DelaunayGraph) -> None:
    """Planarity, connectivity, triangular inner faces, nice outer face."""
    pts = dt.points
    n = dt.n
    # connectivity
    if n:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in dt.rotation[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise EnumerationError("Delaunay graph is not connected")
    # inner faces are triangles
    for f in dt.inner_faces:
        if len(f) != 3:
            raise EnumerationError("non-triangular inner face %s" % (f,))
    # outer face = hull augmentation cycle
    hull_idx = set(range(dt.n_user, n))
    if hull_idx and set(dt.outer_boundary) != hull_idx:
        raise EnumerationError(
            "outer boundary %s is not the hull augmentation" % (dt.outer_boundary,)
        )
    # planarity: no proper segment crossings, no vertex interior to an edge
    edges = sorted(dt.edges)
    xs, ys, _ = backend.integer_coordinates(pts)
    segs = []
    for u, v in edges:
        segs.append(
            (min(xs[u], xs[v]), min(ys[u], ys[v]), max(xs[u], xs[v]), max(ys[u], ys[v]), u, v)
        )
    for i in range(len(segs)):
        x0a, y0a, x1a, y1a, ua, va = segs[i]
        for j in range(i + 1, len(segs)):
            x0b, y0b, x1b, y1b, ub, vb = segs[j]
            if x0b > x1a or x1b < x0a or y0b > y1a or y1b < y0a:
                continue
            if len({ua, va, ub, vb}) < 4:
                continue
            if _segments_properly_cross(xs, ys, ua, va, ub, vb):
                raise EnumerationError("edges (%d,%d) and (%d,%d) cross" % (ua, va, ub, vb))
    for u, v in edges:
        for w in range(n):
            if w in (u, v):
                continue
            if _on_segment(xs, ys, u, v, w):
                raise EnumerationError("vertex %d lies on edge (%d,%d)" % (w, u, v))


def _segments_properly_cross(xs, ys, a, b, c, d):
    def orient(i, j, k):
        return (xs[j] - xs[i]) * (ys[k] - ys[i]) - (ys[j] - ys[i]) * (xs[k] - xs[i])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0:
        return False
    return (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0)


def _on_segment(xs, ys, a, b, w):
    o = (xs[b] - xs[a]) * (ys[w] - ys[a]) - (ys[b] - ys[a]) * (xs[w] - xs[a])
    if o != 0:
        return False
    return min(xs[a], xs[b]) <= xs[w] <= max(xs[a], xs[b]) and min(ys[a], ys[b]) <= ys[w] <= max(
        ys[a], ys[b]
    )


# ---------------------------------------------------------------------------
# induced subgraphs and structural queries
# ---------------------------------------------------------------------------


@dataclass
class InducedSubgraph:
    host: DelaunayGraph
    homothet: Optional[Homothet]
    vertex_indices: Tuple[int, ...]
    edges: Set[Tuple[int, int]]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int) -> List[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def rotation_of(self, v: int) -> List[int]:
        inside = set(self.vertex_indices)
        return [u for u in self.host.rotation[v] if u in inside and (min(u, v), max(u, v)) in self.edges]

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertex_indices) - 1

    def edge_count(self) -> int:
        return len(self.edges)


def induce(dt: DelaunayGraph, h: Optional[Homothet] = None, members: Optional[Sequence[int]] = None,
           check_connected: bool = True) -> InducedSubgraph:
    if members is None:
        if h is None:
            raise EnumerationError("induce needs a homothet or an explicit member list")
        members = [
            i for i, p in enumerate(dt.points) if containment(h, p) is not Containment.OUTSIDE
        ]
    inside = set(members)
    edges = {e for e in dt.edges if e[0] in inside and e[1] in inside}
    sub = InducedSubgraph(dt, h, tuple(sorted(inside)), edges)
    if check_connected and inside:
        seen = {next(iter(inside))}
        stack = [next(iter(inside))]
        adj: Dict[int, List[int]] = {v: [] for v in inside}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(inside):
            raise EnumerationError("induced subgraph is disconnected")
    return sub


def gap_neighbor(dt: DelaunayGraph, sub: InducedSubgraph, v: int, x: int, z: int) -> int:
    """A DT-neighbor y of v strictly between vx and vz in the clockwise
    rotation of v (the clockwise angle from vx to vz must be below pi and
    xz must not be a DT edge).  When x and z are rotation-consecutive in the
    induced subgraph, the returned y lies outside the inducing homothet."""
    inside = set(sub.vertex_indices)
    if x not in sub.neighbors(v) or z not in sub.neighbors(v):
        raise PositionError("x and z must be neighbors of v in the induced subgraph")
    if dt.has_edge(x, z):
        raise PositionError("xz is a Delaunay edge; no gap neighbor is guaranteed")
    pv, px, pz = dt.points[v], dt.points[x], dt.points[z]
    cr = cross(pv, px, pz)
    if cr >= 0:
        raise PositionError("clockwise angle from vx to vz must be below pi")
    rot = dt.rotation[v]
    k0 = rot.index(x)
    between = []
    for step in range(1, len(rot)):
        w = rot[(k0 + step) % len(rot)]
        if w == z:
            break
        between.append(w)
    else:
        raise PositionError("z not found in rotation of v")
    if not between:
        raise EnumerationError("no gap neighbor exists; rotation is inconsistent")
    sub_rot = sub.rotation_of(v)
    i_x = sub_rot.index(x)
    consecutive = sub_rot[(i_x + 1) % len(sub_rot)] == z
    if consecutive:
        for w in between:
            if w not in inside:
                return w
        raise EnumerationError("expected a gap neighbor outside the homothet")
    return between[0]


def _csr(dt: DelaunayGraph):
    import numpy as np

    indptr = [0]
    adj = []
    for v in range(dt.n):
        adj.extend(sorted(dt.rotation[v]))
        indptr.append(len(adj))
    return np.asarray(indptr, dtype=np.int64), np.asarray(adj, dtype=np.int64)


def _flatten_subsets(subsets):
    import numpy as np

    members = []
    offsets = [0]
    for s in subsets:
        members.extend(s)
        offsets.append(len(members))
    return np.asarray(members, dtype=np.int64), np.asarray(offsets, dtype=np.int64)


def induced_connectivity_violation(dt: DelaunayGraph, subsets=None) -> int:
    """Index of the first realized range whose induced subgraph is
    disconnected, or -1 (structural invariant; must always be -1)."""
    if subsets is None:
        subsets = dt.engine.all_subsets()
    members, offsets = _flatten_subsets(subsets)
    indptr, adj = _csr(dt)
    return int(backend.get_kernels().range_connectivity(members, offsets, indptr, adj))


def induced_edge_counts(dt: DelaunayGraph, subsets):
    members, offsets = _flatten_subsets(subsets)
    indptr, adj = _csr(dt)
    return backend.get_kernels().range_edge_count(members, offsets, indptr, adj)


def longest_path(sub: InducedSubgraph) -> List[int]:
    """Exact longest path of a tree-induced subgraph (two farthest sweeps)."""
    if not sub.is_tree():
        raise PositionError("longest_path requires a tree-induced subgraph")
    verts = list(sub.vertex_indices)
    if len(verts) == 1:
        return verts
    adj: Dict[int, List[int]] = {v: [] for v in verts}
    for a, b in sorted(sub.edges):
        adj[a].append(b)
        adj[b].append(a)

    def bfs(start):
        dist = {start: 0}
        parent = {start: None}
        frontier = [start]
        far = start
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        parent[w] = v
                        nxt.append(w)
                        if dist[w] > dist[far] or (dist[w] == dist[far] and w < far):
                            far = w
            frontier = nxt
        return far, parent

    a, _ = bfs(min(verts))
    b, parent = bfs(a)
    path = [b]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path
