"""Exhaustive verification of coloring guarantees, independent oracles, and
universal-goodness scanning."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .backend import integer_coordinates
from .errors import EnumerationError
from .geom import ConvexShape, Homothet, Point, ShapeKind, normalize
from .ranges import RangeFamily, RealizedRange, _map_homothet

ORACLE_LIMIT = 10


def brute_force_oracle(points: Sequence[Point], shape: ConvexShape) -> RangeFamily:
    """Independent enumeration of realized subsets by sweeping an explicit
    candidate grid of homothets (for squares: left/bottom positions at point
    coordinates or one grid step above, side lengths from pairwise coordinate
    differences).  Exact; small inputs only."""
    n = len(points)
    if n > ORACLE_LIMIT:
        raise EnumerationError("brute_force_oracle is limited to %d points" % ORACLE_LIMIT)
    amap, shape_norm = normalize(shape)
    inv = amap.inverse()
    pts = [amap.apply(p) for p in points]
    if shape_norm.kind is ShapeKind.PARALLELOGRAM:
        witnesses = _oracle_squares(pts)
    elif shape_norm.kind is ShapeKind.TRIANGLE:
        witnesses = _oracle_triangles(pts)
    else:
        raise EnumerationError("brute_force_oracle supports parallelogram and triangle kinds")
    ranges = []
    for sub, h_norm in sorted(witnesses.items()):
        ranges.append(RealizedRange(_map_homothet(inv, h_norm, shape), sub, ()))
    # singletons realized by shrinking far enough are always present; add any
    # the grid missed with a direct tiny window
    have = {r.point_indices for r in ranges}
    for i in range(n):
        if (i,) not in have:
            h = _tiny_witness(pts, shape_norm, i)
            ranges.append(RealizedRange(_map_homothet(inv, h, shape), (i,), ()))
    ranges.sort(key=lambda r: r.point_indices)
    return RangeFamily(ranges, n)


def _tiny_witness(pts, shape_norm, i):
    from .ranges import _degenerate_singleton

    h, _ = _degenerate_singleton(pts, shape_norm, i)
    return h


def _oracle_squares(pts) -> Dict[Tuple[int, ...], Homothet]:
    from .geom import unit_square

    n = len(pts)
    xs0, ys0, den = integer_coordinates(pts)
    xs = [8 * v for v in xs0]
    ys = [8 * v for v in ys0]
    scale_back = Fraction(1, 8 * den)
    diffs = sorted(
        {abs(a - b) for arr in (xs, ys) for i, a in enumerate(arr) for b in arr[i + 1 :]} - {0}
    )
    sizes = sorted({d for d in diffs} | {d + 1 for d in diffs})
    out: Dict[Tuple[int, ...], Homothet] = {}
    sq = unit_square()
    for s in sizes:
        lcands = sorted({v for x in xs for v in (x, x + 1, x - s, x - s + 1)})
        bcands = sorted({v for y in ys for v in (y, y + 1, y - s, y - s + 1)})
        for l in lcands:
            strip = [q for q in range(n) if l <= xs[q] <= l + s]
            if not strip:
                continue
            for b in bcands:
                sub = tuple(q for q in strip if b <= ys[q] <= b + s)
                if sub and sub not in out:
                    out[sub] = Homothet(
                        sq, Fraction(s) * scale_back, Point(l * scale_back, b * scale_back)
                    )
    return out


def _oracle_triangles(pts) -> Dict[Tuple[int, ...], Homothet]:
    from .geom import reference_triangle

    n = len(pts)
    xs0, ys0, den = integer_coordinates(pts)
    xs = [8 * v for v in xs0]
    ys = [8 * v for v in ys0]
    scale_back = Fraction(1, 8 * den)
    d1 = [-2 * xs[p] + ys[p] for p in range(n)]
    d2 = [2 * xs[p] + ys[p] for p in range(n)]
    d3 = [-2 * ys[p] for p in range(n)]
    tri = reference_triangle()
    out: Dict[Tuple[int, ...], Homothet] = {}
    c1s = sorted(set(d1) | {v + 1 for v in d1})
    c2s = sorted(set(d2) | {v + 1 for v in d2})
    c3s = sorted(set(d3) | {v + 1 for v in d3})
    for t1 in c1s:
        for t2 in c2s:
            for t3 in c3s:
                if t1 + t2 + t3 <= 0:
                    continue
                sub = tuple(
                    p for p in range(n) if d1[p] <= t1 and d2[p] <= t2 and d3[p] <= t3
                )
                if sub and sub not in out:
                    alpha = Fraction(t1 + t2 + t3, 4) * scale_back
                    ty = Fraction(-t3, 2) * scale_back
                    tx = (ty - t1 * scale_back) / 2
                    out[sub] = Homothet(tri, alpha, Point(tx, ty))
    return out


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    shape_kind: str
    threshold: int
    total_ranges: int
    max_monochromatic_size: int
    violations: List[dict] = field(default_factory=list)
    polychromatic: Optional[dict] = None
    seed: int = 0
    runtime_ms: float = 0.0
    preservation: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations

    def body(self) -> dict:
        """Deterministic report content (runtime excluded)."""
        return {
            "shape_kind": self.shape_kind,
            "threshold": self.threshold,
            "total_ranges": self.total_ranges,
            "max_monochromatic_size": self.max_monochromatic_size,
            "violations": self.violations,
            "polychromatic": self.polychromatic,
            "seed": self.seed,
            "preservation": self.preservation,
        }


def _scan_conditioned(cond, labels: Sequence[int], m: int):
    from .ranges import RangeEngine

    pts = cond.all_points
    n_user = cond.n_user
    user = [True] * n_user + [False] * len(cond.hull_augment)
    cat = list(labels) + [0] * len(cond.hull_augment)
    engine = RangeEngine(pts, cond.shape_norm)
    total, max_mono, viols = engine.verify_scan(user, cat, m)
    return engine, total, max_mono, viols


def verify(
    points: Sequence[Point],
    shape: ConvexShape,
    labels: Sequence[int],
    m: Optional[int] = None,
    seed: int = 0,
) -> VerificationReport:
    """Exhaustively check that no realized range with >= m of the user's
    points is monochromatic under the given 2-coloring labels."""
    from .delaunay import condition
    from .geom import shape_constants

    if len(labels) != len(points):
        raise EnumerationError("labels must match points one to one")
    if m is None:
        consts = shape_constants(shape)
        if consts.threshold is None:
            raise EnumerationError("no default threshold for general shapes; pass m")
        m = consts.threshold
    cond = condition(points, shape, seed)
    engine, total, max_mono, viols = _scan_conditioned(cond, labels, m)
    n_user = cond.n_user
    if n_user >= 1:
        max_mono = max(max_mono, 1)  # singletons are trivially monochromatic
    report = VerificationReport(
        shape_kind=shape.kind.value,
        threshold=m,
        total_ranges=total + len(cond.all_points),
        max_monochromatic_size=max_mono,
        violations=[
            {
                "indices": [i for i in mem if i < n_user],
                "size": sum(1 for i in mem if i < n_user),
            }
            for mem in viols
        ],
        seed=seed,
        preservation=cond.preservation,
    )
    return report


def verify_two_color_result(res, m: Optional[int] = None) -> VerificationReport:
    """Verify a TwoColorResult in place (re-using its conditioned instance)."""
    cond = res.conditioned
    m = m if m is not None else res.constants.threshold
    n_user = cond.n_user
    user = [True] * n_user + [False] * len(cond.hull_augment)
    cat = res.state.final
    total, max_mono, viols = res.dt.engine.verify_scan(user, cat, m)
    if n_user >= 1:
        max_mono = max(max_mono, 1)
    return VerificationReport(
        shape_kind=cond.shape.kind.value,
        threshold=m,
        total_ranges=total + len(cond.all_points),
        max_monochromatic_size=max_mono,
        violations=[
            {
                "indices": [i for i in mem if i < n_user],
                "size": sum(1 for i in mem if i < n_user),
            }
            for mem in viols
        ],
        seed=cond.seed,
        preservation=cond.preservation,
    )


def verify_polychromatic(
    points: Sequence[Point],
    shape: ConvexShape,
    kcoloring,
    seed: int = 0,
) -> VerificationReport:
    """Check every range with >= m_k user points contains all k labels, and
    report the empirical minimal size above which all k labels always
    appear."""
    from .delaunay import condition
    from .geom import threshold_for_k
    from .ranges import RangeEngine

    k = kcoloring.k
    mk = threshold_for_k(shape, k)
    cond = condition(points, shape, seed)
    pts = cond.all_points
    n_user = cond.n_user
    user = [True] * n_user + [False] * len(cond.hull_augment)
    labs = list(kcoloring.labels) + [0] * len(cond.hull_augment)
    engine = RangeEngine(pts, cond.shape_norm)
    total, max_missing, viols = engine.verify_scan_k(user, labs, k, mk)
    if k > 1 and n_user >= 1:
        max_missing = max(max_missing, 1)  # singletons miss k-1 labels
    poly = {
        "k": k,
        "threshold": mk,
        "empirical_min_all_colors": max_missing + 1,
        "violations": len(viols),
    }
    return VerificationReport(
        shape_kind=shape.kind.value,
        threshold=mk,
        total_ranges=total + len(pts),
        max_monochromatic_size=max_missing,
        violations=[
            {
                "indices": [i for i in mem if i < n_user],
                "size": sum(1 for i in mem if i < n_user),
            }
            for mem in viols
        ],
        polychromatic=poly,
        seed=seed,
        preservation=cond.preservation,
    )


# ---------------------------------------------------------------------------
# universal-goodness scanning
# ---------------------------------------------------------------------------


@dataclass
class GoodnessWitness:
    members: Tuple[int, ...]
    path: Tuple[int, ...]


@dataclass
class GoodnessScanReport:
    c: int
    ranges_scanned: int
    trees_scanned: int
    witnesses: List[GoodnessWitness] = field(default_factory=list)
    seed: int = 0

    @property
    def universally_good_here(self) -> bool:
        return not self.witnesses


def scan_universal_goodness(
    points: Sequence[Point], shape: ConvexShape, c: int, seed: int = 0, conditioned=None
) -> GoodnessScanReport:
    """Attempt find_good_3path in every tree-induced range with >= c points;
    failures witness that the polygon is not universally good."""
    from .coloring import find_good_3path
    from .delaunay import build_dt, condition, induce
    from .errors import NoGoodThreePathError

    cond = conditioned if conditioned is not None else condition(points, shape, seed)
    dt = build_dt(cond)
    subsets = dt.engine.all_subsets()
    scanned = trees = 0
    witnesses = []
    for mem in subsets:
        if len(mem) < c:
            continue
        scanned += 1
        sub = induce(dt, members=mem)
        if not sub.is_tree():
            continue  # a cycle makes the homothet good by definition
        trees += 1
        try:
            find_good_3path(sub, cond.shape_norm)
        except NoGoodThreePathError as exc:
            witnesses.append(GoodnessWitness(tuple(mem), tuple(exc.path)))
    return GoodnessScanReport(c, scanned, trees, witnesses, seed)


# ---------------------------------------------------------------------------
# structural invariant suites (tree-induced ranges)
# ---------------------------------------------------------------------------


def quadrant_exclusion_violations(dt) -> List[str]:
    """Structural invariant: for edges xy and xz, y in Qd(x) forbids
    z in Qd(y) for the same quadrant (square frame only)."""
    from .geom import quadrant

    out = []
    pts = dt.points
    for x in range(dt.n):
        nbrs = dt.rotation[x]
        for y in nbrs:
            qd = quadrant(pts[x], pts[y])
            for z in nbrs:
                if z == y:
                    continue
                if quadrant(pts[y], pts[z]) is qd:
                    out.append("edges %d-%d and %d-%d share quadrant %s" % (x, y, x, z, qd.value))
    return out


def _tree_paths(sub):
    """Maximal (leaf-to-leaf) simple paths of a tree.

    Every path is a subpath of a leaf pair's path, and both monotonicity and
    the bad-2-path count are inherited by subpaths, so checking maximal
    paths checks them all.
    """
    import itertools

    verts = list(sub.vertex_indices)
    adj = {v: [] for v in verts}
    for a, b in sorted(sub.edges):
        adj[a].append(b)
        adj[b].append(a)
    parent = {verts[0]: None}
    depth = {verts[0]: 0}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                depth[w] = depth[v] + 1
                stack.append(w)

    def path(u, v):
        pu, pv = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            pu.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            pv.append(b)
        while a != b:
            a = parent[a]
            b = parent[b]
            pu.append(a)
            pv.append(b)
        return pu[:-1] + pv[::-1]

    leaves = [v for v in verts if len(adj[v]) <= 1]
    for u, v in itertools.combinations(leaves, 2):
        yield path(u, v)


def tree_range_structure_violations(dt, min_path_vertices: int = 12,
                                    heavy_size: int = 22) -> List[str]:
    """Degree bounds, high-degree scarcity, path monotonicity, bad-2-path
    counts, and the long-path + good-3-path guarantees, over every
    tree-induced realized range."""
    from .coloring import bad_sides_of_2path, find_good_3path
    from .delaunay import induce, induced_edge_counts, longest_path
    from .errors import NoGoodThreePathError
    from .geom import ShapeKind

    shape = dt.conditioned.shape_norm
    out: List[str] = []
    subsets = dt.engine.all_subsets()
    counts = induced_edge_counts(dt, subsets)
    if shape.kind is ShapeKind.PARALLELOGRAM:
        max_deg = 4
    elif shape.kind is ShapeKind.TRIANGLE:
        max_deg = 9
    else:
        from .geom import shape_constants

        max_deg = shape_constants(shape).degree_bound
    pts = dt.points
    for mem, ecount in zip(subsets, counts):
        if len(mem) < 2 or ecount != len(mem) - 1:
            continue
        sub = induce(dt, members=mem, check_connected=False)
        degs = {v: sub.degree(v) for v in mem}
        if max(degs.values()) > max_deg:
            out.append("range %s has degree %d > %d" % (mem[:6], max(degs.values()), max_deg))
            continue
        if shape.kind is ShapeKind.PARALLELOGRAM:
            high = [v for v, d in degs.items() if d > 2]
            if len(high) > 2:
                out.append("range %s has %d vertices of degree > 2" % (mem[:6], len(high)))
            if any(degs[v] == 4 for v in high) and len(high) > 1:
                out.append("range %s has a degree-4 vertex plus another high degree" % (mem[:6],))
            for path in _tree_paths(sub):
                xs = [pts[v].x for v in path]
                ys = [pts[v].y for v in path]
                x_mono = xs == sorted(xs) or xs == sorted(xs, reverse=True)
                y_mono = ys == sorted(ys) or ys == sorted(ys, reverse=True)
                if not (x_mono or y_mono):
                    out.append("range %s has a non-monotone path" % (mem[:6],))
                    break
                bad = sum(
                    1
                    for i in range(1, len(path) - 1)
                    if bad_sides_of_2path(pts, path[i - 1], path[i], path[i + 1], shape)
                )
                if bad > 4:
                    out.append("range %s has a path with %d bad 2-paths" % (mem[:6], bad))
                    break
        if shape.kind is ShapeKind.PARALLELOGRAM and len(mem) >= heavy_size:
            lp = longest_path(sub)
            if len(lp) < min_path_vertices:
                out.append(
                    "range of %d points has longest path %d < %d"
                    % (len(mem), len(lp), min_path_vertices)
                )
            try:
                find_good_3path(sub, shape)
            except NoGoodThreePathError:
                out.append("range of %d points has no good 3-path" % len(mem))
    return out


def edge_split_violations(dt, subsets=None) -> List[str]:
    """Structural invariant: a Delaunay edge crossing a range homothet's
    boundary twice cuts off a part with no points of the set."""
    from .geom import Containment, ConvexShape, Homothet, containment, cross

    out: List[str] = []
    pts = dt.points
    engine = dt.engine
    if subsets is None:
        subsets = engine.all_subsets()
    edges = sorted(dt.edges)
    eboxes = []
    for (u, v) in edges:
        pu, pv = pts[u], pts[v]
        eboxes.append((min(pu.x, pv.x), min(pu.y, pv.y), max(pu.x, pv.x), max(pu.y, pv.y)))
    for mem in subsets:
        if len(mem) < 1:
            continue
        h, _ = engine.canonical_homothet(mem) if len(mem) > 1 else engine.singleton_homothet(mem[0])
        hv = h.vertices
        hx0 = min(p.x for p in hv)
        hy0 = min(p.y for p in hv)
        hx1 = max(p.x for p in hv)
        hy1 = max(p.y for p in hv)
        for ei, (u, v) in enumerate(edges):
            bx0, by0, bx1, by1 = eboxes[ei]
            if bx0 > hx1 or bx1 < hx0 or by0 > hy1 or by1 < hy0:
                continue
            pu, pv = pts[u], pts[v]
            if (
                containment(h, pu) is not Containment.OUTSIDE
                or containment(h, pv) is not Containment.OUTSIDE
            ):
                continue
            if _crosses_twice(h, pu, pv):
                left = right = 0
                for q in mem:
                    s = cross(pu, pv, pts[q])
                    if s > 0:
                        left += 1
                    elif s < 0:
                        right += 1
                if left and right:
                    out.append("edge (%d,%d) splits range %s" % (u, v, mem[:6]))
    return out


def _crosses_twice(h, a, b) -> bool:
    """Both endpoints outside and the open segment meets the interior."""
    lo, hi = Fraction(0), Fraction(1)
    dx, dy = b.x - a.x, b.y - a.y
    for n, c in zip(h.shape.normals, h.offsets):
        num = c - (n.x * a.x + n.y * a.y)
        den = n.x * dx + n.y * dy
        if den == 0:
            if num < 0:
                return False
            continue
        t = Fraction(num, 1) / den
        if den > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
        if lo >= hi:
            return False
    return lo < hi
