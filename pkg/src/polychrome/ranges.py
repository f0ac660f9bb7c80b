"""Enumeration of the realized range family H(S) for homothets of a shape.

The public surface is `enumerate_ranges` / `shrink_away` / `heavy_ranges`
plus the `RangeEngine` that the pipeline uses for streaming queries (pair
ranges for the Delaunay graph, heavy-monochromatic detection, verification
scans) without materializing the O(n^3) family.

Squares and triangles (post-normalization) run on int64 kernels; general
convex polygons run on an exact big-integer candidate enumeration (pinned
minimal homothets: three points on three sides, or a point on a vertex plus
a point on a side), with subsets deduplicated as bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import backend
from .errors import EnumerationError, PositionError
from .geom import (
    SQUARE_BOTTOM,
    SQUARE_LEFT,
    SQUARE_RIGHT,
    SQUARE_TOP,
    AffineMap,
    Containment,
    ConvexShape,
    Homothet,
    Point,
    ShapeKind,
    containment,
    dot,
    normalize,
)

MATERIALIZE_LIMIT = 140
GENERAL_LIMIT = 80
DEGENERATE_BUDGET = 2_000_000


@dataclass(frozen=True)
class RealizedRange:
    homothet: Homothet
    point_indices: Tuple[int, ...]
    determinators: Tuple[Tuple[int, int], ...] = ()

    @property
    def size(self) -> int:
        return len(self.point_indices)


@dataclass
class RangeFamily:
    ranges: List[RealizedRange]
    source_point_count: int
    size_bound_ok: bool = True

    def subsets(self) -> set:
        return {r.point_indices for r in self.ranges}


def _map_homothet(inv: AffineMap, h_norm: Homothet, orig_shape: ConvexShape) -> Homothet:
    """Pull a normalized-frame homothet back to the original shape's frame."""
    alpha = h_norm.scale
    t = inv.apply(h_norm.translation)
    t0 = Point(inv.tx, inv.ty)
    return Homothet(orig_shape, alpha, Point(t.x - alpha * t0.x, t.y - alpha * t0.y))


def _sides_through(h: Homothet, p: Point) -> List[int]:
    out = []
    for k in range(h.shape.n_sides):
        n = h.shape.normals[k]
        if n.x * p.x + n.y * p.y == h.offsets[k]:
            a, b = h.side(k)
            if min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y):
                out.append(k)
    return out


# ---------------------------------------------------------------------------
# very-general-position predicates (normalized frame)
# ---------------------------------------------------------------------------


def position_failures(pts: Sequence[Point], shape: ConvexShape) -> List[str]:
    """Empty list iff the set is in very general position w.r.t. the shape.

    Square frame: distinct x, distinct y and disjoint difference multisets
    (the latter covers the diagonal directions and every four-points-on-a-
    square-boundary coincidence).  Triangle/general frame: distinct dot
    products per side normal, and no point pair parallel to a line through
    two shape vertices.
    """
    fails: List[str] = []
    n = len(pts)
    if shape.kind is ShapeKind.PARALLELOGRAM:
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        if len(set(xs)) != n:
            fails.append("shared x coordinate")
        if len(set(ys)) != n:
            fails.append("shared y coordinate")
        xd = {abs(a - b) for i, a in enumerate(xs) for b in xs[i + 1 :]}
        yd = {abs(a - b) for i, a in enumerate(ys) for b in ys[i + 1 :]}
        if xd & yd:
            fails.append("an x-difference equals a y-difference")
        return fails
    for k in range(shape.n_sides):
        nk = shape.normals[k]
        dots = [nk.x * p.x + nk.y * p.y for p in pts]
        if len(set(dots)) != n:
            fails.append("shared dot value on side %d" % k)
    verts = shape.vertices
    dirs = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            dirs.append(verts[j] - verts[i])
    for i in range(n):
        for j in range(i + 1, n):
            d = pts[j] - pts[i]
            for vd in dirs:
                if d.x * vd.y - d.y * vd.x == 0:
                    fails.append("points %d,%d parallel to a shape vertex pair" % (i, j))
                    return fails
    return fails


# ---------------------------------------------------------------------------
# square lane (normalized frame = axis-parallel unit square homothets)
# ---------------------------------------------------------------------------


def _sq_scan_python(xs, ys, mode, cat=None, size_want=0, user=None, m_thresh=0, labels=None, k=0):
    """Exact Python mirror of the sq_* kernels (arbitrary precision ints)."""
    n = len(xs)
    collect = []
    pairs = []
    total = 0
    max_mono = 0
    max_missing = 0
    violations = []
    orders = (sorted(range(n), key=lambda i: xs[i]), sorted(range(n), key=lambda i: ys[i]))
    for axis in range(2):
        main, other = (xs, ys) if axis == 0 else (ys, xs)
        order_main, order_other = orders[axis], orders[1 - axis]
        for ia in range(n):
            a = order_main[ia]
            for ic in range(ia + 1, n):
                c = order_main[ic]
                s = main[c] - main[a]
                tid = [p for p in order_other if main[a] <= main[p] <= main[c]]
                tv = [other[p] for p in tid]
                t = len(tid)
                pos_a, pos_c = tid.index(a), tid.index(c)
                lo_pos, hi_pos = min(pos_a, pos_c), max(pos_a, pos_c)
                jmax_prev = -1
                j = 0
                for i in range(t):
                    if i > lo_pos:
                        break
                    if j < i:
                        j = i
                    while j + 1 < t and tv[j + 1] - tv[i] <= s:
                        j += 1
                    jlo = max(i, jmax_prev, hi_pos)
                    for jj in range(jlo, j + 1):
                        sub = tid[i : jj + 1]
                        if mode == "collect":
                            collect.append(tuple(sorted(sub)))
                        elif mode == "pairs":
                            if len(sub) == 2:
                                pairs.append((a, c))
                        elif mode == "sized_mono":
                            if len(sub) == size_want:
                                z = sum(1 for q in sub if cat[q] == 0)
                                if z == 0 or z == size_want:
                                    collect.append(tuple(sorted(sub)))
                        elif mode == "verify":
                            total += 1
                            usub = [q for q in sub if user[q]]
                            usz = len(usub)
                            if usz:
                                u0 = sum(1 for q in usub if cat[q] == 0)
                                if u0 == 0 or u0 == usz:
                                    max_mono = max(max_mono, usz)
                                    if usz >= m_thresh:
                                        violations.append(tuple(sorted(sub)))
                        elif mode == "verify_k":
                            total += 1
                            usub = [q for q in sub if user[q]]
                            usz = len(usub)
                            if usz:
                                present = {labels[q] for q in usub}
                                if len(present) < k:
                                    max_missing = max(max_missing, usz)
                                    if usz >= m_thresh:
                                        violations.append(tuple(sorted(sub)))
                    jmax_prev = j
    return {
        "collect": collect,
        "pairs": pairs,
        "total": total,
        "max_mono": max_mono,
        "max_missing": max_missing,
        "violations": violations,
    }


def _tri_dots(pts: Sequence[Point]):
    """Dot products of points against the reference-triangle normals."""
    d1 = [-2 * p.x + p.y for p in pts]
    d2 = [2 * p.x + p.y for p in pts]
    d3 = [-2 * p.y for p in pts]
    return d1, d2, d3


def _tri_scan_python(d1, d2, d3, mode, cat=None, size_want=0, user=None, m_thresh=0):
    """Exact Python mirror of the tri_* kernels; also tie-tolerant."""
    n = len(d1)
    collect = []
    pairs = []
    total = 0
    max_mono = 0
    violations = []
    seen = set()
    if mode == "pairs":
        for a in range(n):
            for b in range(a + 1, n):
                t1, t2, t3 = max(d1[a], d1[b]), max(d2[a], d2[b]), max(d3[a], d3[b])
                if t1 + t2 + t3 <= 0:
                    continue
                if all(
                    p in (a, b) or d1[p] > t1 or d2[p] > t2 or d3[p] > t3 for p in range(n)
                ):
                    pairs.append((a, b))
        return {"pairs": pairs}
    u1, u2, u3 = sorted(set(d1)), sorted(set(d2)), sorted(set(d3))
    for t1 in u1:
        for t2 in u2:
            for t3 in u3:
                if t1 + t2 + t3 <= 0:
                    continue
                sub = [p for p in range(n) if d1[p] <= t1 and d2[p] <= t2 and d3[p] <= t3]
                if len(sub) < 2:
                    continue
                if max(d1[p] for p in sub) != t1:
                    continue
                if max(d2[p] for p in sub) != t2:
                    continue
                if max(d3[p] for p in sub) != t3:
                    continue
                key = tuple(sub)
                if key in seen:
                    continue
                seen.add(key)
                if mode == "collect":
                    collect.append(key)
                elif mode == "sized_mono":
                    if len(sub) == size_want:
                        z = sum(1 for q in sub if cat[q] == 0)
                        if z == 0 or z == size_want:
                            collect.append(key)
                elif mode == "verify":
                    total += 1
                    usub = [q for q in sub if user[q]]
                    usz = len(usub)
                    if usz:
                        u0 = sum(1 for q in usub if cat[q] == 0)
                        if u0 == 0 or u0 == usz:
                            max_mono = max(max_mono, usz)
                            if usz >= m_thresh:
                                violations.append(key)
    return {
        "collect": collect,
        "total": total,
        "max_mono": max_mono,
        "violations": violations,
    }


def _split_flat(members, offsets) -> List[Tuple[int, ...]]:
    out = []
    for r in range(len(offsets) - 1):
        out.append(tuple(sorted(int(v) for v in members[offsets[r] : offsets[r + 1]])))
    return out


# ---------------------------------------------------------------------------
# general convex polygon lane (exact big-int candidate enumeration)
# ---------------------------------------------------------------------------


class _GeneralEngine:
    """Materialized range family for a general convex polygon, exact."""

    def __init__(self, pts: Sequence[Point], shape: ConvexShape):
        if len(pts) > GENERAL_LIMIT:
            raise EnumerationError(
                "general-shape enumeration is limited to %d points" % GENERAL_LIMIT
            )
        self.pts = list(pts)
        self.shape = shape
        n = len(pts)
        ns = shape.n_sides
        xs, ys, dp = backend.integer_coordinates(pts)
        from math import gcd

        vden = 1
        for v in shape.vertices:
            vden = vden * v.x.denominator // gcd(vden, v.x.denominator)
            vden = vden * v.y.denominator // gcd(vden, v.y.denominator)
        # integer normals in a common scale
        self.nint = [
            (int(shape.normals[k].x * vden), int(shape.normals[k].y * vden)) for k in range(ns)
        ]
        self.dots = [
            [self.nint[k][0] * xs[p] + self.nint[k][1] * ys[p] for p in range(n)]
            for k in range(ns)
        ]
        # offsets scale: dot scale = dp * vden * (true value)
        self.scale = Fraction(dp * vden)
        self.c0 = [Fraction(dp * vden) * shape.offsets[k] for k in range(ns)]  # scaled base offsets
        self.order = [sorted(range(n), key=lambda p: self.dots[k][p]) for k in range(ns)]
        self.sorted_dots = [[self.dots[k][p] for p in self.order[k]] for k in range(ns)]
        self.cum_masks = []
        for k in range(ns):
            masks = [0]
            m = 0
            for p in self.order[k]:
                m |= 1 << p
                masks.append(m)
            self.cum_masks.append(masks)
        self.n = n
        self.ns = ns
        self.dp = dp
        self._family: Optional[List[Tuple[int, Tuple[Fraction, Fraction, Fraction], Tuple]]] = None

    def _sigma_table(self):
        """Per ordered side-triple: rationals expressing (alpha, offsets) as
        linear functions of the three pinned offsets."""
        from itertools import permutations

        table = {}
        ns = self.ns
        for sigma in permutations(range(ns), 3):
            rows = [(self.c0[k], Fraction(self.nint[k][0]), Fraction(self.nint[k][1])) for k in sigma]
            det = (
                rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
            )
            if det == 0:
                continue
            # first row of inverse: alpha = sum_i inv0[i] * theta_i
            inv0 = (
                (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1]) / det,
                -(rows[0][1] * rows[2][2] - rows[0][2] * rows[2][1]) / det,
                (rows[0][1] * rows[1][2] - rows[0][2] * rows[1][1]) / det,
            )
            inv1 = (
                -(rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0]) / det,
                (rows[0][0] * rows[2][2] - rows[0][2] * rows[2][0]) / det,
                -(rows[0][0] * rows[1][2] - rows[0][2] * rows[1][0]) / det,
            )
            inv2 = (
                (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]) / det,
                -(rows[0][0] * rows[2][1] - rows[0][1] * rows[2][0]) / det,
                (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) / det,
            )
            combos = []
            for m in range(ns):
                if m in sigma:
                    combos.append(None)
                    continue
                lam = tuple(
                    self.c0[m] * inv0[i] + Fraction(self.nint[m][0]) * inv1[i]
                    + Fraction(self.nint[m][1]) * inv2[i]
                    for i in range(3)
                )
                combos.append(lam)
            table[sigma] = (inv0, inv1, inv2, combos)
        return table

    def _subset_mask(self, sigma, theta, combos):
        """Bitmask of contained points for the candidate, or None."""
        mask = (1 << self.n) - 1
        tight = 0
        ns = self.ns
        for m in range(ns):
            if m in sigma:
                c_num, c_den = theta[sigma.index(m)], 1
            else:
                lam = combos[m]
                val = lam[0] * theta[0] + lam[1] * theta[1] + lam[2] * theta[2]
                c_num, c_den = val.numerator, val.denominator
            sd = self.sorted_dots[m]
            lo, hi = 0, len(sd)
            while lo < hi:
                mid = (lo + hi) // 2
                if sd[mid] * c_den <= c_num:
                    lo = mid + 1
                else:
                    hi = mid
            mask &= self.cum_masks[m][lo]
            if lo > 0 and sd[lo - 1] * c_den == c_num:
                tight |= 1 << self.order[m][lo - 1]
            if mask == 0:
                return None, 0
        return mask, tight

    def family(self):
        if self._family is not None:
            return self._family
        n, ns = self.n, self.ns
        table = self._sigma_table()
        best: Dict[int, Tuple] = {}
        # C2: three distinct points pinned on three distinct sides; a point
        # pinned on a side must carry the maximal dot of that side among the
        # three, so the assignment is forced and most triples die cheaply.
        from itertools import combinations

        sides3 = [s for s in combinations(range(ns), 3) if s in table]
        dts = self.dots
        for tri in combinations(range(n), 3):
            i, j, l = tri
            for sigma in sides3:
                d0, d1_, d2_ = dts[sigma[0]], dts[sigma[1]], dts[sigma[2]]
                a1 = i if d0[i] >= d0[j] else j
                if d0[l] > d0[a1]:
                    a1 = l
                a2 = i if d1_[i] >= d1_[j] else j
                if d1_[l] > d1_[a2]:
                    a2 = l
                if a2 == a1:
                    continue
                a3 = i if d2_[i] >= d2_[j] else j
                if d2_[l] > d2_[a3]:
                    a3 = l
                if a3 == a1 or a3 == a2:
                    continue
                self._consider(best, table, sigma, (a1, a2, a3))
        # C1: one point at a homothet vertex (its two sides) plus one point
        # on another side.
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                for v in range(ns):
                    s_prev, s_this = (v - 1) % ns, v
                    for k in range(ns):
                        if k in (s_prev, s_this):
                            continue
                        sigma = (s_prev, s_this, k)
                        if sigma not in table:
                            continue
                        self._consider(best, table, sigma, (a, a, b))
        out = []
        for mask in sorted(best):
            alpha, tx, ty, sigma, gens = best[mask]
            out.append((mask, (alpha, tx, ty), (sigma, gens)))
        self._family = out
        return out

    def _consider(self, best, table, sigma, gens):
        theta = tuple(self.dots[sigma[i]][gens[i]] for i in range(3))
        inv0, inv1, inv2, combos = table[sigma]
        alpha_scaled = inv0[0] * theta[0] + inv0[1] * theta[1] + inv0[2] * theta[2]
        if alpha_scaled <= 0:
            return
        mask, tight = self._subset_mask(sigma, theta, combos)
        if mask is None or bin(mask).count("1") < 2:
            return
        tight_members = tight & mask
        if bin(tight_members).count("1") > 3:
            raise PositionError("four points on one homothet boundary; condition the input")
        alpha = alpha_scaled  # alpha is scale-free: the offset scaling cancels
        u_x = inv1[0] * theta[0] + inv1[1] * theta[1] + inv1[2] * theta[2]
        u_y = inv2[0] * theta[0] + inv2[1] * theta[1] + inv2[2] * theta[2]
        tx = u_x / self.dp
        ty = u_y / self.dp
        prev = best.get(mask)
        key = (alpha, tx, ty)
        if prev is None or key < (prev[0], prev[1], prev[2]):
            best[mask] = (alpha, tx, ty, sigma, gens)

    def members_of(self, mask: int) -> Tuple[int, ...]:
        out = []
        p = 0
        while mask:
            if mask & 1:
                out.append(p)
            mask >>= 1
            p += 1
        return tuple(out)

    def subsets(self) -> List[Tuple[int, ...]]:
        return [self.members_of(mask) for mask, _, _ in self.family()]

    def homothet_of(self, mask: int) -> Tuple[Homothet, Tuple[Tuple[int, int], ...]]:
        for m, (alpha, tx, ty), (sigma, gens) in self.family():
            if m == mask:
                h = Homothet(self.shape, alpha, Point(tx, ty))
                dets = []
                for i in range(3):
                    g = gens[i]
                    if mask >> g & 1 and (g, sigma[i]) not in dets:
                        if self.dots[sigma[i]][g] == max(
                            self.dots[sigma[i]][q] for q in self.members_of(mask)
                        ):
                            dets.append((g, sigma[i]))
                return h, tuple(dets)
        raise EnumerationError("unknown range mask")


# ---------------------------------------------------------------------------
# engine: shape-kind dispatch over a conditioned, normalized instance
# ---------------------------------------------------------------------------


class RangeEngine:
    """Streaming range queries over points in very general position.

    Points and shape are in the normalized frame (unit square / reference
    triangle / the original general polygon).
    """

    def __init__(self, pts: Sequence[Point], shape: ConvexShape):
        self.pts = list(pts)
        self.shape = shape
        self.kind = shape.kind
        self.n = len(pts)
        self._general: Optional[_GeneralEngine] = None
        self._int_data = None
        if self.kind is not ShapeKind.GENERAL:
            xs, ys, _ = backend.integer_coordinates(pts)
            arrs = backend.int64_arrays(xs, ys)
            if arrs is None:
                self._int_data = ("python", xs, ys)
            else:
                axs, ays = arrs
                ox = np.argsort(axs).astype(np.int64)
                oy = np.argsort(ays).astype(np.int64)
                self._int_data = ("kernel", axs, ays, ox, oy)
        else:
            self._general = _GeneralEngine(pts, shape)

    # -- queries ---------------------------------------------------------

    def pair_ranges(self) -> List[Tuple[int, int]]:
        if self.kind is ShapeKind.PARALLELOGRAM:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                arr = backend.get_kernels().sq_pairs(xs, ys, ox, oy)
                return [tuple(sorted((int(a), int(b)))) for a, b in arr]
            _, xs, ys = self._int_data
            res = _sq_scan_python(xs, ys, "pairs")
            return [tuple(sorted(p)) for p in res["pairs"]]
        if self.kind is ShapeKind.TRIANGLE:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                d1 = -2 * xs + ys
                d2 = 2 * xs + ys
                d3 = -2 * ys
                arr = backend.get_kernels().tri_pairs(d1, d2, d3)
                return [tuple(sorted((int(a), int(b)))) for a, b in arr]
            d1, d2, d3 = _tri_dots(self.pts)
            res = _tri_scan_python(d1, d2, d3, "pairs")
            return [tuple(sorted(p)) for p in res["pairs"]]
        out = []
        for mask, _, _ in self._general.family():
            if bin(mask).count("1") == 2:
                out.append(self._general.members_of(mask))
        return [tuple(sorted(p)) for p in out]

    def sized_mono_members(self, cat: Sequence[int], size: int) -> List[Tuple[int, ...]]:
        """Ranges with exactly `size` points all of one category (0/1)."""
        cat8 = np.asarray(list(cat), dtype=np.uint8)
        if self.kind is ShapeKind.PARALLELOGRAM:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                mem, off = backend.get_kernels().sq_sized_mono(xs, ys, ox, oy, cat8, size)
                return _split_flat(mem, off)
            _, xs, ys = self._int_data
            return _sq_scan_python(xs, ys, "sized_mono", cat=list(cat), size_want=size)["collect"]
        if self.kind is ShapeKind.TRIANGLE:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                mem, off = backend.get_kernels().tri_sized_mono(
                    -2 * xs + ys, 2 * xs + ys, -2 * ys, cat8, size
                )
                return _split_flat(mem, off)
            d1, d2, d3 = _tri_dots(self.pts)
            return _tri_scan_python(d1, d2, d3, "sized_mono", cat=list(cat), size_want=size)[
                "collect"
            ]
        out = []
        for mask, _, _ in self._general.family():
            mem = self._general.members_of(mask)
            if len(mem) == size:
                vals = {cat[q] for q in mem}
                if len(vals) == 1:
                    out.append(mem)
        return out

    def verify_scan(self, user: Sequence[bool], cat: Sequence[int], m: int):
        """(total multi-point ranges, max user-monochromatic size, violations).

        Violations are ranges whose user points number >= m and are all one
        category.  Hull-augmentation points (user=False) never count.
        """
        user8 = np.asarray([1 if u else 0 for u in user], dtype=np.uint8)
        cat8 = np.asarray(list(cat), dtype=np.uint8)
        if self.kind is ShapeKind.PARALLELOGRAM:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                total, mono, vm, vo = backend.get_kernels().sq_verify(
                    xs, ys, ox, oy, user8, cat8, m
                )
                return int(total), int(mono), _split_flat(vm, vo)
            _, xs, ys = self._int_data
            res = _sq_scan_python(
                xs, ys, "verify", user=list(user), cat=list(cat), m_thresh=m
            )
            return res["total"], res["max_mono"], res["violations"]
        if self.kind is ShapeKind.TRIANGLE:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                total, mono, vm, vo = backend.get_kernels().tri_verify(
                    -2 * xs + ys, 2 * xs + ys, -2 * ys, user8, cat8, m
                )
                return int(total), int(mono), _split_flat(vm, vo)
            d1, d2, d3 = _tri_dots(self.pts)
            res = _tri_scan_python(d1, d2, d3, "verify", user=list(user), cat=list(cat), m_thresh=m)
            return res["total"], res["max_mono"], res["violations"]
        total = 0
        max_mono = 0
        violations = []
        for mask, _, _ in self._general.family():
            total += 1
            mem = self._general.members_of(mask)
            umem = [q for q in mem if user[q]]
            if not umem:
                continue
            cats = {cat[q] for q in umem}
            if len(cats) == 1:
                max_mono = max(max_mono, len(umem))
                if len(umem) >= m:
                    violations.append(mem)
        return total, max_mono, violations

    def verify_scan_k(self, user: Sequence[bool], labels: Sequence[int], k: int, mk: int):
        """(total, max user size of a range missing some label, violations)."""
        if self.kind is ShapeKind.PARALLELOGRAM and self._int_data[0] == "kernel":
            _, xs, ys, ox, oy = self._int_data
            user8 = np.asarray([1 if u else 0 for u in user], dtype=np.uint8)
            lab = np.asarray(list(labels), dtype=np.int64)
            total, miss, vm, vo = backend.get_kernels().sq_verify_k(
                xs, ys, ox, oy, user8, lab, k, mk
            )
            return int(total), int(miss), _split_flat(vm, vo)
        # generic route: reuse verify-style scan over materialized subsets
        subsets = self.all_subsets()
        total = 0
        max_missing = 0
        violations = []
        for mem in subsets:
            if len(mem) < 2:
                continue
            total += 1
            umem = [q for q in mem if user[q]]
            if not umem:
                continue
            present = {labels[q] for q in umem}
            if len(present) < k:
                max_missing = max(max_missing, len(umem))
                if len(umem) >= mk:
                    violations.append(mem)
        return total, max_missing, violations

    def all_subsets(self) -> List[Tuple[int, ...]]:
        """Materialized multi-point subsets (guarded by MATERIALIZE_LIMIT)."""
        if self.kind is ShapeKind.GENERAL:
            return self._general.subsets()
        if self.n > MATERIALIZE_LIMIT:
            raise EnumerationError(
                "refusing to materialize the range family for %d points" % self.n
            )
        if self.kind is ShapeKind.PARALLELOGRAM:
            if self._int_data[0] == "kernel":
                _, xs, ys, ox, oy = self._int_data
                mem, off = backend.get_kernels().sq_collect(xs, ys, ox, oy)
                return _split_flat(mem, off)
            _, xs, ys = self._int_data
            return _sq_scan_python(xs, ys, "collect")["collect"]
        if self._int_data[0] == "kernel":
            _, xs, ys, ox, oy = self._int_data
            mem, off = backend.get_kernels().tri_collect(-2 * xs + ys, 2 * xs + ys, -2 * ys)
            return _split_flat(mem, off)
        d1, d2, d3 = _tri_dots(self.pts)
        return _tri_scan_python(d1, d2, d3, "collect")["collect"]

    # -- canonical homothets (normalized frame) ---------------------------

    def canonical_homothet(self, members: Tuple[int, ...]):
        if self.kind is ShapeKind.PARALLELOGRAM:
            return self._canonical_square(members)
        if self.kind is ShapeKind.TRIANGLE:
            return self._canonical_triangle(members)
        mask = 0
        for q in members:
            mask |= 1 << q
        return self._general.homothet_of(mask)

    def singleton_homothet(self, idx: int):
        p = self.pts[idx]
        if self.n == 1:
            gap = Fraction(1)
        else:
            gap = min(
                max(abs(q.x - p.x), abs(q.y - p.y)) for j, q in enumerate(self.pts) if j != idx
            )
        if self.kind is ShapeKind.PARALLELOGRAM:
            s = gap / 2
            return Homothet(self.shape, s, Point(p.x - s / 2, p.y - s / 2)), ()
        centroid = Point(
            sum(v.x for v in self.shape.vertices) / self.shape.n_sides,
            sum(v.y for v in self.shape.vertices) / self.shape.n_sides,
        )
        alpha = gap / 8
        for _ in range(64):
            h = Homothet(
                self.shape,
                alpha,
                Point(p.x - alpha * centroid.x, p.y - alpha * centroid.y),
            )
            inside = [
                j
                for j, q in enumerate(self.pts)
                if containment(h, q) is not Containment.OUTSIDE
            ]
            if inside == [idx]:
                return h, ()
            alpha = alpha / 2
        raise EnumerationError("failed to build a singleton homothet")

    def _canonical_square(self, members):
        pts = self.pts
        xsm = [pts[q].x for q in members]
        ysm = [pts[q].y for q in members]
        minx, maxx = min(xsm), max(xsm)
        miny, maxy = min(ysm), max(ysm)
        w, h = maxx - minx, maxy - miny
        if w == h:
            raise PositionError("range with equal width and height; condition the input")
        flip = h > w
        if flip:
            # tall range: swap roles of the axes, build, then swap back
            main_lo, main_hi, other_lo, other_hi, s = miny, maxy, minx, maxx, h
            coord_main = lambda q: pts[q].y
            coord_other = lambda q: pts[q].x
        else:
            main_lo, main_hi, other_lo, other_hi, s = minx, maxx, miny, maxy, w
            coord_main = lambda q: pts[q].x
            coord_other = lambda q: pts[q].y
        lows = [q for q in members if coord_other(q) == other_lo]
        highs = [q for q in members if coord_other(q) == other_hi]
        left_pt = next(q for q in members if coord_main(q) == main_lo)
        right_pt = next(q for q in members if coord_main(q) == main_hi)
        low_pt, high_pt = lows[0], highs[0]
        # nearest excluded neighbors in the generator strip
        below = [
            coord_other(q)
            for q in range(self.n)
            if q not in members
            and main_lo <= coord_main(q) <= main_hi
            and coord_other(q) < other_lo
        ]
        above = [
            coord_other(q)
            for q in range(self.n)
            if q not in members
            and main_lo <= coord_main(q) <= main_hi
            and coord_other(q) > other_hi
        ]
        # feasible bottom coordinates: b in (max(below), min(above)-s) and
        # [other_hi - s, other_lo]; prefer pinning the bottom side on the
        # lowest member, then the top side on the highest, else the midpoint
        # (the pinned positions can be infeasible when an excluded point sits
        # in the strip, or would put a member on a window corner)
        dets = [(left_pt, SQUARE_LEFT), (right_pt, SQUARE_RIGHT)]
        max_below = max(below) if below else None
        min_above = min(above) if above else None
        b = None
        if low_pt not in (left_pt, right_pt):
            cand = other_lo
            if (max_below is None or max_below < cand) and (
                min_above is None or cand + s < min_above
            ):
                b = cand
                dets.append((low_pt, SQUARE_BOTTOM))
        if b is None and high_pt not in (left_pt, right_pt):
            cand = other_hi - s
            if max_below is None or max_below < cand:
                b = cand
                dets.append((high_pt, SQUARE_TOP))
        if b is None:
            lo = other_hi - s
            if max_below is not None and max_below > lo:
                lo = max_below
            hi = other_lo
            if min_above is not None and min_above - s < hi:
                hi = min_above - s
            b = (lo + hi) / 2
            corner_vals = (coord_other(left_pt), coord_other(right_pt))
            for _ in range(8):
                if b not in corner_vals and b + s not in corner_vals:
                    break
                b = (lo + b) / 2
        if flip:
            homothet = Homothet(self.shape, s, Point(b, main_lo))
            swap = {
                SQUARE_LEFT: SQUARE_BOTTOM,
                SQUARE_RIGHT: SQUARE_TOP,
                SQUARE_BOTTOM: SQUARE_LEFT,
                SQUARE_TOP: SQUARE_RIGHT,
            }
            dets = [(q, swap[side]) for q, side in dets]
        else:
            homothet = Homothet(self.shape, s, Point(main_lo, b))
        return homothet, tuple(dets)

    def _canonical_triangle(self, members):
        d1, d2, d3 = _tri_dots(self.pts)
        t1 = max(d1[q] for q in members)
        t2 = max(d2[q] for q in members)
        t3 = max(d3[q] for q in members)
        g1 = next(q for q in members if d1[q] == t1)
        g2 = next(q for q in members if d2[q] == t2)
        g3 = next(q for q in members if d3[q] == t3)
        dets = [(g1, 0), (g2, 1), (g3, 2)]
        if len({g1, g2, g3}) < 3:
            # a member sits on a homothet vertex: inflate uniformly by half
            # the smallest exclusion slack, dropping the exact incidences
            slack = None
            for q in range(self.n):
                if q in members:
                    continue
                s = max(d1[q] - t1, d2[q] - t2, d3[q] - t3)
                if slack is None or s < slack:
                    slack = s
            delta = Fraction(1) if slack is None else Fraction(slack, 3)
            t1, t2, t3 = t1 + delta, t2 + delta, t3 + delta
            dets = []
        alpha = Fraction(t1 + t2 + t3, 4)
        ty = Fraction(-t3, 2)
        tx = (ty - t1) / 2
        return Homothet(self.shape, alpha, Point(tx, ty)), tuple(dets)


# ---------------------------------------------------------------------------
# degenerate-tolerant reference enumerations (small inputs, exact Fractions)
# ---------------------------------------------------------------------------


def _degenerate_square_subsets(pts: Sequence[Point]) -> List[Tuple[int, ...]]:
    """Realized multi-point subsets for axis-parallel squares without any
    position assumptions.  Budget-guarded; used for raw (unconditioned)
    inputs and for conditioning's preservation check."""
    n = len(pts)
    xs_all, ys_all, _ = backend.integer_coordinates(pts)
    xs = [2 * v for v in xs_all]  # even grid so midpoints stay integral
    ys = [2 * v for v in ys_all]
    sides = sorted(
        {abs(a - b) for ar in (xs, ys) for i, a in enumerate(ar) for b in ar[i + 1 :]} - {0}
    )

    def reps(vals, s):
        # doubled grid: thresholds are even, so integer midpoints are exact
        thr = sorted(set(vals) | {v - s for v in vals})
        out = list(thr)
        out.extend((thr[t] + thr[t + 1]) // 2 for t in range(len(thr) - 1))
        return out

    total = 0
    seen = set()
    for s in sides:
        ls = reps(xs, s)
        bs = reps(ys, s)
        total += len(ls) * len(bs)
        if total > DEGENERATE_BUDGET:
            raise EnumerationError(
                "degenerate input too large for the reference enumeration; "
                "condition the points first"
            )
        for l in ls:
            colx = [q for q in range(n) if l <= xs[q] <= l + s]
            if len(colx) < 2:
                continue
            for b in bs:
                sub = tuple(q for q in colx if b <= ys[q] <= b + s)
                if len(sub) >= 2:
                    seen.add(sub)
    return sorted(seen)


def _degenerate_triangle_subsets(pts: Sequence[Point]) -> List[Tuple[int, ...]]:
    xs, ys, _ = backend.integer_coordinates(pts)
    d1 = [-2 * xs[p] + ys[p] for p in range(len(pts))]
    d2 = [2 * xs[p] + ys[p] for p in range(len(pts))]
    d3 = [-2 * ys[p] for p in range(len(pts))]
    if len(pts) ** 3 > DEGENERATE_BUDGET:
        raise EnumerationError("degenerate input too large; condition the points first")
    return sorted(set(_tri_scan_python(d1, d2, d3, "collect")["collect"]))


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def enumerate_ranges(points: Sequence[Point], shape: ConvexShape, validate: bool = True) -> RangeFamily:
    """One canonical homothet per realizable subset of the points.

    Points may be in arbitrary position for parallelogram/triangle shapes
    (a slower tie-tolerant reference path is used when very general position
    fails); general polygons require conditioned input.
    """
    n = len(points)
    amap, shape_norm = normalize(shape)
    inv = amap.inverse()
    pts_norm = [amap.apply(p) for p in points]
    engine = None
    fails = position_failures(pts_norm, shape_norm)
    subsets: List[Tuple[int, ...]]
    if not fails:
        engine = RangeEngine(pts_norm, shape_norm)
        subsets = engine.all_subsets()
    else:
        if shape_norm.kind is ShapeKind.PARALLELOGRAM:
            subsets = _degenerate_square_subsets(pts_norm)
        elif shape_norm.kind is ShapeKind.TRIANGLE:
            subsets = _degenerate_triangle_subsets(pts_norm)
        else:
            raise PositionError(
                "general polygons need points in very general position: %s" % "; ".join(fails)
            )
    ranges: List[RealizedRange] = []
    for idx in range(n):
        if engine is not None:
            h, dets = engine.singleton_homothet(idx)
        else:
            h, dets = _degenerate_singleton(pts_norm, shape_norm, idx)
        ranges.append(
            RealizedRange(_map_homothet(inv, h, shape), (idx,), _remap_dets(inv, h, shape, pts_norm, dets, points))
        )
    for mem in subsets:
        if engine is not None:
            h, dets = engine.canonical_homothet(mem)
        else:
            h, dets = _degenerate_witness(pts_norm, shape_norm, mem)
        h_orig = _map_homothet(inv, h, shape)
        dets_orig = _remap_dets(inv, h, shape, pts_norm, dets, points)
        if validate:
            for q, side in dets_orig:
                nrm = h_orig.shape.normals[side]
                if nrm.x * points[q].x + nrm.y * points[q].y != h_orig.offsets[side]:
                    raise EnumerationError("determinator incidence lost in frame mapping")
        ranges.append(RealizedRange(h_orig, tuple(sorted(mem)), dets_orig))
    bound_ok = len(ranges) <= 4 * max(n, 1) ** 3 + n
    return RangeFamily(ranges, n, bound_ok)


def _remap_dets(inv, h_norm, orig_shape, pts_norm, dets, points):
    if not dets:
        return ()
    h_orig = _map_homothet(inv, h_norm, orig_shape)
    out = []
    for q, _side_norm in dets:
        sides = _sides_through(h_orig, points[q])
        if sides:
            out.append((q, sides[0]))
    return tuple(out)


def _degenerate_singleton(pts, shape, idx):
    p = pts[idx]
    gap = None
    for j, q in enumerate(pts):
        if j == idx:
            continue
        d = max(abs(q.x - p.x), abs(q.y - p.y))
        if d > 0 and (gap is None or d < gap):
            gap = d
    if gap is None:
        gap = Fraction(1)
    if shape.kind is ShapeKind.PARALLELOGRAM:
        s = gap / 2
        return Homothet(shape, s, Point(p.x - s / 2, p.y - s / 2)), ()
    centroid = Point(
        sum(v.x for v in shape.vertices) / shape.n_sides,
        sum(v.y for v in shape.vertices) / shape.n_sides,
    )
    alpha = gap / 8
    for _ in range(64):
        h = Homothet(shape, alpha, Point(p.x - alpha * centroid.x, p.y - alpha * centroid.y))
        inside = [j for j, q in enumerate(pts) if containment(h, q) is not Containment.OUTSIDE]
        if inside == [idx]:
            return h, ()
        alpha /= 2
    raise EnumerationError("failed to build a singleton homothet")


def _degenerate_witness(pts, shape, members):
    """A realizing homothet for a subset of a degenerate instance (search)."""
    n = len(pts)
    if shape.kind is ShapeKind.PARALLELOGRAM:
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        mx = [xs[q] for q in members]
        my = [ys[q] for q in members]
        base = max(max(mx) - min(mx), max(my) - min(my))
        sides = sorted(
            {
                s
                for s in (
                    {abs(a - b) for ar in (xs, ys) for i, a in enumerate(ar) for b in ar[i + 1 :]}
                )
                if s >= base and s > 0
            }
        )
        for s in sides:
            for l in _bounded_reps(xs, s, min(mx), max(mx)):
                for b in _bounded_reps(ys, s, min(my), max(my)):
                    sub = tuple(
                        q for q in range(n) if l <= xs[q] <= l + s and b <= ys[q] <= b + s
                    )
                    if sub == tuple(sorted(members)):
                        return Homothet(shape, s, Point(l, b)), ()
        raise EnumerationError("no witness window found for subset %s" % (members,))
    d1, d2, d3 = _tri_dots(pts)
    t1 = max(d1[q] for q in members)
    t2 = max(d2[q] for q in members)
    t3 = max(d3[q] for q in members)
    alpha = Fraction(t1 + t2 + t3, 4)
    if alpha <= 0:
        raise EnumerationError("degenerate triangle witness has nonpositive scale")
    ty = Fraction(-t3, 2)
    tx = (ty - t1) / 2
    return Homothet(shape, alpha, Point(tx, ty)), ()


def _bounded_reps(vals, s, need_lo, need_hi):
    lo_min = need_hi - s
    thr = sorted({v for v in set(vals) | {v - s for v in vals} if lo_min <= v <= need_lo})
    out = list(thr)
    out.extend((thr[t] + thr[t + 1]) / 2 for t in range(len(thr) - 1))
    return [v for v in out if lo_min <= v <= need_lo]


def shrink_away(h: Homothet, points: Sequence[Point], Z: Sequence[int]) -> Homothet:
    """A homothet containing exactly (h's points) minus Z, where Z is a set
    of indices of points on h's boundary (boundary-point removal)."""
    cls = [containment(h, p) for p in points]
    inside = [i for i, c in enumerate(cls) if c is not Containment.OUTSIDE]
    boundary = [i for i, c in enumerate(cls) if c is Containment.BOUNDARY]
    zset = set(Z)
    if not zset <= set(boundary):
        raise PositionError("shrink_away requires Z to be boundary points of the homothet")
    if len(boundary) > 3:
        raise PositionError("more than 3 boundary points; input not in very general position")
    if not zset:
        return h
    survivors = [i for i in boundary if i not in zset]
    target = [i for i in inside if i not in zset]
    if not survivors:
        out = _shrink_about_interior(h, points, target)
    elif len(survivors) == 1:
        out = _shrink_about_point(h, points, points[survivors[0]], target)
    else:
        # one removal with two surviving boundary points: inflate about the
        # removed point (its side line stays fixed) until it is the only
        # boundary point, then shrink from an interior point
        (z,) = tuple(zset)
        h_plus = _inflate_about_boundary_point(h, points, points[z])
        out = _shrink_about_interior(h_plus, points, target)
    got = [i for i, p in enumerate(points) if containment(out, p) is not Containment.OUTSIDE]
    if got != sorted(target):
        raise EnumerationError("shrink_away produced wrong subset")
    return out


def _centroid(h: Homothet) -> Point:
    vs = h.vertices
    return Point(sum(v.x for v in vs) / len(vs), sum(v.y for v in vs) / len(vs))


def _scale_about(h: Homothet, g: Point, lam: Fraction) -> Homothet:
    t = h.translation
    return Homothet(
        h.shape,
        h.scale * lam,
        Point(g.x + lam * (t.x - g.x), g.y + lam * (t.y - g.y)),
    )


def _shrink_about_interior(h, points, keep):
    g = _centroid(h)
    lam_min = Fraction(0)
    for i in keep:
        p = points[i]
        for k in range(h.shape.n_sides):
            nrm = h.shape.normals[k]
            den = h.offsets[k] - (nrm.x * g.x + nrm.y * g.y)
            num = nrm.x * (p.x - g.x) + nrm.y * (p.y - g.y)
            if den <= 0:
                raise EnumerationError("centroid not interior")
            lam_min = max(lam_min, Fraction(num, 1) / den)
    lam = (lam_min + 1) / 2
    if lam <= 0:
        lam = Fraction(1, 2)
    return _scale_about(h, g, lam)


def _shrink_about_point(h, points, x: Point, keep):
    lam_min = Fraction(0)
    for i in keep:
        p = points[i]
        if p == x:
            continue
        for k in range(h.shape.n_sides):
            nrm = h.shape.normals[k]
            den = h.offsets[k] - (nrm.x * x.x + nrm.y * x.y)
            num = nrm.x * (p.x - x.x) + nrm.y * (p.y - x.y)
            if den == 0:
                if num > 0:
                    raise EnumerationError("cannot shrink about a point on the same side")
                continue
            if den < 0:
                raise EnumerationError("shrink anchor outside homothet")
            lam_min = max(lam_min, Fraction(num, 1) / den)
    lam = (lam_min + 1) / 2
    return _scale_about(h, x, lam)


def _inflate_about_boundary_point(h, points, z: Point):
    # inflation about z keeps z's side line fixed and pushes the others out;
    # stop well before any excluded point enters
    margin = None
    for p in points:
        if containment(h, p) is Containment.OUTSIDE:
            worst = max(
                (h.shape.normals[k].x * p.x + h.shape.normals[k].y * p.y) - h.offsets[k]
                for k in range(h.shape.n_sides)
            )
            if margin is None or worst < margin:
                margin = worst
    span = max(h.offsets[k] - (h.shape.normals[k].x * z.x + h.shape.normals[k].y * z.y) for k in range(h.shape.n_sides))
    if margin is None:
        lam = Fraction(3, 2)
    else:
        lam = 1 + min(Fraction(1, 2), margin / (4 * max(span, 1)))
    return _scale_about(h, z, lam)


def heavy_ranges(family: RangeFamily, c: int) -> List[RealizedRange]:
    """All ranges with exactly c points, in canonical (scale, translation)
    lexicographic order."""
    if c < 1:
        raise EnumerationError("c must be >= 1")
    out = [r for r in family.ranges if r.size == c]
    out.sort(key=lambda r: (r.homothet.scale, r.homothet.translation.x, r.homothet.translation.y))
    return out
