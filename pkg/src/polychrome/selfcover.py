"""Self-coverability: re-cover a square by at most 2l+2 square homothets
whose interiors avoid l marked points (and the 2l+1 analogue for triangles,
exposed as a search-based contract).

The candidate family consists of inclusion-maximal empty squares pinned by
the avoid points and the target's walls.  A greedy pass usually lands within
the 2l+2 bound; an exact branch-and-bound set cover over the avoid-point
grid cells is the fallback.  Every produced cover is verified exactly:
union equal to the target and no avoid point strictly inside any piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import EnumerationError, PositionError
from .geom import (
    Containment,
    Homothet,
    Point,
    ShapeKind,
    containment,
    reference_triangle,
    unit_square,
)


@dataclass
class SelfCover:
    target: Homothet
    avoid: List[Point]
    pieces: List[Homothet]
    method: str

    @property
    def within_bound(self) -> bool:
        slope, off = (2, 2) if self.target.shape.kind is ShapeKind.PARALLELOGRAM else (2, 1)
        return len(self.pieces) <= slope * len(self.avoid) + off


def _require_axis_square(target: Homothet) -> None:
    vs = sorted((v.x, v.y) for v in target.shape.vertices)
    unit = sorted((Fraction(a), Fraction(b)) for a, b in ((0, 0), (0, 1), (1, 1), (1, 0)))
    if vs != unit:
        raise PositionError("cover_square needs a homothet of the axis-parallel unit square")


def cover_square(target: Homothet, avoid: Sequence[Point]) -> SelfCover:
    """Cover the target square by <= 2l+2 square homothets with no avoid
    point interior to any piece."""
    _require_axis_square(target)
    s0 = target.scale
    t0 = target.translation
    pts = [Point((p[0] - t0.x) / s0, (p[1] - t0.y) / s0) for p in avoid]
    for p in pts:
        if not (0 < p.x < 1 and 0 < p.y < 1):
            raise PositionError("avoid points must be strictly interior to the target")
    if len({p.x for p in pts}) != len(pts) or len({p.y for p in pts}) != len(pts):
        raise PositionError("avoid points must have pairwise distinct coordinates")
    l = len(pts)
    if l == 0:
        return SelfCover(target, list(avoid), [target], "greedy")
    unit_pieces, method = _cover_unit_square(pts)
    pieces = [
        Homothet(unit_square(), s * s0, Point(t0.x + x * s0, t0.y + y * s0))
        for (x, y, s) in unit_pieces
    ]
    cover = SelfCover(target, list(avoid), pieces, method)
    check_self_cover(cover)
    return cover


def _square_candidates(pts: List[Point]) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """Pinned maximal empty squares (x, y, side) inside the unit square."""
    zero, one = Fraction(0), Fraction(1)
    xs = sorted({p.x for p in pts})
    ys = sorted({p.y for p in pts})
    cands = set()

    def empty(x, y, s):
        if x < 0 or y < 0 or x + s > 1 or y + s > 1 or s <= 0:
            return False
        return not any(x < p.x < x + s and y < p.y < y + s for p in pts)

    for lo in [zero] + xs:
        for hi in xs + [one]:
            s = hi - lo
            if s <= 0:
                continue
            for y in {zero, one - s} | {v for v in ys} | {v - s for v in ys}:
                if empty(lo, y, s):
                    cands.add((lo, y, s))
    for lo in [zero] + ys:
        for hi in ys + [one]:
            s = hi - lo
            if s <= 0:
                continue
            for x in {zero, one - s} | {v for v in xs} | {v - s for v in xs}:
                if empty(x, lo, s):
                    cands.add((x, lo, s))
    return sorted(cands, key=lambda c: (-c[2], c[0], c[1]))


def _cover_unit_square(pts: List[Point]):
    l = len(pts)
    budget = 2 * l + 2
    cands = _square_candidates(pts)
    xs = sorted({p.x for p in pts})
    ys = sorted({p.y for p in pts})
    xcells = list(zip([Fraction(0)] + xs, xs + [Fraction(1)]))
    ycells = list(zip([Fraction(0)] + ys, ys + [Fraction(1)]))
    cells = [
        (cx, cy)
        for cx in xcells
        for cy in ycells
    ]
    masks = []
    for (x, y, s) in cands:
        m = 0
        for ci, ((x0, x1), (y0, y1)) in enumerate(cells):
            if x <= x0 and x1 <= x + s and y <= y0 and y1 <= y + s:
                m |= 1 << ci
        masks.append(m)
    full = (1 << len(cells)) - 1
    # greedy
    chosen: List[int] = []
    covered = 0
    while covered != full:
        best = -1
        best_gain = 0
        for i, m in enumerate(masks):
            gain = bin(m & ~covered).count("1")
            if gain > best_gain:
                best_gain = gain
                best = i
        if best < 0:
            break
        chosen.append(best)
        covered |= masks[best]
    if covered == full and len(chosen) <= budget:
        return [cands[i] for i in chosen], "greedy"
    exact = _min_cover(masks, full, budget)
    if exact is None:
        raise EnumerationError("no self-cover within the 2l+2 bound was found")
    return [cands[i] for i in exact], "search"


def _min_cover(masks: List[int], full: int, budget: int) -> Optional[List[int]]:
    """Exact branch-and-bound set cover (first minimal solution wins)."""
    order = sorted(range(len(masks)), key=lambda i: -bin(masks[i]).count("1"))
    masks_sorted = [masks[i] for i in order]
    best: Optional[List[int]] = None

    def rec(covered: int, chosen: List[int], start: int):
        nonlocal best
        if covered == full:
            if best is None or len(chosen) < len(best):
                best = list(chosen)
            return
        if best is not None and len(chosen) + 1 >= len(best):
            return
        if len(chosen) >= budget:
            return
        # branch on the lowest uncovered cell
        missing = (~covered) & full
        low = missing & (-missing)
        for i in range(len(masks_sorted)):
            if masks_sorted[i] & low:
                rec(covered | masks_sorted[i], chosen + [i], i)

    rec(0, [], 0)
    if best is None:
        return None
    return [order[i] for i in best]


def check_self_cover(cover: SelfCover) -> None:
    """Exact invariants: pieces inside the target, union equal to the
    target (coordinate-compressed cell accounting), no avoid point interior
    to a piece, piece count within the bound."""
    target = cover.target
    if not cover.within_bound:
        raise EnumerationError("self-cover exceeds the piece bound")
    for piece in cover.pieces:
        for v in piece.vertices:
            if containment(target, v) is Containment.OUTSIDE:
                raise EnumerationError("piece leaves the target")
    for p in cover.avoid:
        pp = Point(Fraction(p[0]), Fraction(p[1]))
        for piece in cover.pieces:
            if containment(piece, pp) is Containment.INTERIOR:
                raise EnumerationError("avoid point interior to a piece")
    if target.shape.kind is ShapeKind.PARALLELOGRAM:
        _check_square_union(cover)
    else:
        _check_triangle_union(cover)


def _check_square_union(cover: SelfCover) -> None:
    t = cover.target
    x0, y0 = t.translation.x, t.translation.y
    x1, y1 = x0 + t.scale, y0 + t.scale
    xs = {x0, x1}
    ys = {y0, y1}
    boxes = []
    for piece in cover.pieces:
        px, py = piece.translation.x, piece.translation.y
        boxes.append((px, py, px + piece.scale, py + piece.scale))
        xs.update((px, px + piece.scale))
        ys.update((py, py + piece.scale))
    xs = sorted(v for v in xs if x0 <= v <= x1)
    ys = sorted(v for v in ys if y0 <= v <= y1)
    for ax, bx in zip(xs, xs[1:]):
        for ay, by in zip(ys, ys[1:]):
            cx, cy = (ax + bx) / 2, (ay + by) / 2
            if not any(px <= cx <= qx and py <= cy <= qy for (px, py, qx, qy) in boxes):
                raise EnumerationError(
                    "uncovered cell around (%s, %s)" % (cx, cy)
                )


def _tri_offsets(h: Homothet) -> Tuple[Fraction, Fraction, Fraction]:
    return h.offsets[0], h.offsets[1], h.offsets[2]


def _triangle_union_witness(target: Homothet, pieces: List[Homothet]):
    """An uncovered point of the target, or None if the pieces cover it.

    Sweep over horizontal lines: on a line y, a reference-triangle homothet
    with offsets (c1,c2,c3) is active for y >= -c3/2 and covers the interval
    [(y-c1)/2, (c2-y)/2].  Endpoints are linear in y, so checking every
    event line plus a midpoint between consecutive events is exhaustive.
    """
    cs = [_tri_offsets(h) for h in [target] + list(pieces)]
    events = set()
    for (c1, c2, c3) in cs:
        events.add(Fraction(-c3, 2))
        events.add(Fraction(c1 + c2, 2))
    for i in range(len(cs)):
        for j in range(len(cs)):
            events.add(Fraction(cs[i][0] + cs[j][1], 2))
    ev = sorted(events)
    samples = list(ev)
    samples.extend((a + b) / 2 for a, b in zip(ev, ev[1:]))
    tc1, tc2, tc3 = cs[0]
    for y in samples:
        if y < -Fraction(tc3, 2) or y > Fraction(tc1 + tc2, 2):
            continue
        lo_t = (y - tc1) / 2
        hi_t = (tc2 - y) / 2
        if lo_t > hi_t:
            continue
        ivals = []
        for (c1, c2, c3) in cs[1:]:
            if y < -Fraction(c3, 2):
                continue
            lo = (y - c1) / 2
            hi = (c2 - y) / 2
            if lo <= hi:
                ivals.append((lo, hi))
        ivals.sort()
        reach = lo_t
        for lo, hi in ivals:
            if lo > reach:
                break
            if hi > reach:
                reach = hi
        if reach < hi_t:
            witness_x = reach if reach > lo_t else lo_t
            nxt = min((lo for lo, hi in ivals if lo > reach), default=hi_t)
            return Point((witness_x + min(nxt, hi_t)) / 2, y)
    return None


def _check_triangle_union(cover: SelfCover) -> None:
    w = _triangle_union_witness(cover.target, cover.pieces)
    if w is not None:
        raise EnumerationError("uncovered point near (%s, %s)" % (w.x, w.y))


def cover_triangle(target: Homothet, avoid: Sequence[Point]) -> SelfCover:
    """Search-based triangle self-cover within the 2l+1 bound.

    No pipeline step consumes this construction (it only backs the triangle
    threshold constant), so a search over pinned candidates suffices.
    """
    if target.shape.kind is not ShapeKind.TRIANGLE:
        raise PositionError("cover_triangle needs a homothet of the reference triangle")
    pts = [Point(Fraction(p[0]), Fraction(p[1])) for p in avoid]
    for p in pts:
        if containment(target, p) is not Containment.INTERIOR:
            raise PositionError("avoid points must be strictly interior to the target")
    l = len(pts)
    if l == 0:
        return SelfCover(target, list(pts), [target], "greedy")
    budget = 2 * l + 1
    T1, T2, T3 = _tri_offsets(target)
    d1 = [-2 * p.x + p.y for p in pts]
    d2 = [2 * p.x + p.y for p in pts]
    d3 = [-2 * p.y for p in pts]
    c1s = sorted(set(d1) | {T1})
    c2s = sorted(set(d2) | {T2})
    c3s = sorted(set(d3) | {T3})
    tri = reference_triangle()
    cands = []
    for c1 in c1s:
        for c2 in c2s:
            for c3 in c3s:
                if c1 + c2 + c3 <= 0:
                    continue
                if c1 > T1 or c2 > T2 or c3 > T3:
                    continue
                if any(a < c1 and b < c2 and c < c3 for a, b, c in zip(d1, d2, d3)):
                    continue
                alpha = Fraction(c1 + c2 + c3, 4)
                ty = Fraction(-c3, 2)
                tx = (ty - c1) / 2
                cands.append(Homothet(tri, alpha, Point(tx, ty)))
    # witness-driven greedy: repeatedly take the candidate that covers the
    # first uncovered point and reaches farthest right on its sweep line
    cands.sort(key=lambda h: (-h.scale, h.translation.x, h.translation.y))
    chosen: List[Homothet] = []
    for _ in range(budget):
        w = _triangle_union_witness(target, chosen)
        if w is None:
            cover = SelfCover(target, list(pts), chosen, "search")
            check_self_cover(cover)
            return cover
        holding = [
            h for h in cands if containment(h, w) is not Containment.OUTSIDE
        ]
        if not holding:
            raise EnumerationError("no candidate covers witness (%s, %s)" % (w.x, w.y))
        best = max(holding, key=lambda h: (Fraction(h.offsets[1] - w.y, 2), h.scale))
        chosen.append(best)
    w = _triangle_union_witness(target, chosen)
    if w is None:
        cover = SelfCover(target, list(pts), chosen, "search")
        check_self_cover(cover)
        return cover
    raise EnumerationError("triangle self-cover search failed within 2l+1 pieces")
