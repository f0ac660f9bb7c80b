"""The 2-coloring pipeline and its recursive polychromatic extension.

Pipeline: build the generalized Delaunay triangulation of the conditioned
set, 4-color it properly, merge {1,2}->light red and {3,4}->light blue,
then for every homothet with exactly c_g points all of one light color find
a good 3-path and flip one of its two interior vertices to the dark
opposite color; finally merge light+dark per color class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .delaunay import (
    ConditionedSet,
    DelaunayGraph,
    InducedSubgraph,
    build_dt,
    condition,
    induce,
    longest_path,
)
from .errors import (
    BudgetExhaustedError,
    EnumerationError,
    NoGoodThreePathError,
    PositionError,
)
from .geom import (
    SQUARE_BOTTOM,
    SQUARE_LEFT,
    SQUARE_RIGHT,
    SQUARE_TOP,
    ConvexShape,
    Point,
    Quadrant,
    ShapeConstants,
    ShapeKind,
    quadrant,
    shape_constants,
    threshold_for_k,
)

LIGHT_RED, LIGHT_BLUE = 0, 1
DARK_RED, DARK_BLUE = 0, 1
RED, BLUE = 0, 1

FOUR_COLOR_BUDGET = 10**8


def four_color(dt: DelaunayGraph, budget: int = FOUR_COLOR_BUDGET) -> List[int]:
    """Deterministic proper 4-coloring: minimum-degree elimination, then
    least-color-first reinsertion with Kempe-chain repair at dead ends and
    backtracking as the last resort.

    Reinserted vertices have at most 5 already-colored neighbors; when all
    four colors appear among them a Kempe component swap frees one (always,
    in the four-neighbor case).  The graph is planar, so a coloring exists;
    exhausting the budget means the search thrashed, and the instance is
    dumped for analysis.
    """
    n = dt.n
    adj = [sorted(dt.rotation[v]) for v in range(n)]
    deg = [len(a) for a in adj]
    alive = [True] * n
    order = []
    for _ in range(n):
        v = min((deg[u], u) for u in range(n) if alive[u])[1]
        order.append(v)
        alive[v] = False
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
    seq = order[::-1]
    pos = {v: i for i, v in enumerate(seq)}
    earlier = [[w for w in adj[v] if pos[w] < pos[v]] for v in seq]
    colors = [0] * n
    expansions = 0

    def kempe_repair(v) -> bool:
        """Swap one (a,b) Kempe component among colored vertices so that a
        color disappears from v's colored neighborhood."""
        nbrs = [w for w in adj[v] if colors[w]]
        for a in (1, 2, 3, 4):
            for b in (1, 2, 3, 4):
                if a == b:
                    continue
                seeds = [w for w in nbrs if colors[w] == a]
                if not seeds:
                    continue
                comp = set(seeds)
                stack = list(seeds)
                while stack:
                    u = stack.pop()
                    for w in adj[u]:
                        if colors[w] in (a, b) and w not in comp and w != v:
                            comp.add(w)
                            stack.append(w)
                if any(colors[w] == b and w in comp for w in nbrs):
                    continue
                for u in comp:
                    colors[u] = b if colors[u] == a else a
                return True
        return False

    i = 0
    tried: List[int] = [0] * n
    while 0 <= i < n:
        v = seq[i]
        used = {colors[w] for w in earlier[i]}
        advanced = False
        for c in range(tried[i] + 1, 5):
            if c in used:
                continue
            expansions += 1
            if expansions > budget:
                raise BudgetExhaustedError(
                    "4-coloring budget exhausted",
                    json.dumps({"edges": sorted(list(dt.edges))}),
                )
            colors[v] = c
            tried[i] = c
            advanced = True
            break
        if advanced:
            i += 1
            if i < n:
                tried[i] = 0
            continue
        if tried[i] == 0:
            expansions += 10
            if kempe_repair(v):
                continue  # retry this level with the repaired neighborhood
        colors[v] = 0
        tried[i] = 0
        i -= 1
    if i < 0:
        raise EnumerationError("4-coloring search failed on a planar graph (bug)")
    for u, v in dt.edges:
        if colors[u] == colors[v]:
            raise EnumerationError("improper 4-coloring (bug)")
    return colors


_SQUARE_BAD_TABLE = {
    frozenset((Quadrant.SW, Quadrant.NW)): SQUARE_LEFT,
    frozenset((Quadrant.SE, Quadrant.NE)): SQUARE_RIGHT,
    frozenset((Quadrant.NW, Quadrant.NE)): SQUARE_TOP,
    frozenset((Quadrant.SW, Quadrant.SE)): SQUARE_BOTTOM,
}


def bad_sides_of_2path(points: Sequence[Point], x: int, y: int, z: int, shape: ConvexShape) -> List[int]:
    """Sides j such that some separating homothet has both edges yx and yz
    crossing its side j.

    For axis-parallel squares this is the quadrant-pair table; for other
    shapes the direction-cone rule: side j is bad iff both edge directions
    have positive dot product with j's outward normal.
    """
    px, py, pz = points[x], points[y], points[z]
    if px == py or pz == py or px == pz:
        raise PositionError("degenerate 2-path")
    if shape.kind is ShapeKind.PARALLELOGRAM:
        qx = quadrant(py, px)
        qz = quadrant(py, pz)
        side = _SQUARE_BAD_TABLE.get(frozenset((qx, qz)))
        return [] if side is None else [side]
    vx = px - py
    vz = pz - py
    out = []
    for k in range(shape.n_sides):
        nk = shape.normals[k]
        if nk.x * vx.x + nk.y * vx.y > 0 and nk.x * vz.x + nk.y * vz.y > 0:
            out.append(k)
    return out


def goodness2(dt: DelaunayGraph, x: int, y: int, z: int, shape: Optional[ConvexShape] = None):
    """Good (None) or the first bad side index of the 2-path x-y-z."""
    if not dt.has_edge(x, y) or not dt.has_edge(y, z):
        raise PositionError("x-y-z is not a 2-path in the Delaunay graph")
    if x == z:
        raise PositionError("endpoints of a 2-path must differ")
    shape = shape or dt.conditioned.shape_norm
    bad = bad_sides_of_2path(dt.points, x, y, z, shape)
    return bad[0] if bad else None


@dataclass(frozen=True)
class GoodPathCertificate:
    vertices: Tuple[int, int, int, int]
    checked_sides: Tuple[Tuple[int, ...], Tuple[int, ...]]  # bad sides per 2-path (both empty)


def find_good_3path(sub: InducedSubgraph, shape: ConvexShape) -> GoodPathCertificate:
    """A 3-path whose both 2-paths are good, from the tree's longest path.

    A 12-vertex path has at most four bad 2-paths among its ten interior
    ones, so two consecutive good ones always exist for squares; absence is
    the adversarial witness for other polygons.
    """
    if not sub.is_tree():
        raise PositionError("find_good_3path requires a tree-induced subgraph")
    path = longest_path(sub)
    pts = sub.host.points
    bad_cache: Dict[int, List[int]] = {}

    def bad(i: int) -> List[int]:
        if i not in bad_cache:
            bad_cache[i] = bad_sides_of_2path(pts, path[i - 1], path[i], path[i + 1], shape)
        return bad_cache[i]

    for i in range(1, len(path) - 2):
        if not bad(i) and not bad(i + 1):
            return GoodPathCertificate(
                (path[i - 1], path[i], path[i + 1], path[i + 2]),
                (tuple(bad(i)), tuple(bad(i + 1))),
            )
    raise NoGoodThreePathError(
        "no good 3-path in tree-induced range", sub.vertex_indices, path
    )


@dataclass
class ColoringState:
    four_color: List[int]
    light: List[int]
    dark: List[Optional[int]]
    final: List[int]

    def check_invariants(self) -> None:
        for v in range(len(self.four_color)):
            assert (self.light[v] == LIGHT_RED) == (self.four_color[v] in (1, 2))
            if self.dark[v] == DARK_BLUE:
                assert self.four_color[v] == 1
            if self.dark[v] == DARK_RED:
                assert self.four_color[v] == 3
            expected_red = (self.light[v] == LIGHT_RED and self.dark[v] != DARK_BLUE) or (
                self.dark[v] == DARK_RED
            )
            assert (self.final[v] == RED) == expected_red


@dataclass
class HeavyRecord:
    members: Tuple[int, ...]
    scale: Fraction
    translation: Tuple[Fraction, Fraction]
    light_color: int
    certificate: GoodPathCertificate
    recolored: int


@dataclass
class TwoColorResult:
    conditioned: ConditionedSet
    dt: DelaunayGraph
    constants: ShapeConstants
    state: ColoringState
    heavy_processed: List[HeavyRecord]

    @property
    def labels(self) -> List[int]:
        return self.state.final[: self.conditioned.n_user]


def two_color(points: Sequence[Point], shape: ConvexShape, seed: int = 0,
              budget: Optional[int] = None) -> TwoColorResult:
    """2-color the points so that every homothet of the shape containing at
    least m = (c_g-1)f(n)+n+1 of them gets both colors."""
    if shape.kind is ShapeKind.GENERAL:
        raise PositionError(
            "2-coloring with a guarantee exists only for parallelograms and triangles"
        )
    consts = shape_constants(shape)
    cond = condition(points, shape, seed)
    dt = build_dt(cond)
    return two_color_conditioned(dt, consts, budget=budget)


def two_color_conditioned(
    dt: DelaunayGraph, consts: ShapeConstants, four_coloring: Optional[List[int]] = None,
    budget: Optional[int] = None,
) -> TwoColorResult:
    """Run the pipeline on an already-conditioned instance.

    four_coloring overrides the solver's coloring (it must still be proper);
    the guarantee holds for any proper 4-coloring.
    """
    cond = dt.conditioned
    if four_coloring is not None:
        fc = list(four_coloring)
        if any(fc[u] == fc[v] for u, v in dt.edges):
            raise PositionError("supplied 4-coloring is not proper")
    else:
        fc = four_color(dt, budget) if budget else four_color(dt)
    n = dt.n
    light = [LIGHT_RED if fc[v] in (1, 2) else LIGHT_BLUE for v in range(n)]
    dark: List[Optional[int]] = [None] * n
    c_g = consts.goodness_constant
    heavy_members = dt.engine.sized_mono_members(light, c_g)
    # canonical processing order: (scale, translation) of canonical homothets
    keyed = []
    for mem in heavy_members:
        h, _ = dt.engine.canonical_homothet(mem)
        keyed.append(((h.scale, h.translation.x, h.translation.y), mem, h))
    keyed.sort(key=lambda t: t[0])
    records: List[HeavyRecord] = []
    for (key, mem, h) in keyed:
        sub = induce(dt, members=mem)
        if not sub.is_tree():
            raise EnumerationError(
                "heavy monochromatic range induced a cycle (contradicts a "
                "3-colored triangle): %s" % (mem,)
            )
        cert = find_good_3path(sub, cond.shape_norm)
        y, z = cert.vertices[1], cert.vertices[2]
        lc = light[mem[0]]
        if lc == LIGHT_RED:
            target = y if fc[y] == 1 else z
            assert fc[target] == 1
            dark[target] = DARK_BLUE
        else:
            target = y if fc[y] == 3 else z
            assert fc[target] == 3
            dark[target] = DARK_RED
        records.append(
            HeavyRecord(mem, h.scale, (h.translation.x, h.translation.y), lc, cert, target)
        )
    final = []
    for v in range(n):
        if dark[v] == DARK_RED:
            final.append(RED)
        elif dark[v] == DARK_BLUE:
            final.append(BLUE)
        else:
            final.append(RED if light[v] == LIGHT_RED else BLUE)
    state = ColoringState(fc, light, dark, final)
    state.check_invariants()
    return TwoColorResult(cond, dt, consts, state, records)


@dataclass
class KColoring:
    labels: List[int]
    k: int
    tree: Dict

    def thresholds(self) -> List[int]:
        out = []
        stack = [self.tree]
        while stack:
            node = stack.pop()
            out.append(node["threshold"])
            for key in ("left", "right"):
                if node.get(key):
                    stack.append(node[key])
        return out


def k_color(points: Sequence[Point], shape: ConvexShape, k: int, seed: int = 0) -> KColoring:
    """Recursive polychromatic k-coloring: 2-color, then split the classes
    over ceil(k/2) and floor(k/2) colors.  Any homothet with at least
    m_k = m * f(m-1)^(ceil(log2 k)-1) points meets all k colors."""
    if k < 1:
        raise PositionError("k must be >= 1")
    if shape.kind is ShapeKind.GENERAL:
        raise PositionError("k-coloring requires a parallelogram or triangle shape")
    pts = [Point(p[0], p[1]) for p in points]
    labels, tree = _k_color_rec(pts, shape, k, seed)
    return KColoring(labels, k, tree)


def _k_color_rec(pts: List[Point], shape: ConvexShape, k: int, seed: int):
    node: Dict = {
        "k": k,
        "seed": seed,
        "size": len(pts),
        "threshold": threshold_for_k(shape, k),
        "left": None,
        "right": None,
    }
    if k == 1:
        return [0] * len(pts), node
    res = two_color(pts, shape, seed)
    node["heavy_ranges"] = len(res.heavy_processed)
    red_idx = [i for i, c in enumerate(res.labels) if c == RED]
    blue_idx = [i for i, c in enumerate(res.labels) if c == BLUE]
    k_left = (k + 1) // 2
    k_right = k // 2
    labels = [0] * len(pts)
    if red_idx:
        left_labels, left_tree = _k_color_rec([pts[i] for i in red_idx], shape, k_left, 2 * seed + 1)
        node["left"] = left_tree
        for i, lab in zip(red_idx, left_labels):
            labels[i] = lab
    if blue_idx:
        if k_right >= 1:
            right_labels, right_tree = _k_color_rec(
                [pts[i] for i in blue_idx], shape, k_right, 2 * seed + 2
            )
            node["right"] = right_tree
            for i, lab in zip(blue_idx, right_labels):
                labels[i] = k_left + lab
    return labels, node
