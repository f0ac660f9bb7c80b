"""Polychromatic coloring of planar point sets with respect to homothets
of a fixed convex polygon, with exact verification."""

from .geom import (
    AffineMap,
    Containment,
    ConvexShape,
    Homothet,
    Openness,
    Point,
    Quadrant,
    ShapeConstants,
    ShapeKind,
    boundary_crossings,
    containment,
    normalize,
    pt,
    quadrant,
    rational,
    regular_polygon,
    shape_constants,
    threshold_for_k,
    unit_square,
    reference_triangle,
)
from .ranges import (
    RangeEngine,
    RangeFamily,
    RealizedRange,
    enumerate_ranges,
    heavy_ranges,
    shrink_away,
)
from .delaunay import (
    ConditionedSet,
    DelaunayGraph,
    InducedSubgraph,
    build_dt,
    condition,
    gap_neighbor,
    induce,
    longest_path,
)
from .coloring import (
    ColoringState,
    GoodPathCertificate,
    KColoring,
    TwoColorResult,
    find_good_3path,
    four_color,
    goodness2,
    k_color,
    two_color,
)
from .selfcover import SelfCover, cover_square, cover_triangle
from .verify import (
    VerificationReport,
    brute_force_oracle,
    scan_universal_goodness,
    verify,
    verify_polychromatic,
)
from .adversary import AdversarialInstance, build_adversarial, verify_adversarial

__version__ = "0.1.0"
