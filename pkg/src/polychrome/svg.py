"""Static SVG 1.1 figures: colored points, Delaunay edges, homothet outlines."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .geom import Homothet, Point

PALETTE = [
    "#d62728",  # red
    "#1f77b4",  # blue
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
]

HEADER = (
    '<?xml version="1.0" standalone="no"?>\n'
    '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
    '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n'
)


class Figure:
    def __init__(self):
        self.items: List[str] = []
        self.min_x = self.min_y = None
        self.max_x = self.max_y = None

    def _stretch(self, x: float, y: float):
        self.min_x = x if self.min_x is None else min(self.min_x, x)
        self.max_x = x if self.max_x is None else max(self.max_x, x)
        self.min_y = y if self.min_y is None else min(self.min_y, y)
        self.max_y = y if self.max_y is None else max(self.max_y, y)

    def point(self, p: Point, color: str, r: float = 0.6):
        x, y = float(p.x), float(p.y)
        self._stretch(x, y)
        self.items.append(
            '<circle cx="%.6f" cy="%.6f" r="%g" fill="%s"/>' % (x, -y, r, color)
        )

    def segment(self, a: Point, b: Point, color: str = "#999999", width: float = 0.15):
        for p in (a, b):
            self._stretch(float(p.x), float(p.y))
        self.items.append(
            '<line x1="%.6f" y1="%.6f" x2="%.6f" y2="%.6f" stroke="%s" stroke-width="%g"/>'
            % (float(a.x), -float(a.y), float(b.x), -float(b.y), color, width)
        )

    def polygon(self, vertices: Sequence[Point], color: str = "#333333",
                width: float = 0.2, dashed: bool = False, fill: str = "none"):
        pts = []
        for v in vertices:
            self._stretch(float(v.x), float(v.y))
            pts.append("%.6f,%.6f" % (float(v.x), -float(v.y)))
        dash = ' stroke-dasharray="1,1"' if dashed else ""
        self.items.append(
            '<polygon points="%s" fill="%s" stroke="%s" stroke-width="%g"%s/>'
            % (" ".join(pts), fill, color, width, dash)
        )

    def homothet(self, h: Homothet, color: str = "#333333", dashed: bool = True):
        self.polygon(h.vertices, color=color, dashed=dashed)

    def save(self, path: str):
        if self.min_x is None:
            self.min_x = self.min_y = 0.0
            self.max_x = self.max_y = 1.0
        pad = 0.05 * max(self.max_x - self.min_x, self.max_y - self.min_y, 1.0)
        x0, y0 = self.min_x - pad, -(self.max_y + pad)
        w = self.max_x - self.min_x + 2 * pad
        hgt = self.max_y - self.min_y + 2 * pad
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(HEADER)
            fh.write(
                '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                'viewBox="%.6f %.6f %.6f %.6f" width="800" height="%d">\n'
                % (x0, y0, w, hgt, int(800 * hgt / w) if w else 800)
            )
            fh.write("\n".join(self.items))
            fh.write("\n</svg>\n")


def render_coloring(path: str, points: Sequence[Point], labels: Sequence[int],
                    edges: Optional[Sequence[Tuple[Point, Point]]] = None,
                    outlines: Optional[Sequence[Homothet]] = None):
    fig = Figure()
    for a, b in edges or []:
        fig.segment(a, b)
    for h in outlines or []:
        fig.homothet(h, color="#000000")
    for p, lab in zip(points, labels):
        fig.point(p, PALETTE[lab % len(PALETTE)])
    fig.save(path)
