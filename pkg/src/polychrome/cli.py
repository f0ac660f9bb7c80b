"""Command-line surface.

Subcommands: color, kcolor, verify, delaunay, enumerate, selfcover,
adversary, scan-goodness.  Reports are JSON with rationals as "num/den"
strings; runtime lives in a separate timing field so identical runs produce
byte-identical bodies.  Exit codes: 0 success, 1 error, 2 violations found.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

from . import pointio, svg
from .errors import PolychromeError
from .geom import (
    ConvexShape,
    Homothet,
    Openness,
    regular_polygon,
    threshold_for_k,
    unit_square,
)


def parse_shape(spec: str) -> ConvexShape:
    openness = Openness.CLOSED
    if spec.endswith(":open"):
        openness = Openness.OPEN
        spec = spec[: -len(":open")]
    if spec == "square":
        return unit_square(openness)
    if spec.startswith("regular:"):
        return regular_polygon(int(spec.split(":", 1)[1]), openness)
    if spec.startswith(("parallelogram:", "triangle:")):
        body = spec.split(":", 1)[1]
        verts = []
        for part in body.split(";"):
            x, y = part.split(",")
            verts.append((pointio.parse_coordinate(x), pointio.parse_coordinate(y)))
        return ConvexShape(verts, openness)
    if spec.startswith("polygon:"):
        pts = pointio.read_points(spec.split(":", 1)[1])
        return ConvexShape([(p.x, p.y) for p in pts], openness)
    raise PolychromeError("unknown shape spec %r" % spec)


def _shape_params(shape: ConvexShape) -> dict:
    return {
        "kind": shape.kind.value,
        "openness": shape.openness.value,
        "vertices": [[v.x, v.y] for v in shape.vertices],
    }


def _heavy_entry(rec) -> dict:
    return {
        "members": list(rec.members),
        "scale": rec.scale,
        "translation": list(rec.translation),
        "light_color": "red" if rec.light_color == 0 else "blue",
        "good_3path": list(rec.certificate.vertices),
        "recolored": rec.recolored,
    }


def cmd_color(args) -> int:
    from .coloring import two_color
    from .verify import verify_two_color_result

    shape = parse_shape(args.shape)
    pts = pointio.read_points(args.infile)
    t0 = time.perf_counter()
    res = two_color(pts, shape, args.seed, budget=getattr(args, 'budget', None))
    report = verify_two_color_result(res, m=args.m)
    body = {
        "labels": ["red" if l == 0 else "blue" for l in res.labels],
        "seed": args.seed,
        "threshold": report.threshold,
        "heavy_ranges": [_heavy_entry(r) for r in res.heavy_processed],
        "verification": report.body(),
        "openness": shape.openness.value,
    }
    pointio.write_report(args.out, "color", {"shape": _shape_params(shape), "seed": args.seed},
                         body, (time.perf_counter() - t0) * 1e3)
    if args.svg:
        edges = [
            (res.dt.conditioned.inv.apply(res.dt.points[u]), res.dt.conditioned.inv.apply(res.dt.points[v]))
            for u, v in sorted(res.dt.edges)
            if u < len(pts) and v < len(pts)
        ]
        svg.render_coloring(args.svg, pts, res.labels, edges)
    return 0 if report.ok else 2


def cmd_kcolor(args) -> int:
    from .coloring import k_color
    from .verify import verify_polychromatic

    shape = parse_shape(args.shape)
    pts = pointio.read_points(args.infile)
    t0 = time.perf_counter()
    kc = k_color(pts, shape, args.k, args.seed)
    report = verify_polychromatic(pts, shape, kc, seed=args.seed)
    body = {
        "labels": kc.labels,
        "k": args.k,
        "seed": args.seed,
        "threshold": threshold_for_k(shape, args.k),
        "recursion": kc.tree,
        "verification": report.body(),
    }
    pointio.write_report(args.out, "kcolor", {"shape": _shape_params(shape), "k": args.k,
                                              "seed": args.seed}, body,
                         (time.perf_counter() - t0) * 1e3)
    if args.svg:
        svg.render_coloring(args.svg, pts, kc.labels)
    return 0 if report.ok else 2


def cmd_verify(args) -> int:
    from .verify import verify

    shape = parse_shape(args.shape)
    pts = pointio.read_points(args.infile)
    labels = pointio.read_labels(args.labels, len(pts))
    t0 = time.perf_counter()
    report = verify(pts, shape, labels, m=args.m, seed=args.seed)
    pointio.write_report(args.out, "verify", {"shape": _shape_params(shape), "m": report.threshold,
                                              "seed": args.seed}, report.body(),
                         (time.perf_counter() - t0) * 1e3)
    if args.svg:
        svg.render_coloring(args.svg, pts, labels)
    return 0 if report.ok else 2


def cmd_delaunay(args) -> int:
    from .delaunay import build_dt, condition

    shape = parse_shape(args.shape)
    pts = pointio.read_points(args.infile)
    t0 = time.perf_counter()
    cond = condition(pts, shape, args.seed)
    dt = build_dt(cond)
    inv = cond.inv
    coords = [inv.apply(p) for p in dt.points]
    body = {
        "vertices": [[p.x, p.y] for p in coords],
        "n_user": dt.n_user,
        "edges": [list(e) for e in sorted(dt.edges)],
        "rotation": [list(r) for r in dt.rotation],
        "outer_boundary": list(dt.outer_boundary),
        "inner_faces": [list(f) for f in sorted(dt.inner_faces)],
        "seed": args.seed,
        "preservation": cond.preservation,
    }
    pointio.write_report(args.out, "delaunay", {"shape": _shape_params(shape), "seed": args.seed},
                         body, (time.perf_counter() - t0) * 1e3)
    if args.svg:
        edges = [(coords[u], coords[v]) for u, v in sorted(dt.edges)]
        svg.render_coloring(args.svg, coords, [2] * len(coords), edges)
    return 0


def cmd_enumerate(args) -> int:
    from .ranges import enumerate_ranges

    shape = parse_shape(args.shape)
    pts = pointio.read_points(args.infile)
    t0 = time.perf_counter()
    fam = enumerate_ranges(pts, shape)
    body = {
        "count": len(fam.ranges),
        "size_bound_ok": fam.size_bound_ok,
        "ranges": [
            {
                "indices": list(r.point_indices),
                "scale": r.homothet.scale,
                "translation": [r.homothet.translation.x, r.homothet.translation.y],
                "determinators": [list(d) for d in r.determinators],
            }
            for r in fam.ranges
        ],
    }
    pointio.write_report(args.out, "enumerate", {"shape": _shape_params(shape)}, body,
                         (time.perf_counter() - t0) * 1e3)
    return 0


def cmd_selfcover(args) -> int:
    from .selfcover import cover_square, cover_triangle
    from .geom import reference_triangle

    pts = pointio.read_points(args.infile) if args.infile else []
    t0 = time.perf_counter()
    if args.kind == "square":
        target = Homothet(unit_square(), args.target_scale,
                          (pointio.parse_coordinate(args.target_x),
                           pointio.parse_coordinate(args.target_y)))
        cover = cover_square(target, pts)
    else:
        target = Homothet(reference_triangle(), args.target_scale,
                          (pointio.parse_coordinate(args.target_x),
                           pointio.parse_coordinate(args.target_y)))
        cover = cover_triangle(target, pts)
    body = {
        "pieces": [
            {"scale": p.scale, "translation": [p.translation.x, p.translation.y]}
            for p in cover.pieces
        ],
        "count": len(cover.pieces),
        "bound": (2 * len(pts) + 2) if args.kind == "square" else (2 * len(pts) + 1),
        "method": cover.method,
    }
    pointio.write_report(args.out, "selfcover", {"kind": args.kind, "l": len(pts)}, body,
                         (time.perf_counter() - t0) * 1e3)
    if args.svg:
        fig = svg.Figure()
        fig.homothet(cover.target, color="#000000", dashed=False)
        for piece in cover.pieces:
            fig.homothet(piece, color="#1f77b4")
        for p in pts:
            fig.point(p, "#d62728", r=float(cover.target.scale) / 100)
        fig.save(args.svg)
    return 0


def cmd_adversary(args) -> int:
    from .adversary import build_adversarial, verify_adversarial

    shape = parse_shape(args.shape)
    t0 = time.perf_counter()
    inst = build_adversarial(shape, args.c, args.seed)
    checks = verify_adversarial(inst, seed=args.seed)
    if args.csv:
        pointio.write_points_csv(args.csv, inst.all_points)
    body = {
        "c": inst.c,
        "points": len(inst.all_points),
        "epsilon": inst.epsilon,
        "mirrored": inst.mirrored,
        "roles": {k: list(v) for k, v in inst.roles.items()},
        "no_good_3path": True,
        "checks": checks,
        "witness_scales": [h.scale for h in inst.witness_homothets],
    }
    pointio.write_report(args.out, "adversary", {"shape": _shape_params(shape), "c": args.c},
                         body, (time.perf_counter() - t0) * 1e3)
    if args.svg:
        fig = svg.Figure()
        fig.polygon(shape.vertices, color="#000000")
        for h in inst.witness_homothets:
            fig.homothet(h, color="#999999")
        for p in inst.path_points:
            fig.point(p, "#d62728", r=0.004)
        for q in inst.outer_points:
            fig.point(q, "#1f77b4", r=0.004)
        fig.save(args.svg)
    return 0


def cmd_scan_goodness(args) -> int:
    from .verify import scan_universal_goodness

    shape = parse_shape(args.shape)
    pts = pointio.read_points(args.infile)
    t0 = time.perf_counter()
    report = scan_universal_goodness(pts, shape, args.c, seed=args.seed)
    body = {
        "c": args.c,
        "ranges_scanned": report.ranges_scanned,
        "trees_scanned": report.trees_scanned,
        "witnesses": [
            {"members": list(w.members), "path": list(w.path)} for w in report.witnesses
        ],
        "universally_good_here": report.universally_good_here,
        "seed": args.seed,
    }
    pointio.write_report(args.out, "scan-goodness", {"shape": _shape_params(shape), "c": args.c},
                         body, (time.perf_counter() - t0) * 1e3)
    return 0 if report.universally_good_here else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polychrome",
        description="2-color and k-color planar points so heavy homothets of a "
                    "convex polygon are never monochromatic; verify exhaustively.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_in=True, needs_shape=True):
        if needs_shape:
            p.add_argument("--shape", required=True,
                           help="square | parallelogram:x,y;... | triangle:x,y;... | "
                                "polygon:<file> | regular:<n> (suffix :open)")
        if needs_in:
            p.add_argument("--in", dest="infile", required=True, help="point file (CSV or JSON)")
        p.add_argument("--out", default="", help="JSON report path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--svg", default="", help="optional SVG figure path")

    p = sub.add_parser("color", help="2-color points")
    common(p)
    p.add_argument("--m", type=int, default=None, help="verification threshold override")
    p.add_argument("--budget", type=int, default=None, help="4-coloring search budget")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("kcolor", help="polychromatic k-coloring")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_kcolor)

    p = sub.add_parser("verify", help="verify labels against the range family")
    common(p)
    p.add_argument("--labels", required=True, help="labels file (JSON list or one per line)")
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("delaunay", help="emit the generalized Delaunay triangulation")
    common(p)
    p.set_defaults(func=cmd_delaunay)

    p = sub.add_parser("enumerate", help="enumerate the realized range family")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("selfcover", help="cover a square avoiding marked points")
    common(p, needs_shape=False)
    p.add_argument("--kind", choices=["square", "triangle"], default="square")
    p.add_argument("--target-x", default="0")
    p.add_argument("--target-y", default="0")
    p.add_argument("--target-scale", default="1")
    p.set_defaults(func=cmd_selfcover)

    p = sub.add_parser("adversary", help="build a not-universally-good witness instance")
    common(p, needs_in=False)
    p.add_argument("--c", type=int, required=True, help="path length (multiple of 4)")
    p.add_argument("--csv", default="", help="write the instance points as CSV")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("scan-goodness", help="scan tree-induced heavy ranges for good 3-paths")
    common(p)
    p.add_argument("--c", type=int, required=True)
    p.set_defaults(func=cmd_scan_goodness)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PolychromeError as exc:
        err = {"schema": 1, "error": {"code": exc.code, "message": str(exc)}}
        sys.stderr.write(json.dumps(err) + "\n")
        if getattr(args, "out", ""):
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(err, fh, indent=1)
        return 1


if __name__ == "__main__":
    sys.exit(main())
