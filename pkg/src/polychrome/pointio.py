"""Point-file parsing/writing and canonical JSON reports.

CSV: one `x,y` per line, `#` starts a comment.  JSON: {"schema": 1,
"points": [[x, y], ...]} with coordinates as strings.  Coordinates parse
exactly: decimal strings and "num/den" are both exact rationals.  Report
rationals are always emitted as "num/den" strings; the deterministic body
is separated from timing so reruns are byte-comparable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import List, Sequence

from .errors import InputError
from .geom import Point, fmt_rational


def parse_coordinate(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError("cannot parse coordinate %r: %s" % (text, exc))


def read_points(path: str) -> List[Point]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        return points_from_json(text)
    pts: List[Point] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p for p in line.replace(";", ",").split(",") if p.strip()]
        if len(parts) != 2:
            raise InputError("line %d: expected 'x,y', got %r" % (lineno, line))
        pts.append(Point(parse_coordinate(parts[0]), parse_coordinate(parts[1])))
    _reject_duplicates(pts)
    return pts


def points_from_json(text: str) -> List[Point]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("points", [])
    pts = []
    for item in data:
        if len(item) != 2:
            raise InputError("point entries need two coordinates: %r" % (item,))
        pts.append(Point(parse_coordinate(str(item[0])), parse_coordinate(str(item[1]))))
    _reject_duplicates(pts)
    return pts


def _reject_duplicates(pts: Sequence[Point]) -> None:
    if len({(p.x, p.y) for p in pts}) != len(pts):
        raise InputError("duplicate points in input")


def write_points_csv(path: str, pts: Sequence[Point]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# x,y (exact rationals)\n")
        for p in pts:
            fh.write("%s,%s\n" % (fmt_rational(p.x), fmt_rational(p.y)))


def read_labels(path: str, n: int) -> List[int]:
    """Labels file: JSON list, or one label per line (ints or red/blue)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    names = {"red": 0, "blue": 1}
    out: List[int] = []
    if stripped.startswith("[") or stripped.startswith("{"):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("labels", [])
        for v in data:
            out.append(names.get(str(v).lower(), None) if isinstance(v, str) else int(v))
            if out[-1] is None:
                raise InputError("unknown label %r" % (v,))
    else:
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.lower() in names:
                out.append(names[line.lower()])
            else:
                out.append(int(line))
    if len(out) != n:
        raise InputError("expected %d labels, got %d" % (n, len(out)))
    return out


def rational_str(value) -> str:
    return fmt_rational(Fraction(value))


def encode_rationals(obj):
    """Recursively convert Fractions (and rational tuples) to 'num/den'."""
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, Point):
        return [fmt_rational(obj.x), fmt_rational(obj.y)]
    if isinstance(obj, dict):
        return {k: encode_rationals(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode_rationals(v) for v in obj]
    return obj


def canonical_json(data) -> str:
    return json.dumps(encode_rationals(data), sort_keys=True, separators=(",", ":")) + "\n"


def write_report(path: str, command: str, params: dict, body: dict, runtime_ms: float) -> str:
    """Write {schema, command, params, body} deterministically with timing in
    a separate sibling field; returns the canonical body string."""
    doc = {
        "schema": 1,
        "command": command,
        "params": encode_rationals(params),
        "body": encode_rationals(body),
        "timing": {"runtime_ms": round(runtime_ms, 3)},
    }
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return canonical_json(body)
