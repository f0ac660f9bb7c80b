"""CLI round-trips, exit codes, and report determinism."""

import json
import os

import pytest

from polychrome.cli import main, parse_shape
from polychrome.geom import ShapeKind
from polychrome.pointio import read_points, write_points_csv

from helpers import clustered_points, random_points


def test_parse_shape_grammar():
    assert parse_shape("square").kind is ShapeKind.PARALLELOGRAM
    p = parse_shape("parallelogram:0,0;2,1;3,3;1,2")
    assert p.kind is ShapeKind.PARALLELOGRAM
    t = parse_shape("triangle:0,0;4,0;0,4")
    assert t.kind is ShapeKind.TRIANGLE
    r = parse_shape("regular:5")
    assert r.kind is ShapeKind.GENERAL and r.n_sides == 5
    o = parse_shape("square:open")
    assert o.openness.value == "open"


def test_point_roundtrip(tmp_path):
    pts = random_points(9, 3)
    path = tmp_path / "pts.csv"
    write_points_csv(str(path), pts)
    back = read_points(str(path))
    assert back == pts


def test_duplicate_points_rejected(tmp_path):
    path = tmp_path / "dup.csv"
    path.write_text("1,2\n1,2\n")
    from polychrome.errors import InputError

    with pytest.raises(InputError):
        read_points(str(path))


def test_color_command(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0\n1,0\n0,1\n")
    out = tmp_path / "report.json"
    svg = tmp_path / "fig.svg"
    rc = main(["color", "--shape", "square", "--in", str(pts), "--seed", "7",
               "--out", str(out), "--svg", str(svg)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1
    assert len(doc["body"]["labels"]) == 3
    assert doc["body"]["threshold"] == 215
    assert svg.exists() and "<svg" in svg.read_text()


def test_verify_command_flags_violations(tmp_path):
    pts_file = tmp_path / "pts.csv"
    write_points_csv(str(pts_file), clustered_points(40, 3, clusters=1))
    labels = tmp_path / "labels.json"
    labels.write_text(json.dumps(["red"] * 40))
    out = tmp_path / "verify.json"
    rc = main(["verify", "--shape", "square", "--in", str(pts_file),
               "--labels", str(labels), "--m", "12", "--out", str(out)])
    assert rc == 2
    doc = json.loads(out.read_text())
    assert doc["body"]["violations"]


def test_delaunay_and_enumerate_commands(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0\n3,3\n1,2\n")
    out = tmp_path / "dt.json"
    rc = main(["delaunay", "--shape", "square", "--in", str(pts), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert [0, 2] in doc["body"]["edges"] and [1, 2] in doc["body"]["edges"]
    out2 = tmp_path / "ranges.json"
    rc = main(["enumerate", "--shape", "square", "--in", str(pts), "--out", str(out2)])
    assert rc == 0
    doc2 = json.loads(out2.read_text())
    assert doc2["body"]["count"] == 6


def test_selfcover_command(tmp_path):
    pts = tmp_path / "avoid.csv"
    pts.write_text("1/2,1/2\n")
    out = tmp_path / "cover.json"
    rc = main(["selfcover", "--in", str(pts), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["body"]["count"] == 4


def test_kcolor_command(tmp_path):
    pts_file = tmp_path / "pts.csv"
    write_points_csv(str(pts_file), random_points(20, 5))
    out = tmp_path / "k.json"
    rc = main(["kcolor", "--shape", "square", "--in", str(pts_file), "--k", "4",
               "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["body"]["threshold"] == 92450
    assert set(doc["body"]["labels"]) <= {0, 1, 2, 3}


def test_report_bodies_deterministic(tmp_path):
    pts_file = tmp_path / "pts.csv"
    write_points_csv(str(pts_file), random_points(15, 11))
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        main(["color", "--shape", "square", "--in", str(pts_file), "--seed", "3",
              "--out", str(out)])
        doc = json.loads(out.read_text())
        outs.append(json.dumps(doc["body"], sort_keys=True))
    assert outs[0] == outs[1]


def test_error_exit_code(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0\n1,1\n")
    rc = main(["color", "--shape", "regular:5", "--in", str(pts)])
    assert rc == 1
