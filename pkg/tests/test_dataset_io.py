import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facesym.dataset_io import (
    LoadError,
    ParseError,
    load_dataset,
    parse_manifest,
    parse_pts70,
    read_manifest,
    read_pts70,
    serialize_pts70,
    write_pts70,
)
from facesym.landmarks import LandmarkSet

from conftest import moved, random_face


def doc(points, n_points=70, version=1):
    body = "\n".join(f"{x} {y}" for x, y in points)
    return f"version: {version}\nn_points: {n_points}\n{{\n{body}\n}}\n"


def test_parse_happy(f0):
    ls = parse_pts70(doc(f0.points), image_id="a")
    assert ls == LandmarkSet("a", f0.points)
    assert len(ls) == 70


def test_parse_whitespace_tolerant(f0):
    text = doc(f0.points).replace("\n", "\r\n").replace("version: 1", "  version :1 ")
    text = text.replace(" ", "\t \t", 3) + "\n\n"
    assert parse_pts70(text).points == f0.points


def test_wrong_count_cites_line_2(f0):
    with pytest.raises(ParseError) as info:
        parse_pts70(doc(f0.points[:68], n_points=68))
    assert info.value.line == 2
    assert "68" in str(info.value)


@pytest.mark.parametrize(
    "mutate, line",
    [
        (lambda t: t.replace("100.0 100.0", "100,0 100.0", 1), None),  # locale comma
        (lambda t: t.replace("{\n", "", 1), 3),
        (lambda t: t.rstrip().rstrip("}"), None),
        (lambda t: t.replace("version: 1", "version: 2"), 1),
        (lambda t: t.replace("version: 1", "ver: 1"), 1),
        (lambda t: t.replace("n_points: 70", "n_points: seventy"), 2),
        (lambda t: t.replace("100.0 100.0", "100.0 nan", 1), None),
        (lambda t: t.replace("100.0 100.0", "100.0 100.0 3", 1), None),
        (lambda t: t + "extra\n", None),
    ],
)
def test_parse_errors(f0, mutate, line):
    text = mutate(doc(f0.points))
    with pytest.raises(ParseError) as info:
        parse_pts70(text)
    if line is not None:
        assert info.value.line == line


def test_short_file(f0):
    with pytest.raises(ParseError):
        parse_pts70("version: 1\n")
    with pytest.raises(ParseError) as info:
        parse_pts70(doc(f0.points[:50]))
    assert "50" in str(info.value)


def test_malformed_point_line_number(f0):
    text = doc(f0.points).replace("100.0 100.0", "1x 2", 1)
    with pytest.raises(ParseError) as info:
        parse_pts70(text)
    assert info.value.line == 3 + 36 + 1


@settings(max_examples=300)
@given(st.binary(max_size=400))
def test_parsing_is_total(data):
    text = data.decode("utf-8", errors="replace")
    try:
        ls = parse_pts70(text)
    except ParseError as exc:
        assert exc.line is None or exc.line >= 1
    else:
        assert len(ls) == 70


def test_serialize_grammar(f0):
    text = serialize_pts70(f0)
    lines = text.split("\n")
    assert lines[:3] == ["version: 1", "n_points: 70", "{"]
    assert lines[3] == "75.000000 110.000000"
    assert lines[-2:] == ["}", ""]
    assert serialize_pts70(f0) == serialize_pts70(f0)


def test_serialize_rejects_wrong_count(f0):
    with pytest.raises(ValueError):
        serialize_pts70(LandmarkSet("x", f0.points[:69]))


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e4))
def test_round_trip(seed, scale):
    ls = random_face(np.random.default_rng(seed), "img")
    ls = ls.with_points((x * scale, y * scale) for x, y in ls.points)
    once = serialize_pts70(ls)
    back = parse_pts70(once, "img")
    # 6-decimal quantization, plus float spacing at the coordinate's magnitude
    bound = lambda v: 0.5e-6 + 4 * math.ulp(v)  # noqa: E731
    assert all(abs(a.x - b.x) <= bound(a.x) and abs(a.y - b.y) <= bound(a.y)
               for a, b in zip(ls.points, back.points))
    assert serialize_pts70(back) == once


def test_round_trip_exact_at_six_decimals(f0):
    assert parse_pts70(serialize_pts70(f0), "F0") == f0


def test_file_helpers(tmp_path, f0):
    path = tmp_path / "face_01.pts70"
    write_pts70(f0, path)
    assert path.read_bytes().count(b"\r") == 0
    assert read_pts70(path) == LandmarkSet("face_01", f0.points)
    (tmp_path / "bad.pts70").write_bytes(b"\xff\xfe")
    with pytest.raises(ParseError):
        read_pts70(tmp_path / "bad.pts70")


MANIFEST = "image_id,gt_path,pred_path\na,gt/a.pts70,pred/a.pts70\n\nb,gt/b.pts70,pred/b.pts70\n"


def test_manifest_basic():
    m = parse_manifest(MANIFEST)
    assert [e.image_id for e in m] == ["a", "b"]
    assert m.entries[1].pred_path == "pred/b.pts70"
    assert parse_manifest(MANIFEST.replace("\n", "\r\n")) == m


def test_manifest_duplicate():
    with pytest.raises(ParseError) as info:
        parse_manifest(MANIFEST + "a,x,y\n")
    assert "'a'" in str(info.value)
    assert info.value.line == 5


@pytest.mark.parametrize(
    "text, line",
    [
        ("", None),
        ("id,gt,pred\na,b,c\n", 1),
        ("image_id,gt_path,pred_path\na,b\n", 2),
        ("image_id,gt_path,pred_path\na,b,c,d\n", 2),
        ("image_id,gt_path,pred_path\na,,c\n", 2),
    ],
)
def test_manifest_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_manifest(text)
    assert info.value.line == line


def test_manifest_36_rows():
    rows = "".join(f"img{i:02d},g{i}.pts70,p{i}.pts70\n" for i in range(36))
    assert len(parse_manifest("image_id,gt_path,pred_path\n" + rows)) == 36


def _write_pair(root, image_id, gt, pred):
    (root / "gt").mkdir(exist_ok=True)
    (root / "pred").mkdir(exist_ok=True)
    write_pts70(gt, root / "gt" / f"{image_id}.pts70")
    write_pts70(pred, root / "pred" / f"{image_id}.pts70")


def test_load_dataset(tmp_path, f0):
    _write_pair(tmp_path, "a", f0, moved(f0, p54=(190, 210)))
    _write_pair(tmp_path, "b", f0, f0)
    (tmp_path / "m.csv").write_text(MANIFEST)
    ds = load_dataset(read_manifest(tmp_path / "m.csv"))
    assert [p.image_id for p in ds] == ["a", "b"]
    assert ds[0].pred.image_id == "a" and ds[0].pred[54] == (190, 210)
    assert ds.skipped == []


def test_load_dataset_base_dir(tmp_path, f0):
    data = tmp_path / "data"
    data.mkdir()
    _write_pair(data, "a", f0, f0)
    _write_pair(data, "b", f0, f0)
    (tmp_path / "m.csv").write_text(MANIFEST)
    assert len(load_dataset(read_manifest(tmp_path / "m.csv", base_dir=data))) == 2
    assert len(load_dataset(parse_manifest(MANIFEST), base_dir=data)) == 2


def test_load_missing_pred(tmp_path, f0):
    _write_pair(tmp_path, "a", f0, f0)
    _write_pair(tmp_path, "b", f0, f0)
    (tmp_path / "pred" / "b.pts70").unlink()
    (tmp_path / "m.csv").write_text(MANIFEST)
    manifest = read_manifest(tmp_path / "m.csv")
    with pytest.raises(LoadError) as info:
        load_dataset(manifest)
    assert info.value.image_id == "b" and info.value.role == "pred"
    ds = load_dataset(manifest, skip_bad=True)
    assert len(ds) == 1 and [e.image_id for e in ds.skipped] == ["b"]


def test_load_invalid_gt(tmp_path, f0):
    _write_pair(tmp_path, "a", f0, f0)
    _write_pair(tmp_path, "b", f0, f0)
    # structurally valid file whose point is non-finite in value: use a huge exponent
    text = serialize_pts70(f0).replace("75.000000 110.000000", "1e999 110.0")
    (tmp_path / "gt" / "b.pts70").write_text(text)
    (tmp_path / "m.csv").write_text(MANIFEST)
    with pytest.raises(LoadError) as info:
        load_dataset(read_manifest(tmp_path / "m.csv"))
    assert info.value.role == "gt" and info.value.report is not None
    assert info.value.report.errors


def test_load_short_gt(tmp_path, f0):
    _write_pair(tmp_path, "a", f0, f0)
    _write_pair(tmp_path, "b", f0, f0)
    short = doc(f0.points[:69], n_points=69)
    (tmp_path / "gt" / "a.pts70").write_text(short)
    (tmp_path / "m.csv").write_text(MANIFEST)
    with pytest.raises(LoadError) as info:
        load_dataset(read_manifest(tmp_path / "m.csv"))
    assert info.value.image_id == "a" and info.value.role == "gt"
