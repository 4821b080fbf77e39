"""Reading and writing ``.pts70`` landmark files and dataset manifests.

A ``.pts70`` file is the familiar ``.pts`` layout with the count raised to
70; points 68 and 69 are the subject's right and left shoulder::

    version: 1
    n_points: 70
    {
    100.000000 100.000000
    ...
    }

A manifest is a CSV table with the header ``image_id,gt_path,pred_path``.
Relative paths resolve against the manifest's directory unless a base
directory is given.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Union

from facesym.landmarks import N_POINTS, LandmarkSet, ValidationReport, validate

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

PTS_VERSION = 1
MANIFEST_HEADER = ("image_id", "gt_path", "pred_path")

_NUMBER = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_POINT_RE = re.compile(rf"^({_NUMBER})\s+({_NUMBER})$")
_HEADER_RE = re.compile(r"^(version|n_points)\s*:\s*(\S+)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = ""):
        self.line = line
        self.source = source
        self.message = message
        prefix = source or "<input>"
        if line is not None:
            prefix += f":{line}"
        super().__init__(f"{prefix}: {message}")


class LoadError(ValueError):
    """A manifest entry could not be turned into a valid landmark pair."""

    def __init__(self, image_id: str, role: str, message: str, report: Optional[ValidationReport] = None):
        self.image_id = image_id
        self.role = role
        self.report = report
        super().__init__(f"{image_id} ({role}): {message}")


def _header_value(lines: list[tuple[int, str]], pos: int, key: str, source: str) -> tuple[int, int]:
    if pos >= len(lines):
        raise ParseError(f"unexpected end of file, expected '{key}:'", None, source)
    lineno, text = lines[pos]
    m = _HEADER_RE.match(text)
    if not m or m.group(1) != key:
        raise ParseError(f"expected '{key}: <integer>', got {text!r}", lineno, source)
    try:
        return lineno, int(m.group(2))
    except ValueError:
        raise ParseError(f"{key} is not an integer: {m.group(2)!r}", lineno, source) from None


def parse_pts70(text: str, image_id: str = "", source: str = "") -> LandmarkSet:
    """Parse a ``.pts70`` document. Blank lines are ignored."""
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    source = source or image_id

    lineno, version = _header_value(lines, 0, "version", source)
    if version != PTS_VERSION:
        raise ParseError(f"unsupported version {version}", lineno, source)
    lineno, n_points = _header_value(lines, 1, "n_points", source)
    if n_points != N_POINTS:
        raise ParseError(f"n_points must be {N_POINTS}, got {n_points}", lineno, source)
    if len(lines) < 3 or lines[2][1] != "{":
        where = lines[2][0] if len(lines) >= 3 else None
        raise ParseError("expected '{'", where, source)

    points = []
    pos = 3
    while pos < len(lines) and lines[pos][1] != "}":
        lineno, row = lines[pos]
        m = _POINT_RE.match(row)
        if not m:
            raise ParseError(f"malformed point {row!r}", lineno, source)
        points.append((float(m.group(1)), float(m.group(2))))
        pos += 1
    if pos >= len(lines):
        raise ParseError(f"missing closing '}}' after {len(points)} points", None, source)
    if len(points) != n_points:
        raise ParseError(f"found {len(points)} points, header says {n_points}", lines[pos][0], source)
    if pos != len(lines) - 1:
        raise ParseError("unexpected content after '}'", lines[pos + 1][0], source)
    return LandmarkSet(image_id, tuple(points))


def serialize_pts70(ls: LandmarkSet) -> str:
    if len(ls.points) != N_POINTS:
        raise ValueError(f"{ls.image_id or '<unnamed>'}: cannot write {len(ls.points)} points as pts70")
    out = [f"version: {PTS_VERSION}", f"n_points: {N_POINTS}", "{"]
    out += [f"{p.x:.6f} {p.y:.6f}" for p in ls.points]
    out.append("}")
    return "\n".join(out) + "\n"


def _decode(data: bytes, source: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8 text at byte {exc.start}", None, source) from None


def read_pts70(path: PathLike, image_id: Optional[str] = None) -> LandmarkSet:
    path = Path(path)
    text = _decode(path.read_bytes(), str(path))
    return parse_pts70(text, image_id if image_id is not None else path.stem, source=str(path))


def write_pts70(ls: LandmarkSet, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_pts70(ls))


@dataclass(frozen=True)
class ManifestEntry:
    image_id: str
    gt_path: str
    pred_path: str


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]
    base_dir: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ManifestEntry]:
        return iter(self.entries)


def parse_manifest(text: str, source: str = "", base_dir: Optional[PathLike] = None) -> DatasetManifest:
    reader = csv.reader(io.StringIO(text, newline=""))
    entries = []
    seen: dict[str, int] = {}
    header_seen = False
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if tuple(cells) != MANIFEST_HEADER:
                raise ParseError(f"expected header {','.join(MANIFEST_HEADER)!r}, got {','.join(cells)!r}", lineno, source)
            header_seen = True
            continue
        if len(cells) != len(MANIFEST_HEADER):
            raise ParseError(f"expected {len(MANIFEST_HEADER)} columns, got {len(cells)}", lineno, source)
        image_id, gt_path, pred_path = cells
        if not image_id or not gt_path or not pred_path:
            raise ParseError("empty field", lineno, source)
        if image_id in seen:
            raise ParseError(f"duplicate image_id {image_id!r} (first on line {seen[image_id]})", lineno, source)
        seen[image_id] = lineno
        entries.append(ManifestEntry(image_id, gt_path, pred_path))
    if not header_seen:
        raise ParseError("missing header", None, source)
    return DatasetManifest(tuple(entries), Path(base_dir) if base_dir is not None else None)


def read_manifest(path: PathLike, base_dir: Optional[PathLike] = None) -> DatasetManifest:
    path = Path(path)
    text = _decode(path.read_bytes(), str(path))
    return parse_manifest(text, str(path), base_dir if base_dir is not None else path.parent)


def serialize_manifest(manifest: DatasetManifest) -> str:
    out = [",".join(MANIFEST_HEADER)]
    out += [f"{e.image_id},{e.gt_path},{e.pred_path}" for e in manifest.entries]
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class LandmarkPair:
    gt: LandmarkSet
    pred: LandmarkSet

    @property
    def image_id(self) -> str:
        return self.gt.image_id


@dataclass
class Dataset:
    """Loaded pairs in manifest order, plus any entries skipped as bad."""

    pairs: list[LandmarkPair] = field(default_factory=list)
    skipped: list[LoadError] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[LandmarkPair]:
        return iter(self.pairs)

    def __getitem__(self, index: int) -> LandmarkPair:
        return self.pairs[index]


def _load_one(image_id: str, role: str, path: Path) -> LandmarkSet:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise LoadError(image_id, role, f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        ls = parse_pts70(_decode(data, str(path)), image_id, source=str(path))
    except ParseError as exc:
        raise LoadError(image_id, role, str(exc)) from exc
    report = validate(ls)
    if report.errors:
        raise LoadError(image_id, role, "; ".join(report.errors), report)
    for w in report.warnings:
        logger.warning("%s (%s): %s", image_id, role, w)
    return ls


def load_dataset(manifest: DatasetManifest, base_dir: Optional[PathLike] = None, skip_bad: bool = False) -> Dataset:
    """Load and validate every gt/pred pair of ``manifest``.

    Raises :class:`LoadError` on the first bad entry unless ``skip_bad`` is
    set, in which case bad entries are collected in ``Dataset.skipped``.
    """
    root = Path(base_dir) if base_dir is not None else (manifest.base_dir or Path("."))
    dataset = Dataset()
    for entry in manifest.entries:
        try:
            gt = _load_one(entry.image_id, "gt", root / entry.gt_path)
            pred = _load_one(entry.image_id, "pred", root / entry.pred_path)
        except LoadError as exc:
            if not skip_bad:
                raise
            logger.warning("skipping %s", exc)
            dataset.skipped.append(exc)
            continue
        dataset.pairs.append(LandmarkPair(gt, pred))
    return dataset
