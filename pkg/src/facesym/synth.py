"""Synthetic landmark datasets with known geometry.

Ground truth is the canonical symmetric face with a random head tilt,
lateral head offset, eye and mouth asymmetry, then a random similarity
transform of the whole set. Predictions are ground truth plus isotropic
Gaussian landmark noise, optionally with a fraction of gross failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from facesym.dataset_io import DatasetManifest, ManifestEntry, serialize_manifest, write_pts70
from facesym.landmarks import N_FACE_POINTS, LandmarkIndex, LandmarkSet, Point2

#: Vertical symmetry axis of the canonical face.
AXIS_X = 160.0

# Subject-right half plus the midline; the left half is mirrored from it.
# Jaw coordinates snap to 1/8 px so mirroring is exact in binary floating point.
_JAW_R = [
    (round(8 * (AXIS_X - 85.0 * math.cos(math.pi * i / 16))) / 8, round(8 * (110.0 + 120.0 * math.sin(math.pi * i / 16))) / 8)
    for i in range(8)
]
_BROW_R = [(90.0, 80.0), (105.0, 74.0), (120.0, 72.0), (135.0, 74.0), (150.0, 78.0)]
_NOSE = [(160.0, 100.0), (160.0, 115.0), (160.0, 130.0), (160.0, 145.0),
         (145.0, 155.0), (152.0, 158.0), (160.0, 160.0), (168.0, 158.0), (175.0, 155.0)]
_EYE_R = [(100.0, 100.0), (113.0, 94.0), (127.0, 94.0), (140.0, 100.0), (127.0, 106.0), (113.0, 106.0)]
_MOUTH = [(130.0, 200.0), (140.0, 193.0), (150.0, 189.0), (160.0, 191.0), (170.0, 189.0),
          (180.0, 193.0), (190.0, 200.0), (180.0, 208.0), (170.0, 212.0), (160.0, 213.0),
          (150.0, 212.0), (140.0, 208.0),
          (137.0, 200.0), (150.0, 196.0), (160.0, 197.0), (170.0, 196.0), (183.0, 200.0),
          (170.0, 204.0), (160.0, 205.0), (150.0, 204.0)]
_SHOULDERS = [(60.0, 300.0), (260.0, 300.0)]


def _mirror_x(p):
    return (2.0 * AXIS_X - p[0], p[1])


def _canonical_points() -> tuple[Point2, ...]:
    jaw = _JAW_R + [(AXIS_X, 230.0)] + [_mirror_x(p) for p in reversed(_JAW_R)]
    brow_l = [_mirror_x(p) for p in reversed(_BROW_R)]
    # left eye order 42..47 mirrors right eye 39, 38, 37, 36, 41, 40
    eye_l = [_mirror_x(_EYE_R[j]) for j in (3, 2, 1, 0, 5, 4)]
    pts = jaw + _BROW_R + brow_l + _NOSE + _EYE_R + eye_l + _MOUTH + _SHOULDERS
    return tuple(Point2(*p) for p in pts)


def canonical_face(image_id: str = "F0") -> LandmarkSet:
    """Mirror-symmetric frontal face and shoulders about ``x = 160``.

    Key points: canthi 36/39/42/45 at y=100, x=100/140/180/220; mouth
    corners (130, 200) and (190, 200); shoulders (60, 300) and (260, 300).
    """
    return LandmarkSet(image_id, _canonical_points())


def _as_array(ls: LandmarkSet) -> np.ndarray:
    return np.array(ls.points, dtype=float)


def rotation_matrix(deg: float) -> np.ndarray:
    """Rotation by ``deg`` clockwise on screen (y-down coordinates)."""
    t = math.radians(deg)
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


def similarity(ls: LandmarkSet, rotation_deg: float = 0.0, scale: float = 1.0,
               translation: Sequence[float] = (0.0, 0.0), center: Sequence[float] = (0.0, 0.0),
               indices: Optional[Sequence[int]] = None) -> LandmarkSet:
    """Rotate and scale about ``center``, then translate.

    Only ``indices`` move when given; the rest are copied unchanged.
    """
    pts = _as_array(ls)
    sel = np.arange(len(pts)) if indices is None else np.asarray(indices)
    c = np.asarray(center, dtype=float)
    moved = (pts[sel] - c) @ (scale * rotation_matrix(rotation_deg)).T + c + np.asarray(translation, dtype=float)
    pts[sel] = moved
    return ls.with_points(map(tuple, pts))


FACE = tuple(range(N_FACE_POINTS))


def rotate_head(ls: LandmarkSet, deg: float) -> LandmarkSet:
    """Rotate the 68 face points about the outer-canthal midpoint."""
    p = ls.points
    a, b = p[LandmarkIndex.OUTER_CANTHUS_R], p[LandmarkIndex.OUTER_CANTHUS_L]
    center = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    return similarity(ls, rotation_deg=deg, center=center, indices=FACE)


@dataclass(frozen=True)
class SynthConfig:
    n: int = 36
    sigma_pct: float = 0.0
    outlier_fraction: float = 0.0
    outlier_px: float = 50.0
    max_head_rotation: float = 15.0
    max_offset: float = 0.3
    max_mouth_asym: float = 12.0
    max_eye_asym: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if not (math.isfinite(self.sigma_pct) and self.sigma_pct >= 0):
            raise ValueError(f"sigma must be a non-negative number, got {self.sigma_pct}")
        if not 0.0 <= self.outlier_fraction <= 1.0:
            raise ValueError(f"outlier fraction must lie in [0, 1], got {self.outlier_fraction}")
        if not (math.isfinite(self.outlier_px) and self.outlier_px >= 0):
            raise ValueError(f"outlier displacement must be non-negative, got {self.outlier_px}")
        for name in ("max_head_rotation", "max_offset", "max_mouth_asym", "max_eye_asym"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be non-negative, got {v}")


_MOUTH_LEFT = (52, 53, 54, 55, 56, 63, 64, 65)


def _ground_truth(rng: np.random.Generator, cfg: SynthConfig, image_id: str) -> LandmarkSet:
    base = canonical_face(image_id)
    pts = _as_array(base)
    canthal = 120.0

    # inner canthi tilt in opposite vertical directions -> osa
    eye = rng.uniform(-cfg.max_eye_asym, cfg.max_eye_asym)
    pts[LandmarkIndex.INNER_CANTHUS_R, 1] += eye
    pts[LandmarkIndex.INNER_CANTHUS_L, 1] -= eye
    # displaced left mouth corner region -> fa, rfs
    pts[list(_MOUTH_LEFT)] += rng.uniform(-cfg.max_mouth_asym, cfg.max_mouth_asym, size=2)
    # lateral head shift -> td
    pts[:N_FACE_POINTS, 0] += rng.uniform(-cfg.max_offset, cfg.max_offset) * canthal

    ls = base.with_points(map(tuple, pts))
    ls = rotate_head(ls, rng.uniform(-cfg.max_head_rotation, cfg.max_head_rotation))
    return similarity(
        ls,
        rotation_deg=rng.uniform(-30.0, 30.0),
        scale=rng.uniform(0.75, 2.0),
        translation=rng.uniform(-50.0, 150.0, size=2),
        center=(AXIS_X, 200.0),
    )


def _prediction(rng: np.random.Generator, cfg: SynthConfig, gt: LandmarkSet, outlier: bool) -> LandmarkSet:
    pts = _as_array(gt)
    canthal = float(np.hypot(*(pts[LandmarkIndex.OUTER_CANTHUS_L] - pts[LandmarkIndex.OUTER_CANTHUS_R])))
    noise = rng.normal(0.0, cfg.sigma_pct / 100.0 * canthal, size=pts.shape)
    pts = pts + noise
    if outlier:
        # failed face detection: every face point thrown off in its own direction
        theta = rng.uniform(0.0, 2.0 * math.pi, size=N_FACE_POINTS)
        pts[:N_FACE_POINTS, 0] += cfg.outlier_px * np.cos(theta)
        pts[:N_FACE_POINTS, 1] += cfg.outlier_px * np.sin(theta)
    return gt.with_points(map(tuple, pts))


def generate(cfg: SynthConfig) -> list[tuple[LandmarkSet, LandmarkSet]]:
    rng = np.random.default_rng(cfg.seed)
    n_out = int(round(cfg.outlier_fraction * cfg.n))
    outliers = set(rng.choice(cfg.n, size=n_out, replace=False).tolist()) if n_out else set()
    width = max(3, len(str(cfg.n - 1)))
    pairs = []
    for i in range(cfg.n):
        image_id = f"synth_{i:0{width}d}"
        gt = _ground_truth(rng, cfg, image_id)
        pairs.append((gt, _prediction(rng, cfg, gt, i in outliers)))
    return pairs


def write_dataset(cfg: SynthConfig, out_dir) -> Path:
    """Write ``gt/*.pts70``, ``pred/*.pts70`` and ``manifest.csv``; return the manifest path."""
    out = Path(out_dir)
    (out / "gt").mkdir(parents=True, exist_ok=True)
    (out / "pred").mkdir(parents=True, exist_ok=True)
    entries = []
    for gt, pred in generate(cfg):
        gt_rel = f"gt/{gt.image_id}.pts70"
        pred_rel = f"pred/{pred.image_id}.pts70"
        write_pts70(gt, out / gt_rel)
        write_pts70(pred, out / pred_rel)
        entries.append(ManifestEntry(gt.image_id, gt_rel, pred_rel))
    manifest_path = out / "manifest.csv"
    with open(manifest_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_manifest(DatasetManifest(tuple(entries))))
    return manifest_path
