"""70-point landmark model: 68 iBUG face points followed by two shoulders.

Left/right always refer to the subject's anatomy. In a frontal photo the
subject's right side appears on the left of the image, so for a well-formed
set ``x(P36) < x(P45)`` and ``x(P68) < x(P69)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, NamedTuple, Sequence

N_FACE_POINTS = 68
N_POINTS = 70

#: Distance below which a span is considered collapsed, in pixels.
MIN_SPAN_PX = 1.0


class Point2(NamedTuple):
    """Image-plane coordinate in pixels, y increasing downward."""

    x: float
    y: float


class LandmarkIndex(IntEnum):
    OUTER_CANTHUS_R = 36
    INNER_CANTHUS_R = 39
    INNER_CANTHUS_L = 42
    OUTER_CANTHUS_L = 45
    MOUTH_CORNER_R = 48
    MOUTH_CORNER_L = 54
    SHOULDER_R = 68
    SHOULDER_L = 69


def _flip_index() -> tuple[int, ...]:
    pairs = [(i, 16 - i) for i in range(8)]  # jaw
    pairs += [(17 + i, 26 - i) for i in range(5)]  # brows
    pairs += [(31, 35), (32, 34)]  # nostrils
    pairs += [(36, 45), (37, 44), (38, 43), (39, 42), (40, 47), (41, 46)]
    pairs += [(48, 54), (49, 53), (50, 52), (55, 59), (56, 58)]
    pairs += [(60, 64), (61, 63), (65, 67)]
    pairs += [(68, 69)]
    perm = list(range(N_POINTS))
    for a, b in pairs:
        perm[a], perm[b] = b, a
    return tuple(perm)


#: ``FLIP_INDEX[i]`` is the index playing the mirror role of ``i`` after a
#: horizontal reflection of the image.
FLIP_INDEX = _flip_index()


@dataclass(frozen=True)
class LandmarkSet:
    """An ordered set of landmarks for one image.

    The constructor does not enforce the 70-point layout; use :func:`validate`
    (every downstream consumer does) so that malformed input yields a report
    rather than an exception.
    """

    image_id: str
    points: tuple[Point2, ...] = field(default=())

    def __post_init__(self):
        pts = tuple(Point2(float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index: int) -> Point2:
        return self.points[index]

    def with_points(self, points: Iterable[Sequence[float]]) -> "LandmarkSet":
        return LandmarkSet(self.image_id, tuple(points))


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


class InvalidLandmarksError(ValueError):
    """Raised when a landmark set with structural errors is used."""

    def __init__(self, image_id: str, report: ValidationReport):
        self.image_id = image_id
        self.report = report
        super().__init__(f"{image_id or '<unnamed>'}: " + "; ".join(report.errors))


def validate(ls: LandmarkSet) -> ValidationReport:
    """Check structure (hard errors) and plausibility (warnings).

    Warnings are ``mirrored-face``, ``mirrored-shoulders`` and
    ``degenerate-span``; they never make a set unusable on their own.
    """
    errors = []
    warnings = []
    if len(ls.points) != N_POINTS:
        errors.append(f"point count is {len(ls.points)}, expected {N_POINTS}")
    bad = [i for i, p in enumerate(ls.points) if not (math.isfinite(p.x) and math.isfinite(p.y))]
    if bad:
        errors.append("non-finite coordinate at index " + ", ".join(map(str, bad)))
    if errors:
        return ValidationReport(tuple(errors), ())

    p = ls.points
    if p[LandmarkIndex.OUTER_CANTHUS_R].x >= p[LandmarkIndex.OUTER_CANTHUS_L].x:
        warnings.append("mirrored-face")
    if p[LandmarkIndex.SHOULDER_R].x >= p[LandmarkIndex.SHOULDER_L].x:
        warnings.append("mirrored-shoulders")
    canthal = math.dist(p[LandmarkIndex.OUTER_CANTHUS_R], p[LandmarkIndex.OUTER_CANTHUS_L])
    shoulders = math.dist(p[LandmarkIndex.SHOULDER_R], p[LandmarkIndex.SHOULDER_L])
    if canthal < MIN_SPAN_PX or shoulders < MIN_SPAN_PX:
        warnings.append("degenerate-span")
    return ValidationReport((), tuple(warnings))


def require_valid(ls: LandmarkSet) -> None:
    report = validate(ls)
    if report.errors:
        raise InvalidLandmarksError(ls.image_id, report)


def mirror(ls: LandmarkSet, axis_x: float = 0.0) -> LandmarkSet:
    """Reflect about the vertical line ``x = axis_x`` and swap left/right roles."""
    pts = ls.points
    reflected = [Point2(2.0 * axis_x - pts[j].x, pts[j].y) for j in FLIP_INDEX]
    return ls.with_points(reflected)
