"""The six face/upper-body symmetry measures.

All transverse vectors run from the subject's right to the subject's left:

* eye line ``e``: midpoint of the right eye corners (36, 39) to midpoint of
  the left eye corners (42, 45), so open or closed eyes give the same line
* outer canthal line ``o``: 36 -> 45
* inner canthal line ``n``: 39 -> 42
* mouth line ``m``: 48 -> 54
* shoulder line ``s``: 68 -> 69
* midsternal plumb line: through the shoulder midpoint along ``perp_cw(s)``,
  i.e. the perpendicular bisector of the shoulders, pointing down the body

Angles are in degrees, clockwise positive (see :mod:`facesym.geometry`).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from facesym.geometry import (
    Line2,
    Vec2,
    dist,
    midpoint,
    perp_cw,
    point_line_dist,
    signed_angle_deg,
    vec,
)
from facesym.landmarks import LandmarkIndex as L
from facesym.landmarks import LandmarkSet, require_valid

MEASURE_NAMES = ("fa", "osa", "rfs", "ga", "hhd", "td")
ANGLE_MEASURES = frozenset({"fa", "osa", "ga", "hhd"})


class DegenerateMeasureError(ValueError):
    """A measure's defining line or length collapsed to zero."""

    def __init__(self, measure: str, what: str, image_id: str = ""):
        self.measure = measure
        self.what = what
        self.image_id = image_id
        where = f"{image_id}: " if image_id else ""
        super().__init__(f"{where}{measure}: degenerate {what} (coincident landmarks)")


@dataclass(frozen=True)
class SymmetryMeasures:
    fa: float
    osa: float
    rfs: float
    ga: float
    hhd: float
    td: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def _line(measure: str, name: str, v: Vec2, ls: LandmarkSet) -> Vec2:
    if v.dx == 0.0 and v.dy == 0.0:
        raise DegenerateMeasureError(measure, name, ls.image_id)
    return v


def eye_line(ls: LandmarkSet) -> Vec2:
    p = ls.points
    right = midpoint(p[L.OUTER_CANTHUS_R], p[L.INNER_CANTHUS_R])
    left = midpoint(p[L.INNER_CANTHUS_L], p[L.OUTER_CANTHUS_L])
    return vec(right, left)


def plumb_line(ls: LandmarkSet, measure: str = "plumb") -> Line2:
    p = ls.points
    s = _line(measure, "shoulder line", vec(p[L.SHOULDER_R], p[L.SHOULDER_L]), ls)
    return Line2(midpoint(p[L.SHOULDER_R], p[L.SHOULDER_L]), perp_cw(s))


def facial_angle(ls: LandmarkSet) -> float:
    """Signed angle from the eye line to the mouth-corner line."""
    require_valid(ls)
    p = ls.points
    e = _line("fa", "eye line", eye_line(ls), ls)
    m = _line("fa", "mouth line", vec(p[L.MOUTH_CORNER_R], p[L.MOUTH_CORNER_L]), ls)
    return signed_angle_deg(e, m)


def orbit_slopes_angle(ls: LandmarkSet) -> float:
    """Signed angle from the outer-canthal line to the inner-canthal line."""
    require_valid(ls)
    p = ls.points
    o = _line("osa", "outer canthal line", vec(p[L.OUTER_CANTHUS_R], p[L.OUTER_CANTHUS_L]), ls)
    n = _line("osa", "inner canthal line", vec(p[L.INNER_CANTHUS_R], p[L.INNER_CANTHUS_L]), ls)
    return signed_angle_deg(o, n)


def relative_face_size(ls: LandmarkSet) -> float:
    """Left canthus-to-mouth-corner length over the right one.

    Always left over right (never larger over smaller) so that the direction
    of the asymmetry survives into the evaluation.
    """
    require_valid(ls)
    p = ls.points
    right = dist(p[L.OUTER_CANTHUS_R], p[L.MOUTH_CORNER_R])
    if right == 0.0:
        raise DegenerateMeasureError("rfs", "right canthus-to-mouth length", ls.image_id)
    return dist(p[L.OUTER_CANTHUS_L], p[L.MOUTH_CORNER_L]) / right


def gaze_angle(ls: LandmarkSet) -> float:
    """Signed angle from the outer-canthal line to the plumb line.

    An upright, level head gives +90; tilting the head clockwise by d gives
    90 - d.
    """
    require_valid(ls)
    p = ls.points
    o = _line("ga", "outer canthal line", vec(p[L.OUTER_CANTHUS_R], p[L.OUTER_CANTHUS_L]), ls)
    return signed_angle_deg(o, plumb_line(ls, "ga").direction)


def habitual_head_deviation(ls: LandmarkSet) -> float:
    """Signed angle from the shoulder line to the eye line (head tilt)."""
    require_valid(ls)
    p = ls.points
    s = _line("hhd", "shoulder line", vec(p[L.SHOULDER_R], p[L.SHOULDER_L]), ls)
    e = _line("hhd", "eye line", eye_line(ls), ls)
    return signed_angle_deg(s, e)


def translational_deformity(ls: LandmarkSet) -> float:
    """Distance of the outer-canthal midpoint from the plumb line, in units of
    outer-canthal distance."""
    require_valid(ls)
    p = ls.points
    span = dist(p[L.OUTER_CANTHUS_R], p[L.OUTER_CANTHUS_L])
    if span == 0.0:
        raise DegenerateMeasureError("td", "outer canthal span", ls.image_id)
    head = midpoint(p[L.OUTER_CANTHUS_R], p[L.OUTER_CANTHUS_L])
    return point_line_dist(head, plumb_line(ls, "td")) / span


MEASURE_FUNCTIONS = {
    "fa": facial_angle,
    "osa": orbit_slopes_angle,
    "rfs": relative_face_size,
    "ga": gaze_angle,
    "hhd": habitual_head_deviation,
    "td": translational_deformity,
}


def compute_all(ls: LandmarkSet) -> SymmetryMeasures:
    require_valid(ls)
    return SymmetryMeasures(**{name: MEASURE_FUNCTIONS[name](ls) for name in MEASURE_NAMES})
