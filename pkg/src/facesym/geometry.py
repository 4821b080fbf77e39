"""2D primitives in image coordinates (y down).

Orientation convention, used everywhere: a positive angle is a clockwise
rotation as seen on screen. In y-down coordinates that is the sign of the
ordinary cross product ``u.dx * v.dy - u.dy * v.dx``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from facesym.landmarks import Point2


class DegenerateGeometryError(ValueError):
    """A direction was requested from a zero-length vector."""


class Vec2(NamedTuple):
    dx: float
    dy: float

    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.dx, -self.dy)


class Line2(NamedTuple):
    """Infinite line through ``anchor`` along ``direction``."""

    anchor: Point2
    direction: Vec2


def _require_direction(u: Vec2, what: str = "vector") -> None:
    if u.dx == 0.0 and u.dy == 0.0:
        raise DegenerateGeometryError(f"zero-length {what} has no direction")


def vec(p: Point2, q: Point2) -> Vec2:
    return Vec2(q[0] - p[0], q[1] - p[1])


def midpoint(p: Point2, q: Point2) -> Point2:
    return Point2((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)


def dist(p: Point2, q: Point2) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def cross(u: Vec2, v: Vec2) -> float:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Vec2, v: Vec2) -> float:
    return u[0] * v[0] + u[1] * v[1]


def signed_angle_deg(u: Vec2, v: Vec2) -> float:
    """Rotation in degrees carrying the direction of ``u`` onto that of ``v``.

    Positive is clockwise on screen. The result lies in (-180, 180]; at the
    branch point atan2 returns +180, so antisymmetry holds everywhere except
    for exactly opposite vectors.
    """
    _require_direction(u)
    _require_direction(v)
    deg = math.degrees(math.atan2(cross(u, v), dot(u, v)))
    # atan2(-0.0, negative) gives -180
    return 180.0 if deg == -180.0 else deg


def perp_cw(u: Vec2) -> Vec2:
    """``u`` rotated 90 degrees clockwise on screen."""
    _require_direction(u)
    return Vec2(-u[1], u[0])


def point_line_dist(p: Point2, line: Line2) -> float:
    direction = line.direction
    _require_direction(direction, "line direction")
    offset = vec(line.anchor, p)
    return abs(cross(direction, offset)) / math.hypot(direction[0], direction[1])
