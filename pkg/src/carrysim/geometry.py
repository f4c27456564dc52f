"""Planar vector and polygon primitives shared by all modules."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Vec2:
    """2D vector; components are meters or Newtons depending on use site."""

    x: float
    y: float

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Vec2:
        return Vec2(-self.x, -self.y)

    def __mul__(self, k: float) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> Vec2:
        return Vec2(self.x / k, self.y / k)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Vec2) -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y

    def normalized(self) -> Vec2:
        """Unit vector in the same direction; the zero vector maps to itself."""
        n = self.norm()
        if n == 0.0:
            return ZERO
        return Vec2(self.x / n, self.y / n)

    def clamped(self, max_norm: float) -> Vec2:
        n = self.norm()
        if n <= max_norm or n == 0.0:
            return self
        return Vec2(self.x * (max_norm / n), self.y * (max_norm / n))

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def as_list(self) -> list[float]:
        return [self.x, self.y]

    @staticmethod
    def from_list(xy) -> Vec2:
        return Vec2(float(xy[0]), float(xy[1]))


ZERO = Vec2(0.0, 0.0)


def unit_from_angle(angle: float) -> Vec2:
    return Vec2(math.cos(angle), math.sin(angle))


@dataclass(frozen=True, slots=True)
class Rotation2D:
    """Pure rotation (orthonormal by construction), used for frame changes of forces."""

    angle: float

    def apply(self, v: Vec2) -> Vec2:
        c = math.cos(self.angle)
        s = math.sin(self.angle)
        return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)

    def inverse(self) -> Rotation2D:
        return Rotation2D(-self.angle)


def nearest_point_on_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2:
    """Closest point to p on segment ab."""
    ab = b - a
    denom = ab.norm_sq()
    if denom == 0.0:
        return a
    t = (p - a).dot(ab) / denom
    t = min(1.0, max(0.0, t))
    return Vec2(a.x + ab.x * t, a.y + ab.y * t)


def polygon_nearest_point(p: Vec2, vertices: tuple[Vec2, ...]) -> tuple[Vec2, float]:
    """Closest point on the polygon boundary. Ties resolve to the lowest edge index."""
    best: Vec2 | None = None
    best_d = math.inf
    n = len(vertices)
    for i in range(n):
        q = nearest_point_on_segment(p, vertices[i], vertices[(i + 1) % n])
        d = (p - q).norm()
        if d < best_d:
            best_d = d
            best = q
    assert best is not None
    return best, best_d


def point_in_polygon(p: Vec2, vertices: tuple[Vec2, ...]) -> bool:
    """Ray-cast containment test; boundary points count as outside."""
    inside = False
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < x_cross:
                inside = not inside
    return inside


def polygon_centroid(vertices: tuple[Vec2, ...]) -> Vec2:
    """Area centroid; falls back to the vertex mean for degenerate polygons."""
    acc_x = acc_y = area2 = 0.0
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        w = a.cross(b)
        area2 += w
        acc_x += (a.x + b.x) * w
        acc_y += (a.y + b.y) * w
    if abs(area2) < 1e-12:
        return Vec2(
            sum(v.x for v in vertices) / n,
            sum(v.y for v in vertices) / n,
        )
    return Vec2(acc_x / (3.0 * area2), acc_y / (3.0 * area2))


def _orient(a: Vec2, b: Vec2, c: Vec2) -> float:
    return (b - a).cross(c - a)


def segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool:
    """Proper or touching intersection of segments ab and cd."""
    o1 = _orient(a, b, c)
    o2 = _orient(a, b, d)
    o3 = _orient(c, d, a)
    o4 = _orient(c, d, b)
    if ((o1 > 0) != (o2 > 0) or o1 == 0 or o2 == 0) and (
        (o3 > 0) != (o4 > 0) or o3 == 0 or o4 == 0
    ):
        # collinear/touching cases: confirm bounding boxes overlap
        if min(a.x, b.x) <= max(c.x, d.x) and min(c.x, d.x) <= max(a.x, b.x) and \
           min(a.y, b.y) <= max(c.y, d.y) and min(c.y, d.y) <= max(a.y, b.y):
            if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
                return True
            return (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0) or \
                o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0
    return False


def segment_intersects_polygon(a: Vec2, b: Vec2, vertices: tuple[Vec2, ...]) -> bool:
    """True if segment ab crosses the polygon boundary or has an endpoint inside."""
    if point_in_polygon(a, vertices) or point_in_polygon(b, vertices):
        return True
    n = len(vertices)
    for i in range(n):
        if segments_intersect(a, b, vertices[i], vertices[(i + 1) % n]):
            return True
    return False
