"""Planar geometry primitives and the tolerance-based contact predicates.

Contact between features is decided by endpoint coincidence within a
coordinate tolerance ``eps``, not by a full topological-relation matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParseError

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ParseError("polyline needs at least 2 points")
        if self.length() == 0.0:
            raise ParseError("polyline has zero length")

    def length(self) -> float:
        return sum(a.distance_to(b) for a, b in zip(self.points, self.points[1:]))

    def segments(self) -> list[tuple[Point, Point]]:
        return list(zip(self.points, self.points[1:]))

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]


@dataclass(frozen=True)
class Polygon:
    """Closed ring; stored without the repeated closing vertex."""

    ring: tuple[Point, ...]

    def __post_init__(self):
        if len(self.ring) < 3:
            raise ParseError("polygon ring needs at least 3 points")

    def segments(self) -> list[tuple[Point, Point]]:
        pts = self.ring
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


Geometry = Point | Polyline | Polygon


def geometry_kind(geom: Geometry) -> str:
    if isinstance(geom, Point):
        return "point"
    if isinstance(geom, Polyline):
        return "polyline"
    return "polygon"


def make_polygon(points: list[Point], eps: float = DEFAULT_EPS) -> Polygon:
    """Build a polygon from a ring that must close within eps.

    Accepts the ring either with or without the repeated first point.
    """
    if len(points) >= 4 and points[0].distance_to(points[-1]) <= eps:
        points = points[:-1]
    elif points and points[0].distance_to(points[-1]) > eps:
        raise ParseError("polygon ring does not close within tolerance")
    return Polygon(tuple(points))


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = b.x - a.x, b.y - a.y
    seg_len_sq = ax * ax + ay * ay
    if seg_len_sq == 0.0:
        return p.distance_to(a)
    t = ((p.x - a.x) * ax + (p.y - a.y) * ay) / seg_len_sq
    t = max(0.0, min(1.0, t))
    return p.distance_to(Point(a.x + t * ax, a.y + t * ay))


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    def orient(a: Point, b: Point, c: Point) -> float:
        return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


def segment_segment_distance(p1: Point, p2: Point, q1: Point, q2: Point) -> float:
    if _segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(
        point_segment_distance(p1, q1, q2),
        point_segment_distance(p2, q1, q2),
        point_segment_distance(q1, p1, p2),
        point_segment_distance(q2, p1, p2),
    )


def _as_segments(geom: Geometry) -> list[tuple[Point, Point]]:
    if isinstance(geom, Point):
        return [(geom, geom)]
    return geom.segments()


def geometry_distance(a: Geometry, b: Geometry) -> float:
    """Minimal Euclidean distance between the boundaries of two geometries."""
    return min(
        segment_segment_distance(s1[0], s1[1], s2[0], s2[1])
        for s1 in _as_segments(a)
        for s2 in _as_segments(b)
    )


def _same_polyline(a: Polyline, b: Polyline, eps: float) -> bool:
    if len(a.points) != len(b.points):
        return False
    fwd = all(pa.distance_to(pb) <= eps for pa, pb in zip(a.points, b.points))
    rev = all(pa.distance_to(pb) <= eps for pa, pb in zip(a.points, reversed(b.points)))
    return fwd or rev


def touches_line_line(a: Polyline, b: Polyline, eps: float = DEFAULT_EPS) -> bool:
    """True when an endpoint of one polyline coincides with an endpoint of the
    other within eps, and the two polylines are not the same feature."""
    if _same_polyline(a, b, eps):
        return False
    for pa in (a.start, a.end):
        for pb in (b.start, b.end):
            if pa.distance_to(pb) <= eps:
                return True
    return False


def touches_polygon_line(p: Polygon, line: Polyline, eps: float = DEFAULT_EPS) -> bool:
    """True when at least one endpoint of the polyline lies on the polygon
    boundary within eps."""
    for endpoint in (line.start, line.end):
        for a, b in p.segments():
            if point_segment_distance(endpoint, a, b) <= eps:
                return True
    return False
