"""Geometry of regular polygons in the packing frame.

Every routine here works in one fixed frame.  The container is a regular
polygon with ``sigma`` sides whose inscribed circle has radius
``delta + cos(pi/sigma)``; for ``delta = 0`` the circumradius is 1.  The
polygon is oriented so that the point

    P1 = (-sin(pi/sigma), -cos(pi/sigma))

is a vertex, which places one edge horizontally at the bottom, running
from P1 to ``(sin(pi/sigma), -cos(pi/sigma))``.  Vertices sit at polar
angles ``3*pi/2 - pi/sigma + 2*pi*i/sigma``.  Offsetting by ``delta``
grows the polygon about the origin without rotating it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

Point2 = Tuple[float, float]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PolygonSpec:
    """A regular polygon container.

    Attributes:
        sigma: number of sides, at least 3.
        delta: offset added to the apothem; 0 gives unit circumradius.
    """

    sigma: int
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma < 3:
            raise ValueError(f"sigma must be >= 3, got {self.sigma}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


def vertex_angle(sigma: int) -> float:
    """Polar angle of the fundamental vertex P1."""
    return 1.5 * math.pi - math.pi / sigma


def fundamental_vertex(sigma: int) -> Point2:
    """The vertex P1 = (-sin(pi/sigma), -cos(pi/sigma))."""
    a = math.pi / sigma
    return (-math.sin(a), -math.cos(a))


def apothem(sigma: int, delta: float = 0.0) -> float:
    """Distance from the origin to each edge."""
    return delta + math.cos(math.pi / sigma)


def circumradius(sigma: int, delta: float = 0.0) -> float:
    """Distance from the origin to each vertex."""
    return apothem(sigma, delta) / math.cos(math.pi / sigma)


def edge_length(sigma: int, delta: float = 0.0) -> float:
    """Length of one polygon edge."""
    return 2.0 * apothem(sigma, delta) * math.tan(math.pi / sigma)


def polygon_area(sigma: int, delta: float = 0.0) -> float:
    """Area enclosed by the polygon."""
    h = apothem(sigma, delta)
    return sigma * h * h * math.tan(math.pi / sigma)


def gamma(u: float, delta: float, sigma: int) -> float:
    """Radial support of the polygon boundary at polar angle ``u``.

    The boundary point at angle ``u`` lies at distance ``gamma(u)`` from
    the origin.  The function has period ``2*pi/sigma`` and attains its
    maximum (the circumradius) at vertex angles and its minimum (the
    apothem) halfway between them.
    """
    w = math.fmod(u - vertex_angle(sigma), TWO_PI / sigma)
    if w < 0.0:
        w += TWO_PI / sigma
    return apothem(sigma, delta) / math.cos(math.pi / sigma - w)


def boundary_point(u: float, delta: float, sigma: int) -> Point2:
    """Point of the polygon boundary at polar angle ``u``."""
    r = gamma(u, delta, sigma)
    return (r * math.cos(u), r * math.sin(u))


def interior_point(t: float, u: float, sigma: int) -> Point2:
    """Chart mapping ``(t, u)`` onto the closed polygon with ``delta = 0``.

    The radial coordinate is squashed through ``sin(t)**2`` so that any
    real pair lands inside the polygon; used for random starts.
    """
    s = math.sin(t) ** 2
    bx, by = boundary_point(u, 0.0, sigma)
    return (s * bx, s * by)


def polygon_vertices(sigma: int, delta: float = 0.0) -> List[Point2]:
    """All ``sigma`` vertices, counterclockwise from P1."""
    r = circumradius(sigma, delta)
    u0 = vertex_angle(sigma)
    out: List[Point2] = []
    for i in range(sigma):
        u = u0 + TWO_PI * i / sigma
        out.append((r * math.cos(u), r * math.sin(u)))
    return out


def edge_normal_angles(sigma: int) -> List[float]:
    """Outward unit-normal angles of the ``sigma`` edges, counterclockwise."""
    base = vertex_angle(sigma) + math.pi / sigma
    return [base + TWO_PI * i / sigma for i in range(sigma)]


def contains(spec: PolygonSpec, point: Point2, tol: float = 0.0) -> bool:
    """True when ``point`` lies in the polygon, fattened outward by ``tol``."""
    h = apothem(spec.sigma, spec.delta) + tol
    x, y = point
    for a in edge_normal_angles(spec.sigma):
        if x * math.cos(a) + y * math.sin(a) > h:
            return False
    return True


def project_into(spec: PolygonSpec, point: Point2) -> Point2:
    """Closest point of the closed polygon to ``point``.

    Interior points are returned unchanged; exterior points are projected
    onto the nearest edge segment or vertex.
    """
    if contains(spec, point):
        return point
    verts = polygon_vertices(spec.sigma, spec.delta)
    px, py = point
    best: Point2 = verts[0]
    best_d2 = math.inf
    n = spec.sigma
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        t = ((px - ax) * ex + (py - ay) * ey) / (ex * ex + ey * ey)
        t = min(1.0, max(0.0, t))
        qx, qy = ax + t * ex, ay + t * ey
        d2 = (px - qx) ** 2 + (py - qy) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best = (qx, qy)
    return best


def rotate(point: Point2, angle: float) -> Point2:
    """Rotate ``point`` about the origin."""
    c, s = math.cos(angle), math.sin(angle)
    x, y = point
    return (c * x - s * y, s * x + c * y)


def reflect(point: Point2, axis_angle: float) -> Point2:
    """Reflect ``point`` across the line through the origin at ``axis_angle``."""
    c, s = math.cos(2.0 * axis_angle), math.sin(2.0 * axis_angle)
    x, y = point
    return (c * x + s * y, s * x - c * y)


def dist(p: Point2, q: Point2) -> float:
    """Euclidean distance."""
    return math.hypot(p[0] - q[0], p[1] - q[1])
