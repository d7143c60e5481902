import math

import pytest

from chp_pack import geometry
from chp_pack.geometry import PolygonSpec


def test_fundamental_vertex_is_a_polygon_vertex():
    for sigma in (6, 12, 30, 96):
        p1 = geometry.fundamental_vertex(sigma)
        verts = geometry.polygon_vertices(sigma)
        assert min(geometry.dist(p1, v) for v in verts) < 1e-15
        assert abs(math.hypot(*p1) - 1.0) < 1e-15


def test_fundamental_vertex_components():
    sigma = 12
    x, y = geometry.fundamental_vertex(sigma)
    assert x == pytest.approx(-math.sin(math.pi / sigma), abs=1e-16)
    assert y == pytest.approx(-math.cos(math.pi / sigma), abs=1e-16)


def test_gamma_periodic_and_extremal():
    # support function of the boundary: cos(pi/sigma) at edge midlines,
    # 1 at vertices, periodic with 2*pi/sigma.
    sigma = 12
    u0 = geometry.vertex_angle(sigma)
    assert geometry.gamma(u0, 0.0, sigma) == pytest.approx(1.0, abs=1e-15)
    mid = u0 + math.pi / sigma
    assert geometry.gamma(mid, 0.0, sigma) == pytest.approx(math.cos(math.pi / sigma), abs=1e-15)
    for t in (0.0, 0.3, 2.0, 5.1):
        a = geometry.gamma(t, 0.0, sigma)
        b = geometry.gamma(t + 2 * math.pi / sigma, 0.0, sigma)
        assert a == pytest.approx(b, abs=1e-13)


def test_gamma_matches_boundary_radius():
    sigma = 18
    for t in (0.1, 1.0, 4.4):
        p = geometry.boundary_point(t, 0.0, sigma)
        assert math.hypot(*p) == pytest.approx(geometry.gamma(t, 0.0, sigma), abs=1e-14)
        assert abs(math.atan2(p[1], p[0]) % (2 * math.pi) - t % (2 * math.pi)) < 1e-12


def test_apothem_and_edge_length():
    assert geometry.apothem(6, 0.0) == pytest.approx(math.cos(math.pi / 6), abs=1e-16)
    assert geometry.edge_length(6) == pytest.approx(1.0, abs=1e-15)
    assert geometry.apothem(12, 0.25) == pytest.approx(math.cos(math.pi / 12) + 0.25, abs=1e-16)


def test_contains_and_project():
    spec = PolygonSpec(12, 0.0)
    assert geometry.contains(spec, (0.0, 0.0), 0.0)
    assert geometry.contains(spec, geometry.fundamental_vertex(12), 1e-12)
    outside = (2.0, 0.3)
    assert not geometry.contains(spec, outside, 1e-9)
    proj = geometry.project_into(spec, outside)
    assert geometry.contains(spec, proj, 1e-9)
    # projection is the identity on interior points
    inside = (0.1, -0.2)
    assert geometry.project_into(spec, inside) == inside


def test_projection_is_nearest_boundary_point():
    spec = PolygonSpec(6, 0.0)
    p = (1.5, 0.0)
    q = geometry.project_into(spec, p)
    # brute force over dense boundary samples
    best = min(
        geometry.dist(p, geometry.boundary_point(t, 0.0, 6))
        for t in [i * 2 * math.pi / 20000 for i in range(20000)]
    )
    assert geometry.dist(p, q) <= best + 1e-6


def test_interior_point_lands_inside():
    spec = PolygonSpec(12, 0.0)
    for t in (0.0, 0.4, 1.2, 1.5707):
        for u in (0.0, 1.0, 3.3, 6.2):
            p = geometry.interior_point(t, u, 12)
            assert geometry.contains(spec, p, 1e-12)


def test_rotate_reflect_roundtrip():
    p = (0.3, -0.7)
    q = geometry.rotate(p, math.pi / 3)
    assert geometry.dist(geometry.rotate(q, -math.pi / 3), p) < 1e-16
    r = geometry.reflect(p, 0.7)
    assert geometry.dist(geometry.reflect(r, 0.7), p) < 1e-15
    # reflection across the x axis flips y
    rx = geometry.reflect(p, 0.0)
    assert rx[0] == pytest.approx(p[0], abs=1e-16)
    assert rx[1] == pytest.approx(-p[1], abs=1e-16)


def test_polygon_area():
    # hexagon with unit circumradius
    assert geometry.polygon_area(6, 0.0) == pytest.approx(3 * math.sqrt(3) / 2, abs=1e-14)


def test_spec_validation():
    with pytest.raises(ValueError):
        PolygonSpec(2, 0.0)
    with pytest.raises(ValueError):
        PolygonSpec(12, -0.1)
