import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spatnet import geometry as geo
from spatnet.errors import ParseError


def line(*coords):
    return geo.Polyline(tuple(geo.Point(x, y) for x, y in coords))


def square():
    return geo.Polygon((geo.Point(0, 0), geo.Point(1, 0), geo.Point(1, 1), geo.Point(0, 1)))


class TestTouchesLineLine:
    def test_shared_endpoint(self):
        assert geo.touches_line_line(line((0, 0), (1, 0)), line((1, 0), (2, 0)), 1e-9)

    def test_disjoint(self):
        assert not geo.touches_line_line(line((0, 0), (1, 0)), line((3, 0), (4, 0)), 1e-9)

    def test_within_tolerance(self):
        # endpoints 1e-10 apart, tolerance 1e-9
        a = line((0, 0), (1, 0))
        b = line((1 + 1e-10, 0), (2, 0))
        assert geo.touches_line_line(a, b, 1e-9)

    def test_identical_features_do_not_touch(self):
        a = line((0, 0), (1, 0))
        b = line((0, 0), (1, 0))
        assert not geo.touches_line_line(a, b, 1e-9)
        assert not geo.touches_line_line(a, line((1, 0), (0, 0)), 1e-9)

    def test_interior_crossing_is_not_contact(self):
        # crossing mid-segment without any shared endpoint
        a = line((0, 0), (2, 0))
        b = line((1, -1), (1, 1))
        assert not geo.touches_line_line(a, b, 1e-9)

    @given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
                    min_size=2, max_size=4, unique=True),
           st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)),
                    min_size=2, max_size=4, unique=True))
    def test_symmetric(self, coords_a, coords_b):
        try:
            a, b = line(*coords_a), line(*coords_b)
        except ParseError:
            return
        assert geo.touches_line_line(a, b, 1e-6) == geo.touches_line_line(b, a, 1e-6)


class TestTouchesPolygonLine:
    def test_endpoint_on_boundary(self):
        assert geo.touches_polygon_line(square(), line((1, 0.5), (2, 0.5)), 1e-9)

    def test_disjoint(self):
        assert not geo.touches_polygon_line(square(), line((5, 5), (6, 6)), 1e-9)

    def test_interior_to_exterior_without_boundary_endpoint(self):
        # start strictly inside, end strictly outside: neither endpoint on the ring
        assert not geo.touches_polygon_line(square(), line((0.5, 0.5), (2, 0.5)), 1e-9)


class TestPrimitives:
    def test_point_segment_distance(self):
        a, b = geo.Point(0, 0), geo.Point(2, 0)
        assert geo.point_segment_distance(geo.Point(1, 1), a, b) == pytest.approx(1.0)
        assert geo.point_segment_distance(geo.Point(-1, 0), a, b) == pytest.approx(1.0)
        assert geo.point_segment_distance(geo.Point(1, 0), a, b) == 0.0

    def test_segment_distance_crossing_is_zero(self):
        d = geo.segment_segment_distance(geo.Point(0, 0), geo.Point(2, 2),
                                         geo.Point(0, 2), geo.Point(2, 0))
        assert d == 0.0

    def test_geometry_distance_points(self):
        assert geo.geometry_distance(geo.Point(0, 0), geo.Point(3, 4)) == pytest.approx(5.0)

    def test_geometry_distance_line_polygon(self):
        d = geo.geometry_distance(square(), line((3, 0), (3, 1)))
        assert d == pytest.approx(2.0)

    def test_polyline_needs_length(self):
        with pytest.raises(ParseError):
            line((1, 1), (1, 1))

    def test_polygon_ring_must_close(self):
        with pytest.raises(ParseError):
            geo.make_polygon([geo.Point(0, 0), geo.Point(1, 0), geo.Point(1, 1),
                              geo.Point(5, 5)])

    def test_polygon_accepts_closed_ring(self):
        poly = geo.make_polygon([geo.Point(0, 0), geo.Point(1, 0), geo.Point(1, 1),
                                 geo.Point(0, 0)])
        assert len(poly.ring) == 3

    def test_polyline_length(self):
        assert line((0, 0), (3, 4)).length() == pytest.approx(5.0)
        assert math.isclose(line((0, 0), (1, 0), (1, 1)).length(), 2.0)
