"""Polygon validation, angle invariants, and the triangle shorthand."""

from fractions import Fraction

import pytest

from flatmix.errors import PolygonError
from flatmix.field import quadratic_field
from flatmix.polygons import (
    RationalAngle,
    angle_lcd,
    l_shape,
    rectangle,
    triangle_from_angles,
    validate_polygon,
)


def test_unit_square():
    sq = validate_polygon([(1, 2)] * 4, [1, 1, 1, 1])
    assert sq.k == 2
    assert sq.area().as_fraction() == 1
    vecs = [(float(e.x), float(e.y)) for e in sq.edge_vectors]
    assert vecs == [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]


def test_right_isoceles_needs_sqrt2():
    f2 = quadratic_field(2)
    tri = validate_polygon(
        [(1, 2), (1, 4), (1, 4)], [f2.one(), f2.generator(), f2.one()]
    )
    assert tri.k == 4
    assert (tri.area() - Fraction(1, 2)).is_zero()


def test_wrong_hypotenuse_not_closed():
    with pytest.raises(PolygonError) as exc:
        validate_polygon([(1, 2), (1, 4), (1, 4)], [1, 1, 1])
    assert exc.value.code == "NOT_CLOSED"


def test_angle_sum_rejected():
    with pytest.raises(PolygonError) as exc:
        validate_polygon([(1, 2), (1, 2), (1, 4)], [1, 1, 1])
    assert exc.value.code == "ANGLE_SUM"


def test_nonpositive_length_rejected():
    with pytest.raises(PolygonError) as exc:
        validate_polygon([(1, 2)] * 4, [1, -1, 1, -1])
    assert exc.value.code == "NONPOSITIVE_LENGTH"


def test_self_intersection_rejected():
    # Rectilinear octagon that closes up but crosses itself.
    with pytest.raises(PolygonError) as exc:
        validate_polygon(
            [(3, 2), (3, 2), (1, 2), (1, 2), (1, 2), (1, 2), (1, 2), (1, 2)],
            [1, 1, 1, 1, 3, 1, 1, 1],
        )
    assert exc.value.code == "SELF_INTERSECTING"


def test_angle_lcd_examples():
    assert angle_lcd([RationalAngle(1, 2), RationalAngle(1, 4), RationalAngle(1, 4)]) == 4
    assert angle_lcd([RationalAngle(2, 3), RationalAngle(1, 6), RationalAngle(1, 6)]) == 6
    assert angle_lcd([RationalAngle(1, 5), RationalAngle(1, 5), RationalAngle(3, 5)]) == 5


def test_k_at_least_two():
    # Any valid polygon has k >= 2: k = 1 would force angle sum n*pi > (n-2)*pi.
    for fracs in ([(1, 2)] * 4, [(1, 5), (1, 5), (3, 5)], [(2, 3), (1, 6), (1, 6)]):
        assert angle_lcd([RationalAngle(*f) for f in fracs]) >= 2


def test_scale_equivariance():
    t = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    scaled = validate_polygon(
        t.angles, [s * Fraction(3, 7) for s in t.side_lengths], field=t.field
    )
    assert scaled.k == t.k
    assert (scaled.area() - t.area() * Fraction(9, 49)).is_zero()


def test_orientation_reversal_same_k():
    t = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    rev_angles = [t.angles[0]] + list(reversed(t.angles[1:]))
    rev_lengths = list(reversed(t.side_lengths))
    rev = validate_polygon(rev_angles, rev_lengths, field=t.field)
    assert rev.k == t.k
    assert (rev.area() - t.area()).is_zero()


def test_triangle_shorthand_law_of_sines():
    t = triangle_from_angles([(1, 2), (1, 4), (1, 4)])
    # First side is 1; the side opposite the right angle is sqrt(2) times
    # the legs, so lengths are (1, sqrt2, 1) up to labeling.
    assert (t.side_lengths[0] - 1).is_zero()
    hyp = t.side_lengths[1]
    assert (hyp * hyp - 2).is_zero()


def test_reflex_l_shape():
    L = l_shape((1, 1), (1, 1))
    assert L.k == 2
    assert L.area().as_fraction() == 3
    assert sorted(a.fraction for a in L.angles)[-1] == Fraction(3, 2)


def test_rectangle_helper():
    r = rectangle(2, 1)
    assert r.k == 2
    assert r.area().as_fraction() == 2
