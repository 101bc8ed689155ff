"""Unfolding construction: genus, cone data, deck rotation, area doubling."""

from fractions import Fraction

import pytest

from flatmix.errors import NotAnUnfoldingError, SurfaceError
from flatmix.field import rationals
from flatmix.geometry import PlanarVector, apply_matrix
from flatmix.polygons import triangle_from_angles, validate_polygon
from flatmix.unfold import TranslationSurface, deck_rotation, unfold


def euler_genus(surface):
    """Independent oracle: genus from V - E + F of the glued complex."""
    V = len(surface.vertex_classes)
    E = len(surface.edge_classes)
    F = len(surface.cells)
    chi = V - E + F
    assert chi % 2 == 0
    return (2 - chi) // 2


def square_torus():
    q = rationals()
    one, zero = q.one(), q.zero()
    cells = [[
        PlanarVector(one, zero),
        PlanarVector(zero, one),
        PlanarVector(-one, zero),
        PlanarVector(zero, -one),
    ]]
    gl = {(0, 0): (0, 2), (0, 2): (0, 0), (0, 1): (0, 3), (0, 3): (0, 1)}
    return TranslationSurface(cells, gl, q)


def test_unfold_square():
    sq = validate_polygon([(1, 2)] * 4, [1, 1, 1, 1])
    S = unfold(sq)
    assert len(S.cells) == 4
    assert S.genus == 1 == euler_genus(S)
    assert S.stratum_signature() == []
    assert (S.area - 4).is_zero()
    assert S.n_components == 1


def test_unfold_pentagon_triangle():
    t = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    S = unfold(t)
    assert len(S.cells) == 10
    assert S.genus == 2 == euler_genus(S)
    assert S.stratum_signature() == [2]
    # Gauss-Bonnet cross-check: cone angle 6pi gives 6pi - 2pi = 2pi(2g-2).
    assert sum(w - 1 for w in S.vertex_windings) == 2 * S.genus - 2


def test_unfold_right_isoceles():
    t = triangle_from_angles([(1, 2), (1, 4), (1, 4)])
    S = unfold(t)
    assert len(S.cells) == 8
    assert S.genus == 1 == euler_genus(S)
    assert S.stratum_signature() == []


def test_unfold_almost_integrable_triangle():
    t = triangle_from_angles([(2, 3), (1, 6), (1, 6)])
    S = unfold(t)
    assert S.genus == euler_genus(S)
    assert sum(S.stratum_signature()) == 2 * S.genus - 2


def test_unfolding_area_is_2k_times_polygon_area():
    for fracs in ([(1, 2), (1, 4), (1, 4)], [(1, 5), (1, 5), (3, 5)], [(2, 3), (1, 6), (1, 6)]):
        t = triangle_from_angles(fracs)
        S = unfold(t)
        assert (S.area - t.area() * (2 * t.k)).is_zero()


def test_unfolding_cone_angles_match_polygon_angles():
    # Total cone angle equals 2k times the polygon angle sum (each polygon
    # corner appears once per copy).
    t = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    S = unfold(t)
    total = sum(S.vertex_windings)  # in units of 2*pi
    angle_sum = sum(a.fraction for a in t.angles)  # in units of pi
    assert Fraction(total) == 2 * t.k * angle_sum / 2


def test_deck_rotation_square_is_minus_id():
    sq = validate_polygon([(1, 2)] * 4, [1, 1, 1, 1])
    S = unfold(sq)
    dr = deck_rotation(S, sq)
    assert dr.order() == 2
    perm = dr.cell_permutation
    # order-2 permutation with no fixed cells: omega maps to -omega
    assert all(perm[perm[c]] == c for c in range(len(perm)))
    assert all(perm[c] != c for c in range(len(perm)))


def test_deck_rotation_pentagon_order_5():
    t = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    S = unfold(t)
    dr = deck_rotation(S, t)
    assert dr.order() == 5
    # applying k times is the identity
    assert dr.apply(5) == list(range(len(S.cells)))


def test_deck_rotation_rotates_holonomies():
    t = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    S = unfold(t)
    dr = deck_rotation(S, t)
    c, s = t.cos_sin_pi(Fraction(2, 5))
    R = ((c, -s), (s, c))
    for ci, cell in enumerate(S.cells):
        for j, vec in enumerate(cell):
            assert (apply_matrix(R, vec) - S.cells[dr.cell_permutation[ci]][j]).is_zero()


def test_deck_rotation_requires_unfolding():
    T = square_torus()
    sq = validate_polygon([(1, 2)] * 4, [1, 1, 1, 1])
    with pytest.raises(NotAnUnfoldingError):
        deck_rotation(T, sq)


def test_direct_surface_input_torus():
    T = square_torus()
    assert T.genus == 1
    assert (T.area - 1).is_zero()
    assert T.stratum_signature() == []


def test_bad_gluing_rejected():
    q = rationals()
    one, zero = q.one(), q.zero()
    cells = [[
        PlanarVector(one, zero),
        PlanarVector(zero, one),
        PlanarVector(-one, zero),
        PlanarVector(zero, -one),
    ]]
    # edge 1 glued to itself's partner with non-opposite holonomy
    gl = {(0, 0): (0, 1), (0, 1): (0, 0), (0, 2): (0, 3), (0, 3): (0, 2)}
    with pytest.raises(SurfaceError):
        TranslationSurface(cells, gl, q)


def test_unglued_edge_rejected():
    q = rationals()
    one, zero = q.one(), q.zero()
    cells = [[
        PlanarVector(one, zero),
        PlanarVector(zero, one),
        PlanarVector(-one, zero),
        PlanarVector(zero, -one),
    ]]
    gl = {(0, 0): (0, 2), (0, 2): (0, 0)}
    with pytest.raises(SurfaceError):
        TranslationSurface(cells, gl, q)
