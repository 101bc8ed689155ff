"""The weak-mixing decision procedure and its witnesses."""

import random
from fractions import Fraction

import pytest

from flatmix.classify import (
    REASON_ALMOST_INTEGRABLE,
    REASON_COMMENSURABLE_K2,
    REASON_GENERIC_K,
    REASON_K_TRIVIAL,
    REASON_TORUS_FACTOR,
    circle_factor,
    classify_polygon,
    classify_surface,
    commensurability_check_k2,
    taut_rational_subspace,
    taut_rational_subspace_from_rows,
)
from flatmix.corpus import (
    double_pentagon,
    golden_l_surface,
    integer_l_surface,
    square_torus,
)
from flatmix.errors import NotAWitnessError, NotK2Error
from flatmix.field import golden_field
from flatmix.geometry import TrigField
from flatmix.homology import homology_basis, period_matrix
from flatmix.polygons import l_shape, rectangle, triangle_from_angles, validate_polygon
from flatmix.unfold import scale_surface, transform_surface, unfold


def kernel_dim(surface):
    basis = homology_basis(surface)
    pm = period_matrix(surface, basis)
    return taut_rational_subspace(pm).dim


def test_square_torus_not_weakly_mixing():
    v = classify_surface(square_torus())
    assert not v.weakly_mixing
    assert v.reason == REASON_TORUS_FACTOR
    assert v.kernel_dim == 2
    cf = v.witness["circle_factor"]
    assert any(cf.integer_class)


def test_square_torus_subspace_basis():
    S = square_torus()
    basis = homology_basis(S)
    pm = period_matrix(S, basis)
    sub = taut_rational_subspace(pm)
    assert sub.dim == 2
    assert sorted(sub.basis) == [[0, 1], [1, 0]]
    for vec, (a, b) in zip(sub.basis, sub.coefficients):
        for r in range(2):
            assert (a * pm.re_row[r] + b * pm.im_row[r] - vec[r]).is_zero()


def test_double_pentagon_weakly_mixing():
    v = classify_surface(double_pentagon())
    assert v.weakly_mixing
    assert v.reason == REASON_K_TRIVIAL
    assert v.kernel_dim == 0


def test_golden_l_surface_dim0_with_hand_oracle():
    S = golden_l_surface()
    basis = homology_basis(S)
    pm = period_matrix(S, basis)
    assert taut_rational_subspace(pm).dim == 0
    # Independent oracle: row-reduce the 2g-2 determinant equations split
    # over the power basis of Q(phi), brute force over rational unknowns.
    re = [x.coords for x in pm.re_row]
    im = [x.coords for x in pm.im_row]
    n = len(re)
    # pick pivot pair (0, j) with independent columns in R^2 via floats
    import itertools

    refl = [float(x) for x in pm.re_row]
    imfl = [float(x) for x in pm.im_row]
    pivot = None
    for i, j in itertools.combinations(range(n), 2):
        if abs(refl[i] * imfl[j] - refl[j] * imfl[i]) > 1e-9:
            pivot = (i, j)
            break
    i0, i1 = pivot
    rows = []
    for r in range(n):
        if r in (i0, i1):
            continue
        # n_r*(re_i0*im_i1 - re_i1*im_i0) - n_i1*(re_i0*im_r - re_r*im_i0)
        #   + n_i0*(re_i1*im_r - re_r*im_i1) = 0, split over the power basis
        A = pm.re_row[i1] * pm.im_row[r] - pm.re_row[r] * pm.im_row[i1]
        B = pm.re_row[i0] * pm.im_row[r] - pm.re_row[r] * pm.im_row[i0]
        D = pm.re_row[i0] * pm.im_row[i1] - pm.re_row[i1] * pm.im_row[i0]
        for t in range(2):
            row = [Fraction(0)] * n
            row[i0] = A.coords[t]
            row[i1] = -B.coords[t]
            row[r] = D.coords[t]
            rows.append(row)
    from flatmix.homology import rational_kernel_basis

    assert rational_kernel_basis(rows) == []


def test_integer_l_surface_has_witness():
    v = classify_surface(integer_l_surface())
    assert not v.weakly_mixing
    assert v.kernel_dim >= 1
    cf = v.witness["circle_factor"]
    # all periods of a*Re + b*Im are integers, rechecked by circle_factor
    assert cf.integer_class == v.witness["integer_class"]


def test_triangle_table_from_the_paper():
    expectations = {
        ((1, 2), (1, 4), (1, 4)): (False, REASON_ALMOST_INTEGRABLE, "integrable"),
        ((1, 3), (1, 3), (1, 3)): (False, REASON_ALMOST_INTEGRABLE, "integrable"),
        ((1, 2), (1, 3), (1, 6)): (False, REASON_ALMOST_INTEGRABLE, "integrable"),
        ((2, 3), (1, 6), (1, 6)): (False, REASON_ALMOST_INTEGRABLE, "almost_integrable"),
        ((1, 5), (1, 5), (3, 5)): (True, REASON_GENERIC_K, None),
        ((1, 7), (2, 7), (4, 7)): (True, REASON_GENERIC_K, None),
    }
    for fracs, (wm, reason, subtype) in expectations.items():
        verdict = classify_polygon(triangle_from_angles(fracs))
        assert verdict.weakly_mixing == wm, fracs
        assert verdict.reason == reason, fracs
        assert verdict.subtype == subtype, fracs


def test_lattice_type_tags():
    v4 = classify_polygon(triangle_from_angles([(1, 2), (1, 4), (1, 4)]))
    assert v4.cross_checks["lattice_type"] == "rectangular"
    for fracs in ([(1, 3), (1, 3), (1, 3)], [(1, 2), (1, 3), (1, 6)], [(2, 3), (1, 6), (1, 6)]):
        v = classify_polygon(triangle_from_angles(fracs))
        assert v.cross_checks["lattice_type"] == "hexagonal", fracs


def test_generic_k_cross_check_agrees():
    P = triangle_from_angles([(1, 5), (2, 5), (2, 5)])
    v = classify_polygon(P, cross_check=True)
    assert v.weakly_mixing
    assert v.cross_checks["kernel_computed"]
    assert v.cross_checks["agrees"]


def test_crystallographic_restriction_sample():
    rng = random.Random(5)
    ks = [5, 7, 8, 9, 12]
    count = 0
    for k in ks:
        fracs = _random_triangle_with_k(rng, k)
        S = unfold(triangle_from_angles(fracs))
        assert kernel_dim(S) == 0, fracs
        count += 1
    assert count == len(ks)


def _random_triangle_with_k(rng, k):
    from math import lcm, gcd

    while True:
        a = rng.randint(1, k - 2)
        b = rng.randint(1, k - 1 - a)
        c = k - a - b
        if min(a, b, c) < 1:
            continue
        dens = [k // gcd(x, k) for x in (a, b, c)]
        if lcm(*dens) == k:
            return [(a, k), (b, k), (c, k)]


def test_k2_commensurability_dichotomy():
    v_unit = classify_polygon(l_shape((1, 1), (1, 1)))
    assert not v_unit.weakly_mixing
    assert v_unit.reason == REASON_COMMENSURABLE_K2
    assert v_unit.cross_checks["agrees"]

    gf = golden_field()
    phi = gf.generator()
    v_phi = classify_polygon(l_shape((gf.one(), phi), (gf.one(), phi), field=gf))
    assert v_phi.weakly_mixing
    assert v_phi.kernel_dim == 0
    assert v_phi.cross_checks["agrees"]


def test_commensurability_check_examples():
    gf = golden_field()
    phi = gf.generator()
    res = commensurability_check_k2(rectangle(1, 1))
    assert res == {"horizontal_commensurable": True, "vertical_commensurable": True}

    mixed = l_shape((1, 2), (gf.one(), phi), field=gf)
    res = commensurability_check_k2(mixed)
    assert res["horizontal_commensurable"] is True
    assert res["vertical_commensurable"] is False

    both = l_shape((gf.one(), phi), (gf.one(), phi), field=gf)
    res = commensurability_check_k2(both)
    assert res["horizontal_commensurable"] is False
    assert res["vertical_commensurable"] is False


def test_commensurability_requires_k2():
    with pytest.raises(NotK2Error):
        commensurability_check_k2(triangle_from_angles([(1, 2), (1, 4), (1, 4)]))


def test_circle_factor_square_torus():
    S = square_torus()
    q = S.field
    cf = circle_factor(S, (q.one(), q.zero()))
    assert sorted(map(abs, cf.integer_class)) == [0, 1]
    cf2 = circle_factor(S, (q.zero(), q.one()))
    assert sorted(map(abs, cf2.integer_class)) == [0, 1]
    with pytest.raises(NotAWitnessError):
        circle_factor(S, (q.from_rational(Fraction(1, 2)), q.zero()))


def test_circle_factor_from_kernel_roundtrip():
    # (2pi/3, pi/6, pi/6) unfolding: feed the kernel witness back through
    # circle_factor and re-verify period integrality.
    P = triangle_from_angles([(2, 3), (1, 6), (1, 6)])
    S = unfold(P)
    basis = homology_basis(S)
    pm = period_matrix(S, basis)
    sub = taut_rational_subspace(pm)
    assert sub.dim == 2
    a, b = sub.coefficients[0]
    cf = circle_factor(S, (a, b), pm=pm)
    assert cf.integer_class == sub.basis[0]


def test_verdict_scale_invariance():
    from flatmix.corpus import l_surface

    gf = golden_field()
    phi = gf.generator()
    cases = [
        (golden_l_surface(), True),
        (l_surface(1, 1, 1, 1, field=gf), False),  # integer L over Q(phi)
    ]
    for S, expect_wm in cases:
        for factor in (Fraction(3, 7), phi):
            scaled = scale_surface(S, factor)
            assert classify_surface(scaled).weakly_mixing == expect_wm


def test_verdict_rotation_invariance():
    # Rotating omega by a field-representable angle preserves the verdict.
    t5 = TrigField(5)
    S = double_pentagon()
    c, s = S.field.element, None
    P = triangle_from_angles([(1, 5), (1, 5), (3, 5)])
    cos, sin = P.cos_sin_pi(Fraction(1, 5))
    R = ((cos, -sin), (sin, cos))
    rotated = transform_surface(S, R)
    assert classify_surface(rotated).weakly_mixing is True

    T = square_torus()
    q = T.field
    R90 = ((q.zero(), -q.one()), (q.one(), q.zero()))
    assert classify_surface(transform_surface(T, R90)).weakly_mixing is False


def test_verdict_basis_independence():
    # The kernel dimension is invariant under unimodular change of homology
    # basis: transform the period rows directly.
    rng = random.Random(17)
    for make in (square_torus, golden_l_surface, integer_l_surface):
        S = make()
        basis = homology_basis(S)
        pm = period_matrix(S, basis)
        base_dim = taut_rational_subspace(pm).dim
        n = len(pm.re_row)
        for _ in range(5):
            M = _random_unimodular(rng, n)
            re2 = [sum((pm.re_row[j] * M[i][j] for j in range(n)), S.field.zero())
                   for i in range(n)]
            im2 = [sum((pm.im_row[j] * M[i][j] for j in range(n)), S.field.zero())
                   for i in range(n)]
            sub = taut_rational_subspace_from_rows(re2, im2, S.field)
            assert sub.dim == base_dim


def _random_unimodular(rng, n):
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        for t in range(n):
            M[i][t] += q * M[j][t]
    return M
