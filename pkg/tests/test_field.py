"""Exact number field layer: arithmetic, sign determination, compositum."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flatmix import polyq
from flatmix.errors import FieldTooLargeError, InputError
from flatmix.field import (
    FieldElement,
    NumberField,
    compose_fields,
    cyclotomic_cos_field,
    golden_field,
    quadratic_field,
    rational_coords,
    rationals,
)
from flatmix.geometry import TrigField


def sympy_resultant_oracle(p1, p2, t):
    """res_y(p2(y), p1(x - t*y)) computed through sympy, as an integer tuple."""
    import sympy

    x, y = sympy.symbols("x y")
    e1 = sum(c * (x - t * y) ** i for i, c in enumerate(p1))
    e2 = sum(c * y ** i for i, c in enumerate(p2))
    res = sympy.resultant(sympy.expand(e2), sympy.expand(e1), y)
    poly = sympy.Poly(res, x)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    return tuple(coeffs)


def test_compose_with_rationals_is_identity():
    f = quadratic_field(2)
    emb = compose_fields(rationals(), f)
    assert emb.field.same_field(f)
    assert emb.embed1(rationals().from_rational(Fraction(3, 2))).as_fraction() == Fraction(3, 2)


def test_compose_sqrt2_sqrt3_minimal_polynomial():
    f2, f3 = quadratic_field(2), quadratic_field(3)
    emb = compose_fields(f2, f3)
    assert emb.field.degree == 4
    # Independent oracle: the resultant whose squarefree part the compositum
    # generator must divide; x^4 - 10x^2 + 1 for gamma = sqrt2 + sqrt3.
    res = sympy_resultant_oracle((-2, 0, 1), (-3, 0, 1), 1)
    ppoly = tuple(Fraction(c) for c in res)
    mpoly = tuple(Fraction(c) for c in emb.field.min_poly)
    assert not polyq.pmod(ppoly, mpoly)
    assert emb.field.min_poly == (1, 0, -10, 0, 1)
    r2, r3 = emb.embed1(f2.generator()), emb.embed2(f3.generator())
    assert (r2 * r2 - 2).is_zero()
    assert (r3 * r3 - 3).is_zero()
    assert (r2 + r3 - emb.field.generator()).is_zero()


def test_compose_idempotent():
    f = cyclotomic_cos_field(5)
    emb = compose_fields(f, f)
    assert emb.field.same_field(f)
    g = emb.embed2(f.generator())
    assert g == emb.field.generator()


def test_compose_degree_bound():
    f2, f3 = quadratic_field(2), quadratic_field(3)
    with pytest.raises(FieldTooLargeError):
        compose_fields(f2, f3, degree_bound=3)


def test_sign_examples():
    q = rationals()
    assert q.zero().sign() == 0
    f2 = quadratic_field(2)
    assert (f2.generator() - 1).sign() == 1
    # 2cos(pi/5) equals the golden ratio: the difference has sign 0.
    t5 = TrigField(5)
    g = golden_field()
    emb = compose_fields(t5.field, g)
    two_cos = emb.embed1(t5.cos_pi(Fraction(1, 5))) * 2
    phi = emb.embed2(g.generator())
    assert (two_cos - phi).sign() == 0
    assert (two_cos - phi).is_zero()


def test_rational_coords_round_trip():
    q = rationals()
    assert rational_coords(q.from_rational(Fraction(3, 2))) == [Fraction(3, 2)]
    f2 = quadratic_field(2)
    x = f2.element([1, 2])  # 1 + 2*sqrt(2)
    assert rational_coords(x) == [Fraction(1), Fraction(2)]
    assert f2.element(rational_coords(x)) == x


def test_multiplication_matches_polynomial_reduction():
    # x*y coords must agree with multiply-then-reduce mod minimal polynomial.
    f = cyclotomic_cos_field(7)
    rng = random.Random(7)
    p = tuple(Fraction(c) for c in f.min_poly)
    for _ in range(20):
        a = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(f.degree)]
        b = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(f.degree)]
        prod = polyq.pmod(polyq.pmul(polyq.trim(a), polyq.trim(b)), p)
        expect = list(prod) + [Fraction(0)] * (f.degree - len(prod))
        got = rational_coords(f.element(a) * f.element(b))
        assert got == expect


small_rationals = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=8
)


@settings(max_examples=60, deadline=None)
@given(
    a=st.lists(small_rationals, min_size=4, max_size=4),
    b=st.lists(small_rationals, min_size=4, max_size=4),
    c=st.lists(small_rationals, min_size=4, max_size=4),
)
def test_ring_axioms(a, b, c):
    f = _FIELD_FOR_AXIOMS
    x, y, z = f.element(a), f.element(b), f.element(c)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


_FIELD_FOR_AXIOMS = cyclotomic_cos_field(20)


@settings(max_examples=40, deadline=None)
@given(a=st.lists(small_rationals, min_size=4, max_size=4))
def test_sign_of_inverse(a):
    f = _FIELD_FOR_AXIOMS
    x = f.element(a)
    if x.is_zero():
        assert x.sign() == 0
    else:
        assert x.sign() * x.inverse().sign() == 1
        assert (x * x.inverse() - 1).is_zero()


def test_sign_never_zero_for_nonzero_canonical_form():
    # Elements numerically tiny but nonzero still get a definite sign.
    f = golden_field()
    phi = f.generator()
    # phi^(-40) is ~1e-9 but exactly representable; sign must be +1.
    tiny = phi ** (-40)
    assert tiny.sign() == 1
    assert (-tiny).sign() == -1


def test_comparisons_and_abs():
    f = quadratic_field(2)
    r2 = f.generator()
    assert r2 > 1
    assert r2 < Fraction(3, 2)
    assert abs(1 - r2) == r2 - 1


def test_interval_enclosure():
    f = quadratic_field(2)
    lo, hi = f.generator().interval(Fraction(1, 10 ** 12))
    assert lo <= Fraction(14142135623730, 10 ** 13) + Fraction(1, 10 ** 6)
    assert hi - lo <= Fraction(1, 10 ** 12)
    v = float(f.generator())
    assert abs(v - 2 ** 0.5) < 1e-12


def test_invalid_fields_rejected():
    with pytest.raises(InputError):
        NumberField((1, 0, 1), (0, 2))  # x^2 + 1: no real root
    with pytest.raises(InputError):
        NumberField((-4, 0, 1), (-3, 3))  # two roots in the interval
    with pytest.raises(InputError):
        NumberField((0, 0, 1), (-1, 1))  # x^2 not squarefree
    with pytest.raises(InputError):
        NumberField((-6, 1, 1), (1, 3))  # (x+3)(x-2) reducible


def test_division_and_pow():
    f = golden_field()
    phi = f.generator()
    assert ((phi ** 2) / phi) == phi
    assert (1 / phi) == phi - 1
    assert phi ** 0 == f.one()
    assert phi ** (-2) == (phi ** 2).inverse()
