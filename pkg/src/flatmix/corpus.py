"""The built-in test corpus: named polygons and surfaces used by the test
suite, the acceptance gate, and the ``corpus`` CLI command."""

from fractions import Fraction

from .field import golden_field, rationals
from .geometry import PlanarVector, TrigField
from .polygons import l_shape, rectangle, triangle_from_angles, validate_polygon
from .unfold import TranslationSurface, unfold


def square_torus(width=1, height=1, field=None):
    """One-cell torus from a width x height rectangle."""
    q = field or rationals()
    w = q.from_rational(width) if not hasattr(width, "coords") else width
    h = q.from_rational(height) if not hasattr(height, "coords") else height
    zero = q.zero()
    cells = [[
        PlanarVector(w, zero),
        PlanarVector(zero, h),
        PlanarVector(-w, zero),
        PlanarVector(zero, -h),
    ]]
    gl = {(0, 0): (0, 2), (0, 2): (0, 0), (0, 1): (0, 3), (0, 3): (0, 1)}
    return TranslationSurface(cells, gl, q)


def l_surface(a, b, c, d, field=None):
    """Genus-2 L-shaped translation surface with opposite sides identified.

    Outline: right a, right b, up c, left b, up d, left a, down d, down c;
    horizontal extents (a, b), vertical extents (c, d), one 6*pi cone point.
    """
    q = field or rationals()

    def elem(x):
        return x if hasattr(x, "coords") else q.from_rational(x)

    a, b, c, d = map(elem, (a, b, c, d))
    zero = q.zero()
    cells = [[
        PlanarVector(a, zero),            # 0 bottom left part
        PlanarVector(b, zero),            # 1 bottom right part
        PlanarVector(zero, c),            # 2 right side (lower)
        PlanarVector(-b, zero),           # 3 step top
        PlanarVector(zero, d),            # 4 inner right (upper)
        PlanarVector(-a, zero),           # 5 top
        PlanarVector(zero, -d),           # 6 left (upper)
        PlanarVector(zero, -c),           # 7 left (lower)
    ]]
    gl = {}
    for x, y in [((0, 0), (0, 5)), ((0, 1), (0, 3)), ((0, 2), (0, 7)), ((0, 4), (0, 6))]:
        gl[x] = y
        gl[y] = x
    return TranslationSurface(cells, gl, q)


def golden_l_surface():
    """L-shaped surface with side data 1 and phi over Q(phi): weakly mixing."""
    gf = golden_field()
    return l_surface(gf.one(), gf.generator(), gf.one(), gf.generator(), field=gf)


def integer_l_surface():
    """L-shaped surface with unit legs: a torus cover, not weakly mixing."""
    return l_surface(1, 1, 1, 1)


def double_pentagon():
    """Unfolding of the (pi/5, pi/5, 3pi/5) triangle: genus 2, stratum (2)."""
    return unfold(triangle_from_angles([(1, 5), (1, 5), (3, 5)]))


TRIANGLE_TABLE = [
    ((1, 2), (1, 4), (1, 4)),
    ((1, 3), (1, 3), (1, 3)),
    ((1, 2), (1, 3), (1, 6)),
    ((2, 3), (1, 6), (1, 6)),
    ((1, 5), (1, 5), (3, 5)),
    ((1, 5), (2, 5), (2, 5)),
    ((1, 7), (2, 7), (4, 7)),
    ((1, 8), (3, 8), (1, 2)),
    ((1, 9), (2, 9), (2, 3)),
    ((1, 12), (5, 12), (1, 2)),
]


def corpus_polygons():
    """Named polygon corpus (billiard tables)."""
    gf = golden_field()
    entries = [("square", validate_polygon([(1, 2)] * 4, [1, 1, 1, 1]))]
    for fracs in TRIANGLE_TABLE:
        name = "triangle_" + "_".join(f"{n}o{d}" for n, d in fracs)
        entries.append((name, triangle_from_angles(fracs)))
    entries.append(("rect_2x1", rectangle(2, 1)))
    entries.append(("l_table_unit", l_shape((1, 1), (1, 1))))
    entries.append((
        "l_table_golden",
        l_shape((gf.one(), gf.generator()), (gf.one(), gf.generator()), field=gf),
    ))
    return entries


def corpus_surfaces():
    """Named surface corpus (direct translation-surface inputs)."""
    return [
        ("square_torus", square_torus()),
        ("integer_l_surface", integer_l_surface()),
        ("golden_l_surface", golden_l_surface()),
        ("double_pentagon", double_pentagon()),
    ]


def random_triangle_with_k(k, rng):
    """Angle fractions of a random rational triangle with angle lcd k."""
    from math import gcd, lcm

    while True:
        a = rng.randint(1, k - 2)
        b = rng.randint(1, k - 1 - a)
        c = k - a - b
        if min(a, b, c) < 1 or max(a, b, c) >= k:
            continue
        dens = [k // gcd(x, k) for x in (a, b, c)]
        if lcm(*dens) == k:
            return [(a, k), (b, k), (c, k)]


def random_quadrilateral_with_k(k, rng, attempts=200):
    """A random rational quadrilateral with angle lcd k, or None.

    Two side lengths are free; the other two are solved exactly from the
    closure equations and checked for positivity and simplicity.
    """
    from math import gcd, lcm

    from .errors import PolygonError
    from .polygons import RationalAngle

    for _ in range(attempts):
        nums = []
        remaining = 2 * k
        ok = True
        for i in range(3):
            hi = remaining - (3 - i)
            if hi < 1:
                ok = False
                break
            n = rng.randint(1, min(hi, 2 * k - 1))
            nums.append(n)
            remaining -= n
        if not ok or remaining < 1 or remaining >= 2 * k:
            continue
        nums.append(remaining)
        if any(n == k for n in nums):  # straight angles are not allowed
            continue
        dens = [k // gcd(n, k) for n in nums]
        if lcm(*dens) != k:
            continue
        angles = [RationalAngle(n, k) for n in nums]
        trig = TrigField(k)
        # direction fractions of the four sides
        fracs = [Fraction(0)]
        for i in range(1, 4):
            fracs.append((fracs[-1] + 1 - angles[i].fraction) % 2)
        units = [trig.unit_vector(fr) for fr in fracs]
        t = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        rhs = -(units[0].x + units[1].x * t), -(units[0].y + units[1].y * t)
        den = units[2].x * units[3].y - units[2].y * units[3].x
        if den.is_zero():
            continue
        l2 = (rhs[0] * units[3].y - rhs[1] * units[3].x) / den
        l3 = (units[2].x * rhs[1] - units[2].y * rhs[0]) / den
        if l2.sign() <= 0 or l3.sign() <= 0:
            continue
        try:
            return validate_polygon(
                angles, [trig.field.one(), trig.field.from_rational(t), l2, l3],
                field=trig.field,
            )
        except PolygonError:
            continue
    return None
