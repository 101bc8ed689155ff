"""Exact planar vectors over a number field, plus cyclotomic trigonometry.

``TrigField`` provides cos and sin of integer multiples of pi/k as exact
field elements; these are the edge-direction data of rational polygons and
their unfoldings.
"""

from fractions import Fraction

from . import polyq
from .field import cyclotomic_cos_field
from .errors import InputError


class PlanarVector:
    """A vector in the flat plane with FieldElement coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        if not x.field.same_field(y.field):
            raise InputError("vector coordinates belong to different fields")
        self.x = x
        self.y = y

    @property
    def field(self):
        return self.x.field

    def __add__(self, other):
        return PlanarVector(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return PlanarVector(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return PlanarVector(-self.x, -self.y)

    def scale(self, s):
        return PlanarVector(self.x * s, self.y * s)

    def cross(self, other):
        return self.x * other.y - self.y * other.x

    def dot(self, other):
        return self.x * other.x + self.y * other.y

    def perp(self):
        """Rotation by +90 degrees."""
        return PlanarVector(-self.y, self.x)

    def is_zero(self):
        return self.x.is_zero() and self.y.is_zero()

    def __eq__(self, other):
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def to_floats(self):
        return (float(self.x), float(self.y))

    def __repr__(self):
        return f"PV({self.x!r}, {self.y!r})"


def apply_matrix(m, v):
    """Apply a 2x2 matrix of FieldElements to a PlanarVector."""
    (a, b), (c, d) = m
    return PlanarVector(a * v.x + b * v.y, c * v.x + d * v.y)


class TrigField:
    """Exact cos/sin of integer multiples of pi/k.

    For even k the field Q(2cos(pi/k)) already contains sin(pi*j/k) for all
    integers j; for odd k we work in Q(2cos(pi/2k)).  Values are Chebyshev
    evaluations at half the generator, cached per multiple.
    """

    def __init__(self, k):
        if k < 1:
            raise InputError("k must be positive")
        self.k = k
        if k % 2 == 0:
            self.field = cyclotomic_cos_field(2 * k)  # gen = 2cos(pi/k)
            self._den = k  # generator corresponds to angle pi/_den
        else:
            self.field = cyclotomic_cos_field(4 * k)  # gen = 2cos(pi/2k)
            self._den = 2 * k
        self._half_gen = self.field.generator() * Fraction(1, 2)
        self._cheb_cache = {}

    def _cos_of_multiple(self, m):
        """cos(pi * m / _den) as a field element."""
        m = abs(m) % (2 * self._den)
        if m > self._den:
            m = 2 * self._den - m
        if m not in self._cheb_cache:
            cheb = polyq.chebyshev_t(m)
            acc = self.field.zero()
            for c in reversed(cheb):
                acc = acc * self._half_gen + self.field.from_rational(c)
            self._cheb_cache[m] = acc
        return self._cheb_cache[m]

    def cos_pi(self, frac):
        """cos(pi * frac) for a Fraction frac with denominator dividing _den."""
        frac = Fraction(frac)
        if self._den % frac.denominator:
            raise InputError(f"angle pi*{frac} not representable with k={self.k}")
        return self._cos_of_multiple(frac.numerator * (self._den // frac.denominator))

    def sin_pi(self, frac):
        """sin(pi * frac) = cos(pi * (1/2 - frac)); needs 2*den even, which holds."""
        frac = Fraction(frac)
        comp = Fraction(1, 2) - frac
        if self._den % comp.denominator:
            raise InputError(f"angle pi*{frac} has no representable sine with k={self.k}")
        return self.cos_pi(comp)

    def unit_vector(self, frac):
        """Unit vector at angle pi * frac."""
        return PlanarVector(self.cos_pi(frac), self.sin_pi(frac))

    def rotation_matrix(self, frac):
        """Rotation by angle pi * frac as a 2x2 matrix of field elements."""
        c, s = self.cos_pi(frac), self.sin_pi(frac)
        return ((c, -s), (s, c))

    def reflection_matrix(self, frac):
        """Reflection across the line through the origin at angle pi * frac."""
        c2, s2 = self.cos_pi(2 * Fraction(frac)), self.sin_pi(2 * Fraction(frac))
        return ((c2, s2), (s2, -c2))
