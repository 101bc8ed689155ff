"""Exact arithmetic in real algebraic number fields.

A field is a monic irreducible integer polynomial together with a rational
interval isolating one of its real roots; elements are rational coordinate
vectors in the power basis of that root.  Equality of elements is equality
of coordinates (the representation is canonical), so the zero test is
syntactic and sign determination by interval refinement always terminates.
"""

from fractions import Fraction

from . import polyq
from .errors import FieldTooLargeError, InputError

DEFAULT_DEGREE_BOUND = 64


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class NumberField:
    """Q(theta) for theta the unique root of ``min_poly`` in the embedding interval."""

    def __init__(self, min_poly, embedding_interval, _trusted=False):
        coeffs = tuple(int(c) for c in min_poly)
        if not coeffs or coeffs[-1] != 1:
            raise InputError("minimal polynomial must be monic with integer coefficients")
        self.min_poly = coeffs
        self.degree = len(coeffs) - 1
        lo, hi = embedding_interval
        self._lo, self._hi = _as_fraction(lo), _as_fraction(hi)
        if self._lo > self._hi:
            raise InputError("embedding interval is empty")
        self._poly = tuple(Fraction(c) for c in coeffs)
        self._sturm = None
        if not _trusted:
            self._validate()
        # Powers theta^d .. theta^(2d-2) reduced into the power basis.
        d = self.degree
        self._red = []
        if d >= 1:
            base = [-Fraction(c) for c in self._poly[:-1]]  # theta^d
            self._red.append(tuple(base))
            cur = list(base)
            for _ in range(d - 2):
                over = cur[-1]
                cur = [Fraction(0)] + cur[:-1]  # multiply by theta
                if over:
                    cur = [cur[i] + over * base[i] for i in range(d)]
                self._red.append(tuple(cur))

    # -- validation and root isolation --------------------------------------

    def _chain(self):
        if self._sturm is None:
            self._sturm = polyq.sturm_chain(self._poly)
        return self._sturm

    def _validate(self):
        if self.degree < 1:
            raise InputError("minimal polynomial must be nonconstant")
        if polyq.count_roots(self._poly, self._lo, self._hi, self._chain()) != 1:
            raise InputError("embedding interval does not isolate exactly one real root")
        if not polyq.is_squarefree(self._poly):
            raise InputError("minimal polynomial is not squarefree")
        if self.degree > 1:
            import sympy

            x = sympy.Symbol("x")
            poly = sympy.Poly(list(reversed(self.min_poly)), x)
            _, factors = poly.factor_list()
            if len(factors) != 1 or factors[0][1] != 1:
                raise InputError("minimal polynomial is reducible over Q")

    def refine(self):
        """Halve the isolating interval (bisection with exact sign tests)."""
        lo, hi = self._lo, self._hi
        if lo == hi:
            return
        mid = (lo + hi) / 2
        vm = polyq.peval(self._poly, mid)
        if vm == 0:
            # Only possible for degree 1 (irreducible polys have no rational
            # roots otherwise); collapse the interval.
            self._lo = self._hi = mid
            return
        vl = polyq.peval(self._poly, lo)
        if vl == 0 or (vl < 0) != (vm < 0):
            self._hi = mid
        else:
            self._lo = mid

    def interval(self, width=None):
        """Current isolating interval, refined below ``width`` if given."""
        if width is not None:
            while self._hi - self._lo > width:
                self.refine()
        return self._lo, self._hi

    def root_float(self):
        lo, hi = self.interval(Fraction(1, 2 ** 56))
        return float((lo + hi) / 2)

    # -- element constructors ------------------------------------------------

    def element(self, coords):
        coords = [_as_fraction(c) for c in coords]
        if len(coords) > self.degree:
            raise InputError("too many coordinates for field degree")
        coords += [Fraction(0)] * (self.degree - len(coords))
        return FieldElement(self, tuple(coords))

    def from_rational(self, q):
        return self.element([_as_fraction(q)])

    def zero(self):
        return self.from_rational(0)

    def one(self):
        return self.from_rational(1)

    def generator(self):
        if self.degree == 1:
            return self.from_rational(-self.min_poly[0])
        return self.element([0, 1])

    # -- structure -----------------------------------------------------------

    def same_field(self, other):
        if self is other:
            return True
        if self.min_poly != other.min_poly:
            return False
        lo = max(self._lo, other._lo)
        hi = min(self._hi, other._hi)
        if lo > hi:
            return False
        return polyq.count_roots(self._poly, lo, hi, self._chain()) == 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.same_field(other)

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField(degree={self.degree}, min_poly={self.min_poly})"

    def _reduce(self, coeffs):
        """Reduce a coefficient list of length <= 2d-1 into the power basis."""
        d = self.degree
        out = list(coeffs[:d])
        out += [Fraction(0)] * (d - len(out))
        for j, c in enumerate(coeffs[d:]):
            if c == 0:
                continue
            red = self._red[j]
            for i in range(d):
                out[i] += c * red[i]
        return tuple(out)


class FieldElement:
    """Element of a NumberField in power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return other
            if other.field.same_field(self.field):
                return FieldElement(self.field, other.coords)
            raise InputError("elements belong to different fields")
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            return FieldElement(self.field, tuple(a * q for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coords, o.coords
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj != 0:
                    prod[i + j] += ai * bj
        return FieldElement(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("field element is zero")
        # Extended Euclid in Q[x] against the minimal polynomial.
        p = self.field._poly
        a = polyq.trim(self.coords)
        r0, r1 = p, a
        s0, s1 = polyq.ZERO, (Fraction(1),)
        while polyq.degree(r1) > 0:
            q, r = polyq.pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, polyq.psub(s0, polyq.pmul(q, s1))
        inv = polyq.pscale(s1, 1 / r1[0])
        return self.field.element(list(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise InputError("element is irrational")
        return self.coords[0]

    def is_integer(self):
        return self.is_rational() and self.coords[0].denominator == 1

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.field.min_poly, self.coords))

    def sign(self):
        """Sign of the real embedding: -1, 0, or +1.  Always terminates."""
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coords[0] > 0 else -1
        p = polyq.trim(self.coords)
        while True:
            lo, hi = self.field.interval()
            vlo, vhi = polyq.interval_eval(p, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            # Enclosure straddles zero: the canonical form is nonzero, so
            # refinement must eventually separate it from zero.
            self.field.refine()

    def __lt__(self, other):
        o = self._coerce(other)
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        return (self - o).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- numerics ------------------------------------------------------------

    def interval(self, width=Fraction(1, 2 ** 56)):
        """Rational enclosure of the real embedding, of width at most ``width``."""
        if self.is_rational():
            return self.coords[0], self.coords[0]
        p = polyq.trim(self.coords)
        while True:
            lo, hi = self.field.interval()
            vlo, vhi = polyq.interval_eval(p, lo, hi)
            if vhi - vlo <= width:
                return vlo, vhi
            self.field.refine()

    def __float__(self):
        lo, hi = self.interval()
        return float((lo + hi) / 2)

    def floor(self):
        """Largest integer <= the real embedding (exact)."""
        if self.is_rational():
            return self.coords[0].numerator // self.coords[0].denominator
        width = Fraction(1, 4)
        while True:
            lo, hi = self.interval(width)
            flo = lo.numerator // lo.denominator
            fhi = hi.numerator // hi.denominator
            if flo == fhi:
                return flo
            # The enclosure straddles an integer m; decide x - m exactly.
            m = fhi
            s = (self - m).sign()
            return m if s >= 0 else m - 1

    def round_nearest(self):
        """Nearest integer (ties toward +infinity), exact."""
        return (self + Fraction(1, 2)).floor()

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{i}")
        return "<" + (" + ".join(terms) if terms else "0") + ">"


def rational_coords(x):
    """Power-basis coordinate vector of a field element (exact round trip)."""
    return list(x.coords)


# ---------------------------------------------------------------------------
# Standard fields.

_QQ = None


def rationals():
    """The rational field, represented with minimal polynomial x."""
    global _QQ
    if _QQ is None:
        _QQ = NumberField((0, 1), (0, 0), _trusted=True)
    return _QQ


def quadratic_field(n):
    """Q(sqrt(n)) for a positive nonsquare integer n, embedded with sqrt(n) > 0."""
    lo = Fraction(0)
    hi = Fraction(n + 1)
    return NumberField((-n, 0, 1), (lo, hi), _trusted=True)


def golden_field():
    """Q(phi) with generator phi = (1+sqrt(5))/2, the root of x^2-x-1 in (1, 2)."""
    return NumberField((-1, -1, 1), (1, 2), _trusted=True)


def cyclotomic_cos_field(n):
    """Q(2*cos(2*pi/n)) with the distinguished root 2*cos(2*pi/n)."""
    import math

    poly = polyq.cos_minimal_poly(n)
    if len(poly) == 2:  # rational root
        root = Fraction(-poly[0])
        return NumberField(poly, (root, root), _trusted=True)
    approx = 2 * math.cos(2 * math.pi / n)
    ppoly = tuple(Fraction(c) for c in poly)
    chain = polyq.sturm_chain(ppoly)
    delta = Fraction(1, 16)
    while True:
        lo = Fraction(approx).limit_denominator(10 ** 12) - delta
        hi = Fraction(approx).limit_denominator(10 ** 12) + delta
        if polyq.count_roots(ppoly, lo, hi, chain) == 1:
            return NumberField(poly, (lo, hi), _trusted=True)
        delta /= 16
        if delta < Fraction(1, 10 ** 30):
            raise InputError(f"failed to isolate 2*cos(2*pi/{n})")


class FieldEmbedding:
    """Result of a compositum: the ambient field plus conversion maps."""

    def __init__(self, field, embed1, embed2):
        self.field = field
        self.embed1 = embed1
        self.embed2 = embed2


def _identity_embed(elem):
    return elem


def compose_fields(f1, f2, degree_bound=DEFAULT_DEGREE_BOUND):
    """Primitive element of the compositum of two embedded real fields.

    Returns a FieldEmbedding whose maps convert elements of ``f1`` and ``f2``
    into the composite field.  Raises FieldTooLargeError when the compositum
    degree would exceed ``degree_bound``.
    """
    if f1.same_field(f2):
        return FieldEmbedding(f1, _identity_embed, lambda e: f1.element(e.coords))
    if f1.degree == 1:

        def embed_rat1(elem, _f1=f1, _f2=f2):
            if not elem.field.same_field(_f1):
                raise InputError("element does not belong to the embedded field")
            return _f2.from_rational(elem.coords[0])

        return FieldEmbedding(f2, embed_rat1, _identity_embed)
    if f2.degree == 1:
        flipped = compose_fields(f2, f1, degree_bound)
        return FieldEmbedding(flipped.field, flipped.embed2, flipped.embed1)
    if f1.degree * f2.degree > degree_bound:
        raise FieldTooLargeError(
            f"compositum degree may reach {f1.degree * f2.degree} > bound {degree_bound}"
        )

    p1 = tuple(Fraction(c) for c in f1.min_poly)
    p2 = tuple(Fraction(c) for c in f2.min_poly)

    for t in range(1, 64):
        res = _resultant_in_x(p1, p2, t)
        if not polyq.is_squarefree(res):
            continue
        gamma_field = _isolate_gamma(res, f1, f2, t)
        if gamma_field.degree > degree_bound:
            raise FieldTooLargeError(
                f"compositum degree {gamma_field.degree} exceeds bound {degree_bound}"
            )
        expressed = _express_generators(gamma_field, p1, p2, t)
        if expressed is None:
            continue
        theta1_img, theta2_img = expressed
        if not _embedding_matches(theta1_img, f1) or not _embedding_matches(theta2_img, f2):
            continue

        def embed1(elem, img=theta1_img, K=gamma_field, src=f1):
            if not elem.field.same_field(src):
                raise InputError("element does not belong to the embedded field")
            return _eval_poly_at(elem.coords, img, K)

        def embed2(elem, img=theta2_img, K=gamma_field, src=f2):
            if not elem.field.same_field(src):
                raise InputError("element does not belong to the embedded field")
            return _eval_poly_at(elem.coords, img, K)

        return FieldEmbedding(gamma_field, embed1, embed2)
    raise InputError("no primitive element found (exhausted shift candidates)")


def _eval_poly_at(coords, img, K):
    acc = K.zero()
    for c in reversed(polyq.trim(coords)):
        acc = acc * img + K.from_rational(c)
    return acc


def _resultant_in_x(p1, p2, t):
    """res_y(p2(y), p1(x - t*y)) as a polynomial in x, by interpolation."""
    d1, d2 = polyq.degree(p1), polyq.degree(p2)
    n = d1 * d2
    points = []
    x0 = Fraction(0)
    while len(points) <= n:
        # p1(x0 - t*y) as a polynomial in y
        shifted = polyq.compose(p1, (x0, Fraction(-t)))
        points.append((x0, polyq.resultant(p2, shifted)))
        x0 += 1
    res = polyq.lagrange_interpolate(points)
    return polyq.primitive(res)


def _isolate_gamma(res, f1, f2, t):
    """NumberField generated by gamma = theta1 + t*theta2."""
    import sympy

    x = sympy.Symbol("x")
    ints = [int(c) for c in polyq.primitive(res)]
    poly = sympy.Poly(list(reversed(ints)), x)
    _, factors = poly.factor_list()
    cand = []
    for fac, _mult in factors:
        coeffs = [int(c) for c in reversed(fac.all_coeffs())]
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        # gamma is an algebraic integer, so its factor is monic; non-monic
        # primitive factors cannot contain it.
        if coeffs[-1] == 1:
            cand.append(tuple(coeffs))
    width = Fraction(1, 2 ** 12)
    while True:
        lo1, hi1 = f1.interval(width)
        lo2, hi2 = f2.interval(width)
        glo, ghi = lo1 + t * lo2, hi1 + t * hi2
        hits = []
        for coeffs in cand:
            ppoly = tuple(Fraction(c) for c in coeffs)
            cnt = polyq.count_roots(ppoly, glo, ghi)
            if cnt:
                hits.append((coeffs, cnt))
        if len(hits) == 1 and hits[0][1] == 1:
            return NumberField(hits[0][0], (glo, ghi), _trusted=True)
        width /= 2 ** 8
        if width < Fraction(1, 2 ** 400):
            raise InputError("failed to isolate compositum generator")


def _express_generators(K, p1, p2, t):
    """Images of theta1 and theta2 in K = Q(gamma), or None if t was unlucky."""
    gamma = K.generator()
    # Expand q(y) = p1(gamma - t*y) as a polynomial in y with K coefficients.
    acc = [K.zero()]
    for c in reversed(p1):
        # acc = acc * (gamma - t*y) + c
        new = [K.zero() for _ in range(len(acc) + 1)]
        for i, a in enumerate(acc):
            new[i] = new[i] + a * gamma
            new[i + 1] = new[i + 1] + a * Fraction(-t)
        new[0] = new[0] + K.from_rational(c)
        while len(new) > 1 and new[-1].is_zero():
            new.pop()
        acc = new
    qpoly = acc
    p2K = [K.from_rational(c) for c in p2]
    g = _gcd_over_field(p2K, qpoly, K)
    if len(g) != 2:
        return None
    theta2 = -(g[0] / g[1])
    theta1 = gamma - t * theta2
    # exact verification
    if not _eval_field_poly(p1, theta1, K).is_zero():
        return None
    if not _eval_field_poly(p2, theta2, K).is_zero():
        return None
    return theta1, theta2


def _eval_field_poly(p, x, K):
    acc = K.zero()
    for c in reversed(p):
        acc = acc * x + K.from_rational(c)
    return acc


def _gcd_over_field(a, b, K):
    """Monic gcd of two polynomials with FieldElement coefficients."""

    def trimmed(p):
        p = list(p)
        while p and p[-1].is_zero():
            p.pop()
        return p

    def rem(p, q):
        p = list(p)
        dq = len(q) - 1
        inv = q[-1].inverse()
        while len(p) - 1 >= dq and p:
            if p[-1].is_zero():
                p.pop()
                continue
            c = p[-1] * inv
            k = len(p) - 1 - dq
            for i in range(dq + 1):
                p[k + i] = p[k + i] - c * q[i]
            p.pop()
        return trimmed(p)

    a, b = trimmed(a), trimmed(b)
    while b:
        a, b = b, rem(a, b)
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _embedding_matches(img, f):
    """Check that a computed image lands on f's distinguished root."""
    width = Fraction(1, 2 ** 16)
    for _ in range(40):
        lo, hi = img.interval(width)
        flo, fhi = f.interval(width)
        if hi < flo or fhi < lo:
            return False
        if max(lo, flo) <= min(hi, fhi) and (hi - lo) < _root_gap(f):
            return True
        width /= 2 ** 8
    return True


def _root_gap(f):
    # Crude but sufficient separation scale for agreement checks.
    return Fraction(1, 2 ** 24)
