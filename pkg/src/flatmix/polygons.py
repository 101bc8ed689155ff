"""Exact rational polygons: angles as rational multiples of pi, sides as
field elements, with full validation (closure, simplicity, angle sum)."""

from fractions import Fraction
from math import gcd, lcm

from .errors import PolygonError, InputError
from .field import compose_fields, rationals
from .geometry import PlanarVector, TrigField


class RationalAngle:
    """Interior angle theta = (num/den)*pi with theta in (0,pi) or (pi,2pi)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        num, den = int(num), int(den)
        if den <= 0 or num <= 0:
            raise PolygonError("BAD_ANGLE", f"angle {num}/{den} must be positive")
        g = gcd(num, den)
        self.num, self.den = num // g, den // g
        frac = self.fraction
        if not (0 < frac < 2) or frac == 1:
            raise PolygonError(
                "BAD_ANGLE", f"angle {self.num}/{self.den}*pi outside (0,pi) u (pi,2pi)"
            )

    @property
    def fraction(self):
        return Fraction(self.num, self.den)

    def __eq__(self, other):
        return (self.num, self.den) == (other.num, other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"{self.num}/{self.den}*pi"


def angle_lcd(polygon_or_angles):
    """Least common denominator k of the angles theta_i/pi."""
    angles = getattr(polygon_or_angles, "angles", polygon_or_angles)
    return lcm(*[a.den for a in angles])


def _orient(a, b, c):
    return (b - a).cross(c - a).sign()


def _on_segment(a, b, p):
    """p collinear with a-b assumed; is p within the closed segment?"""
    return (p - a).dot(p - b).sign() <= 0


def _segments_touch(p1, p2, q1, q2):
    """Do closed segments [p1,p2] and [q1,q2] share any point? Exact."""
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    if o4 == 0 and _on_segment(q1, q2, p2):
        return True
    return False


class RationalPolygon:
    """Validated rational polygon.

    Attributes:
      angles: list of RationalAngle (interior angles, ccw order)
      side_lengths: FieldElements in the ambient field, all positive
      field: ambient NumberField (contains the needed cyclotomic values and
             the input side lengths)
      k: least common denominator of the angles over pi
      edge_vectors: exact PlanarVectors, side i runs vertex i -> vertex i+1
      direction_fracs: Fractions a_i with side i at angle pi*a_i (mod 2)
    """

    def __init__(self, angles, side_lengths, field, k, edge_vectors, direction_fracs, trig, embed_trig):
        self.angles = angles
        self.side_lengths = side_lengths
        self.field = field
        self.k = k
        self.edge_vectors = edge_vectors
        self.direction_fracs = direction_fracs
        self._trigfield = trig
        self._embed_trig = embed_trig
        self._trig_cache = {}
        self.n = len(angles)

    def vertices(self):
        """Anchored vertex chain v_0 = 0, v_{i+1} = v_i + e_i."""
        pts = [PlanarVector(self.field.zero(), self.field.zero())]
        for e in self.edge_vectors[:-1]:
            pts.append(pts[-1] + e)
        return pts

    def area(self):
        pts = self.vertices()
        total = self.field.zero()
        n = self.n
        for i in range(n):
            total = total + pts[i].cross(pts[(i + 1) % n])
        return total * Fraction(1, 2)

    def cos_sin_pi(self, frac):
        """(cos, sin) of pi*frac in the ambient field (cached)."""
        frac = Fraction(frac) % 2
        if frac not in self._trig_cache:
            self._trig_cache[frac] = (
                self._embed_trig(self._trigfield.cos_pi(frac)),
                self._embed_trig(self._trigfield.sin_pi(frac)),
            )
        return self._trig_cache[frac]

    def __repr__(self):
        return f"RationalPolygon(angles={self.angles}, k={self.k})"


def validate_polygon(angles, side_lengths, field=None):
    """Build a RationalPolygon from angle fractions and side lengths.

    ``angles`` is a list of RationalAngle or (num, den) pairs; ``side_lengths``
    a list of FieldElements over ``field`` (or rationals when field is None).
    Raises PolygonError with codes ANGLE_SUM, NOT_CLOSED, SELF_INTERSECTING,
    NONPOSITIVE_LENGTH.
    """
    angles = [a if isinstance(a, RationalAngle) else RationalAngle(*a) for a in angles]
    n = len(angles)
    if n < 3:
        raise PolygonError("BAD_ANGLE", "a polygon needs at least 3 vertices")
    if len(side_lengths) != n:
        raise PolygonError("BAD_LENGTH", "need one side length per angle")

    if sum(a.fraction for a in angles) != n - 2:
        raise PolygonError("ANGLE_SUM", "interior angles must sum to (n-2)*pi")

    k = angle_lcd(angles)
    trig = TrigField(k)

    if field is None:
        for s in side_lengths:
            if hasattr(s, "coords"):
                field = s.field
                break
        else:
            field = rationals()
    for s in side_lengths:
        if hasattr(s, "coords") and not s.field.same_field(field):
            raise InputError("side lengths belong to different fields")
    emb = compose_fields(trig.field, field)
    ambient = emb.field

    lengths = []
    for s in side_lengths:
        if hasattr(s, "coords"):
            lengths.append(emb.embed2(s))
        else:
            lengths.append(ambient.from_rational(s))
    for s in lengths:
        if s.sign() <= 0:
            raise PolygonError("NONPOSITIVE_LENGTH", "side lengths must be positive")

    # Cumulative turning: side 0 points along +x; the exterior angle at
    # vertex i+1 is pi - theta_{i+1}.
    fracs = [Fraction(0)]
    for i in range(1, n):
        fracs.append((fracs[-1] + 1 - angles[i].fraction) % 2)

    poly = RationalPolygon(angles, lengths, ambient, k, [], fracs, trig, emb.embed1)

    edges = []
    for i in range(n):
        c, s = poly.cos_sin_pi(fracs[i])
        edges.append(PlanarVector(c * lengths[i], s * lengths[i]))
    poly.edge_vectors = edges

    total = edges[0]
    for e in edges[1:]:
        total = total + e
    if not total.is_zero():
        raise PolygonError("NOT_CLOSED", "edge vectors do not sum to zero")

    _check_simple(poly)
    return poly


def _check_simple(poly):
    """Reject self-intersecting boundaries with exact predicates."""
    pts = poly.vertices()
    n = poly.n
    for i in range(n):
        for j in range(i + 1, n):
            if pts[i] == pts[j]:
                raise PolygonError("SELF_INTERSECTING", "repeated vertex")
    for i in range(n):
        a1, a2 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent sides share a vertex by construction
            b1, b2 = pts[j], pts[(j + 1) % n]
            if _segments_touch(a1, a2, b1, b2):
                raise PolygonError("SELF_INTERSECTING", f"sides {i} and {j} touch")


def triangle_from_angles(fracs):
    """Triangle with the given angle fractions, first side length 1, the other
    sides solved by the law of sines (all within the cyclotomic field)."""
    angles = [a if isinstance(a, RationalAngle) else RationalAngle(*a) for a in fracs]
    if len(angles) != 3:
        raise PolygonError("BAD_ANGLE", "a triangle needs exactly 3 angles")
    if sum(a.fraction for a in angles) != 1:
        raise PolygonError("ANGLE_SUM", "triangle angles must sum to pi")
    k = angle_lcd(angles)
    trig = TrigField(k)
    # Side i (from vertex i to i+1) is opposite vertex i+2:
    # length_i = sin(theta_{i+2}) / sin(theta_2) so that length_0 = 1.
    sins = [trig.sin_pi(a.fraction) for a in angles]
    lengths = [sins[2] / sins[2], sins[0] / sins[2], sins[1] / sins[2]]
    return validate_polygon(angles, lengths, field=trig.field)


def rectangle(width=1, height=1, field=None):
    angles = [RationalAngle(1, 2)] * 4
    return validate_polygon(angles, [width, height, width, height], field=field)


def l_shape(horizontals, verticals, field=None):
    """Axis-parallel L-shaped hexagon from leg data.

    ``horizontals`` = (a, b) and ``verticals`` = (c, d): the outline goes right
    a+b, up c, left b, up d, left a, down c+d.  All angles are pi/2 except one
    reflex 3pi/2 corner.
    """
    a, b = horizontals
    c, d = verticals
    right = RationalAngle(1, 2)
    reflex = RationalAngle(3, 2)
    # Vertex order (0,0), (a+b,0), (a+b,c), (a,c), (a,c+d), (0,c+d):
    # the reflex corner sits at vertex 3.
    angles = [right, right, right, reflex, right, right]

    if field is None:
        field = rationals()

    def as_elem(x):
        return x if hasattr(x, "coords") else field.from_rational(x)

    a, b, c, d = map(as_elem, (a, b, c, d))
    lengths = [a + b, c, b, d, a, c + d]
    return validate_polygon(angles, lengths, field=field)
