"""The main decision procedure: does the tautological plane of a surface
contain a non-zero integer cohomology class?

The plane spanned by the period rows of Re and Im is cut out by 2g-2 linear
equations with field coefficients; splitting each into rational equations
through the power-basis coordinates reduces the question to an exact
rational kernel.  A surface is weakly mixing in almost every direction
exactly when that kernel is trivial; otherwise any primitive integer class
yields an affine circle factor, which is returned as the witness.
"""

from fractions import Fraction
from math import gcd

from .errors import InputError, NotAWitnessError, NotK2Error
from .field import rational_coords
from .homology import homology_basis, period_matrix, rational_kernel_basis
from .unfold import unfold

REASON_K_TRIVIAL = "K_TRIVIAL"
REASON_GENERIC_K = "GENERIC_K"
REASON_TORUS_COVER = "TORUS_COVER"
REASON_ALMOST_INTEGRABLE = "ALMOST_INTEGRABLE"
REASON_COMMENSURABLE_K2 = "COMMENSURABLE_K2"
REASON_TORUS_FACTOR = "TORUS_FACTOR"

_INTEGRABLE_TRIANGLES = {
    frozenset({Fraction(1, 2), Fraction(1, 4)}),
    frozenset({Fraction(1, 3)}),
    frozenset({Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)}),
}


class TautRationalSubspace:
    """Rational points of the tautological plane, in dual-basis coordinates.

    ``basis`` holds 0, 1 or 2 primitive integer vectors; ``coefficients[i]``
    is the exact field pair (a, b) with a*Re + b*Im equal to basis[i].
    """

    def __init__(self, basis, coefficients):
        self.basis = basis
        self.coefficients = coefficients

    @property
    def dim(self):
        return len(self.basis)


class CircleFactor:
    """An affine map to R/Z: integrate a*Re + b*Im from a base point."""

    def __init__(self, a, b, integer_class):
        self.a = a
        self.b = b
        self.integer_class = integer_class

    def describe(self):
        return (
            "Hol(x) = integral from x0 to x of a*Re + b*Im, mod Z; "
            "all periods of the integrand are integers"
        )


class Verdict:
    def __init__(self, weakly_mixing, reason, kernel_dim, k=None, witness=None,
                 cross_checks=None, subspace=None, subtype=None):
        self.weakly_mixing = weakly_mixing
        self.reason = reason
        self.kernel_dim = kernel_dim
        self.k = k
        self.witness = witness
        self.cross_checks = cross_checks or {}
        self.subspace = subspace
        self.subtype = subtype

    def __repr__(self):
        wm = "WM" if self.weakly_mixing else "not WM"
        return f"Verdict({wm}, {self.reason}, dim={self.kernel_dim})"


def _primitive_integer_vector(fracs):
    den = 1
    for q in fracs:
        den = den * q.denominator // gcd(den, q.denominator)
    ints = [int(q * den) for q in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-x for x in ints]
            break
    return ints


def taut_rational_subspace(pm):
    """Exact rational subspace of span_R(re_row, im_row) in Q^(2g)."""
    return taut_rational_subspace_from_rows(
        pm.re_row, pm.im_row, pm.basis.surface.field
    )


def taut_rational_subspace_from_rows(re, im, field):
    n = len(re)
    if n == 0:
        return TautRationalSubspace([], [])

    # Pivot pair with a nonzero 2x2 minor (exists: the rows are independent).
    pivot = None
    for i0 in range(n):
        for i1 in range(i0 + 1, n):
            D = re[i0] * im[i1] - re[i1] * im[i0]
            if not D.is_zero():
                pivot = (i0, i1, D)
                break
        if pivot:
            break
    if pivot is None:
        raise InputError("period rows are linearly dependent")
    i0, i1, D = pivot

    rows = []
    d = field.degree
    for r in range(n):
        if r in (i0, i1):
            continue
        # det[[n_i0, n_i1, n_r], [re_i0, re_i1, re_r], [im_i0, im_i1, im_r]] = 0
        coef_i0 = re[i1] * im[r] - re[r] * im[i1]
        coef_i1 = -(re[i0] * im[r] - re[r] * im[i0])
        coef_r = D
        for t in range(d):
            row = [Fraction(0)] * n
            row[i0] = rational_coords(coef_i0)[t]
            row[i1] = rational_coords(coef_i1)[t]
            row[r] = rational_coords(coef_r)[t]
            if any(row):
                rows.append(row)
    if rows:
        kernel = rational_kernel_basis(rows)
    else:
        kernel = [[Fraction(1 if i == j else 0) for i in range(n)] for j in range(n)]

    basis, coefficients = [], []
    for vec in kernel:
        ints = _primitive_integer_vector(vec)
        a = (im[i1] * ints[i0] - im[i0] * ints[i1]) / D
        b = (re[i0] * ints[i1] - re[i1] * ints[i0]) / D
        for r in range(n):
            if not (a * re[r] + b * im[r] - ints[r]).is_zero():
                raise InputError("kernel vector fails exact span verification")
        basis.append(ints)
        coefficients.append((a, b))
    if len(basis) > 2:
        raise InputError("tautological plane cannot contain a rank-3 rational space")
    return TautRationalSubspace(basis, coefficients)


def circle_factor(surface, coeffs, pm=None):
    """Verified circle factor from witness coefficients (a, b).

    Recomputes all 2g periods of a*Re + b*Im and checks integrality; raises
    NotAWitnessError if any period fails.
    """
    a, b = coeffs
    if pm is None:
        basis = homology_basis(surface)
        pm = period_matrix(surface, basis)
    integer_class = []
    for re_p, im_p in zip(pm.re_row, pm.im_row):
        period = a * re_p + b * im_p
        if not period.is_integer():
            raise NotAWitnessError("a*Re + b*Im has a non-integer period")
        integer_class.append(int(period.as_fraction()))
    if all(v == 0 for v in integer_class):
        raise NotAWitnessError("witness class is zero")
    return CircleFactor(a, b, integer_class)


def classify_surface(surface, reason_not_wm=REASON_TORUS_FACTOR, k=None):
    """Classify a translation surface, attaching a verified witness."""
    surface.require_connected()
    basis = homology_basis(surface)
    pm = period_matrix(surface, basis)
    sub = taut_rational_subspace(pm)
    if sub.dim == 0:
        return Verdict(True, REASON_K_TRIVIAL, 0, k=k, subspace=sub)
    a, b = sub.coefficients[0]
    cf = circle_factor(surface, (a, b), pm=pm)
    witness = {
        "integer_class": sub.basis[0],
        "a": a,
        "b": b,
        "all_classes": sub.basis,
        "circle_factor": cf,
    }
    return Verdict(False, reason_not_wm, sub.dim, k=k, witness=witness, subspace=sub)


def commensurability_check_k2(polygon):
    """For k=2 polygons: are all horizontal (resp. vertical) side ratios rational?"""
    for ang in polygon.angles:
        if ang.fraction not in (Fraction(1, 2), Fraction(3, 2)):
            raise NotK2Error("polygon has an angle outside {pi/2, 3pi/2}")
    horizontals, verticals = [], []
    for frac, length in zip(polygon.direction_fracs, polygon.side_lengths):
        if frac % 1 == 0:
            horizontals.append(length)
        else:
            verticals.append(length)

    def commensurable(lengths):
        first = lengths[0]
        return all((l / first).is_rational() for l in lengths[1:])

    return {
        "horizontal_commensurable": commensurable(horizontals),
        "vertical_commensurable": commensurable(verticals),
    }


def _cylinder_cross_check_k2(surface, side_comm):
    """Side-length commensurability against cylinder circumferences.

    The axis directions of a k=2 unfolding are completely periodic; the
    circumference ratios of the horizontal (resp. vertical) cylinders should
    be rational exactly when the corresponding side lengths are commensurable.
    Any discrepancy is flagged, not resolved.
    """
    from fractions import Fraction as F

    from .cylinders import cylinder_decomposition
    from .errors import FlatmixError
    from .flow import Direction

    out = {}
    try:
        for axis, key in (((F(1), F(0)), "horizontal_commensurable"),
                          ((F(0), F(1)), "vertical_commensurable")):
            d = Direction.from_fractions(surface, *axis)
            cyls = cylinder_decomposition(surface, d)
            first = cyls[0].circumference
            comm = all((c.circumference / first).is_rational() for c in cyls[1:])
            tag = "cylinders_" + key
            out[tag] = comm
            out[tag + "_agrees"] = comm == side_comm[key]
        out["cylinder_check_flagged"] = not (
            out["cylinders_horizontal_commensurable_agrees"]
            and out["cylinders_vertical_commensurable_agrees"]
        )
    except FlatmixError as exc:
        out["cylinder_check_flagged"] = True
        out["cylinder_check_error"] = exc.code
    return out


def _is_integrable(polygon):
    fracs = [a.fraction for a in polygon.angles]
    if all(f == Fraction(1, 2) for f in fracs):
        return True  # rectangle
    return len(fracs) == 3 and frozenset(fracs) in _INTEGRABLE_TRIANGLES


def classify_polygon(polygon, cross_check=False):
    """Billiard dispatch: crystallographic fast path for k not in {2,3,4,6},
    exact kernel for k in {3,4,6}, commensurability plus kernel for k = 2."""
    k = polygon.k
    if k not in (2, 3, 4, 6):
        cross = {"kernel_computed": False}
        if cross_check:
            verdict = classify_surface(unfold(polygon), k=k)
            cross = {"kernel_computed": True, "kernel_dim": verdict.kernel_dim,
                     "agrees": verdict.kernel_dim == 0}
            if not cross["agrees"]:
                raise InputError("crystallographic restriction violated: kernel nonzero")
        return Verdict(True, REASON_GENERIC_K, 0, k=k, cross_checks=cross)

    if k == 2:
        comm = commensurability_check_k2(polygon)
        fast_not_wm = comm["horizontal_commensurable"] or comm["vertical_commensurable"]
        surface = unfold(polygon)
        verdict = classify_surface(surface, reason_not_wm=REASON_COMMENSURABLE_K2, k=k)
        agrees = (not verdict.weakly_mixing) == fast_not_wm
        verdict.cross_checks = {
            "kernel_computed": True,
            "commensurability": comm,
            "agrees": agrees,
        }
        verdict.cross_checks.update(_cylinder_cross_check_k2(surface, comm))
        if not agrees:
            raise InputError(
                "k=2 side-length commensurability disagrees with the exact kernel"
            )
        if _is_integrable(polygon):
            verdict.subtype = "integrable"
        return verdict

    # k in {3, 4, 6}
    verdict = classify_surface(unfold(polygon), reason_not_wm=REASON_ALMOST_INTEGRABLE, k=k)
    verdict.cross_checks = {"kernel_computed": True}
    if not verdict.weakly_mixing:
        if verdict.kernel_dim != 2:
            raise InputError(
                "deck symmetry forces kernel dimension 0 or 2 for k in {3,4,6}"
            )
        verdict.cross_checks["lattice_type"] = _lattice_type(verdict, k)
        verdict.subtype = "integrable" if _is_integrable(polygon) else "almost_integrable"
    return verdict


def _lattice_type(verdict, k):
    """Informational tag for the witness lattice in (a,b) coefficient space."""
    (a1, b1), (a2, b2) = verdict.subspace.coefficients
    v1, v2 = (a1, b1), (a2, b2)

    def dot(u, w):
        return u[0] * w[0] + u[1] * w[1]

    # One step of Gauss reduction to a reduced lattice basis.
    for _ in range(8):
        n11, n22 = dot(v1, v1), dot(v2, v2)
        if n22 < n11:
            v1, v2 = v2, v1
            n11, n22 = n22, n11
        mu = (dot(v1, v2) / n11).round_nearest()
        if mu == 0:
            break
        v2 = (v2[0] - mu * v1[0], v2[1] - mu * v1[1])
    n11, n22, n12 = dot(v1, v1), dot(v2, v2), dot(v1, v2)
    if n12.is_zero():
        return "rectangular"
    if (n11 - n22).is_zero() and (4 * n12 * n12 - n11 * n22).is_zero():
        return "hexagonal"
    return "oblique"
