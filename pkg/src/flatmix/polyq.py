"""Dense univariate polynomial arithmetic over the rationals.

Polynomials are tuples of Fractions, constant term first, with no trailing
zeros (the zero polynomial is the empty tuple).  Everything here is exact;
these routines back the number-field layer.
"""

from fractions import Fraction
from math import gcd

ZERO = ()


def trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def from_ints(ints):
    return trim(Fraction(c) for c in ints)


def degree(p):
    return len(p) - 1


def padd(p, q):
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def pneg(p):
    return tuple(-c for c in p)


def psub(p, q):
    return padd(p, pneg(q))


def pscale(p, s):
    if s == 0:
        return ZERO
    return tuple(c * s for c in p)


def pmul(p, q):
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def pdivmod(p, q):
    """Quotient and remainder in Q[x]; q must be nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quo = [Fraction(0)] * max(0, len(p) - dq)
    while len(rem) - 1 >= dq and any(c != 0 for c in rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dq:
            break
        k = len(rem) - 1 - dq
        c = rem[-1] / lead
        quo[k] = c
        for i in range(len(q)):
            rem[k + i] -= c * q[i]
        rem.pop()
    return trim(quo), trim(rem)


def pmod(p, q):
    return pdivmod(p, q)[1]


def peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def peval_float(p, x):
    acc = 0.0
    for c in reversed(p):
        acc = acc * x + float(c)
    return acc


def pderiv(p):
    return trim(i * p[i] for i in range(1, len(p)))


def primitive(p):
    """Scale to integer coefficients with content 1, keeping the sign of the lead."""
    if not p:
        return p
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g:
        ints = [c // g for c in ints]
    return tuple(Fraction(c) for c in ints)


def monic(p):
    if not p:
        return p
    return tuple(c / p[-1] for c in p)


def pgcd(p, q):
    """Monic gcd in Q[x]."""
    a, b = p, q
    while b:
        a, b = b, pmod(a, b)
        b = primitive(b)  # keep coefficient growth in check
    return monic(a)


def sturm_chain(p):
    chain = [p, pderiv(p)]
    while chain[-1]:
        r = pneg(pmod(chain[-2], chain[-1]))
        if not r:
            break
        chain.append(primitive(r))
    return chain


def _sign_changes(chain, x):
    signs = []
    for p in chain:
        v = peval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    changes = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            changes += 1
    return changes


def count_roots(p, lo, hi, chain=None):
    """Number of distinct real roots of p in (lo, hi]."""
    if chain is None:
        chain = sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def interval_eval(p, lo, hi):
    """Enclosure of p([lo, hi]) by interval Horner; returns (min, max)."""
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(p):
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(cands) + c, max(cands) + c
    return acc_lo, acc_hi


def is_squarefree(p):
    g = pgcd(p, pderiv(p))
    return degree(g) == 0


def compose(p, q):
    """p(q(x))."""
    acc = ZERO
    for c in reversed(p):
        acc = padd(pmul(acc, q), (c,) if c != 0 else ())
    return acc


# ---------------------------------------------------------------------------
# Integer-polynomial constructions used for cyclotomic trigonometry.

def cyclotomic(n):
    """Coefficients (ints, constant first) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    p = tuple(Fraction(c) for c in [-1] + [0] * (n - 1) + [1])  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = pdivmod(p, tuple(Fraction(c) for c in cyclotomic(d)))
            assert not r
            p = q
    return tuple(int(c) for c in p)


def cos_minimal_poly(n):
    """Minimal polynomial of 2*cos(2*pi/n), monic with integer coefficients.

    Obtained by folding the palindromic cyclotomic polynomial through
    y = x + 1/x.  Degree is phi(n)/2 for n >= 3.
    """
    if n == 1:
        return (-2, 1)
    if n == 2:
        return (2, 1)
    phi = [Fraction(c) for c in cyclotomic(n)]
    m = (len(phi) - 1) // 2
    # Palindromic fold: Phi_n(x)/x^m = a_m + sum_{j>=1} a_{m+j} (x^j + x^-j),
    # and x^j + x^-j = V_j(x + 1/x) with V_0=2, V_1=y, V_{j+1}=y V_j - V_{j-1}.
    v_prev, v_cur = (Fraction(2),), (Fraction(0), Fraction(1))
    out = (phi[m],) if phi[m] != 0 else ()
    for j in range(1, m + 1):
        out = padd(out, pscale(v_cur, phi[m + j]))
        v_prev, v_cur = v_cur, psub(pmul((Fraction(0), Fraction(1)), v_cur), v_prev)
    return tuple(int(c) for c in out)


def chebyshev_t(j):
    """First-kind Chebyshev polynomial T_j as a rational tuple."""
    j = abs(j)
    a, b = (Fraction(1),), (Fraction(0), Fraction(1))
    if j == 0:
        return a
    for _ in range(j - 1):
        a, b = b, psub(pmul((Fraction(0), Fraction(2)), b), a)
    return b


def resultant(p, q):
    """Resultant of two rational polynomials via the subresultant-free PRS.

    Uses the classical recursion res(p, q) = lc(q)^(deg p - deg r) * (-1)^(dp*dq)
    * res(q, r) with r = p mod q.
    """
    p, q = trim(p), trim(q)
    if not p or not q:
        return Fraction(0)
    res = Fraction(1)
    while True:
        dp, dq = degree(p), degree(q)
        if dq == 0:
            return res * q[0] ** dp
        r = pmod(p, q)
        if not r:
            return Fraction(0)
        dr = degree(r)
        res *= q[-1] ** (dp - dr) * Fraction(-1) ** (dp * dq)
        p, q = q, r


def lagrange_interpolate(points):
    """Polynomial through exact (x, y) points, as a rational tuple."""
    n = len(points)
    out = ZERO
    for i in range(n):
        xi, yi = points[i]
        num = (Fraction(1),)
        den = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            xj = points[j][0]
            num = pmul(num, (-xj, Fraction(1)))
            den *= xi - xj
        out = padd(out, pscale(num, yi / den))
    return out
