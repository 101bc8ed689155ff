"""Integral homology of a glued surface and exact period data.

H_1 = ker(d1)/im(d2) of the cellular chain complex, computed with exact
Smith normal forms over arbitrary-precision integers.  The intersection
pairing is evaluated through the ribbon structure: at each vertex class the
cyclic order of band ends determines the algebraic crossing number of any
two edge-chains.
"""

from fractions import Fraction

from .errors import InputError


# ---------------------------------------------------------------------------
# Exact integer matrix utilities.  Matrices are lists of lists of ints.

def smith_normal_form(A):
    """Return (D, U, V) with D = U*A*V diagonal and U, V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def diagonalize(t0):
        t = t0
        while True:
            piv = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = abs(D[i][j])
                    if v and (best is None or v < best):
                        best, piv = v, (i, j)
            if piv is None:
                break
            i, j = piv
            swap_rows(t, i)
            swap_cols(t, j)
            while True:
                dirty = False
                for i in range(t + 1, m):
                    if D[i][t]:
                        q = -(D[i][t] // D[t][t])
                        add_row(t, i, q)
                        if D[i][t]:  # remainder became the new, smaller pivot
                            swap_rows(t, i)
                            dirty = True
                for j in range(t + 1, n):
                    if D[t][j]:
                        q = -(D[t][j] // D[t][t])
                        add_col(t, j, q)
                        if D[t][j]:
                            swap_cols(t, j)
                            dirty = True
                if not dirty:
                    break
            if D[t][t] < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            t += 1
            if t == m or t == n:
                break

    diagonalize(0)
    # Enforce the divisibility chain d_i | d_{i+1} of the invariant factors.
    r = min(m, n)
    while True:
        bad = None
        for i in range(r - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a and b and b % a:
                bad = i
                break
        if bad is None:
            break
        add_col(bad + 1, bad, 1)
        diagonalize(bad)
    return D, U, V


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def mat_det(A):
    """Exact determinant via Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def integer_kernel_basis(A):
    """Basis (list of int vectors) of the saturated kernel lattice of A."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    D, U, V = smith_normal_form(A)
    rank = sum(1 for i in range(min(m, n)) if D[i][i] != 0)
    basis = []
    for j in range(rank, n):
        basis.append([V[i][j] for i in range(n)])
    return basis


def solve_rational(A, b):
    """Solve A x = b exactly over Q (A full column rank); returns Fractions."""
    m, n = len(A), len(A[0])
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if M[r][n] != 0:
            raise InputError("inconsistent linear system")
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


def rational_kernel_basis(A):
    """Basis of the kernel of a matrix of Fractions, as Fraction vectors."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] for row in A]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------

class HomologyBasis:
    """2g independent integral cycles with their intersection matrix.

    ``cycles[i]`` is an integer vector over the surface's edge classes; the
    intersection matrix is skew-symmetric and unimodular.
    """

    def __init__(self, surface, cycles, intersection_matrix):
        self.surface = surface
        self.cycles = cycles
        self.intersection_matrix = intersection_matrix
        self._q_inverse = None

    @property
    def rank(self):
        return len(self.cycles)

    def q_inverse(self):
        """Inverse of the intersection matrix, exact integer entries."""
        if self._q_inverse is None:
            n = self.rank
            Q = self.intersection_matrix
            det = mat_det(Q)
            if abs(det) != 1:
                raise InputError("intersection matrix is not unimodular")
            inv = []
            for j in range(n):
                e = [1 if i == j else 0 for i in range(n)]
                col = solve_rational(Q, e)
                inv.append([int(x) for x in col])
            # columns were computed; transpose into row-major
            self._q_inverse = [[inv[j][i] for j in range(n)] for i in range(n)]
        return self._q_inverse

    def cycle_holonomy(self, i):
        """Total holonomy vector of basis cycle i (a PlanarVector)."""
        S = self.surface
        x = S.field.zero()
        y = S.field.zero()
        for e, coef in enumerate(self.cycles[i]):
            if coef:
                c, j = S.edge_classes[e]
                vec = S.cells[c][j]
                x = x + vec.x * coef
                y = y + vec.y * coef
        from .geometry import PlanarVector

        return PlanarVector(x, y)

    def class_from_crossings(self, crossings):
        """Homology coordinates of a transverse loop from signed edge crossings.

        ``crossings`` is an iterable of (edge_class_index, sign); the loop's
        class x satisfies Q x = w with w_j = sum of basis_j[edge] * sign.
        """
        w = [0] * self.rank
        counts = {}
        for e, s in crossings:
            counts[e] = counts.get(e, 0) + s
        for j in range(self.rank):
            cyc = self.cycles[j]
            w[j] = sum(cyc[e] * s for e, s in counts.items())
        sol = solve_rational(self.intersection_matrix, w)
        out = []
        for v in sol:
            if v.denominator != 1:
                raise InputError("crossing data is not a cycle")
            out.append(int(v))
        return out


def _boundary_maps(surface):
    E = len(surface.edge_classes)
    V = len(surface.vertex_classes)
    F = len(surface.cells)
    d1 = [[0] * E for _ in range(V)]
    for e, (c, j) in enumerate(surface.edge_classes):
        n = len(surface.cells[c])
        tail = surface.corner_class[(c, j)][0]
        head = surface.corner_class[(c, (j + 1) % n)][0]
        d1[head][e] += 1
        d1[tail][e] -= 1
    d2 = [[0] * F for _ in range(E)]
    for c in range(F):
        for j in range(len(surface.cells[c])):
            e, sign = surface.edge_class_of[(c, j)]
            d2[e][c] += sign
    return d1, d2


def homology_basis(surface):
    """Integral H_1 basis of a connected surface, with intersection matrix."""
    surface.require_connected()
    d1, d2 = _boundary_maps(surface)
    E = len(surface.edge_classes)
    kernel = integer_kernel_basis(d1)  # list of E-vectors
    kd = len(kernel)
    if kd == 0:
        return HomologyBasis(surface, [], [])
    # Coordinates of each 2-cell boundary in the kernel basis.
    K = [[kernel[b][e] for b in range(kd)] for e in range(E)]  # E x kd
    F = len(surface.cells)
    C = [[0] * F for _ in range(kd)]
    for c in range(F):
        col = [d2[e][c] for e in range(E)]
        sol = solve_rational(K, col)
        for b in range(kd):
            if sol[b].denominator != 1:
                raise InputError("boundary is not integral in kernel basis")
            C[b][c] = int(sol[b])
    D, U, Vm = smith_normal_form(C)
    # New kernel basis K~ = K * U^{-1}; in it the image lattice is spanned by
    # d_i * e_i, so classes with d_i = 0 form a basis of the free quotient.
    Uinv_cols = []
    for j in range(kd):
        e = [1 if i == j else 0 for i in range(kd)]
        col = solve_rational(U, e)
        Uinv_cols.append([int(x) for x in col])
    cycles = []
    for i in range(kd):
        d = D[i][i] if i < min(len(D), len(D[0]) if D else 0) else 0
        if d == 0:
            vec = [0] * E
            for e in range(E):
                vec[e] = sum(K[e][b] * Uinv_cols[i][b] for b in range(kd))
            cycles.append(vec)
        elif abs(d) != 1:
            raise InputError("torsion in H_1: input is not a closed orientable surface")
    if len(cycles) != 2 * surface.genus:
        raise InputError("homology rank disagrees with genus")
    Q = intersection_matrix(surface, cycles)
    hb = HomologyBasis(surface, cycles, Q)
    if abs(mat_det(Q)) != 1 and cycles:
        raise InputError("intersection matrix is not unimodular")
    return hb


def intersection_matrix(surface, cycles):
    """Pairwise algebraic intersection numbers of edge-chain cycles."""
    ends_per_vertex = surface.band_end_orders()
    n = len(cycles)
    Q = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            val = _intersection_number(ends_per_vertex, cycles[i], cycles[j])
            Q[i][j] = val
            Q[j][i] = -val
    return Q


def _intersection_number(ends_per_vertex, x, y):
    total = Fraction(0)
    for ends in ends_per_vertex:
        c = [end * x[e] for (e, end) in ends]
        d = [end * y[e] for (e, end) in ends]
        if not any(c) or not any(d):
            continue
        suffix = 0
        cross = 0
        diag = 0
        for ci, di in zip(reversed(c), reversed(d)):
            cross += ci * suffix
            suffix += di
            diag += ci * di
        total += cross + Fraction(diag, 2)
    if total.denominator != 1:
        raise InputError("intersection pairing did not come out integral")
    return int(total)


# ---------------------------------------------------------------------------

class PeriodMatrix:
    """Exact periods of Re and Im of the 1-form over a homology basis."""

    def __init__(self, basis, re_row, im_row):
        self.basis = basis
        self.re_row = re_row
        self.im_row = im_row

    @property
    def rank(self):
        return len(self.re_row)

    def cup(self, u, v):
        """Symplectic (cup) pairing of two coclasses in dual-basis coordinates.

        Entries of u, v may be rationals or field elements; the cup matrix in
        the basis dual to the cycles is the inverse transpose of the
        intersection matrix.
        """
        qinv = self.basis.q_inverse()
        n = self.rank
        field = self.basis.surface.field
        total = field.zero()
        for i in range(n):
            ui = u[i]
            for j in range(n):
                if qinv[j][i]:
                    total = total + (ui * v[j]) * qinv[j][i]
        return total


def period_matrix(surface, basis):
    """Period rows (integrals of Re and Im over each basis cycle)."""
    re_row, im_row = [], []
    for i in range(basis.rank):
        hol = basis.cycle_holonomy(i)
        re_row.append(hol.x)
        im_row.append(hol.y)
    return PeriodMatrix(basis, re_row, im_row)


def pairing(coclass, cycle, basis=None):
    """Cap product of a coclass (dual-basis coordinates) with a cycle.

    ``cycle`` is either an index into the basis or an integer coordinate
    vector over the basis; the pairing is then sum_i coclass_i * cycle_i.
    """
    if isinstance(cycle, int):
        if not 0 <= cycle < len(coclass):
            raise InputError("cycle index out of range")
        vec = [1 if i == cycle else 0 for i in range(len(coclass))]
    else:
        vec = list(cycle)
    if len(vec) != len(coclass):
        raise InputError("dimension mismatch between coclass and cycle")
    total = None
    for c, m in zip(coclass, vec):
        term = c * m
        total = term if total is None else total + term
    return total
