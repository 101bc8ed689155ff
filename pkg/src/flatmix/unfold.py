"""Translation surfaces from glued polygons, and the billiard unfolding.

A surface is a list of ccw Euclidean polygon cells (edge-vector loops) plus a
perfect matching of directed edges with opposite holonomy.  The unfolding of
a rational polygon takes one copy per element of the dihedral group generated
by the side reflections (always the full group of order 2k for uniformity)
and glues copy g to copy g*s_i along side i.
"""

from fractions import Fraction

from .errors import DisconnectedError, NotAnUnfoldingError, SurfaceError
from .geometry import PlanarVector, apply_matrix
from .polygons import _segments_touch


class TranslationSurface:
    """Immutable glued-polygon surface with derived flat invariants.

    cells[c] is the ccw list of edge vectors of cell c; directed edge (c, j)
    runs from vertex j to vertex j+1.  ``gluings`` is an involutive dict
    pairing every directed edge with one of opposite holonomy.
    """

    def __init__(self, cells, gluings, field, _provenance=None, require_translation=True):
        self.cells = [list(cell) for cell in cells]
        self.gluings = dict(gluings)
        self.field = field
        self._provenance = _provenance
        self._translation = require_translation
        self._validate_cells()
        self._validate_gluings()
        self._index_edges()
        self._walk_vertices()
        self._compute_genus_area()

    # -- validation ----------------------------------------------------------

    def _validate_cells(self):
        if not self.cells:
            raise SurfaceError("surface needs at least one cell")
        self._anchors = []
        for c, cell in enumerate(self.cells):
            if len(cell) < 3:
                raise SurfaceError(f"cell {c} has fewer than 3 edges")
            total = cell[0]
            for e in cell[1:]:
                total = total + e
            if not total.is_zero():
                raise SurfaceError(f"cell {c} does not close up")
            pts = [PlanarVector(self.field.zero(), self.field.zero())]
            for e in cell[:-1]:
                pts.append(pts[-1] + e)
            self._anchors.append(pts)
            if not self._translation:
                continue
            area2 = self.field.zero()
            n = len(cell)
            for i in range(n):
                area2 = area2 + pts[i].cross(pts[(i + 1) % n])
            if area2.sign() <= 0:
                raise SurfaceError(f"cell {c} is not positively oriented")
            for i in range(n):
                a1, a2 = pts[i], pts[(i + 1) % n]
                for j in range(i + 1, n):
                    if j == i or (j + 1) % n == i or (i + 1) % n == j:
                        continue
                    if _segments_touch(a1, a2, pts[j], pts[(j + 1) % n]):
                        raise SurfaceError(f"cell {c} is self-intersecting")

    def _validate_gluings(self):
        seen = set()
        for (c, j), (c2, j2) in self.gluings.items():
            if not (0 <= c < len(self.cells) and 0 <= j < len(self.cells[c])):
                raise SurfaceError(f"gluing references missing edge ({c},{j})")
            if self.gluings.get((c2, j2)) != (c, j):
                raise SurfaceError("gluing map is not an involution")
            if (c, j) == (c2, j2):
                raise SurfaceError("an edge cannot be glued to itself")
            if not (self.cells[c][j] + self.cells[c2][j2]).is_zero():
                raise SurfaceError(
                    f"glued edges ({c},{j}) and ({c2},{j2}) do not have opposite holonomy"
                )
            seen.add((c, j))
        for c, cell in enumerate(self.cells):
            for j in range(len(cell)):
                if (c, j) not in seen:
                    raise SurfaceError(f"edge ({c},{j}) is unglued")

    # -- edge classes ----------------------------------------------------------

    def _index_edges(self):
        self.edge_classes = []
        self.edge_class_of = {}
        for c, cell in enumerate(self.cells):
            for j in range(len(cell)):
                if (c, j) in self.edge_class_of:
                    continue
                idx = len(self.edge_classes)
                self.edge_classes.append((c, j))
                self.edge_class_of[(c, j)] = (idx, 1)
                self.edge_class_of[self.gluings[(c, j)]] = (idx, -1)

    # -- vertex classes ---------------------------------------------------------

    def _next_corner_ccw(self, corner):
        c, v = corner
        n = len(self.cells[c])
        return self.gluings[(c, (v - 1) % n)]

    def _walk_vertices(self):
        self.vertex_classes = []
        self.vertex_windings = []
        self.corner_class = {}
        seen = set()
        for c, cell in enumerate(self.cells):
            for v in range(len(cell)):
                if (c, v) in seen:
                    continue
                orbit = []
                cur = (c, v)
                while cur not in seen:
                    seen.add(cur)
                    orbit.append(cur)
                    cur = self._next_corner_ccw(cur)
                idx = len(self.vertex_classes)
                for p, corner in enumerate(orbit):
                    self.corner_class[corner] = (idx, p)
                self.vertex_classes.append(orbit)
                self.vertex_windings.append(self._winding(orbit) if self._translation else 0)

    def _winding(self, orbit):
        """Total cone angle around the vertex class, in units of 2*pi."""
        one = self.field.one()
        zero = self.field.zero()
        xaxis = PlanarVector(one, zero)
        rays = [self.cells[c][v] for (c, v) in orbit]
        m = len(rays)
        passes = 0
        for i in range(m):
            u, v = rays[i], rays[(i + 1) % m]
            if _ray_equals(u, xaxis):
                passes += 1
            elif _ccw_sector_contains(u, v, xaxis):
                passes += 1
        if passes < 1:
            raise SurfaceError("vertex with non-positive cone angle")
        return passes

    # -- global invariants -------------------------------------------------------

    def _compute_genus_area(self):
        n_vertices = len(self.vertex_classes)
        n_edges = len(self.edge_classes)
        n_faces = len(self.cells)
        euler = n_vertices - n_edges + n_faces
        if self._translation:
            total_excess = sum(w - 1 for w in self.vertex_windings)
            # Gauss-Bonnet: sum of (angle - 2pi) = 2pi(2g - 2) must agree with
            # the Euler characteristic of the glued complex.
            if total_excess % 2 or euler != -total_excess:
                raise SurfaceError(
                    "Euler characteristic and Gauss-Bonnet disagree: bad gluing data"
                )
            self.genus = (total_excess + 2) // 2
        else:
            if euler % 2:
                raise SurfaceError("odd Euler characteristic: not a closed surface")
            self.genus = (2 - euler) // 2

        total = self.field.zero()
        for c, cell in enumerate(self.cells):
            pts = self._anchors[c]
            n = len(cell)
            for i in range(n):
                total = total + pts[i].cross(pts[(i + 1) % n])
        self.area = total * Fraction(1, 2)

        # connectivity over the cell-gluing graph
        parent = list(range(len(self.cells)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for (c, _), (c2, _2) in self.gluings.items():
            ra, rb = find(c), find(c2)
            if ra != rb:
                parent[ra] = rb
        self.n_components = len({find(c) for c in range(len(self.cells))})

    # -- accessors ---------------------------------------------------------------

    def require_connected(self):
        if self.n_components != 1:
            raise DisconnectedError(f"surface has {self.n_components} components")

    def vertex_position(self, c, v):
        """Anchor coordinates of vertex v of cell c (cell anchored at origin)."""
        return self._anchors[c][v]

    def cone_points(self):
        """Vertex class indices with cone angle > 2*pi."""
        return [i for i, w in enumerate(self.vertex_windings) if w > 1]

    def cone_angle_multiples(self):
        """Cone angles as multiples of 2*pi, one per vertex class."""
        return list(self.vertex_windings)

    def stratum_signature(self):
        """Multiset {m : some cone angle equals 2*pi*(m+1)}, sorted."""
        return sorted(w - 1 for w in self.vertex_windings if w > 1)

    def edge_vector(self, c, j):
        return self.cells[c][j]

    def n_edges(self, c):
        return len(self.cells[c])

    def band_end_orders(self):
        """For each vertex class, the ccw cyclic list of (edge_class, end) pairs.

        ``end`` is +1 at the head of the class representative and -1 at its
        tail.  This is the ribbon-graph data used by the intersection pairing.
        """
        out = []
        for orbit in self.vertex_classes:
            ends = []
            for (c, v) in orbit:
                n = len(self.cells[c])
                e = (c, (v - 1) % n)
                idx, sign = self.edge_class_of[e]
                # Our vertex is the head of directed edge e; if e is the
                # representative that is the class head (+1), otherwise it is
                # the tail of the representative (-1).
                ends.append((idx, 1 if sign == 1 else -1))
            out.append(ends)
        return out


def _ray_equals(u, d):
    return u.cross(d).sign() == 0 and u.dot(d).sign() > 0


def _ccw_sector_contains(u, v, d):
    """Is direction d strictly inside the ccw sector from u to v (angle in (0,2pi))?"""
    if _ray_equals(u, d) or _ray_equals(v, d):
        return False
    cuv = u.cross(v).sign()
    if cuv > 0:
        return u.cross(d).sign() > 0 and d.cross(v).sign() > 0
    if cuv < 0:
        return not (v.cross(d).sign() > 0 and d.cross(u).sign() > 0)
    if u.dot(v).sign() < 0:  # angle exactly pi
        return u.cross(d).sign() > 0
    raise SurfaceError("degenerate zero-angle sector")


class DeckRotation:
    """Cell permutation realizing multiplication of the 1-form by e^(2*pi*i/k)."""

    def __init__(self, cell_permutation, rotation_order):
        self.cell_permutation = list(cell_permutation)
        self.rotation_order = rotation_order

    def apply(self, times=1):
        """The permutation iterated ``times``, as a list."""
        n = len(self.cell_permutation)
        out = list(range(n))
        for _ in range(times % _permutation_order(self.cell_permutation, self.rotation_order)):
            out = [self.cell_permutation[c] for c in out]
        return out

    def order(self):
        return _permutation_order(self.cell_permutation, self.rotation_order)


def _permutation_order(perm, bound):
    n = len(perm)
    cur = list(range(n))
    for step in range(1, bound + 1):
        cur = [perm[c] for c in cur]
        if cur == list(range(n)):
            return step
    raise NotAnUnfoldingError("deck permutation order exceeds k")


# ---------------------------------------------------------------------------
# Dihedral group bookkeeping for the unfolding.  Elements are ("r", m) for
# rotation by 2*pi*m/k and ("s", m) for reflection across the line at angle
# pi*m/k; composition is group multiplication (apply right factor first).

def _compose(g, h, k):
    (tg, a), (th, b) = g, h
    if tg == "r" and th == "r":
        return ("r", (a + b) % k)
    if tg == "r" and th == "s":
        return ("s", (b + a) % k)
    if tg == "s" and th == "r":
        return ("s", (a - b) % k)
    return ("r", (a - b) % k)


def _matrix(g, poly):
    typ, m = g
    k = poly.k
    c, s = poly.cos_sin_pi(Fraction(2 * m, k))
    if typ == "r":
        return ((c, -s), (s, c))
    return ((c, s), (s, -c))


def unfold(polygon):
    """Katok-Zemlyakov unfolding over the full dihedral group of order 2k.

    Returns a connected TranslationSurface carrying provenance for
    ``deck_rotation``.  If the reflection group orbit is disconnected (it is
    not, for valid rational polygons, but the construction stays uniform),
    the component of the identity copy is returned.
    """
    P = polygon
    k, n = P.k, P.n
    group = [("r", m) for m in range(k)] + [("s", m) for m in range(k)]
    index = {g: i for i, g in enumerate(group)}

    mirror = []
    for i in range(n):
        frac = P.direction_fracs[i] * k
        assert frac.denominator == 1
        mirror.append(("s", int(frac) % k))

    cells = []
    side_at_position = []  # per cell: position j -> original side index
    orientation = []
    for g in group:
        M = _matrix(g, P)
        preserving = g[0] == "r"
        orientation.append(1 if preserving else -1)
        if preserving:
            edge_list = [apply_matrix(M, P.edge_vectors[j]) for j in range(n)]
            side_map = list(range(n))
        else:
            edge_list = [-apply_matrix(M, P.edge_vectors[n - 1 - j]) for j in range(n)]
            side_map = [n - 1 - j for j in range(n)]
        cells.append(edge_list)
        side_at_position.append(side_map)

    def position_of_side(gi, i):
        return i if orientation[gi] == 1 else n - 1 - i

    gluings = {}
    for gi, g in enumerate(group):
        for i in range(n):
            h = _compose(g, mirror[i], k)
            hi = index[h]
            a = (gi, position_of_side(gi, i))
            b = (hi, position_of_side(hi, i))
            gluings[a] = b
            gluings[b] = a

    # restrict to the component of the identity copy
    comp = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for j in range(n):
            c2, _ = gluings[(c, j)]
            if c2 not in comp:
                comp.add(c2)
                frontier.append(c2)
    keep = sorted(comp)
    remap = {old: new for new, old in enumerate(keep)}
    cells2 = [cells[c] for c in keep]
    gluings2 = {}
    for (c, j), (c2, j2) in gluings.items():
        if c in comp:
            gluings2[(remap[c], j)] = (remap[c2], j2)

    provenance = {
        "kind": "unfolding",
        "k": k,
        "labels": [group[c] for c in keep],
        "label_index": {group[c]: remap[c] for c in keep},
        "orientation": [orientation[c] for c in keep],
        "polygon": P,
    }
    return TranslationSurface(cells2, gluings2, P.field, _provenance=provenance)


def stratum_signature(surface):
    return surface.stratum_signature()


def transform_surface(surface, matrix):
    """Apply an orientation-preserving linear map to every edge vector."""
    (a, b), (c, d) = matrix
    if (a * d - b * c).sign() <= 0:
        raise SurfaceError("transform must preserve orientation")
    cells = [[apply_matrix(matrix, v) for v in cell] for cell in surface.cells]
    return TranslationSurface(cells, surface.gluings, surface.field)


def scale_surface(surface, factor):
    """Scale all holonomies by a positive rational or field element."""
    cells = [[v.scale(factor) for v in cell] for cell in surface.cells]
    return TranslationSurface(cells, surface.gluings, surface.field)


def deck_rotation(surface, polygon):
    """The order-k deck transformation of an unfolding, as a cell permutation."""
    prov = surface._provenance
    if not prov or prov.get("kind") != "unfolding" or prov["polygon"] is not polygon:
        raise NotAnUnfoldingError("surface was not produced by unfold() of this polygon")
    k = prov["k"]
    labels = prov["labels"]
    label_index = prov["label_index"]
    perm = []
    for g in labels:
        target = _compose(("r", 1 % k), g, k)
        if target not in label_index:
            raise NotAnUnfoldingError("component is not invariant under the deck rotation")
        perm.append(label_index[target])

    rot = polygon.cos_sin_pi(Fraction(2, k))
    R = ((rot[0], -rot[1]), (rot[1], rot[0]))
    for c, cell in enumerate(surface.cells):
        target_cell = surface.cells[perm[c]]
        for j, vec in enumerate(cell):
            if not (apply_matrix(R, vec) - target_cell[j]).is_zero():
                raise NotAnUnfoldingError("deck permutation does not rotate holonomies")
    return DeckRotation(perm, k)
