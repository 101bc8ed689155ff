"""Directional flow machinery on translation surfaces.

A single straight-line tracer (exact field arithmetic or binary64) backs
first-return interval exchanges, separatrix and saddle-connection tracing,
cylinder decompositions, and rigidity configurations.  Points live in
cell-local anchor coordinates; "time" along an orbit is the ray parameter t
of p + t*d, i.e. the flow is normalized so that one time unit advances by
the direction vector d.
"""

from .errors import FlatmixError, InputError, PrecisionError
from .geometry import PlanarVector


class BudgetError(FlatmixError):
    code = "FLOW_BUDGET"


# ---------------------------------------------------------------------------
# Numeric modes

class ExactMode:
    exact = True

    def __init__(self, field):
        self.field = field

    def coord(self, field_elem):
        return field_elem

    def from_fraction(self, q):
        return self.field.from_rational(q)

    def sign(self, x):
        return x.sign()

    def to_float(self, x):
        return float(x)


class FloatMode:
    exact = False

    def __init__(self, eps=1e-10):
        self.eps = eps

    def coord(self, field_elem):
        return float(field_elem)

    def from_fraction(self, q):
        return float(q)

    def sign(self, x):
        if x > self.eps:
            return 1
        if x < -self.eps:
            return -1
        return 0

    def to_float(self, x):
        return x


def make_mode(surface, exact):
    return ExactMode(surface.field) if exact else FloatMode()


class Direction:
    """Flow direction: an exact PlanarVector, with float shadow."""

    def __init__(self, vector=None, floats=None):
        if vector is None and floats is None:
            raise InputError("direction needs a vector")
        self.vector = vector
        if floats is None:
            floats = (float(vector.x), float(vector.y))
        self.floats = floats
        if vector is not None and vector.is_zero():
            raise InputError("direction must be nonzero")
        if vector is None and floats == (0.0, 0.0):
            raise InputError("direction must be nonzero")

    @property
    def exact(self):
        return self.vector is not None

    def components(self, mode):
        if mode.exact:
            if self.vector is None:
                raise InputError("exact mode requires an exact direction vector")
            return (self.vector.x, self.vector.y)
        return self.floats

    @staticmethod
    def from_fractions(surface, fx, fy):
        f = surface.field
        return Direction(PlanarVector(f.from_rational(fx), f.from_rational(fy)))


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _dot(ax, ay, bx, by):
    return ax * bx + ay * by


# ---------------------------------------------------------------------------

class Transversal:
    """A 1-D section of the surface: a chain of straight pieces.

    Each piece is (cell, base, w, offset, length): points are base + s*w for
    s in [0,1], carrying global parameter offset + s*length.  Pieces of a
    multi-piece transversal must be parallel and consistently measured.
    """

    def __init__(self, pieces):
        if not pieces:
            raise InputError("transversal needs at least one piece")
        self.pieces = pieces
        self.total = pieces[-1][3] + pieces[-1][4]

    @classmethod
    def segment(cls, cell, base, w, length=None):
        if length is None:
            length = 1
        return cls([(cell, base, w, 0, length)])

    @classmethod
    def from_edge(cls, surface, direction, cell=None, edge=None):
        """The full edge (cell, edge) as a section, seen from the side the
        direction points into; parameter is the edge parameter."""
        if cell is None:
            cell, edge = 0, 0
        vec = surface.cells[cell][edge]
        d = direction.vector
        s = _cross(vec.x, vec.y, d.x, d.y).sign()
        if s == 0:
            raise InputError("direction is parallel to the chosen edge")
        if s < 0:
            cell, edge = surface.gluings[(cell, edge)]
            vec = surface.cells[cell][edge]
        base = surface.vertex_position(cell, edge)
        return cls([(cell, base, vec, 0, 1)])

    def point_at(self, param, mode):
        for (cell, base, w, off, length) in self.pieces:
            if param <= off + length or (cell, base, w, off, length) is self.pieces[-1]:
                s = (param - off) / length if not mode.exact else None
                if mode.exact:
                    sfrac = (param - off) / length
                    px = mode.coord(base.x) + mode.coord(w.x) * sfrac
                    py = mode.coord(base.y) + mode.coord(w.y) * sfrac
                else:
                    px = mode.coord(base.x) + mode.coord(w.x) * s
                    py = mode.coord(base.y) + mode.coord(w.y) * s
                return cell, (px, py)
        raise InputError("parameter outside transversal")


class FlowResult:
    __slots__ = ("kind", "time", "cell", "point", "crossings", "data")

    def __init__(self, kind, time, cell, point, crossings, data=None):
        self.kind = kind
        self.time = time
        self.cell = cell
        self.point = point
        self.crossings = crossings
        self.data = data


class Tracer:
    """Straight-line flow in a fixed direction on a fixed surface."""

    def __init__(self, surface, direction, mode, pins=None, max_transits=200000):
        self.surface = surface
        self.mode = mode
        self.direction = direction
        self.dx, self.dy = direction.components(mode)
        self.max_transits = max_transits
        # anchored vertex coordinates per cell, in mode numbers
        self.verts = []
        for c, cell in enumerate(surface.cells):
            pts = [(mode.coord(surface.vertex_position(c, v).x),
                    mode.coord(surface.vertex_position(c, v).y))
                   for v in range(len(cell))]
            self.verts.append(pts)
        self.edge_nums = []
        for c, cell in enumerate(surface.cells):
            self.edge_nums.append([(mode.coord(v.x), mode.coord(v.y)) for v in cell])
        if pins is None:
            pins = set(surface.cone_points())
        self.pins = set(pins)
        self.walls = {}  # cell -> list of (wall_id, (bx,by), (wx,wy))
        self.wall_info = {}
        self.edge_marks = {}  # (cell, edge) -> list of (mark_id, s0, s1, piece)
        self._next_wall = 0
        self.vertex_passes = 0

    # -- registration --------------------------------------------------------

    def add_wall(self, cell, base, w, info=None):
        wid = self._next_wall
        self._next_wall += 1
        b = (self.mode.coord(base.x), self.mode.coord(base.y)) if hasattr(base, "x") else base
        wv = (self.mode.coord(w.x), self.mode.coord(w.y)) if hasattr(w, "x") else w
        self.walls.setdefault(cell, []).append((wid, b, wv))
        self.wall_info[wid] = info
        return wid

    def add_transversal(self, transversal):
        """Register a transversal; returns the list of wall/mark ids."""
        ids = []
        for piece in transversal.pieces:
            cell, base, w, off, length = piece
            edge_loc = self._locate_on_edge(cell, base, w)
            if edge_loc is not None:
                c2, j2, s0, s1 = edge_loc
                mid = ("mark", self._next_wall)
                self._next_wall += 1
                self.edge_marks.setdefault((c2, j2), []).append(
                    (mid, s0, s1, piece)
                )
                ids.append(mid)
            else:
                wid = self.add_wall(cell, base, w, info=("transversal", piece))
                ids.append(wid)
        return ids

    def _locate_on_edge(self, cell, base, w):
        """If the piece lies on an edge of its cell, return (cell, edge, s0, s1)."""
        pts = self.verts[cell]
        n = len(pts)
        bx, by = self.mode.coord(base.x), self.mode.coord(base.y)
        wx, wy = self.mode.coord(w.x), self.mode.coord(w.y)
        for j in range(n):
            ax, ay = pts[j]
            ex, ey = self.edge_nums[cell][j]
            if self.mode.sign(_cross(ex, ey, wx, wy)) != 0:
                continue
            if self.mode.sign(_cross(ex, ey, bx - ax, by - ay)) != 0:
                continue
            # collinear: compute parameters of base and base+w along the edge
            den = _dot(ex, ey, ex, ey)
            s0 = _dot(bx - ax, by - ay, ex, ey) / den
            s1 = _dot(bx + wx - ax, by + wy - ay, ex, ey) / den
            if self.mode.sign(s0) >= 0 and self.mode.sign(1 - s0) >= 0 \
               and self.mode.sign(s1) >= 0 and self.mode.sign(1 - s1) >= 0:
                return (cell, j, s0, s1)
        return None

    # -- sector tests ----------------------------------------------------------

    def _sector_rays(self, corner):
        c, v = corner
        n = len(self.surface.cells[c])
        tail = self.edge_nums[c][v]
        prev = self.edge_nums[c][(v - 1) % n]
        head = (-prev[0], -prev[1])
        return tail, head

    def corner_rays_containing(self, vclass, vec):
        """Corners of a vertex class whose sector contains ``vec``.

        Returns (corner, kind) pairs with kind 'inside' or 'tail' (vec along
        the corner's outgoing edge); each geometric ray is reported once.
        """
        out = []
        vx, vy = vec
        for corner in self.surface.vertex_classes[vclass]:
            tail, head = self._sector_rays(corner)
            if self._ray_eq(tail, (vx, vy)):
                out.append((corner, "tail"))
            elif self._sector_contains(tail, head, (vx, vy)):
                out.append((corner, "inside"))
        return out

    def _ray_eq(self, u, w):
        return (self.mode.sign(_cross(u[0], u[1], w[0], w[1])) == 0
                and self.mode.sign(_dot(u[0], u[1], w[0], w[1])) > 0)

    def _sector_contains(self, u, v, w):
        if self._ray_eq(u, w) or self._ray_eq(v, w):
            return False
        cuv = self.mode.sign(_cross(u[0], u[1], v[0], v[1]))
        cu = self.mode.sign(_cross(u[0], u[1], w[0], w[1]))
        cv = self.mode.sign(_cross(w[0], w[1], v[0], v[1]))
        if cuv > 0:
            return cu > 0 and cv > 0
        if cuv < 0:
            return not (self.mode.sign(_cross(v[0], v[1], w[0], w[1])) > 0
                        and self.mode.sign(_cross(w[0], w[1], u[0], u[1])) > 0)
        if self.mode.sign(_dot(u[0], u[1], v[0], v[1])) < 0:
            return cu > 0
        raise InputError("degenerate sector")

    # -- the advance loop --------------------------------------------------------

    def flow(self, cell, point, tmax=None, stop_walls=False, collect=False,
             ignore_wall=None, ignore_edge=None, backward=False,
             record_pieces=None):
        """Flow from a point until a stopping event.

        Returns FlowResult with kind one of 'vertex' (pinned vertex hit),
        'wall', 'mark', 'time' (reached tmax), and data describing the hit.
        Raises BudgetError when the transit budget is exhausted.  When
        ``record_pieces`` is a list, each traversed straight piece is
        appended as (cell, start_point, piece_time).
        """
        dx, dy = (-self.dx, -self.dy) if backward else (self.dx, self.dy)
        mode = self.mode
        t_acc = mode.from_fraction(0)
        crossings = [] if collect else None
        self.vertex_passes = 0
        px, py = point
        cell, (px, py) = self._normalize_start(cell, px, py, dx, dy)
        first = True
        for _ in range(self.max_transits):
            ev = self._advance(cell, px, py, dx, dy,
                               ignore_edge if first else None,
                               ignore_wall if first else None,
                               stop_walls,
                               None if tmax is None else tmax - t_acc)
            first = False
            kind = ev[0]
            if kind == "time":
                t, qx, qy = ev[1], ev[2], ev[3]
                if record_pieces is not None:
                    record_pieces.append((cell, (px, py), t))
                return FlowResult("time", tmax, cell, (qx, qy), crossings)
            if kind == "wall":
                t, qx, qy, wid, s = ev[1], ev[2], ev[3], ev[4], ev[5]
                if record_pieces is not None:
                    record_pieces.append((cell, (px, py), t))
                return FlowResult("wall", t_acc + t, cell, (qx, qy), crossings,
                                  data=(wid, s))
            if kind == "edge":
                t, j, s = ev[1], ev[2], ev[3]
                if record_pieces is not None:
                    record_pieces.append((cell, (px, py), t))
                t_acc = t_acc + t
                c2, j2 = self.surface.gluings[(cell, j)]
                s2 = 1 - s
                if collect:
                    idx, _sgn = self.surface.edge_class_of[(cell, j)]
                    rc, rj = self.surface.edge_classes[idx]
                    rex, rey = self.edge_nums[rc][rj]
                    csign = self.mode.sign(_cross(rex, rey, dx, dy))
                    crossings.append((idx, csign))
                # Marks live on one directed edge of the pair; a crossing in
                # either flow direction must see them.
                hit = self._check_marks(cell, j, s) or self._check_marks(c2, j2, s2)
                if hit is not None:
                    mid, local, piece, mcell, mpoint = hit
                    return FlowResult("mark", t_acc, mcell, mpoint, crossings,
                                      data=(mid, local, piece))
                bx, by = self.verts[c2][j2]
                ex, ey = self.edge_nums[c2][j2]
                px, py = bx + s2 * ex, by + s2 * ey
                cell = c2
                continue
            if kind == "vertex":
                t, v = ev[1], ev[2]
                if record_pieces is not None:
                    record_pieces.append((cell, (px, py), t))
                t_acc = t_acc + t
                # pass through regular vertices, travelling along any chain of
                # flow-aligned edges on the way; a closed chain of regular
                # vertices (edge loop parallel to the flow) would never exit
                chain_budget = 4 * sum(len(c) for c in self.surface.cells) + 8
                while True:
                    chain_budget -= 1
                    if chain_budget < 0:
                        raise PrecisionError(
                            "flow trapped along a closed edge chain"
                        )
                    vclass, _pos = self.surface.corner_class[(cell, v)]
                    if vclass in self.pins or self.surface.vertex_windings[vclass] > 1:
                        qx, qy = self.verts[cell][v]
                        return FlowResult("vertex", t_acc, cell, (qx, qy),
                                          crossings, data=(vclass, (cell, v)))
                    self.vertex_passes += 1
                    nxt = self._continue_through_vertex(vclass, dx, dy)
                    if nxt is None:
                        raise PrecisionError("could not continue through regular vertex")
                    kind2, corner = nxt
                    if kind2 == "inside":
                        cell, v = corner
                        break
                    # tail: travel along the outgoing edge to its far endpoint
                    if collect:
                        raise InputError("crossing collection unsupported along edges")
                    c2, v2 = corner
                    ex, ey = self.edge_nums[c2][v2]
                    elen = _dot(ex, ey, dx, dy) / _dot(dx, dy, dx, dy)
                    if record_pieces is not None:
                        record_pieces.append((c2, self.verts[c2][v2], elen))
                    t_acc = t_acc + elen
                    if tmax is not None and mode.sign(t_acc - tmax) > 0:
                        raise PrecisionError("time expired while travelling along an edge")
                    n2 = len(self.surface.cells[c2])
                    cell, v = c2, (v2 + 1) % n2
                px, py = self.verts[cell][v]
                continue
            raise InputError(f"unknown event {kind}")
        raise BudgetError("transit budget exhausted")

    def _normalize_start(self, cell, px, py, dx, dy):
        """If the start point sits on an edge with the direction pointing out
        of the cell, step through the gluing first."""
        mode = self.mode
        pts = self.verts[cell]
        n = len(pts)
        for j in range(n):
            ex, ey = self.edge_nums[cell][j]
            # outward means the direction lies strictly right of the edge
            if mode.sign(_cross(ex, ey, dx, dy)) >= 0:
                continue
            ax, ay = pts[j]
            if mode.sign(_cross(ex, ey, px - ax, py - ay)) != 0:
                continue
            den = _dot(ex, ey, ex, ey)
            s = _dot(px - ax, py - ay, ex, ey) / den
            if mode.sign(s) <= 0 or mode.sign(1 - s) <= 0:
                continue  # endpoints are vertex starts, handled elsewhere
            c2, j2 = self.surface.gluings[(cell, j)]
            s2 = 1 - s
            bx, by = self.verts[c2][j2]
            ex2, ey2 = self.edge_nums[c2][j2]
            return c2, (bx + s2 * ex2, by + s2 * ey2)
        return cell, (px, py)

    def _check_marks(self, cell, edge, s):
        mode = self.mode
        for (mid, s0, s1, piece) in self.edge_marks.get((cell, edge), ()):
            lo, hi = (s0, s1) if mode.sign(s1 - s0) >= 0 else (s1, s0)
            if mode.sign(s - lo) >= 0 and mode.sign(hi - s) > 0:
                bx, by = self.verts[cell][edge]
                ex, ey = self.edge_nums[cell][edge]
                qx, qy = bx + s * ex, by + s * ey
                local = (s - s0) / (s1 - s0)
                return (mid, local, piece, cell, (qx, qy))
        return None

    def _continue_through_vertex(self, vclass, dx, dy):
        hits = []
        for corner in self.surface.vertex_classes[vclass]:
            tail, head = self._sector_rays(corner)
            if self._ray_eq(tail, (dx, dy)):
                hits.append(("tail", corner))
            elif self._sector_contains(tail, head, (dx, dy)):
                hits.append(("inside", corner))
        if len(hits) != 1:
            return None
        return hits[0]

    def _advance(self, cell, px, py, dx, dy, ignore_edge, ignore_wall,
                 stop_walls, remaining):
        mode = self.mode
        pts = self.verts[cell]
        n = len(pts)
        # priority for equal-time ties: wall > vertex > edge
        _PRIO = {"wall": 0, "vertex": 1, "edge": 2}
        best = None  # (t, kind, payload...)

        def consider(cand):
            nonlocal best
            if best is None:
                best = cand
                return
            c = mode.sign(cand[0] - best[0])
            if c < 0 or (c == 0 and _PRIO[cand[1]] < _PRIO[best[1]]):
                best = cand

        for j in range(n):
            if j == ignore_edge:
                continue
            ax, ay = pts[j]
            ex, ey = self.edge_nums[cell][j]
            den = _cross(dx, dy, ex, ey)
            if mode.sign(den) == 0:
                continue
            qx, qy = ax - px, ay - py
            t = _cross(qx, qy, ex, ey) / den
            if mode.sign(t) <= 0:
                continue
            s = _cross(qx, qy, dx, dy) / den
            ss = mode.sign(s)
            s1 = mode.sign(1 - s)
            if ss < 0 or s1 < 0:
                continue
            if ss == 0:
                consider((t, "vertex", j))
            elif s1 == 0:
                consider((t, "vertex", (j + 1) % n))
            else:
                consider((t, "edge", j, s))
        if stop_walls:
            for (wid, (bx, by), (wx, wy)) in self.walls.get(cell, ()):
                if wid == ignore_wall:
                    continue
                den = _cross(dx, dy, wx, wy)
                if mode.sign(den) == 0:
                    continue
                qx, qy = bx - px, by - py
                t = _cross(qx, qy, wx, wy) / den
                if mode.sign(t) <= 0:
                    continue
                s = _cross(qx, qy, dx, dy) / den
                if mode.sign(s) < 0 or mode.sign(1 - s) < 0:
                    continue
                consider((t, "wall", wid, s))
        if best is None:
            raise PrecisionError("ray found no boundary crossing")
        if remaining is not None and mode.sign(best[0] - remaining) >= 0:
            qx, qy = px + remaining * dx, py + remaining * dy
            return ("time", remaining, qx, qy)
        if best[1] == "edge":
            return ("edge", best[0], best[2], best[3])
        if best[1] == "vertex":
            return ("vertex", best[0], best[2])
        t, wid, s = best[0], best[2], best[3]
        return ("wall", t, px + t * dx, py + t * dy, wid, s)

    def start_at_corner(self, corner, backward=False):
        """Starting state for a separatrix leaving a vertex into a corner."""
        c, v = corner
        return c, self.verts[c][v]

    def register_segment(self, info, cell, start, vec):
        """Register a wall segment; edge-aligned segments are mirrored into
        the partner cell so rays from either side can hit them."""
        mode = self.mode
        wid = ("seg", len(self.wall_info))
        self.walls.setdefault(cell, []).append((wid, start, vec))
        self.wall_info[wid] = info
        pts = self.verts[cell]
        n = len(pts)
        for j in range(n):
            ax, ay = pts[j]
            ex, ey = self.edge_nums[cell][j]
            if mode.sign(_cross(ex, ey, vec[0], vec[1])) != 0:
                continue
            if mode.sign(_cross(ex, ey, start[0] - ax, start[1] - ay)) != 0:
                continue
            den = _dot(ex, ey, ex, ey)
            s0 = _dot(start[0] - ax, start[1] - ay, ex, ey) / den
            s1 = _dot(start[0] + vec[0] - ax, start[1] + vec[1] - ay, ex, ey) / den
            lo, hi = (s0, s1) if mode.sign(s1 - s0) >= 0 else (s1, s0)
            # collinearity with the edge's line is not enough: the piece must
            # lie within the edge segment to exist on the glued side
            if mode.sign(lo) < 0 or mode.sign(1 - hi) < 0:
                continue
            c2, j2 = self.surface.gluings[(cell, j)]
            bx, by = self.verts[c2][j2]
            ex2, ey2 = self.edge_nums[c2][j2]
            start2 = (bx + (1 - s0) * ex2, by + (1 - s0) * ey2)
            wid2 = ("seg", len(self.wall_info))
            self.walls.setdefault(c2, []).append((wid2, start2, vec))
            self.wall_info[wid2] = info
            break
        return wid


class redirect:
    """Temporarily swap a tracer's direction (context manager)."""

    def __init__(self, tracer, new_dir):
        self.tracer = tracer
        self.new_dir = new_dir

    def __enter__(self):
        self.saved = (self.tracer.dx, self.tracer.dy)
        self.tracer.dx, self.tracer.dy = self.new_dir
        return self.tracer

    def __exit__(self, *exc):
        self.tracer.dx, self.tracer.dy = self.saved
        return False
