"""Cylinder decompositions in completely periodic directions.

All separatrices in the given direction are traced to saddle connections;
the connections cut the surface into flat cylinders.  Boundary circles are
walked combinatorially (at each junction the continuation is the ray at
angle exactly pi from the incoming one, swept through the cylinder side),
each cylinder's width comes from a transverse ray, and its waist class from
a core periodic orbit.

Unit convention: with direction vector d, reported heights are transverse
widths in |d| units and circumferences are flow periods scaled by (d,d), so
that sum(circumference * height) equals the flat area exactly.
"""

from .errors import InputError, NotPeriodicError, PrecisionError
from .flow import BudgetError, Tracer, make_mode, redirect, _cross, _dot


class Cylinder:
    """One flat cylinder: circumference, transverse height, waist class."""

    def __init__(self, circumference, height, waist_class, left_sides, right_sides):
        self.circumference = circumference
        self.height = height
        self.waist_class = waist_class
        self.left_sides = left_sides
        self.right_sides = right_sides

    def __repr__(self):
        return f"Cylinder(c={self.circumference!r}, h={self.height!r})"


class _Connection:
    __slots__ = ("index", "time", "pieces", "start_corner", "end_corner")

    def __init__(self, index, time, pieces, start_corner, end_corner):
        self.index = index
        self.time = time
        self.pieces = pieces
        self.start_corner = start_corner
        self.end_corner = end_corner


def cylinder_decomposition(surface, direction, exact=True, marked_point=None,
                           max_transits=100000, basis=None):
    """Cylinders of a completely periodic direction.

    Raises NotPeriodicError (inconclusive) when some separatrix fails to
    close on a singularity within the transit budget.
    """
    mode = make_mode(surface, exact)
    pins = set(surface.cone_points())
    if not pins:
        pins = set(range(len(surface.vertex_classes)))
        if marked_point is not None:
            pins.add(marked_point)
    tracer = Tracer(surface, direction, mode, pins=pins, max_transits=max_transits)
    dx, dy = tracer.dx, tracer.dy

    connections = []
    start_map = {}
    end_map = {}
    for vclass in sorted(pins):
        for corner, kind in tracer.corner_rays_containing(vclass, (dx, dy)):
            cell, pt = tracer.start_at_corner(corner)
            pieces = []
            try:
                res = tracer.flow(cell, pt, record_pieces=pieces)
            except BudgetError:
                raise NotPeriodicError(
                    "a separatrix did not close within the transit budget"
                )
            if res.kind != "vertex":
                raise NotPeriodicError(f"separatrix ended with {res.kind}")
            end_corner = _normalize_arrival(tracer, res.data[1], (-dx, -dy))
            conn = _Connection(len(connections), res.time, pieces, corner, end_corner)
            connections.append(conn)
            if corner in start_map or end_corner in end_map:
                raise InputError("duplicate separatrix bookkeeping")
            start_map[corner] = conn.index
            end_map[end_corner] = conn.index

    if not connections:
        raise NotPeriodicError("no separatrices found: nothing pins the direction")

    # register every connection piece as a wall (both sides of edge-aligned
    # pieces, so transverse rays always see them)
    for conn in connections:
        for (cell, start, tlen) in conn.pieces:
            wvec = (tlen * dx, tlen * dy)
            _register_piece(tracer, conn.index, cell, start, wvec, mode)

    # left boundary circles over east sides
    east_next = {}
    for conn in connections:
        cont = _sweep(tracer, conn.end_corner, (-dx, -dy), (dx, dy), ccw=True)
        if cont not in start_map:
            raise InputError("boundary walk found no outgoing separatrix")
        east_next[conn.index] = start_map[cont]
    left_circles = _cycles_of(east_next)

    # right boundary circles: at a wall's bottom vertex the next wall's
    # incoming ray sits at angle exactly pi, swept ccw through the west side
    west_next = {}
    for conn in connections:
        cont = _sweep(tracer, conn.start_corner, (dx, dy), (-dx, -dy), ccw=True)
        if cont not in end_map:
            raise InputError("boundary walk found no incoming separatrix")
        west_next[conn.index] = end_map[cont]
    right_circles = _cycles_of(west_next)
    right_of = {}
    for circ in right_circles:
        for c in circ:
            right_of[c] = tuple(circ)

    cylinders = []
    used_west = set()
    area_units = mode.from_fraction(0)
    for circle in left_circles:
        circumference_t = None
        for ci in circle:
            circumference_t = connections[ci].time if circumference_t is None \
                else circumference_t + connections[ci].time
        width, hit_conn, core_class = _measure_cylinder(
            tracer, surface, connections, circle, circumference_t, mode, basis)
        right_circle = right_of[hit_conn]
        for ci in right_circle:
            if ci in used_west:
                raise InputError("cylinder pairing reused a right boundary")
            used_west.add(ci)
        rtime = None
        for ci in right_circle:
            rtime = connections[ci].time if rtime is None else rtime + connections[ci].time
        if mode.sign(rtime - circumference_t) != 0:
            raise InputError("left and right boundary circumferences disagree")
        dd = _dot(dx, dy, dx, dy)
        cylinders.append(Cylinder(circumference_t * dd, width, core_class,
                                  tuple(circle), right_circle))
        area_units = area_units + circumference_t * width
    if len(used_west) != len(connections):
        raise InputError("unmatched right boundary sides")

    dd = _dot(dx, dy, dx, dy)
    total_area = mode.coord(surface.area) if mode.exact else float(surface.area)
    if mode.sign(area_units * dd - total_area) != 0:
        raise InputError("cylinder areas do not sum to the surface area")
    return cylinders


def _register_piece(tracer, conn_index, cell, start, wvec, mode):
    tracer.register_segment(("saddle", conn_index), cell, start, wvec)


def _normalize_arrival(tracer, corner, back_vec):
    """Corner whose half-open sector [tail, head) contains the incoming ray."""
    tail, head = tracer._sector_rays(corner)
    if tracer._ray_eq(head, back_vec):
        surface = tracer.surface
        vclass, pos = surface.corner_class[corner]
        orbit = surface.vertex_classes[vclass]
        return orbit[(pos + 1) % len(orbit)]
    return corner


def _sweep(tracer, corner0, from_vec, target_vec, ccw=True):
    """First ray equal to target_vec, sweeping ccw from from_vec in corner0.

    Returns the normalized corner (target == tail or strictly inside).  The
    sweep covers angle exactly pi when from_vec and target_vec are opposite.
    """
    if not ccw:
        raise InputError("only ccw sweeps are defined")
    surface = tracer.surface
    vclass, pos = surface.corner_class[corner0]
    orbit = surface.vertex_classes[vclass]
    m = len(orbit)
    _tail0, head0 = tracer._sector_rays(corner0)
    if tracer._ray_eq(head0, target_vec):
        return orbit[(pos + 1) % m]
    if _contains_or_start(tracer, from_vec, head0, target_vec):
        return corner0
    for step in range(1, m + 1):
        corner = orbit[(pos + step) % m]
        tail, head = tracer._sector_rays(corner)
        if tracer._ray_eq(tail, target_vec):
            return corner
        if tracer._sector_contains(tail, head, target_vec):
            return corner
    raise InputError("sweep found no continuation ray")


def _contains_or_start(tracer, u, v, w):
    if tracer._ray_eq(u, w):
        return True
    if tracer._ray_eq(v, w) or tracer._ray_eq(u, v):
        return False
    return tracer._sector_contains(u, v, w)


def _cycles_of(successor):
    seen = set()
    cycles = []
    for start in sorted(successor, key=repr):
        if start in seen:
            continue
        cyc = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = successor[cur]
        if cur == start:
            cycles.append(cyc)
        else:
            # entered an already-walked cycle: only possible if successor is
            # not a permutation
            raise InputError("boundary successor map is not a permutation")
    return cycles


def _measure_cylinder(tracer, surface, connections, circle, circumference_t,
                      mode, basis):
    """Transverse width, the right-boundary connection hit, and the waist class."""
    conn = connections[circle[0]]
    dx, dy = tracer.dx, tracer.dy
    ex, ey = dy, -dx  # transverse ray into the east side
    width = hit_conn = None
    for num, den in ((1, 2), (1, 3), (2, 5), (3, 7), (2, 7), (5, 11)):
        cell, start = _piece_point(conn, mode, dx, dy, num, den)
        try:
            with redirect(tracer, (ex, ey)):
                res = tracer.flow(cell, start, stop_walls=True)
        except PrecisionError:
            continue  # base point degenerate (e.g. exactly on a vertex)
        if res.kind != "wall":
            continue  # ray grazed a vertex: try another base point
        width = res.time
        hit_conn = tracer.wall_info[res.data[0]][1]
        break
    if width is None:
        raise PrecisionError("transverse rays kept hitting vertices")
    core_class = None
    if basis is not None:
        for frac_num, frac_den in ((1, 2), (1, 3), (2, 5), (3, 7), (2, 7)):
            off = width * frac_num / frac_den
            core_cell = _locate_after_ray(tracer, cell, start, (ex, ey), off)
            res2 = tracer.flow(core_cell[0], core_cell[1], tmax=circumference_t,
                               collect=True)
            if res2.kind != "time":
                continue
            if tracer.vertex_passes:
                continue
            end = res2.point
            if mode.sign(end[0] - core_cell[1][0]) == 0 and \
               mode.sign(end[1] - core_cell[1][1]) == 0 and \
               res2.cell == core_cell[0]:
                core_class = basis.class_from_crossings(res2.crossings)
                break
        if core_class is None:
            raise PrecisionError("could not certify a core periodic orbit")
    return width, hit_conn, core_class


def _piece_point(conn, mode, dx, dy, num, den):
    """Cell and point at the fraction num/den of a connection's time length."""
    target = conn.time * num / den
    acc = mode.from_fraction(0)
    for (cell, start, tlen) in conn.pieces:
        nxt = acc + tlen
        if mode.sign(nxt - target) > 0:
            local = target - acc
            return cell, (start[0] + local * dx, start[1] + local * dy)
        acc = nxt
    cell, start, tlen = conn.pieces[-1]
    return cell, (start[0] + tlen * dx / 2, start[1] + tlen * dy / 2)


def _locate_after_ray(tracer, cell, start, direction, dist):
    """Cell and point reached by flowing ``dist`` along ``direction``."""
    with redirect(tracer, direction):
        res = tracer.flow(cell, start, tmax=dist)
        if res.kind != "time":
            raise PrecisionError("could not offset into the cylinder interior")
        return res.cell, res.point
