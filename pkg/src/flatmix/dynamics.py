"""First-return interval exchanges and accelerated Rauzy-Veech induction.

The IET of a directional flow over a transversal carries, per symbol, the
interval length, the orbit displacement vector, the normalized return time
(direction component of the displacement), and the homology class of the
closed-up return orbit.  A Zorich step wins on one side until the side
changes, producing a nonnegative integer SL(d,Z) matrix; symbol data is
transported by its transpose.
"""

from fractions import Fraction

from .errors import DegenerateError, InputError, SaddleConnectionError, TieError
from .flow import BudgetError, Tracer, make_mode


def default_pins(surface, marked_point=None):
    """Stopping vertex classes: cone points, or a marked point if smooth."""
    pins = set(surface.cone_points())
    if marked_point is not None:
        pins.add(marked_point)
    if not pins:
        pins.add(0)  # smooth surfaces get one marked vertex class
    return pins


class IET:
    """Labeled interval exchange with transported symbol data.

    top/bottom are symbol orderings; lengths, times (normalized return
    times), displacements (orbit holonomy vectors) and cycles (homology
    coordinates, when a basis is supplied) are indexed by symbol.
    """

    def __init__(self, lengths, top, bottom, times, displacements, cycles,
                 mode, surface=None, transversal=None, direction=None):
        self.lengths = list(lengths)
        self.top = list(top)
        self.bottom = list(bottom)
        self.times = list(times)
        self.displacements = list(displacements)
        self.cycles = [list(c) for c in cycles] if cycles is not None else None
        self.mode = mode
        self.surface = surface
        self.transversal = transversal
        self.direction = direction

    @property
    def d(self):
        return len(self.lengths)

    def total_length(self):
        total = self.lengths[0]
        for x in self.lengths[1:]:
            total = total + x
        return total

    def copy(self):
        return IET(self.lengths, self.top, self.bottom, self.times,
                   [tuple(v) for v in self.displacements],
                   self.cycles, self.mode, self.surface,
                   self.transversal, self.direction)

    def __repr__(self):
        lens = [round(self.mode.to_float(x), 6) for x in self.lengths]
        return f"IET(d={self.d}, top={self.top}, bottom={self.bottom}, lengths={lens})"


class CocycleStep:
    """One accelerated induction step: old_lengths = matrix * new_lengths;
    symbol data transports by cycle_update = matrix^T (new = A * old)."""

    def __init__(self, matrix):
        self.matrix = matrix

    @property
    def cycle_update(self):
        d = len(self.matrix)
        return [[self.matrix[j][i] for j in range(d)] for i in range(d)]

    def __repr__(self):
        return f"CocycleStep({self.matrix})"


def first_return_iet(surface, direction, transversal, exact=True,
                     basis=None, marked_point=None, max_transits=200000,
                     _tracer=None):
    """First-return IET of the directional flow to a transversal.

    Splitting parameters come from backward separatrices of all singular
    (or marked) vertex classes plus, where needed, the backward orbits of
    the transversal endpoints; each open interval then returns rigidly and
    is sampled at its midpoint.
    """
    mode = make_mode(surface, exact)
    pins = default_pins(surface, marked_point)
    tracer = _tracer or Tracer(surface, direction, mode, pins=pins,
                               max_transits=max_transits)
    tracer.add_transversal(transversal)
    dx, dy = tracer.dx, tracer.dy

    total = _transversal_total(transversal, mode)
    criticals = set()

    def record(result):
        if result.kind in ("mark", "wall"):
            param = _event_param(result, mode, tracer)
            criticals.add(param)
            return True
        return False

    # backward separatrices from every pinned/singular vertex class
    for vclass in sorted(tracer.pins):
        for corner, _kind in tracer.corner_rays_containing(vclass, (-dx, -dy)):
            cell, pt = tracer.start_at_corner(corner)
            try:
                res = tracer.flow(cell, pt, backward=True, stop_walls=True)
            except BudgetError:
                raise BudgetError("backward separatrix exceeded the transit budget")
            if res.kind == "vertex":
                continue  # saddle connection between singularities
            record(res)

    # backward orbits of the transversal endpoints (return slides off an end
    # exactly along these orbits)
    for endpoint_param, where in ((0, 0), (1, total)):
        piece = transversal.pieces[0] if endpoint_param == 0 else transversal.pieces[-1]
        vclass = _endpoint_vertex(surface, tracer, piece, endpoint_param)
        if vclass is not None:
            if vclass in tracer.pins or surface.vertex_windings[vclass] > 1:
                continue  # covered by the singular separatrix traces
            hit = tracer._continue_through_vertex(vclass, -dx, -dy)
            if hit is None or hit[0] == "tail":
                continue
            cell, pt = tracer.start_at_corner(hit[1])
        else:
            cell, pt = transversal.point_at(where, mode)
        try:
            res = tracer.flow(cell, pt, backward=True, stop_walls=True)
        except BudgetError:
            raise BudgetError("endpoint backward orbit exceeded the transit budget")
        if res.kind == "vertex":
            continue  # lands on a singularity: covered by its own traces
        record(res)

    cuts = sorted(criticals, key=mode.to_float)
    zero = mode.from_fraction(0)
    params = [zero]
    for c in cuts:
        if mode.sign(c - params[-1]) > 0 and mode.sign(total - c) > 0:
            params.append(c)
    params.append(total)

    lengths, times, disps, images, crossings_all = [], [], [], [], []
    d = len(params) - 1
    for i in range(d):
        lo, hi = params[i], params[i + 1]
        mid = (lo + hi) / 2
        cell, pt = transversal.point_at(mid, mode)
        res = tracer.flow(cell, pt, stop_walls=True, collect=True)
        if res.kind == "vertex":
            raise SaddleConnectionError(
                "interval midpoint orbit hit a singularity: degenerate transversal"
            )
        if res.kind not in ("mark", "wall"):
            raise InputError(f"midpoint orbit ended with {res.kind}")
        ret_param = _event_param(res, mode, tracer)
        delta = ret_param - mid
        lengths.append(hi - lo)
        times.append(res.time)
        disps.append((res.time * dx, res.time * dy))
        images.append(lo + delta)
        crossings_all.append(res.crossings)

    # bottom ordering: symbols sorted by image position
    order = sorted(range(d), key=lambda s: mode.to_float(images[s]))
    # tile check: images must partition [0, total)
    pos = zero
    for s in order:
        if mode.sign(images[s] - pos) != 0:
            if mode.exact:
                raise InputError("return images do not tile the transversal")
        pos = images[s] + lengths[s]
    if mode.sign(pos - total) != 0 and mode.exact:
        raise InputError("return images do not tile the transversal")

    cycles = None
    if basis is not None:
        cycles = []
        for i in range(d):
            lo, hi = params[i], params[i + 1]
            mid = (lo + hi) / 2
            landing = images[i] + (hi - lo) / 2
            closing = _closing_crossings(tracer, transversal, landing, mid, mode)
            cycles.append(basis.class_from_crossings(crossings_all[i] + closing))

    return IET(lengths, list(range(d)), order, times, disps, cycles, mode,
               surface=surface, transversal=transversal, direction=direction)


def _closing_crossings(tracer, transversal, from_param, to_param, mode):
    """Edge crossings of the closing segment along the transversal.

    Single-piece transversals close within one cell (no crossings; for edge
    sections the arrival transit is already counted).  Multi-piece sections
    are walked with a redirected flow along the pieces' common direction.
    """
    if len(transversal.pieces) == 1:
        return []
    if mode.sign(from_param - to_param) == 0:
        return []
    cell, pt = transversal.point_at(from_param, mode)
    piece = transversal.pieces[0]
    w, length = piece[2], piece[4]
    ux = _coordinate(w.x, mode) / length
    uy = _coordinate(w.y, mode) / length
    delta = to_param - from_param
    if mode.sign(delta) < 0:
        ux, uy, delta = -ux, -uy, -delta
    with_dir = (ux, uy)
    from .flow import redirect

    with redirect(tracer, with_dir):
        res = tracer.flow(cell, pt, tmax=delta, collect=True)
    if res.kind != "time":
        raise InputError("closing segment left the transversal's leaf")
    return res.crossings


def _coordinate(x, mode):
    if hasattr(x, "coords"):
        return mode.coord(x)
    return x


def _endpoint_vertex(surface, tracer, piece, which):
    """Vertex class at a transversal endpoint, or None if not at a vertex."""
    cell, base, w, _off, _length = piece
    mode = tracer.mode
    if which == 0:
        px, py = mode.coord(base.x), mode.coord(base.y)
    else:
        px = mode.coord(base.x) + mode.coord(w.x)
        py = mode.coord(base.y) + mode.coord(w.y)
    for v in range(len(surface.cells[cell])):
        vx, vy = tracer.verts[cell][v]
        if mode.sign(px - vx) == 0 and mode.sign(py - vy) == 0:
            return surface.corner_class[(cell, v)][0]
    return None


def _transversal_total(transversal, mode):
    last = transversal.pieces[-1]
    off, length = last[3], last[4]
    if mode.exact:
        return _exactify(off, mode) + _exactify(length, mode)
    return float(off) + float(length)


def _exactify(x, mode):
    if hasattr(x, "coords"):
        return x
    return mode.from_fraction(Fraction(x))


def _event_param(result, mode, tracer=None):
    kind, data = result.kind, result.data
    if kind == "mark":
        _mid, local, piece = data
    else:
        wid, local = data[0], data[1]
        info = tracer.wall_info.get(wid) if tracer else None
        if not info or info[0] != "transversal":
            raise InputError("wall hit does not belong to the transversal")
        piece = info[1]
    off, length = piece[3], piece[4]
    if mode.exact:
        return _exactify(off, mode) + _exactify(length, mode) * local
    return float(off) + float(length) * local


def _cmp_lengths(mode, a, b):
    """Sign of a - b; floating mode uses a relative tolerance so that deep
    renormalization (lengths contracting geometrically) stays decidable."""
    if mode.exact:
        return mode.sign(a - b)
    scale = max(abs(a), abs(b), 1e-300)
    diff = a - b
    if abs(diff) <= 1e-12 * scale:
        return 0
    return 1 if diff > 0 else -1


def _positive(mode, x):
    if mode.exact:
        return mode.sign(x)
    return 1 if x > 0.0 else (-1 if x < 0.0 else 0)


def single_rauzy_step(iet):
    """One unaccelerated Rauzy-Veech step; returns (winner_side, loser, matrix_update)."""
    mode = iet.mode
    t_last, b_last = iet.top[-1], iet.bottom[-1]
    if t_last == b_last:
        raise DegenerateError("top and bottom end with the same symbol")
    cmp = _cmp_lengths(mode, iet.lengths[t_last], iet.lengths[b_last])
    if cmp == 0:
        raise TieError("equal candidate lengths: saddle connection")
    if cmp > 0:
        winner, loser, side = t_last, b_last, "top"
        iet.lengths[winner] = iet.lengths[winner] - iet.lengths[loser]
        if _positive(mode, iet.lengths[winner]) <= 0:
            raise DegenerateError("length collapsed to zero")
        iet.bottom.pop()
        w_pos = iet.bottom.index(winner)
        iet.bottom.insert(w_pos + 1, loser)
    else:
        winner, loser, side = b_last, t_last, "bottom"
        iet.lengths[winner] = iet.lengths[winner] - iet.lengths[loser]
        if _positive(mode, iet.lengths[winner]) <= 0:
            raise DegenerateError("length collapsed to zero")
        iet.top.pop()
        w_pos = iet.top.index(winner)
        iet.top.insert(w_pos + 1, loser)
    # symbol data: the loser's new return orbit appends the winner's
    iet.times[loser] = iet.times[loser] + iet.times[winner]
    dl, dw = iet.displacements[loser], iet.displacements[winner]
    iet.displacements[loser] = (dl[0] + dw[0], dl[1] + dw[1])
    if iet.cycles is not None:
        iet.cycles[loser] = [a + b for a, b in zip(iet.cycles[loser], iet.cycles[winner])]
    return side, winner, loser


def zorich_step(iet, max_iterations=10 ** 6):
    """Accelerated induction: iterate while the same side keeps winning.

    Returns (new_iet, CocycleStep) with old_lengths = matrix * new_lengths
    exactly (checked in exact mode).
    """
    new = iet.copy()
    d = new.d
    matrix = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    side0 = None
    old_lengths = list(iet.lengths)
    for _ in range(max_iterations):
        t_last, b_last = new.top[-1], new.bottom[-1]
        if t_last == b_last:
            raise DegenerateError("top and bottom end with the same symbol")
        cmp = _cmp_lengths(new.mode, new.lengths[t_last], new.lengths[b_last])
        if cmp == 0:
            raise TieError("equal candidate lengths: saddle connection")
        side = "top" if cmp > 0 else "bottom"
        if side0 is None:
            side0 = side
        elif side != side0:
            break
        _side, winner, loser = single_rauzy_step(new)
        # old = (product so far) * (I + E[winner][loser]) * new, so the
        # accumulated matrix gains column winner added into column loser.
        for r in range(d):
            matrix[r][loser] += matrix[r][winner]
    else:
        raise BudgetError("Zorich acceleration did not terminate")
    if iet.mode.exact:
        for s in range(d):
            recon = None
            for j in range(d):
                if matrix[s][j]:
                    term = new.lengths[j] * matrix[s][j]
                    recon = term if recon is None else recon + term
            if recon is None or iet.mode.sign(recon - old_lengths[s]) != 0:
                raise InputError("length reconstruction failed after induction")
    return new, CocycleStep(matrix)
