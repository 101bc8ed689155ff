"""Constructive rigidity configurations.

Given a flow direction and a scale L, the surface is cut by downward prongs
of time-length 2L from every singularity (or a marked point) and by
transverse rays shot from prong tops and bottoms until they hit a prong.
The complement is a partition into flat rectangles whose total area is
checked exactly against the surface area.  The largest rectangle's base J'
seeds one of three constructions (shortened base, long-return tower, or
short-return stacking), producing a segment J and an immersed rectangle R
with vertical side length V, top/bottom displacement H along J, and maximal
embedded subrectangle of area sigma.

The compact-set membership test of the original construction is not
computable here; its operational surrogate is the measured minimal return
time to the base against the L/10 threshold, trying the shortened-base
construction first and falling back when its return-time claim fails.
All transversals produced are perpendicular to the flow, so the rigidity
curve pairs with the direction-adapted Im to give V and with Re to give H.
"""

from fractions import Fraction

from .errors import InputError, PrecisionError
from .flow import Tracer, Transversal, make_mode, redirect, _dot
from .dynamics import default_pins, first_return_iet


class _Pt:
    __slots__ = ("x", "y")

    def __init__(self, xy):
        self.x, self.y = xy


class RigidityConfig:
    """A (V,H,sigma,L)-rigidity configuration plus construction data.

    V and H are in the direction's time / transverse-parameter units; sigma
    is geometric area.  ``J`` and ``base`` are perpendicular transversals
    (chains of pieces), ``displacement`` is the signed return translation of
    the base along J, and ``tower_time`` equals V.
    """

    def __init__(self, V, H, sigma, L, J, base, base_range, case, mode,
                 tower_time, displacement, constants, direction=None,
                 marked_point=None):
        self.V = V
        self.H = H
        self.sigma = sigma
        self.L = L
        self.J = J
        self.base = base
        self.base_range = base_range  # (start, end) parameters of base in J
        self.case = case
        self.mode = mode
        self.tower_time = tower_time
        self.displacement = displacement
        self.constants = constants
        self.direction = direction
        self.marked_point = marked_point

    def __repr__(self):
        f = self.mode.to_float
        return (f"RigidityConfig(case={self.case}, V={f(self.V):.6g}, "
                f"H={f(self.H):.6g}, sigma={f(self.sigma):.6g}, L={self.L})")


# ---------------------------------------------------------------------------
# construction

def rigidity_configuration(surface, direction, L, exact=False,
                           marked_point=None, max_transits=400000,
                           case_threshold=Fraction(1, 10)):
    """Build a verified (V,H,sigma,L)-rigidity configuration."""
    mode = make_mode(surface, exact)
    pins = default_pins(surface, marked_point)
    tracer = Tracer(surface, direction, mode, pins=pins, max_transits=max_transits)
    dx, dy = tracer.dx, tracer.dy
    dd = _dot(dx, dy, dx, dy)
    Lnum = mode.from_fraction(Fraction(L))
    L2 = Lnum + Lnum

    prongs = _trace_prongs(tracer, L2, pins)
    for prong in prongs:
        for (cell, start, tlen) in prong["pieces"]:
            tracer.register_segment(("prong",), cell, start,
                                    (-tlen * dx, -tlen * dy))
    rays = _trace_rays(tracer, pins, prongs)

    seen = set()
    atoms = []
    for ray in rays:
        key = _ray_key(ray, mode)
        if key in seen:
            continue
        seen.add(key)
        atoms.append(_normalized_pieces(ray, mode, dx, dy))
    for ai, pieces in enumerate(atoms):
        for (cell, start, tlen) in pieces:
            tracer.register_segment(("ray", ai), cell, start,
                                    (tlen * dy, -tlen * dx))

    rooms = []
    area_sum = mode.from_fraction(0)
    for ai, pieces in enumerate(atoms):
        rise, width = _room_over(tracer, pieces, mode, budget_time=L2 + L2)
        rooms.append((ai, rise, width))
        area_sum = area_sum + rise * width
    total_area = mode.coord(surface.area) if mode.exact else float(surface.area)
    if mode.sign(area_sum * dd - total_area) != 0:
        if mode.exact or abs(area_sum * dd - total_area) > 1e-7 * abs(total_area):
            raise PrecisionError("rectangle partition does not fill the surface")

    best = max(rooms, key=lambda r: mode.to_float(r[1] * r[2]))
    jp = _pieces_to_transversal(atoms[best[0]], mode, dx, dy)
    jp_len = _transversal_len(jp, mode)

    iet_jp = first_return_iet(surface, direction, jp, exact=exact,
                              marked_point=marked_point,
                              max_transits=max_transits)
    min_ret = min(iet_jp.times, key=mode.to_float)
    threshold = Lnum * mode.from_fraction(Fraction(case_threshold))

    area_units = total_area / dd
    cap = area_units / L2  # transverse length scale of a full-height column

    cfg = None
    if mode.sign(jp_len - cap) > 0:
        j1 = _slice_transversal(jp, mode.from_fraction(0), cap, mode)
        iet1 = first_return_iet(surface, direction, j1, exact=exact,
                                marked_point=marked_point,
                                max_transits=max_transits)
        if mode.sign(min(iet1.times, key=mode.to_float) - threshold) >= 0:
            cfg = _tower_config(j1, iet1, Lnum, mode, dd, case=1,
                                area=total_area, L_raw=L)
    if cfg is None and mode.sign(min_ret - threshold) >= 0:
        cfg = _tower_config(jp, iet_jp, Lnum, mode, dd, case=2,
                            area=total_area, L_raw=L)
    if cfg is None:
        cfg = _stacking_config(surface, tracer, jp, iet_jp, Lnum, mode, dd,
                               area=total_area, exact=exact,
                               marked_point=marked_point,
                               max_transits=max_transits, L_raw=L)
    cfg.direction = direction
    cfg.marked_point = marked_point
    return cfg


def verify_rigidity_config(surface, cfg, exact=None, basis=None,
                           samples=(Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)),
                           max_transits=400000):
    """Independent checker: re-flows J and the base, re-measures V, H, sigma.

    Returns a report dict with per-condition booleans; ``passed`` is their
    conjunction.  In floating mode comparisons use a relative 1e-9 scale.
    """
    mode = cfg.mode if exact is None else make_mode(surface, exact)
    pins = default_pins(surface, cfg.marked_point)
    tracer = Tracer(surface, cfg.direction, mode, pins=pins,
                    max_transits=max_transits)
    dx, dy = tracer.dx, tracer.dy
    dd = _dot(dx, dy, dx, dy)
    report = {}

    def close(a, b, scale=1.0):
        # float comparison helper; exact-mode checks compare field elements
        # directly where it matters
        return abs(a - b) <= 1e-9 * max(1.0, abs(scale))

    # (1) J flows upward time L hitting no singularity: no singular backward
    # separatrix lands on J in time < L.  Marked points are regular for the
    # flow, so only genuine cone points obstruct.
    tracer.add_transversal(cfg.J)
    cond1 = True
    Lnum = mode.from_fraction(Fraction(cfg.L))
    total_len = _transversal_len(cfg.J, mode)
    for vclass in sorted(surface.cone_points()):
        for corner, _kind in tracer.corner_rays_containing(vclass, (-dx, -dy)):
            cell, pt = tracer.start_at_corner(corner)
            res = tracer.flow(cell, pt, backward=True, stop_walls=True,
                              tmax=Lnum)
            if res.kind in ("mark", "wall") and mode.sign(res.time - Lnum) < 0:
                if close(mode.to_float(res.time), mode.to_float(Lnum),
                         mode.to_float(Lnum)):
                    continue
                # touching J exactly at an endpoint does not obstruct the
                # open segment
                param = _event_param_for_verify(res, cfg.J, mode, tracer)
                if param is not None:
                    pf, tf = mode.to_float(param), mode.to_float(total_len)
                    if abs(pf) <= 1e-9 * (1 + tf) or abs(pf - tf) <= 1e-9 * (1 + tf):
                        continue
                cond1 = False
    report["flows_clear_L"] = cond1

    # (2)-(4): the base returns rigidly at time V with displacement H
    v_float = mode.to_float(cfg.V)
    base_lo, base_hi = cfg.base_range
    base_lo = _as_mode(base_lo, mode)
    base_hi = _as_mode(base_hi, mode)
    disp = _as_mode(cfg.displacement, mode)
    total = _transversal_len(cfg.J, mode)
    cond2 = mode.sign(base_lo + disp) >= 0 and \
        mode.sign(total - (base_hi + disp)) >= 0
    cond34 = True
    V = _as_mode(cfg.V, mode)
    for frac in samples:
        x = base_lo + (base_hi - base_lo) * mode.from_fraction(Fraction(frac))
        cell, pt = cfg.J.point_at(x, mode)
        res = tracer.flow(cell, pt, tmax=V)
        if res.kind != "time":
            cond34 = False
            continue
        tcell, tpt = cfg.J.point_at(x + disp, mode)
        if mode.exact:
            same = res.cell == tcell and \
                mode.sign(res.point[0] - tpt[0]) == 0 and \
                mode.sign(res.point[1] - tpt[1]) == 0
        else:
            same = res.cell == tcell and \
                close(res.point[0], tpt[0], v_float) and \
                close(res.point[1], tpt[1], v_float)
        if not same:
            cond34 = False
    report["horizontal_sides_in_J"] = cond2
    report["vertical_sides_V_and_displacement_H"] = cond34
    h_meas = abs(mode.to_float(disp))
    report["H_matches"] = close(h_meas, mode.to_float(cfg.H), 1.0)

    # (5): sigma = |base| * min(V, first self-return of the base)
    base_tr = _slice_transversal(cfg.J, base_lo, base_hi, mode)
    iet_base = first_return_iet(surface, cfg.direction, base_tr,
                                exact=mode.exact, marked_point=cfg.marked_point,
                                max_transits=max_transits)
    s_self = min(iet_base.times, key=mode.to_float)
    emb = V if mode.to_float(s_self) >= v_float else s_self
    sigma_check = (base_hi - base_lo) * emb * dd
    report["sigma_matches"] = close(mode.to_float(sigma_check),
                                    mode.to_float(cfg.sigma),
                                    mode.to_float(cfg.sigma))

    # rigidity curve pairings, when a homology basis is supplied
    if basis is not None:
        gamma = rigidity_curve_class(surface, cfg, basis, exact=mode.exact,
                                     max_transits=max_transits)
        report["curve_pairings"] = gamma["pairings_ok"]
        report["curve_class"] = gamma["cycle"]
    report["passed"] = all(v for k, v in report.items()
                           if isinstance(v, bool))
    return report


def _event_param_for_verify(result, transversal, mode, tracer):
    """Global transversal parameter of a mark/wall event, or None."""
    try:
        from .dynamics import _event_param

        return _event_param(result, mode, tracer)
    except Exception:
        return None


def rigidity_curve_class(surface, cfg, basis, exact=None, max_transits=400000,
                         sample=Fraction(1, 2)):
    """Homology class of the rigidity curve, with exact pairing checks.

    The curve joins a base point to its time-V image along the flow and
    closes up along J; its class pairs with the direction-adapted Im to V
    and with Re to +/-H.  Returns {'cycle', 'im_pairing', 're_pairing',
    'pairings_ok'}.
    """
    mode = cfg.mode if exact is None else make_mode(surface, exact)
    pins = default_pins(surface, cfg.marked_point)
    tracer = Tracer(surface, cfg.direction, mode, pins=pins,
                    max_transits=max_transits)
    dx, dy = tracer.dx, tracer.dy
    dd = _dot(dx, dy, dx, dy)
    base_lo = _as_mode(cfg.base_range[0], mode)
    base_hi = _as_mode(cfg.base_range[1], mode)
    disp = _as_mode(cfg.displacement, mode)
    V = _as_mode(cfg.V, mode)
    x = base_lo + (base_hi - base_lo) * mode.from_fraction(Fraction(sample))
    cell, pt = cfg.J.point_at(x, mode)
    res = tracer.flow(cell, pt, tmax=V, collect=True)
    if res.kind != "time":
        raise PrecisionError("rigidity curve tower hit an obstruction")
    crossings = list(res.crossings)
    # close along J from x + disp back to x (J runs along e_right)
    if mode.sign(disp) != 0:
        back = mode.sign(disp) > 0
        evec = (-dy, dx) if back else (dy, -dx)
        length = disp if back else -disp
        res2 = tracer_flow_redirected(tracer, res.cell, res.point, evec,
                                      length, collect=True)
        crossings += res2.crossings
        # sanity: we must land back at the starting point
        if mode.exact:
            if res2.cell != cell or mode.sign(res2.point[0] - pt[0]) != 0 \
               or mode.sign(res2.point[1] - pt[1]) != 0:
                raise PrecisionError("rigidity curve failed to close up")
    cycle = basis.class_from_crossings(crossings)

    from .homology import period_matrix, pairing

    pm = period_matrix(surface, basis)
    hol_x = pairing(pm.re_row, cycle)
    hol_y = pairing(pm.im_row, cycle)
    if mode.exact:
        dxe, dye = cfg.direction.vector.x, cfg.direction.vector.y
        im_pair = (dxe * hol_x + dye * hol_y) / (dxe * dxe + dye * dye)
        re_pair = (dxe * hol_y - dye * hol_x) / (dxe * dxe + dye * dye)
        ok = (im_pair - V).is_zero() and (abs(re_pair) - abs(disp)).is_zero()
        return {"cycle": cycle, "im_pairing": im_pair, "re_pairing": re_pair,
                "pairings_ok": ok}
    hx, hy = float(hol_x), float(hol_y)
    im_pair = (dx * hx + dy * hy) / dd
    re_pair = (dx * hy - dy * hx) / dd
    vf = mode.to_float(V)
    ok = abs(im_pair - vf) <= 1e-9 * max(1.0, vf) and \
        abs(abs(re_pair) - abs(mode.to_float(disp))) <= 1e-9 * max(1.0, vf)
    return {"cycle": cycle, "im_pairing": im_pair, "re_pairing": re_pair,
            "pairings_ok": ok}


def tracer_flow_redirected(tracer, cell, point, evec, tmax, collect=False):
    with redirect(tracer, evec):
        return tracer.flow(cell, point, tmax=tmax, collect=collect)


def _trace_prongs(tracer, L2, pins):
    dx, dy = tracer.dx, tracer.dy
    prongs = []
    for vclass in sorted(pins):
        for corner, _kind in tracer.corner_rays_containing(vclass, (-dx, -dy)):
            cell, pt = tracer.start_at_corner(corner)
            pieces = []
            with redirect(tracer, (-dx, -dy)):
                res = tracer.flow(cell, pt, tmax=L2, record_pieces=pieces)
            if res.kind == "time":
                bottom = (res.cell, res.point)
            elif res.kind == "vertex":
                bottom = None  # shortened to a vertical saddle connection
            else:
                raise PrecisionError(f"prong trace ended with {res.kind}")
            prongs.append({"pieces": pieces, "bottom": bottom})
    return prongs


def _trace_rays(tracer, pins, prongs):
    dx, dy = tracer.dx, tracer.dy
    e_right = (dy, -dx)
    e_left = (-dy, dx)
    rays = []

    def shoot(cell, pt, evec, source):
        pieces = []
        with redirect(tracer, evec):
            res = tracer.flow(cell, pt, stop_walls=True, record_pieces=pieces)
        if res.kind not in ("wall", "vertex"):
            raise PrecisionError(f"transverse ray ended with {res.kind}")
        rays.append({"pieces": pieces, "evec": evec, "time": res.time,
                     "source": source})

    for vclass in sorted(pins):
        for evec in (e_right, e_left):
            for corner, _kind in tracer.corner_rays_containing(vclass, evec):
                cell, pt = tracer.start_at_corner(corner)
                shoot(cell, pt, evec, ("vertex", vclass))
    for i, prong in enumerate(prongs):
        if prong["bottom"] is None:
            continue
        cell, pt = prong["bottom"]
        for evec in (e_right, e_left):
            shoot(cell, pt, evec, ("prong", i))
    return rays


def _ray_key(ray, mode):
    pts = []
    for (cell, start, tlen) in ray["pieces"]:
        sx, sy = start
        ex = sx + tlen * ray["evec"][0]
        ey = sy + tlen * ray["evec"][1]
        if mode.exact:
            a = (cell, sx.coords, sy.coords)
            b = (cell, ex.coords, ey.coords)
        else:
            a = (cell, round(sx, 9), round(sy, 9))
            b = (cell, round(ex, 9), round(ey, 9))
        pts.append(tuple(sorted((a, b))))
    return tuple(sorted(pts))


def _normalized_pieces(ray, mode, dx, dy):
    """Pieces re-oriented to run along e_right = (dy, -dx), kept in order."""
    if ray["evec"] == (dy, -dx):
        return list(ray["pieces"])
    out = []
    for (cell, start, tlen) in reversed(ray["pieces"]):
        sx = start[0] + tlen * ray["evec"][0]
        sy = start[1] + tlen * ray["evec"][1]
        out.append((cell, (sx, sy), tlen))
    return out


def _room_over(tracer, pieces, mode, budget_time=None):
    """(rise, width) of the open rectangle above a floor."""
    total = None
    for (_c, _s, t) in pieces:
        total = t if total is None else total + t
    target = total / 2
    acc = mode.from_fraction(0)
    cell, start, local = None, None, None
    for (c, s, tlen) in pieces:
        nxt = acc + tlen
        if mode.sign(nxt - target) > 0:
            cell, start, local = c, s, target - acc
            break
        acc = nxt
    if cell is None:
        cell, start, tlen = pieces[-1]
        local = tlen / 2
    dx, dy = tracer.dx, tracer.dy
    px = start[0] + local * dy
    py = start[1] - local * dx
    res = tracer.flow(cell, (px, py), stop_walls=True, tmax=budget_time)
    if res.kind in ("wall", "vertex"):
        return res.time, total
    raise PrecisionError(f"room column ended with {res.kind}")


# ---------------------------------------------------------------------------
# transversal helpers (pieces run along e_right; parameter = time units)

def _pieces_to_transversal(pieces, mode, dx, dy):
    out = []
    off = mode.from_fraction(0)
    for (cell, start, tlen) in pieces:
        base = _Pt(start)
        w = _Pt((tlen * dy, -tlen * dx))
        out.append((cell, base, w, off, tlen))
        off = off + tlen
    return Transversal(out)


def _transversal_len(tr, mode):
    last = tr.pieces[-1]
    return _as_mode(last[3], mode) + _as_mode(last[4], mode)


def _as_mode(x, mode):
    if hasattr(x, "coords"):
        return x
    if isinstance(x, (int, Fraction)):
        return mode.from_fraction(Fraction(x))
    return x


def _slice_transversal(tr, a, b, mode):
    """Sub-transversal over parameter range [a, b], re-offset from zero."""
    out = []
    new_off = mode.from_fraction(0)
    for (cell, base, w, off, length) in tr.pieces:
        off_n, len_n = _as_mode(off, mode), _as_mode(length, mode)
        lo = off_n if mode.sign(off_n - a) > 0 else a
        hi = off_n + len_n if mode.sign(off_n + len_n - b) < 0 else b
        if mode.sign(hi - lo) <= 0:
            continue
        bx = _coord(base.x, mode)
        by = _coord(base.y, mode)
        wx = _coord(w.x, mode)
        wy = _coord(w.y, mode)
        s0 = (lo - off_n) / len_n
        s1 = (hi - off_n) / len_n
        nb = _Pt((bx + s0 * wx, by + s0 * wy))
        nw = _Pt(((s1 - s0) * wx, (s1 - s0) * wy))
        out.append((cell, nb, nw, new_off, hi - lo))
        new_off = new_off + (hi - lo)
    if not out:
        raise InputError("empty transversal slice")
    return Transversal(out)


def _coord(x, mode):
    if hasattr(x, "coords"):
        return mode.coord(x)
    return x


# ---------------------------------------------------------------------------
# the three cases

def _iet_positions(iet):
    """Domain and image start parameters per symbol."""
    mode = iet.mode
    dom, img = {}, {}
    pos = mode.from_fraction(0)
    for s in iet.top:
        dom[s] = pos
        pos = pos + iet.lengths[s]
    pos = mode.from_fraction(0)
    for s in iet.bottom:
        img[s] = pos
        pos = pos + iet.lengths[s]
    return dom, img


def _tower_config(J, iet, Lnum, mode, dd, case, area, L_raw):
    """Embedded tower over the longest interval of the return IET."""
    dom, img = _iet_positions(iet)
    s_star = max(range(iet.d), key=lambda s: mode.to_float(iet.lengths[s]))
    V = iet.times[s_star]
    delta = img[s_star] - dom[s_star]
    H = -delta if mode.sign(delta) < 0 else delta
    sigma = iet.lengths[s_star] * V * dd
    base = _slice_transversal(J, dom[s_star], dom[s_star] + iet.lengths[s_star], mode)
    constants = _constants(V, H, sigma, Lnum, area, mode)
    return RigidityConfig(V, H, sigma, L_raw, J, base,
                          (dom[s_star], dom[s_star] + iet.lengths[s_star]),
                          case, mode, V, delta, constants)


def _stacking_config(surface, tracer, jp, iet_jp, Lnum, mode, dd, area,
                     exact, marked_point, max_transits, L_raw):
    """Short-return case: stack k copies of the self-return of J'."""
    dom, img = _iet_positions(iet_jp)
    s_min = min(range(iet_jp.d), key=lambda s: mode.to_float(iet_jp.times[s]))
    s_time = iet_jp.times[s_min]
    w = img[s_min] - dom[s_min]
    ratio = Lnum / s_time
    if mode.exact:
        fl = ratio.floor()
        k3 = fl - 1 if (ratio - fl).is_zero() else fl
    else:
        import math

        fl = math.floor(ratio)
        k3 = fl - 1 if abs(ratio - round(ratio)) < 1e-12 and round(ratio) == fl else fl
    if k3 < 1:
        k3 = 1
    V = s_time * k3
    H = w * k3
    if mode.sign(H) < 0:
        H = -H
    sigma = _transversal_len(jp, mode) * s_time * dd
    J = _extend_transversal(surface, tracer, jp, w * k3, mode)
    shift = J[1]
    base = _slice_transversal(J[0], shift, shift + _transversal_len(jp, mode), mode)
    constants = _constants(V, H, sigma, Lnum, area, mode)
    return RigidityConfig(V, H, sigma, L_raw, J[0], base,
                          (shift, shift + _transversal_len(jp, mode)),
                          3, mode, V, w * k3, constants)


def _raw_pieces(tr):
    """Transversal pieces as (cell, (x, y), time_length) triples."""
    return [(c, (b.x, b.y), l) for (c, b, _w, _o, l) in tr.pieces]


def _extend_transversal(surface, tracer, jp, amount, mode):
    """Extend J' along its leaf by ``amount`` (signed); returns
    (transversal, shift) with shift the parameter of old 0 in the new one."""
    dx, dy = tracer.dx, tracer.dy
    zero = mode.from_fraction(0)
    if mode.sign(amount) == 0:
        return jp, zero
    length = amount if mode.sign(amount) > 0 else -amount
    if mode.sign(amount) > 0:
        cell, pt = jp.point_at(_transversal_len(jp, mode), mode)
        pieces = []
        with redirect(tracer, (dy, -dx)):
            res = tracer.flow(cell, pt, tmax=length, record_pieces=pieces)
        if res.kind != "time":
            raise PrecisionError("leaf extension hit an obstruction")
        merged = _raw_pieces(jp) + list(pieces)
        return _pieces_to_transversal(merged, mode, dx, dy), zero
    cell, pt = jp.point_at(zero, mode)
    pieces = []
    with redirect(tracer, (-dy, dx)):
        res = tracer.flow(cell, pt, tmax=length, record_pieces=pieces)
    if res.kind != "time":
        raise PrecisionError("leaf extension hit an obstruction")
    back = _normalized_pieces({"pieces": pieces, "evec": (-dy, dx)}, mode, dx, dy)
    merged = back + _raw_pieces(jp)
    return _pieces_to_transversal(merged, mode, dx, dy), length


def _constants(V, H, sigma, Lnum, area, mode):
    f = mode.to_float
    v, h, s, l, a = f(V), f(H), f(sigma), f(Lnum), f(area)
    ratios = [v / l, l / v, a / s if s else float("inf")]
    if h > 0:
        ratios.append(h * l)
    return {
        "V_over_L": v / l,
        "sigma_normalized": s / a,
        "H_times_L": h * l,
        "C_empirical": max(ratios + [1.0]),
    }
