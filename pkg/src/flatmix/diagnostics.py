"""Numerical weak-mixing diagnostics: virtual-eigenvalue trackers, rigidity
exclusion scans, and Cesaro correlation averages.

Everything here is floating point with pinned seeds and error bars; nothing
feeds back into the exact classifier.  Trackers transport a candidate
eigenvalue's return-time vector through accelerated induction and watch its
distance to the integer lattice; exclusion scans intersect the constraint
d(alpha*V, Z) < eps over a schedule of rigidity configurations; correlation
curves are Monte Carlo Birkhoff estimates over a fixed observable catalog.
"""

import cmath
import math
import random
from fractions import Fraction

from .errors import InputError, PrecisionError
from .flow import Direction, Tracer, Transversal, make_mode
from .dynamics import first_return_iet, zorich_step
from .rigidity import rigidity_configuration


# ---------------------------------------------------------------------------
# Veech-criterion tracker

class TrackerTrace:
    """Per-step lattice distances of the transported candidate vector.

    steps[i] = {'step', 'log_norm', 'distance', 'distortion', 'excursion'};
    distance is the max over coordinates of the distance to the nearest
    integer (so it lies in [0, 1/2]).  Persistent smallness is consistent
    with alpha being an eigenvalue; recurrent large values are evidence
    against.  Diagnostic only.
    """

    def __init__(self, alpha, direction, steps):
        self.alpha = alpha
        self.direction = direction
        self.steps = steps

    def distances(self):
        return [s["distance"] for s in self.steps]


def default_transversal(surface, direction):
    """First full edge not parallel to the direction."""
    for c in range(len(surface.cells)):
        for j in range(len(surface.cells[c])):
            try:
                return Transversal.from_edge(surface, direction, c, j)
            except InputError:
                continue
    raise InputError("no edge transverse to the direction")


def veech_tracker(surface, direction, alpha, n_steps, transversal=None,
                  marked_point=None, distortion_threshold=1e8,
                  max_transits=200000):
    """Track alpha times the symbol return-time vector through induction."""
    if transversal is None:
        transversal = default_transversal(surface, direction)
    iet = first_return_iet(surface, direction, transversal, exact=False,
                           marked_point=marked_point, max_transits=max_transits)
    d = iet.d
    w = [float(alpha) * float(t) % 1.0 for t in iet.times]
    steps = []
    log_norm = 0.0
    cur = iet
    for n in range(n_steps):
        cur, step = zorich_step(cur)
        A = step.cycle_update
        w = [sum(A[i][j] * w[j] for j in range(d)) % 1.0 for i in range(d)]
        dist = max(min(x, 1.0 - x) for x in w)
        norm = max(sum(abs(v) for v in row) for row in step.matrix)
        log_norm += math.log(norm)
        lens = [float(x) for x in cur.lengths]
        distortion = max(lens) / min(lens)
        steps.append({
            "step": n + 1,
            "log_norm": log_norm,
            "distance": dist,
            "distortion": distortion,
            "excursion": distortion > distortion_threshold,
        })
    return TrackerTrace(alpha, direction, steps)


# ---------------------------------------------------------------------------
# Rigidity exclusion scans

class ExclusionReport:
    """Survivor/excluded alpha intervals after a rigidity-constraint scan.

    Every excluded interval is tagged with the index of a configuration
    whose inequality d(alpha*V, Z) >= eps it violates; ``replay`` re-checks
    each tag.  Configurations with sigma below eps impose no constraint and
    are listed in ``skipped``.  The scan uses only the configurations it
    constructs, so it is a sound but incomplete exclusion.
    """

    def __init__(self, epsilon, window, configs_used, skipped, survivors,
                 excluded):
        self.epsilon = epsilon
        self.window = window
        self.configs_used = configs_used  # list of (V, sigma_normalized, L)
        self.skipped = skipped
        self.survivors = survivors  # list of (lo, hi)
        self.excluded = excluded    # list of (lo, hi, config_index)

    def survivor_measure(self):
        return sum(hi - lo for lo, hi in self.survivors)

    def replay(self, samples_per_interval=3):
        """Exact float replay: every excluded point must violate its tag."""
        eps = self.epsilon
        for (lo, hi, idx) in self.excluded:
            V = self.configs_used[idx][0]
            for k in range(1, samples_per_interval + 1):
                alpha = lo + (hi - lo) * k / (samples_per_interval + 1.0)
                frac = (alpha * V) % 1.0
                if min(frac, 1.0 - frac) < eps:
                    return False
        return True


def _survivor_intervals(V, eps, window):
    lo, hi = window
    out = []
    n0 = math.floor(V * lo - eps)
    n1 = math.ceil(V * hi + eps)
    for n in range(n0, n1 + 1):
        a, b = (n - eps) / V, (n + eps) / V
        a, b = max(a, lo), min(b, hi)
        if a < b:
            out.append((a, b))
    return _merge(out)


def _merge(intervals):
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return [(a, b) for a, b in out]


def _intersect(xs, ys):
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a = max(xs[i][0], ys[j][0])
        b = min(xs[i][1], ys[j][1])
        if a < b:
            out.append((a, b))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def _complement(intervals, window):
    lo, hi = window
    out = []
    cur = lo
    for a, b in intervals:
        if a > cur:
            out.append((cur, a))
        cur = max(cur, b)
    if cur < hi:
        out.append((cur, hi))
    return out


def rigidity_exclusion_scan(surface, direction, epsilon, L_schedule,
                            window=(0.05, 5.0), marked_point=None,
                            configs=None):
    """Exclude candidate eigenvalues violating rigidity constraints.

    For each L in the schedule a configuration is built (floating mode);
    those with normalized sigma >= epsilon constrain alpha to the windows
    d(alpha*V, Z) < epsilon.  Survivors are intersected across scales.
    """
    area = float(surface.area)
    used = []
    skipped = []
    if configs is None:
        configs = [rigidity_configuration(surface, direction, L,
                                          marked_point=marked_point)
                   for L in L_schedule]
    for cfg in configs:
        V = float(cfg.V)
        sigma_n = float(cfg.sigma) / area
        if sigma_n < epsilon:
            skipped.append((V, sigma_n, cfg.L))
            continue
        used.append((V, sigma_n, cfg.L))
    survivors = [tuple(window)]
    per_config_surv = []
    for (V, _s, _L) in used:
        s = _survivor_intervals(V, epsilon, window)
        per_config_surv.append(s)
        survivors = _intersect(survivors, s)
    # excluded pieces, tagged by the first constraint that kills them
    excluded = []
    remaining = [tuple(window)]
    for idx, surv in enumerate(per_config_surv):
        dead = _intersect(remaining, _complement(surv, window))
        for (a, b) in dead:
            excluded.append((a, b, idx))
        remaining = _intersect(remaining, surv)
    return ExclusionReport(epsilon, tuple(window), used, skipped,
                           survivors, excluded)


# ---------------------------------------------------------------------------
# Cesaro correlation averages

class CorrelationCurve:
    def __init__(self, T_values, cesaro_values, stderrs, f_spec, g_spec,
                 seed, nonergodic_suspected):
        self.T_values = T_values
        self.cesaro_values = cesaro_values
        self.stderrs = stderrs
        self.f_spec = f_spec
        self.g_spec = g_spec
        self.seed = seed
        self.nonergodic_suspected = nonergodic_suspected


def _observable(surface, spec):
    """Fixed catalog: 'char:a,b' (single-cell surfaces), 'bump:cell,scale',
    or 'const'."""
    kind, _, args = spec.partition(":")
    if kind == "const":
        return lambda cell, x, y: 1.0 + 0j
    if kind == "char":
        if len(surface.cells) != 1:
            raise InputError("character observables need a one-cell surface")
        a, b = (float(Fraction(v)) for v in args.split(","))
        return lambda cell, x, y: cmath.exp(2j * math.pi * (a * x + b * y))
    if kind == "bump":
        cs, _, scale_s = args.partition(",")
        cidx = int(cs)
        scale = float(scale_s) if scale_s else 0.25
        pts = [surface.vertex_position(cidx, v).to_floats()
               for v in range(len(surface.cells[cidx]))]
        bx = sum(p[0] for p in pts) / len(pts)
        by = sum(p[1] for p in pts) / len(pts)
        cell_area = _polygon_area(pts)
        width = scale * math.sqrt(cell_area)

        def bump(cell, x, y, cidx=cidx, bx=bx, by=by, width=width):
            if cell != cidx:
                return 0.0 + 0j
            r2 = (x - bx) ** 2 + (y - by) ** 2
            return complex(math.exp(-r2 / (2 * width * width)))

        return bump
    raise InputError(f"unknown observable spec {spec!r}")


def _polygon_area(pts):
    total = 0.0
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        total += x1 * y2 - y1 * x2
    return abs(total) / 2


def _sample_points(surface, n, rng):
    """Area-weighted uniform samples as (cell, x, y)."""
    areas = []
    bboxes = []
    polys = []
    for c in range(len(surface.cells)):
        pts = [surface.vertex_position(c, v).to_floats()
               for v in range(len(surface.cells[c]))]
        polys.append(pts)
        areas.append(_polygon_area(pts))
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        bboxes.append((min(xs), max(xs), min(ys), max(ys)))
    total = sum(areas)
    out = []
    while len(out) < n:
        r = rng.random() * total
        c = 0
        while r > areas[c]:
            r -= areas[c]
            c += 1
        x0, x1, y0, y1 = bboxes[c]
        for _ in range(1000):
            x = x0 + rng.random() * (x1 - x0)
            y = y0 + rng.random() * (y1 - y0)
            if _point_in_polygon(polys[c], x, y):
                out.append((c, x, y))
                break
        else:
            raise PrecisionError("rejection sampling failed")
    return out


def _point_in_polygon(pts, x, y):
    inside = False
    n = len(pts)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xc:
                inside = not inside
    return inside


def _orbit_series(tracer, start, total_time, n_points, f, g):
    """f and g sampled along one orbit at a uniform time grid."""
    import numpy as np

    dt = total_time / n_points
    cell, pt = start[0], (start[1], start[2])
    fs = np.empty(n_points, dtype=complex)
    gs = np.empty(n_points, dtype=complex)
    for i in range(n_points):
        fs[i] = f(cell, pt[0], pt[1])
        gs[i] = g(cell, pt[0], pt[1])
        res = tracer.flow(cell, pt, tmax=dt)
        if res.kind != "time":
            raise PrecisionError("orbit hit a singularity while sampling")
        cell, pt = res.cell, res.point
    return fs, gs


def _lag_correlations(fs, gs, lags_idx, fg_mean):
    """corr(lag) = mean_s f(s+lag) conj(g(s)) - int(f) conj(int(g)).

    The product of means is supplied exactly (quadrature), so slow Birkhoff
    convergence of the empirical means cannot leave a lag-independent bias.
    """
    import numpy as np

    out = np.empty(len(lags_idx), dtype=complex)
    n = len(fs)
    for k, lag in enumerate(lags_idx):
        if lag >= n:
            raise InputError("lag beyond the sampled series")
        seg = fs[lag:] * np.conj(gs[: n - lag])
        out[k] = seg.mean() - fg_mean
    return out


def observable_mean(surface, spec, resolution=256):
    """Deterministic quadrature of a catalog observable over the surface,
    with respect to the normalized area measure."""
    fn = _observable(surface, spec)
    total_area = float(surface.area)
    acc = 0j
    for c in range(len(surface.cells)):
        pts = [surface.vertex_position(c, v).to_floats()
               for v in range(len(surface.cells[c]))]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
        nx = ny = resolution
        dx = (x1 - x0) / nx
        dy = (y1 - y0) / ny
        cell_acc = 0j
        for i in range(nx):
            x = x0 + (i + 0.5) * dx
            for j in range(ny):
                y = y0 + (j + 0.5) * dy
                if _point_in_polygon(pts, x, y):
                    cell_acc += fn(c, x, y)
        acc += cell_acc * dx * dy
    return acc / total_area


def correlation_cesaro(surface, direction, f_spec, g_spec, T_max,
                       n_samples=8, seed=0, T_values=None,
                       grid_per_T=96, max_transits=10 ** 7):
    """Birkhoff/Monte Carlo Cesaro averages of |correlation|.

    Correlations are time-series averages along ``n_samples`` seeded orbits
    (a two-scale grid keeps small and large lags equally resolved); the
    Cesaro value at T is the mean of |corr| over a uniform lag grid in
    (0, T].  Standard errors come from the across-orbit spread.
    Deterministic for a fixed seed.
    """
    import numpy as np

    if T_values is None:
        T_values = [T_max]
    T_values = sorted(set(float(t) for t in T_values))
    if T_values[-1] > T_max:
        raise InputError("requested T beyond T_max")
    f = _observable(surface, f_spec)
    g = _observable(surface, g_spec)
    fg_mean = observable_mean(surface, f_spec) * \
        observable_mean(surface, g_spec).conjugate()
    rng = random.Random(seed)
    samples = _sample_points(surface, n_samples, rng)
    mode = make_mode(surface, False)
    tracer = Tracer(surface, direction, mode, pins=set(surface.cone_points()),
                    max_transits=max_transits)

    # two sampling scales: fine for the smallest T, coarse up to T_max
    t_small = T_values[0]
    dt_fine = t_small / grid_per_T
    fine_len = int(math.ceil((t_small * 9) / dt_fine))
    coarse_len = max(2048, grid_per_T * 4)
    dt_coarse = (T_max * 1.5) / coarse_len

    per_orbit = {T: [] for T in T_values}  # complex corr arrays per orbit
    birkhoff = []
    f_scales = []
    kept = 0
    for (c, x, y) in samples:
        try:
            fs_f, gs_f = _orbit_series(tracer, (c, x, y), fine_len * dt_fine,
                                       fine_len, f, g)
            fs_c, gs_c = _orbit_series(tracer, (c, x, y),
                                       coarse_len * dt_coarse, coarse_len, f, g)
        except PrecisionError:
            continue
        kept += 1
        birkhoff.append(float(fs_c.real.mean()))
        f_scales.append(float(fs_c.real.std()))
        for T in T_values:
            lags = [T * k / grid_per_T for k in range(1, grid_per_T + 1)]
            if T <= t_small * 1.0001:
                idx = [max(1, int(round(t / dt_fine))) for t in lags]
                corr = _lag_correlations(fs_f, gs_f, idx, fg_mean)
            else:
                idx = [max(1, int(round(t / dt_coarse))) for t in lags]
                corr = _lag_correlations(fs_c, gs_c, idx, fg_mean)
            per_orbit[T].append(corr)
    if kept < max(2, n_samples // 2):
        raise PrecisionError("too many orbits lost to singular hits")

    # Orbit averages of an ergodic flow agree up to Birkhoff fluctuations;
    # a spread comparable to the observable's own scale flags non-ergodicity
    # (e.g. completely periodic directions).
    nonergodic = False
    if len(birkhoff) >= 2:
        mean_b = sum(birkhoff) / len(birkhoff)
        spread = max(birkhoff) - min(birkhoff)
        f_scale = sum(f_scales) / len(f_scales)
        nonergodic = spread > 0.25 * (abs(mean_b) + f_scale) and spread > 5e-3

    # pool the complex correlations across orbits before taking |.| so the
    # Monte Carlo noise floor averages down
    cesaro_values, stderrs = [], []
    for T in T_values:
        arrs = per_orbit[T]
        pooled = sum(arrs) / len(arrs)
        cesaro_values.append(float(np.abs(pooled).mean()))
        per = [float(np.abs(a).mean()) for a in arrs]
        m = sum(per) / len(per)
        var = sum((v - m) ** 2 for v in per) / max(1, len(per) - 1)
        stderrs.append(math.sqrt(var / len(per)))
    return CorrelationCurve(T_values, cesaro_values, stderrs, f_spec, g_spec,
                            seed, nonergodic)


def sobol_directions(n, window=(0.15, 1.35), seed=0):
    """Seed-pinned van der Corput (base-2 Sobol) angles in the window."""
    out = []
    for i in range(n):
        k = seed + i + 1
        x = 0.0
        denom = 2.0
        while k:
            x += (k & 1) / denom
            k >>= 1
            denom *= 2
        theta = window[0] + x * (window[1] - window[0])
        out.append(Direction(vector=None,
                             floats=(math.cos(theta), math.sin(theta))))
    return out
