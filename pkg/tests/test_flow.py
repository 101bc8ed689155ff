"""First-return IETs, Zorich induction, cylinders, rigidity configurations."""

from fractions import Fraction

import pytest

from flatmix.corpus import double_pentagon, square_torus
from flatmix.cylinders import cylinder_decomposition
from flatmix.dynamics import first_return_iet, zorich_step
from flatmix.errors import DegenerateError, NotPeriodicError, TieError
from flatmix.field import golden_field
from flatmix.flow import Direction, Transversal
from flatmix.geometry import PlanarVector
from flatmix.homology import homology_basis, mat_det, pairing, period_matrix
from flatmix.polygons import validate_polygon, triangle_from_angles
from flatmix.rigidity import (
    rigidity_configuration,
    rigidity_curve_class,
    verify_rigidity_config,
)
from flatmix.unfold import unfold


def golden_torus():
    gf = golden_field()
    return square_torus(field=gf), gf


def golden_direction(gf):
    return Direction(PlanarVector(gf.one(), gf.generator()))


def test_golden_rotation_iet_exact():
    T, gf = golden_torus()
    phi = gf.generator()
    d = golden_direction(gf)
    J = Transversal.from_edge(T, d, 0, 0)
    iet = first_return_iet(T, d, J, exact=True)
    assert iet.d == 2
    assert (iet.lengths[0] - (2 - phi)).is_zero()
    assert (iet.lengths[1] - (phi - 1)).is_zero()
    # both symbols return after normalized time 1/phi = phi - 1
    for t in iet.times:
        assert (t - (phi - 1)).is_zero()


def test_slope_one_is_periodic():
    T, gf = golden_torus()
    d = Direction(PlanarVector(gf.one(), gf.one()))
    J = Transversal.from_edge(T, d, 0, 0)
    iet = first_return_iet(T, d, J, exact=True)
    # rotation by an integer: the return is the identity on one interval
    # (possibly split by the marked-point separatrix)
    assert iet.d <= 2
    for s in iet.top:
        assert (iet.times[s] - 1).is_zero()
    with pytest.raises((TieError, DegenerateError)):
        cur = iet
        for _ in range(4):
            cur, _ = zorich_step(cur)


def test_pentagon_interval_count_bound():
    S = double_pentagon()
    d = Direction.from_fractions(S, Fraction(0), Fraction(1))
    J = Transversal.from_edge(S, d, 0, 0)
    iet = first_return_iet(S, d, J, exact=True)
    # d <= 2g + (#cone points) - 1 = 4 + 1 - 1
    assert iet.d <= 2 * S.genus + len(S.cone_points()) - 1 + 1  # +1 marked split slack
    assert iet.d >= 2


def test_zorich_continued_fraction_matrices():
    T, gf = golden_torus()
    d = golden_direction(gf)
    J = Transversal.from_edge(T, d, 0, 0)
    cur = first_return_iet(T, d, J, exact=True)
    mats = []
    for _ in range(8):
        cur, step = zorich_step(cur)
        mats.append(step.matrix)
        assert abs(mat_det(step.matrix)) == 1
        assert all(v >= 0 for row in step.matrix for v in row)
    # golden rotation: the accelerated steps alternate the two elementary
    # continued-fraction matrices of [0; 1, 1, 1, ...]
    for m in mats:
        assert sorted(map(tuple, m)) in ([(0, 1), (1, 1)], [(1, 0), (1, 1)])
    # growth factor of total length contracts by 1/phi each step
    assert float(cur.total_length()) == pytest.approx(
        float((2 - gf.generator()) + (gf.generator() - 1)) / 1.618033988749895 ** 8,
        rel=1e-9,
    )


def test_zorich_length_reconstruction_exact():
    T, gf = golden_torus()
    d = golden_direction(gf)
    J = Transversal.from_edge(T, d, 0, 0)
    cur = first_return_iet(T, d, J, exact=True)
    for _ in range(5):
        old = list(cur.lengths)
        cur, step = zorich_step(cur)
        M = step.matrix
        for i in range(cur.d):
            recon = None
            for j in range(cur.d):
                if M[i][j]:
                    term = cur.lengths[j] * M[i][j]
                    recon = term if recon is None else recon + term
            assert (recon - old[i]).is_zero()


def test_rational_rotation_terminates():
    T = square_torus()
    d = Direction.from_fractions(T, Fraction(1), Fraction(1, 3))
    J = Transversal.from_edge(T, d, 0, 1)
    cur = first_return_iet(T, d, J, exact=True)
    with pytest.raises((TieError, DegenerateError)):
        for _ in range(20):
            cur, _ = zorich_step(cur)


def test_symbol_cycles_track_return_vectors():
    T, gf = golden_torus()
    d = golden_direction(gf)
    J = Transversal.from_edge(T, d, 0, 0)
    basis = homology_basis(T)
    pm = period_matrix(T, basis)
    cur = first_return_iet(T, d, J, exact=True, basis=basis)
    for _ in range(4):
        for s in range(cur.d):
            im_pair = pairing(pm.im_row, cur.cycles[s])
            assert (im_pair - cur.displacements[s][1]).is_zero()
        cur, _ = zorich_step(cur)


def test_cylinders_torus_horizontal():
    T = square_torus()
    d = Direction.from_fractions(T, Fraction(1), Fraction(0))
    cyls = cylinder_decomposition(T, d, basis=homology_basis(T))
    assert len(cyls) == 1
    assert (cyls[0].circumference - 1).is_zero()
    assert (cyls[0].height - 1).is_zero()


def test_cylinders_unfolded_square():
    S = unfold(validate_polygon([(1, 2)] * 4, [1, 1, 1, 1]))
    d = Direction.from_fractions(S, Fraction(1), Fraction(0))
    cyls = cylinder_decomposition(S, d, basis=homology_basis(S))
    total = None
    for c in cyls:
        t = c.circumference * c.height
        total = t if total is None else total + t
    assert (total - S.area).is_zero()


def test_cylinders_double_pentagon_golden_ratio():
    S = double_pentagon()
    d = Direction.from_fractions(S, Fraction(1), Fraction(0))
    basis = homology_basis(S)
    cyls = cylinder_decomposition(S, d, basis=basis)
    assert len(cyls) == 2
    big = max(cyls, key=lambda c: float(c.circumference))
    small = min(cyls, key=lambda c: float(c.circumference))
    r = big.circumference / small.circumference
    # ratio is the golden ratio, an element of Q(sqrt5) inside the field
    assert (r * r - r - 1).is_zero()
    total = None
    for c in cyls:
        t = c.circumference * c.height
        total = t if total is None else total + t
    assert (total - S.area).is_zero()
    # waist holonomies are horizontal
    pm = period_matrix(S, basis)
    for c in cyls:
        assert pairing(pm.im_row, c.waist_class).is_zero()


def test_cylinders_nonperiodic_direction_inconclusive():
    T, gf = golden_torus()
    d = golden_direction(gf)
    with pytest.raises(NotPeriodicError):
        cylinder_decomposition(T, d, max_transits=3000)


FIB = [1, 1]
while len(FIB) < 20:
    FIB.append(FIB[-1] + FIB[-2])


def fib(n):
    return FIB[n - 1]


def test_rigidity_golden_torus_fibonacci_scales():
    T, gf = golden_torus()
    d = golden_direction(gf)
    basis = homology_basis(T)
    consts = []
    for n in (8, 10, 12):
        cfg = rigidity_configuration(T, d, fib(n), exact=False)
        rep = verify_rigidity_config(T, cfg, basis=basis)
        assert rep["passed"], (n, rep)
        consts.append(cfg.constants["C_empirical"])
        assert cfg.constants["H_times_L"] <= consts[-1]
    # a single constant works across scales
    C = max(consts)
    assert C < 10


def test_rigidity_periodic_direction_zero_displacement():
    T, gf = golden_torus()
    d = Direction(PlanarVector(gf.one(), gf.one()))
    cfg = rigidity_configuration(T, d, 12, exact=False)
    assert abs(float(cfg.H)) < 1e-12
    rep = verify_rigidity_config(T, cfg, basis=homology_basis(T))
    assert rep["passed"]


def test_rigidity_exact_mode_pairings():
    T, gf = golden_torus()
    d = golden_direction(gf)
    basis = homology_basis(T)
    cfg = rigidity_configuration(T, d, fib(8), exact=True)
    gamma = rigidity_curve_class(T, cfg, basis, exact=True)
    assert gamma["pairings_ok"]
    assert (gamma["im_pairing"] - cfg.V).is_zero()
    assert (abs(gamma["re_pairing"]) - cfg.H).is_zero()
    # the rigidity curve is non-trivial in homology
    assert any(gamma["cycle"])


def test_rigidity_double_pentagon_vertical():
    S = double_pentagon()
    d = Direction.from_fractions(S, Fraction(0), Fraction(1))
    cfg = rigidity_configuration(S, d, 10, exact=False)
    rep = verify_rigidity_config(S, cfg, basis=homology_basis(S))
    assert rep["passed"]
    assert cfg.constants["sigma_normalized"] > 0
