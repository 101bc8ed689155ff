"""Trackers, exclusion scans, correlation curves: oracles and determinism."""

import math
from fractions import Fraction

import pytest

from flatmix.corpus import double_pentagon, integer_l_surface, square_torus
from flatmix.diagnostics import (
    correlation_cesaro,
    observable_mean,
    rigidity_exclusion_scan,
    sobol_directions,
    veech_tracker,
)
from flatmix.field import golden_field
from flatmix.flow import Direction
from flatmix.geometry import PlanarVector


def golden_setup():
    gf = golden_field()
    T = square_torus(field=gf)
    d = Direction(PlanarVector(gf.one(), gf.generator()))
    return T, d


def cf_oracle(n_terms):
    """||q_n * (phi - 1)|| for the continued-fraction denominators of phi-1."""
    rho = (math.sqrt(5) - 1) / 2
    qs = [1, 1]
    while len(qs) < n_terms + 2:
        qs.append(qs[-1] + qs[-2])
    out = []
    for q in qs[1:n_terms + 1]:
        v = (q * rho) % 1.0
        out.append(min(v, 1 - v))
    return out


def test_tracker_matches_continued_fraction_oracle():
    T, d = golden_setup()
    trace = veech_tracker(T, d, 1.0, 20)
    oracle = cf_oracle(20)
    for got, want in zip(trace.distances(), oracle):
        assert abs(got - want) < 1e-9


def test_tracker_sqrt2_recurrent_large_distances():
    T, d = golden_setup()
    ds = veech_tracker(T, d, math.sqrt(2), 50).distances()
    for i in range(41):
        assert max(ds[i:i + 10]) > 0.1


def test_tracker_generic_alpha_e():
    T, d = golden_setup()
    ds = veech_tracker(T, d, math.e, 50).distances()
    exceed = [x for x in ds if x > 0.1]
    assert len(exceed) >= 10  # recurrently large along the first 50 steps


def test_tracker_alpha_zero():
    T, d = golden_setup()
    assert all(x == 0 for x in veech_tracker(T, d, 0.0, 10).distances())


def test_tracker_subadditivity():
    # distance(a1 + a2) <= distance(a1) + distance(a2) along the shared
    # cocycle path (triangle inequality on the common transport)
    T, d = golden_setup()
    a1, a2 = 0.37, 0.55
    t1 = veech_tracker(T, d, a1, 25).distances()
    t2 = veech_tracker(T, d, a2, 25).distances()
    t12 = veech_tracker(T, d, a1 + a2, 25).distances()
    for x, y, z in zip(t12, t1, t2):
        assert x <= y + z + 1e-9


def test_exclusion_scan_periodic_windows():
    T = square_torus()
    d = Direction.from_fractions(T, Fraction(1), Fraction(1))
    rep = rigidity_exclusion_scan(T, d, 0.05, [8], window=(0.05, 3.0))
    # V = 1: survivors are arithmetic windows around the integers
    assert rep.configs_used and abs(rep.configs_used[0][0] - 1.0) < 1e-9
    assert rep.survivor_measure() == pytest.approx(0.25, abs=1e-9)
    assert rep.replay()


def test_exclusion_scan_golden_shrinks_geometrically():
    T, d = golden_setup()
    measures = []
    for terms in (1, 2, 3):
        rep = rigidity_exclusion_scan(T, d, 0.05, [8, 21, 55][:terms],
                                      window=(0.05, 3.0))
        assert rep.replay()
        measures.append(rep.survivor_measure())
    assert measures[1] < 0.5 * measures[0]
    assert measures[2] < 0.5 * measures[1]


def test_exclusion_monotone_in_epsilon():
    T, d = golden_setup()
    small = rigidity_exclusion_scan(T, d, 0.02, [8, 21], window=(0.05, 3.0))
    large = rigidity_exclusion_scan(T, d, 0.05, [8, 21], window=(0.05, 3.0))

    def contains(intervals, x):
        return any(lo - 1e-12 <= x <= hi + 1e-12 for lo, hi in intervals)

    for lo, hi in small.survivors:
        mid = (lo + hi) / 2
        assert contains(large.survivors, mid)


def test_exclusion_witness_alpha_survives():
    # On the torus the circle-factor witness direction-eigenvalue alpha = 1
    # survives every scan at small epsilon.
    T, d = golden_setup()
    rep = rigidity_exclusion_scan(T, d, 0.05, [8, 21, 55], window=(0.5, 1.5))

    def contains(intervals, x):
        return any(lo - 1e-12 <= x <= hi + 1e-12 for lo, hi in intervals)

    assert contains(rep.survivors, 1.0)


def test_exclusion_soundness_replay_full_suite():
    T, d = golden_setup()
    scans = [
        rigidity_exclusion_scan(T, d, 0.05, [8, 21], window=(0.05, 3.0)),
        rigidity_exclusion_scan(T, d, 0.1, [8], window=(0.05, 2.0)),
    ]
    S = double_pentagon()
    d5 = sobol_directions(1, seed=3)[0]
    scans.append(rigidity_exclusion_scan(S, d5, 0.05, [6, 12], window=(0.05, 2.0)))
    assert all(rep.replay() for rep in scans)


def test_correlation_torus_character_no_decay():
    T, d = golden_setup()
    curve = correlation_cesaro(T, d, "char:1,0", "char:1,0", 1000,
                               n_samples=4, seed=7, T_values=[100, 1000])
    assert all(v >= 0.4 for v in curve.cesaro_values)
    assert not curve.nonergodic_suspected


def test_correlation_constant_observable_vanishes():
    T, d = golden_setup()
    curve = correlation_cesaro(T, d, "const", "const", 100, n_samples=4,
                               seed=3, T_values=[100])
    assert curve.cesaro_values[0] == pytest.approx(0.0, abs=1e-12)


def test_correlation_estimator_consistency():
    # doubling the number of orbits moves the estimate by less than 3 SE
    T, d = golden_setup()
    c1 = correlation_cesaro(T, d, "char:1,0", "char:1,0", 200, n_samples=4,
                            seed=11, T_values=[200])
    c2 = correlation_cesaro(T, d, "char:1,0", "char:1,0", 200, n_samples=8,
                            seed=11, T_values=[200])
    se = max(c1.stderrs[0], c2.stderrs[0], 1e-12)
    assert abs(c1.cesaro_values[0] - c2.cesaro_values[0]) < 3 * se + 1e-9


def test_correlation_deterministic_under_seed():
    T, d = golden_setup()
    a = correlation_cesaro(T, d, "char:1,0", "char:1,0", 300, n_samples=4,
                           seed=5, T_values=[30, 300])
    b = correlation_cesaro(T, d, "char:1,0", "char:1,0", 300, n_samples=4,
                           seed=5, T_values=[30, 300])
    assert a.cesaro_values == b.cesaro_values
    assert a.stderrs == b.stderrs


def test_nonergodic_flag_on_periodic_direction():
    # vertical flow on the integer L-surface is periodic: orbit averages of a
    # bump differ across cylinders
    S = integer_l_surface()
    d = Direction.from_fractions(S, Fraction(0), Fraction(1))
    curve = correlation_cesaro(S, d, "bump:0,0.4", "bump:0,0.4", 200,
                               n_samples=6, seed=2, T_values=[200])
    assert curve.nonergodic_suspected


def test_observable_mean_quadrature():
    T, d = golden_setup()
    m = observable_mean(T, "char:1,0")
    assert abs(m) < 5e-3  # exact mean of a nontrivial character is 0
    mc = observable_mean(T, "const")
    assert abs(mc - 1.0) < 1e-9


def test_sobol_directions_deterministic():
    a = sobol_directions(5, seed=7)
    b = sobol_directions(5, seed=7)
    assert [x.floats for x in a] == [x.floats for x in b]
    assert len({x.floats for x in a}) == 5
