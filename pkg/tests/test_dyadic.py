from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from midconvex.core.dyadic import dyadic_orbit_values, dz, dz_double_identity_check, dz_iterate, orbit
from midconvex.core.numtheory import gcd, half_totient, mu_orbit, residue_set
from midconvex.exceptions import InvalidArgument

from conftest import random_fraction


@pytest.mark.parametrize("x, expected", [
    (Fraction(0), Fraction(0)),
    (Fraction(7, 10), Fraction(3, 10)),
    (Fraction(-13, 5), Fraction(2, 5)),
    (Fraction(1, 2), Fraction(1, 2)),
    (5, Fraction(0)),
])
def test_dz(x, expected):
    assert dz(x) == expected


def test_dz_float_rounds_half_to_even():
    assert dz(2.5) == 0.5
    assert dz(0.75) == 0.25


@given(st.fractions())
def test_dz_range_and_symmetry(x):
    d = dz(x)
    assert 0 <= d <= Fraction(1, 2)
    assert d == dz(x + 1) == dz(-x)


@given(st.fractions())
def test_double_identity_holds(x):
    assert dz_double_identity_check(x)


def test_double_identity_random_sweep(rng):
    for _ in range(10_000):
        q = rng.randint(1, 10 ** 6)
        assert dz_double_identity_check(Fraction(rng.randint(-10 ** 7, 10 ** 7), q))


@pytest.mark.parametrize("x", [Fraction(1, 5), Fraction(2, 5), Fraction(1, 2)])
def test_double_identity_examples(x):
    assert dz_double_identity_check(x)


@pytest.mark.parametrize("x, k, expected", [
    (Fraction(1, 5), 2, Fraction(1, 5)),
    (Fraction(1, 6), 1, Fraction(1, 3)),
    (Fraction(3, 7), 0, Fraction(3, 7)),
    (Fraction(5, 8), 3, Fraction(0)),
])
def test_dz_iterate(x, k, expected):
    assert dz_iterate(x, k) == expected


@given(st.fractions(), st.integers(min_value=0, max_value=80))
def test_dz_iterate_matches_big_doubling(x, k):
    assert dz_iterate(x, k) == dz((1 << k) * x)


def test_dz_iterate_rejects_negative_k():
    with pytest.raises(InvalidArgument):
        dz_iterate(Fraction(1, 3), -1)


def test_dz_iterate_equals_mu_orbit():
    for n in range(3, 500, 2):
        ell = half_totient(n)
        steps = range(3 * ell + 1) if n < 80 else sorted({0, 1, ell, 3 * ell})
        for m in residue_set(n):
            states = mu_orbit(n, m).states
            for k in steps:
                assert dz_iterate(Fraction(m, n), k) == Fraction(states[k % len(states)], n)


def test_odd_denominator_orbits_are_half_totient_periodic():
    for n in range(3, 500, 2):
        ell = half_totient(n)
        steps = range(2 * ell + 1) if n < 60 else (0, 1)
        starts = range(1, n) if n < 60 else [*range(1, 12), *range(n - 11, n)]
        for m in starts:
            if gcd(m, n) != 1:
                continue
            x = Fraction(m, n)
            for k in steps:
                assert dz_iterate(x, k) == dz_iterate(x, k + ell)


@pytest.mark.parametrize("lam, preperiod, cycle, period", [
    (Fraction(1, 5), [], [Fraction(1, 5), Fraction(2, 5)], 2),
    (Fraction(1, 6), [Fraction(1, 6)], [Fraction(1, 3)], 1),
    (Fraction(1, 4), [Fraction(1, 4), Fraction(1, 2)], [Fraction(0)], 1),
    (Fraction(0), [], [Fraction(0)], 1),
    (Fraction(1), [], [Fraction(0)], 1),
])
def test_orbit(lam, preperiod, cycle, period):
    orb = orbit(lam)
    assert orb.preperiod == preperiod
    assert orb.cycle == cycle
    assert orb.minimal_period == period


def test_orbit_agrees_with_big_doubling(rng):
    for _ in range(500):
        lam = random_fraction(rng, 2000)
        orb = orbit(lam)
        horizon = len(orb.preperiod) + 2 * orb.minimal_period
        assert dyadic_orbit_values(orb, horizon) == [dz((1 << k) * lam) for k in range(horizon)]


def test_orbit_invariants(rng):
    for _ in range(300):
        lam = random_fraction(rng, 5000)
        orb = orbit(lam)
        assert all(0 <= s <= Fraction(1, 2) for s in orb.preperiod + orb.cycle)
        if orb.reduced is not None and orb.reduced.n >= 3:
            assert orb.half_totient % orb.minimal_period == 0
            assert all(orb.reduced.n % s.denominator == 0 for s in orb.cycle)


def test_orbit_of_large_power_of_two_denominator():
    lam = Fraction(3, 1 << 40)
    orb = orbit(lam)
    assert len(orb.preperiod) == 40
    assert orb.preperiod[-1] == Fraction(1, 2)
    assert orb.cycle == [Fraction(0)]


def test_dyadic_orbit_values_prefix():
    assert dyadic_orbit_values(Fraction(1, 5), 5) == [
        Fraction(1, 5), Fraction(2, 5), Fraction(1, 5), Fraction(2, 5), Fraction(1, 5),
    ]
    assert dyadic_orbit_values(Fraction(1, 4), 4) == [Fraction(1, 4), Fraction(1, 2), 0, 0]
