from fractions import Fraction

import pytest

from midconvex.core.numtheory import (
    euler_sharpened_check,
    factorize,
    gcd,
    half_totient,
    mu,
    mu_orbit,
    multiplicative_order,
    reduce_lambda,
    residue_set,
    totient,
)
from midconvex.data_types import EulerSign
from midconvex.exceptions import InvalidArgument

ODD = range(3, 500, 2)


def brute_totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@pytest.mark.parametrize("a, b, expected", [(12, 18, 6), (0, 7, 7), (2 ** 40 + 1, 5, 1), (2 ** 42 + 1, 5, 5), (0, 0, 0)])
def test_gcd(a, b, expected):
    assert gcd(a, b) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (9, 6), (15, 8), (97, 96), (360, 96)])
def test_totient(n, expected):
    assert totient(n) == expected


def test_totient_matches_brute_force():
    for n in range(1, 300):
        assert totient(n) == brute_totient(n)


def test_totient_is_multiplicative():
    for a in range(1, 101):
        for b in range(1, 101):
            if gcd(a, b) == 1:
                assert totient(a * b) == totient(a) * totient(b)


def test_factorize():
    assert factorize(1) == {}
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(9973) == {9973: 1}
    with pytest.raises(InvalidArgument):
        factorize(0)


@pytest.mark.parametrize("n, expected", [(1, 0), (3, 1), (5, 2), (9, 3)])
def test_half_totient(n, expected):
    assert half_totient(n) == expected


def test_half_totient_rejects_even():
    with pytest.raises(InvalidArgument):
        half_totient(4)


@pytest.mark.parametrize("n, expected", [(5, [1, 2]), (9, [1, 2, 4]), (15, [1, 2, 4, 7])])
def test_residue_set(n, expected):
    assert residue_set(n) == expected


@pytest.mark.parametrize("n", [1, 2, 10])
def test_residue_set_rejects(n):
    with pytest.raises(InvalidArgument):
        residue_set(n)


@pytest.mark.parametrize("n, m, expected", [(5, 1, 2), (5, 2, 1), (15, 4, 7)])
def test_mu(n, m, expected):
    assert mu(n, m) == expected


@pytest.mark.parametrize("m", [0, 3, 5])
def test_mu_rejects_outside_residue_set(m):
    # M_15 = {1, 2, 4, 7}
    with pytest.raises(InvalidArgument):
        mu(15, m)


@pytest.mark.parametrize("n, m, states, period", [
    (5, 1, [1, 2], 2),
    (7, 1, [1, 2, 3], 3),
    (9, 1, [1, 2, 4], 3),
])
def test_mu_orbit(n, m, states, period):
    orbit = mu_orbit(n, m)
    assert orbit.states == states
    assert orbit.period == period
    assert orbit.half_totient == half_totient(n)


def test_mu_is_bijection_with_period_dividing_half_totient():
    for n in ODD:
        residues = residue_set(n)
        ell = half_totient(n)
        assert len(residues) == ell
        assert sorted(mu(n, m) for m in residues) == residues
        for m in residues:
            orbit = mu_orbit(n, m)
            assert ell % orbit.period == 0
            current = m
            for _ in range(ell):
                current = min(2 * current, n - 2 * current)
            assert current == m


@pytest.mark.parametrize("n, a, expected", [
    (5, 2, EulerSign.DIVIDES_PLUS),
    (7, 2, EulerSign.DIVIDES_MINUS),
    (9, 2, EulerSign.DIVIDES_PLUS),
])
def test_euler_sharpened_check(n, a, expected):
    assert euler_sharpened_check(n, a) == expected


def test_euler_sharpened_check_never_contradicts():
    for n in range(3, 1000, 2):
        assert euler_sharpened_check(n, 2) in (EulerSign.DIVIDES_MINUS, EulerSign.DIVIDES_PLUS)


def test_euler_sharpened_check_rejects_common_factor():
    with pytest.raises(InvalidArgument):
        euler_sharpened_check(9, 3)


def test_multiplicative_order():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(2, 9) == 6
    assert multiplicative_order(2, 5) == 4
    for n in ODD:
        order = multiplicative_order(2, n)
        assert pow(2, order, n) == 1
        assert all(pow(2, k, n) != 1 for k in range(1, order))
        assert totient(n) % order == 0


@pytest.mark.parametrize("lam, m, j, n", [
    (Fraction(1, 6), 1, 1, 3),
    (Fraction(1, 5), 1, 0, 5),
    (Fraction(3, 4), 3, 2, 1),
])
def test_reduce_lambda(lam, m, j, n):
    r = reduce_lambda(lam)
    assert (r.m, r.j, r.n) == (m, j, n)
    assert Fraction(r.m, (1 << r.j) * r.n) == lam
    assert r.canonical == (lam <= Fraction(1, 2))


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 3)])
def test_reduce_lambda_rejects(lam):
    with pytest.raises(InvalidArgument):
        reduce_lambda(lam)


def test_reduce_lambda_round_trip():
    for q in range(2, 200):
        for a in range(1, q):
            lam = Fraction(a, q)
            r = reduce_lambda(lam)
            assert r.n % 2 == 1
            assert gcd(r.m, (1 << r.j) * r.n) == 1
            assert Fraction(r.m, (1 << r.j) * r.n) == lam
