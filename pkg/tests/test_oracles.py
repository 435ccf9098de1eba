import math

import pytest
from hypothesis import given, strategies as st

from closedform import oracles
from closedform.intmath import chi_native, factorize, floor_root, omega_native


@pytest.mark.parametrize("n,want", [(15, 2), (7, 6), (4, 1)])
def test_smallest_divisor_system_examples(n, want):
    rep = oracles.smallest_divisor_system_count(n)
    assert rep.count == want and rep.agrees


@pytest.mark.parametrize("n,want", [(12, 2), (5, 4), (9, 2)])
def test_greatest_prime_system_examples(n, want):
    rep = oracles.greatest_prime_system_count(n)
    assert rep.count == want and rep.agrees


def test_systems_full_ranges():
    assert all(oracles.smallest_divisor_system_count(n).agrees for n in range(2, 25))
    assert all(oracles.greatest_prime_system_count(n).agrees for n in range(2, 21))


def test_system_ranges_are_enforced():
    with pytest.raises(oracles.RangeError):
        oracles.smallest_divisor_system_count(25)
    with pytest.raises(oracles.RangeError):
        oracles.greatest_prime_system_count(1)


@pytest.mark.parametrize("n,chi_count,omega_count", [(4, 2, 4), (3, 1, 4), (25, 5, 4), (12, 2, 8), (30, 1, 16)])
def test_residue_counts(n, chi_count, omega_count):
    assert oracles.chi_residue_count(n) == chi_count
    assert oracles.omega_residue_count(n) == omega_count


def test_residue_theorems_to_2000():
    for n in range(1, 2001):
        assert oracles.chi_residue_report(n).agrees
        assert oracles.omega_residue_report(n).agrees


@given(st.integers(1, 10**6))
def test_factorizations_agree(n):
    assert oracles.trial_factorization(n) == factorize(n)
    assert math.prod(p**e for p, e in factorize(n).items()) == n


@given(st.integers(1, 5000))
def test_native_chi_omega_match_oracles(n):
    assert chi_native(n) == oracles.largest_square_divisor_root(n)
    assert omega_native(n) == oracles.distinct_prime_count(n)


@given(st.integers(1, 12), st.integers(0, 3000))
def test_floor_root_matches_scan(m, n):
    assert floor_root(m, n) == oracles.floor_root_scan(m, n)


@given(st.integers(1, 8), st.integers(0, 10**200))
def test_floor_root_bracket(m, n):
    r = floor_root(m, n)
    assert r**m <= n < (r + 1) ** m


def test_elementary_oracles():
    assert oracles.pascal(8, 5) == 56 and oracles.pascal(3, 4) == 0
    assert oracles.halving_nu2(64) == 6
    assert oracles.binary_digit_count(28) == 3
    assert oracles.euclid_gcd(12, 18) == 6
    assert oracles.iterated_factorial(5) == 120
    assert oracles.naive_g_series(4, 1, 3) == 17


def test_enumerate_box_limit():
    class Big:
        k, t, c0, monomials = 2, 10**4, 0, ()

    with pytest.raises(oracles.RangeError):
        oracles.enumerate_box_zeros(Big)
