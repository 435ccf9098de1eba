"""Brute-force ground truth.

Nothing in here imports the formula or hypercube code paths; every value is
obtained by the most literal enumeration available, so agreement with the
closed forms is evidence rather than a tautology.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import isqrt

from .errors import DomainError

BOX_LIMIT = 10**7


class RangeError(DomainError):
    """Input outside the range an enumeration oracle is sized for."""


# -- elementary oracles ----------------------------------------------------

def trial_factorization(n):
    if n < 1:
        raise DomainError("trial_factorization needs n >= 1")
    factors = {}
    d = 2
    while n > 1:
        if d * d > n:
            factors[n] = factors.get(n, 0) + 1
            break
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    return factors


def is_prime(n):
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def smallest_prime_factor(n):
    return min(trial_factorization(n))


def greatest_prime_factor(n):
    return max(trial_factorization(n))


def distinct_prime_count(n):
    return len(trial_factorization(n))


def is_squarefree(n):
    return all(e == 1 for e in trial_factorization(n).values())


def largest_square_divisor_root(n):
    """chi(n) by scanning every s with s^2 <= n."""
    if n < 1:
        raise DomainError("chi needs n >= 1")
    best = 1
    for s in range(1, isqrt(n) + 1):
        if n % (s * s) == 0:
            best = s
    return best


def euclid_gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def halving_nu2(n):
    if n < 1:
        raise DomainError("nu2 needs n >= 1")
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return e


def binary_digit_count(n):
    ones = 0
    while n:
        ones += n & 1
        n >>= 1
    return ones


def pascal(a, b):
    row = [1]
    for _ in range(a):
        row = [x + y for x, y in zip([0] + row, row + [0])]
    return row[b] if 0 <= b <= a else 0


def iterated_power(x, m):
    out = 1
    for _ in range(m):
        out *= x
    return out


def iterated_factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def naive_g_series(r, q, t):
    return sum(iterated_power(j, r) * iterated_power(q, j) for j in range(t))


def floor_root_scan(m, n):
    """floor(n^(1/m)) as |{x in [0, n] : x^m <= n}| - 1."""
    if m < 1:
        raise DomainError("m must be >= 1")
    count = 0
    for x in range(n + 1):
        if iterated_power(x, m) > n:
            break
        count += 1
    return count - 1


# -- residue counts ---------------------------------------------------------

def chi_residue_count(n):
    """|{a in Z_n : a^2 = 0}|."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return sum(1 for a in range(n) if a * a % n == 0)


def omega_residue_count(n):
    """|{a in Z_4n : a^2 = 1}|, which equals 2^(omega(n) + 1)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    m = 4 * n
    return sum(1 for a in range(m) if a * a % m == 1)


# -- the divisor systems ----------------------------------------------------

class SystemLemma(str, enum.Enum):
    SMALLEST_DIVISOR = "SmallestDivisorSystem"
    GREATEST_PRIME = "GreatestPrimeSystem"
    CHI_RESIDUES = "ChiResidues"
    OMEGA_RESIDUES = "OmegaResidues"


@dataclass(frozen=True)
class CountReport:
    n: int
    lemma: SystemLemma
    count: int
    predicted: int

    @property
    def agrees(self):
        return self.count == self.predicted


def smallest_divisor_system_count(n):
    """Count (a, b, c, d, e, f) in N^6 with

        (a+b+2) c = n,   d (a+b+1)! + 1 = e n,   d + f = n.

    Only s = a + b is enumerated; for fixed s the other unknowns are forced
    (c = n / D, d in [0, n] with f = n - d, e by exact division), and the
    s + 1 splits of s into (a, b) each give one tuple.
    """
    if not 2 <= n <= 24:
        raise RangeError(f"smallest-divisor system is checked for 2 <= n <= 24, got {n}")
    count = 0
    fact = 1  # (s + 1)!
    for s in range(0, n - 1):
        fact *= s + 1
        D = s + 2
        if n % D:
            continue
        solutions = sum(1 for d in range(n + 1) if (d * fact + 1) % n == 0)
        count += (s + 1) * solutions
    predicted = n - 1 if is_prime(n) else smallest_prime_factor(n) - 1
    return CountReport(n, SystemLemma.SMALLEST_DIVISOR, count, predicted)


def _legendre(p, m):
    """Exponent of the prime p in m!."""
    e, q = 0, p
    while q <= m:
        e += m // q
        q *= p
    return e


def greatest_prime_system_count(n):
    """Count (a, b, c, d, e) in N^5 with

        (a+b+2) c = n,   (a+b+1)! + 1 = d (a+b+2),   ((a+b+2)!)^n = n e.

    e can be astronomically large, so n | (D!)^n is decided by comparing
    prime exponents instead of forming (D!)^n.
    """
    if not 2 <= n <= 20:
        raise RangeError(f"greatest-prime system is checked for 2 <= n <= 20, got {n}")
    factors = trial_factorization(n)
    count = 0
    fact = 1  # (s + 1)!
    for s in range(0, n - 1):
        fact *= s + 1
        D = s + 2
        if n % D or (fact + 1) % D:
            continue
        if all(n * _legendre(p, D) >= alpha for p, alpha in factors.items()):
            count += s + 1
    predicted = n - 1 if is_prime(n) else greatest_prime_factor(n) - 1
    return CountReport(n, SystemLemma.GREATEST_PRIME, count, predicted)


def chi_residue_report(n):
    return CountReport(n, SystemLemma.CHI_RESIDUES, chi_residue_count(n),
                       largest_square_divisor_root(n))


def omega_residue_report(n):
    return CountReport(n, SystemLemma.OMEGA_RESIDUES, omega_residue_count(n),
                       2 ** (distinct_prime_count(n) + 1))


# -- box enumeration ---------------------------------------------------------

def _monomial_at(c, bases, powers, point):
    value = c
    for v, r, x in zip(bases, powers, point):
        value *= iterated_power(v, x) * iterated_power(x, r)
    return value


def enumerate_box_zeros(spec):
    """Zeros of f over [0, t-1]^k by visiting every lattice point.

    ``spec`` is anything with k, t, c0 and monomials carrying c, v, r.
    """
    if spec.t**spec.k > BOX_LIMIT:
        raise RangeError(f"box of {spec.t}^{spec.k} points exceeds {BOX_LIMIT}")
    zeros = 0
    for point in itertools.product(range(spec.t), repeat=spec.k):
        total = spec.c0
        for m in spec.monomials:
            total += _monomial_at(m.c, m.v, m.r, point)
        if total == 0:
            zeros += 1
    return zeros


__all__ = [
    "RangeError", "SystemLemma", "CountReport", "trial_factorization",
    "is_prime", "smallest_prime_factor", "greatest_prime_factor",
    "distinct_prime_count", "is_squarefree", "largest_square_divisor_root",
    "euclid_gcd", "halving_nu2", "binary_digit_count", "pascal",
    "iterated_power", "iterated_factorial", "naive_g_series",
    "floor_root_scan", "chi_residue_count", "omega_residue_count",
    "smallest_divisor_system_count", "greatest_prime_system_count",
    "chi_residue_report", "omega_residue_report", "enumerate_box_zeros",
]
