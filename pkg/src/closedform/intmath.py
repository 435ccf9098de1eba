"""Exact integer primitives used by the native backend.

Nothing here touches floating point.  These are the fast paths; the
brute-force ground truth lives in :mod:`closedform.oracles` and is kept
deliberately separate.
"""

import gmpy2

from .errors import DomainError


def popcount(n):
    if n < 0:
        raise DomainError("popcount of a negative number")
    return int(gmpy2.popcount(n))


def nu2_native(n):
    if n <= 0:
        raise DomainError("nu2(0) is undefined")
    return (n & -n).bit_length() - 1


def floor_root(m, n):
    """Largest r with r**m <= n, found by binary search on exact powers."""
    if m < 1:
        raise DomainError("the 0-th root does not make sense")
    if n < 0:
        raise DomainError("floor_root needs a natural radicand")
    if n < 2 or m == 1:
        return n
    lo, hi = 1, 1 << (n.bit_length() // m + 1)
    # invariant: lo**m <= n < hi**m
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**m <= n:
            lo = mid
        else:
            hi = mid
    return lo


def is_perfect_power(n, m):
    r = floor_root(m, n)
    return r**m == n


def factorize(n):
    """Trial-division factorization, returned as {prime: exponent}."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    return n >= 2 and factorize(n) == {n: 1}


def chi_native(n):
    """Largest s with s*s dividing n."""
    if n < 1:
        raise DomainError("chi needs n >= 1")
    s = 1
    for p, e in factorize(n).items():
        s *= p ** (e // 2)
    return s


def omega_native(n):
    if n < 1:
        raise DomainError("omega needs n >= 1")
    return len(factorize(n))
