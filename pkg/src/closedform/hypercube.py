"""Counting zeros of an exponential polynomial through one Hamming weight.

For f : [0, t-1]^k -> [0, 2^u) the number

    M = sum over the box of 2^(2u beta(a)) * delta(f(a), u),
    beta(a) = a_1 + a_2 t + ... + a_k t^(k-1),

is the concatenation of the blocks delta(f(a), u), each of Hamming weight
2u at a zero of f and u elsewhere.  Hence #zeros = HW(M)/u - t^k.  When f
is a sum of monomials c * prod v_i^(x_i) x_i^(r_i), M has a closed form
built from generalized geometric series, so no enumeration is needed.
The enumeration lives in :mod:`closedform.oracles` only.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

import gmpy2

from . import intmath
from .budget import bit_budget, check_bits
from .errors import ConsistencyError, DomainError
from .formulas import EvalBackend, g_series, gseries_term, hw_term, nu2, nu2_term
from .terms import Const, Term, as_term, monus

mpz = gmpy2.mpz

EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True)
class Monomial:
    """c * v_1^(x_1) ... v_k^(x_k) * x_1^(r_1) ... x_k^(r_k)."""

    c: int
    v: tuple
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(b) for b in self.v))
        object.__setattr__(self, "r", tuple(int(p) for p in self.r))
        if len(self.v) != len(self.r):
            raise DomainError(f"monomial has {len(self.v)} bases but {len(self.r)} powers")
        if any(b < 1 for b in self.v):
            raise DomainError(f"exponential bases must be >= 1, got {self.v}")
        if any(p < 0 for p in self.r):
            raise DomainError(f"polynomial powers must be >= 0, got {self.r}")

    @property
    def k(self):
        return len(self.v)

    def value(self, point):
        out = self.c
        for b, p, x in zip(self.v, self.r, point):
            out *= b**x * x**p
        return out


@dataclass(frozen=True)
class HypercubeSpec:
    k: int
    t: int
    u: int
    monomials: tuple = ()
    c0: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "monomials", tuple(self.monomials))
        if self.k < 1 or self.t < 1 or self.u < 1:
            raise DomainError(f"need k, t, u >= 1, got k={self.k}, t={self.t}, u={self.u}")
        if self.c0 < 0:
            raise DomainError(f"free term must be natural, got {self.c0}")
        for m in self.monomials:
            if m.k != self.k:
                raise DomainError(f"monomial {m} has dimension {m.k}, spec has k={self.k}")

    @property
    def box_size(self):
        return self.t**self.k

    def f(self, point):
        return self.c0 + sum(m.value(point) for m in self.monomials)

    def m_bits(self):
        return 2 * self.u * self.box_size

    def validate(self, samples=4096, seed=0):
        """Check 0 <= f < 2^u over the box.

        Exhaustive up to EXHAUSTIVE_LIMIT points; beyond that the corners
        plus a seeded random sample are checked.
        """
        bound = 1 << self.u
        if self.box_size <= EXHAUSTIVE_LIMIT:
            points = itertools.product(range(self.t), repeat=self.k)
        else:
            rng = random.Random(seed)
            corners = itertools.product((0, self.t - 1), repeat=self.k)
            sampled = (tuple(rng.randrange(self.t) for _ in range(self.k))
                       for _ in range(samples))
            points = itertools.chain(corners, sampled)
        for p in points:
            y = self.f(p)
            if not 0 <= y < bound:
                raise DomainError(f"f{p} = {y} is outside [0, 2^{self.u})")

    def to_dict(self):
        return {
            "k": self.k, "t": self.t, "u": self.u, "c0": self.c0,
            "monomials": [{"c": m.c, "v": list(m.v), "r": list(m.r)} for m in self.monomials],
        }

    @classmethod
    def from_dict(cls, d):
        try:
            k = int(d["k"])
            monos = [Monomial(int(m["c"]), m.get("v", [1] * k), m["r"]) for m in d.get("monomials", [])]
            return cls(k, int(d["t"]), int(d["u"]), tuple(monos), int(d.get("c0", 0)))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed hypercube spec: {exc}") from None

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# -- M from closed forms ---------------------------------------------------

def free_term_block(c0, t, u, k):
    """C_k(c0, t, u) = (2^u - c0 + 1)(2^(2u t^k) - 1) / (2^u + 1)."""
    p = mpz(1) << u
    numerator = (p - c0 + 1) * ((mpz(1) << (2 * u * t**k)) - 1)
    quotient, rem = divmod(numerator, p + 1)
    if rem:
        raise ConsistencyError(f"C_{k} division by 2^u + 1 left remainder {rem}")
    return quotient


def monomial_block(m, t, u):
    """A_k(m, t, u) = -(2^u - 1) c prod G_(r_i)(2^(2u t^(i-1)) v_i, t)."""
    out = -((mpz(1) << u) - 1) * m.c
    for i, (b, p) in enumerate(zip(m.v, m.r)):
        q = (mpz(1) << (2 * u * t**i)) * b
        out *= g_series(p, int(q), t)
    return out


def build_M(spec, budget=None):
    check_bits("hypercube M", spec.m_bits(), budget)
    M = free_term_block(spec.c0, spec.t, spec.u, spec.k)
    for m in spec.monomials:
        M += monomial_block(m, spec.t, spec.u)
    if M < 0:
        raise ConsistencyError("M came out negative; the spec violates 0 <= f < 2^u")
    return int(M)


def count_solutions(spec, budget=None, validate=False):
    """Number of zeros of f in [0, t-1]^k, read off HW(M)."""
    if validate:
        spec.validate()
    M = build_M(spec, budget)
    weight = intmath.popcount(M)
    if weight % spec.u:
        raise ConsistencyError(f"u = {spec.u} does not divide HW(M) = {weight}")
    count = weight // spec.u - spec.box_size
    if count < 0:
        raise ConsistencyError(f"negative zero count {count}")
    return count


# -- chi and omega ----------------------------------------------------------

def chi_spec(n):
    """(x^2 - n y)^2 over [0, n-1]^2 with u = n + 4."""
    if n < 1:
        raise DomainError(f"chi needs n >= 1, got {n}")
    ones = (1, 1)
    return HypercubeSpec(
        k=2, t=n, u=n + 4, c0=0, label=f"chi({n})",
        monomials=(
            Monomial(1, ones, (4, 0)),
            Monomial(-2 * n, ones, (2, 1)),
            Monomial(n * n, ones, (0, 2)),
        ),
    )


def omega_spec(n):
    """(x^2 - N y - 1)^2 over [0, N-1]^2 with N = 4n and u = N + 4."""
    if n < 1:
        raise DomainError(f"omega needs n >= 1, got {n}")
    N = 4 * n
    ones = (1, 1)
    return HypercubeSpec(
        k=2, t=N, u=N + 4, c0=1, label=f"omega({n})",
        monomials=(
            Monomial(1, ones, (4, 0)),
            Monomial(-2, ones, (2, 0)),
            Monomial(-2 * N, ones, (2, 1)),
            Monomial(N * N, ones, (0, 2)),
            Monomial(2 * N, ones, (0, 1)),
        ),
    )


def pick_backend(backend, spec, budget):
    if backend is not None:
        return EvalBackend(backend)
    limit = bit_budget() if budget is None else budget
    return EvalBackend.FULL_TERM if spec.m_bits() <= limit else EvalBackend.NATIVE


def chi(n, backend=None, budget=None):
    """Largest s with s^2 | n, as HW(M(f, n, n, n+4))/(n+4) - n^2.

    ``backend=None`` picks FULL_TERM while M fits the bit budget and
    NATIVE beyond it.
    """
    if n < 1:
        raise DomainError(f"chi needs n >= 1, got {n}")
    backend = pick_backend(backend, chi_spec(n), budget)
    if backend is EvalBackend.NATIVE:
        return intmath.chi_native(n)
    return count_solutions(chi_spec(n), budget)


def omega_solution_count(n, budget=None):
    """Solutions of x^2 = 1 in Z_4n, i.e. 2^(omega(n)+1), from the hypercube."""
    return count_solutions(omega_spec(n), budget)


def omega(n, backend=None, budget=None):
    """Distinct prime divisors, as nu2(HW(M(g, 4n, 4n, 4n+4))/(4n+4) - 16n^2) - 1.

    The valuation of the (small) count uses the layered nu2 formula: its
    pure gcd(c, 2^c) term needs (c 2^c)^2 bits, about 4.7e6 already at c = 8.
    """
    if n < 1:
        raise DomainError(f"omega needs n >= 1, got {n}")
    backend = pick_backend(backend, omega_spec(n), budget)
    if backend is EvalBackend.NATIVE:
        return intmath.omega_native(n)
    count = omega_solution_count(n, budget)
    return nu2(count, EvalBackend.LAYERED, budget) - 1


# -- symbolic builders -----------------------------------------------------

@dataclass(frozen=True)
class SymbolicMonomial:
    """Monomial whose coefficient magnitude and bases are terms; sign is fixed."""

    sign: int
    coef: Term
    r: tuple
    v: tuple = ()


def m_term(k, t, u, monomials, c0):
    """Term for M = C_k(c0) + sum A_k(m), as (positive part) -. (negative part).

    A_k is -(2^u - 1) c prod G, so monomials with c > 0 land on the
    negative side.  The true M is non-negative, so the monus is exact.
    """
    t, u, c0 = as_term(t), as_term(u), as_term(c0)
    pu = 2**u
    two_u = 2 * u
    volume = t**k if k > 1 else t
    free = monus(pu + 1, c0) * monus(2 ** (two_u * volume), 1) // (pu + 1)
    pos, neg = [free], []
    for m in monomials:
        factors = [monus(pu, 1)]
        if m.coef != Const(1):
            factors.append(m.coef)
        for i, p in enumerate(m.r):
            stride = two_u if i == 0 else two_u * (t if i == 1 else t**i)
            q = 2**stride
            if m.v and m.v[i] != Const(1):
                q = q * m.v[i]
            factors.append(gseries_term(p, q, t))
        block = factors[0]
        for f in factors[1:]:
            block = block * f
        (neg if m.sign > 0 else pos).append(block)
    total_pos = pos[0]
    for b in pos[1:]:
        total_pos = total_pos + b
    if not neg:
        return total_pos
    total_neg = neg[0]
    for b in neg[1:]:
        total_neg = total_neg + b
    return monus(total_pos, total_neg)


def chi_term(n, hybrid=True):
    n = as_term(n)
    monos = [
        SymbolicMonomial(+1, Const(1), (4, 0)),
        SymbolicMonomial(-1, 2 * n, (2, 1)),
        SymbolicMonomial(+1, n**2, (0, 2)),
    ]
    t, u = n, n + 4
    M = m_term(2, t, u, monos, 0)
    return monus(hw_term(M, hybrid) // u, t**2)


def omega_term(n, hybrid=True):
    N = 4 * as_term(n)
    monos = [
        SymbolicMonomial(+1, Const(1), (4, 0)),
        SymbolicMonomial(-1, Const(2), (2, 0)),
        SymbolicMonomial(-1, 2 * N, (2, 1)),
        SymbolicMonomial(+1, N**2, (0, 2)),
        SymbolicMonomial(+1, 2 * N, (0, 1)),
    ]
    t, u = N, N + 4
    M = m_term(2, t, u, monos, 1)
    count = monus(hw_term(M, hybrid) // u, t**2)
    return monus(nu2_term(count, hybrid), 1)


__all__ = [
    "Monomial", "HypercubeSpec", "SymbolicMonomial", "build_M",
    "count_solutions", "pick_backend", "free_term_block", "monomial_block", "chi_spec",
    "omega_spec", "chi", "omega", "omega_solution_count", "m_term",
    "chi_term", "omega_term",
]
