"""A proper divisor of every composite n from chi(n), omega(n) and a root.

    T(n) = gcd(n / chi(n), floor(n^(1/omega(n)))!)
    U(n) = (2 -. chi(n)) gcd(n, floor(n^(1/omega(n)))!)
           + (1 -. (2 -. chi(n))) chi(n)

chi and omega come from the hypercube terms (or natively); the root, the
factorial and the gcd default to native arithmetic, since their pure
closed forms blow up long before the inputs get interesting.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import gmpy2

from . import hypercube, oracles
from .errors import DomainError, PropertyViolation
from .formulas import EvalBackend, factorial_term, gcd_term
from .intmath import floor_root, is_perfect_power, is_prime
from .terms import Call, as_term, monus

__all__ = [
    "FactorReport", "ConjectureCheck", "floor_root", "floor_root_conjecture",
    "conjecture_hypotheses",
    "factor_T", "factor_U", "factor", "root_bound_check",
    "witness_check_pow_equation", "pow_equation_witnesses", "factor_term",
]


@dataclass(frozen=True)
class FactorReport:
    n: int
    method: str
    divisor: int
    cofactor: int
    chi: int
    omega: int
    root: int
    backend: EvalBackend
    elapsed: float
    composite: bool
    backends: dict = field(default_factory=dict)

    @property
    def proper(self):
        return 1 < self.divisor < self.n

    def to_dict(self):
        d = asdict(self)
        d["backend"] = self.backend.value
        d["backends"] = {k: v.value for k, v in self.backends.items()}
        d["elapsed"] = round(self.elapsed, 6)
        return d


def _divisor_inputs(n, backend, budget):
    if n < 2:
        raise DomainError(f"factoring needs n >= 2, got {n}")
    b_chi = hypercube.pick_backend(backend, hypercube.chi_spec(n), budget)
    b_omega = hypercube.pick_backend(backend, hypercube.omega_spec(n), budget)
    chi_n = hypercube.chi(n, b_chi, budget)
    omega_n = hypercube.omega(n, b_omega, budget)
    # only reachable for n = 1, which is rejected above
    omega_n = omega_n or 1
    root = floor_root(omega_n, n)
    return chi_n, omega_n, root, {"chi": b_chi, "omega": b_omega, "root": EvalBackend.NATIVE}


def _tail(a, root, tail_backend, budget):
    """gcd(a, root!) with the factorial and gcd taken per ``tail_backend``."""
    tail_backend = EvalBackend(tail_backend)
    if tail_backend is EvalBackend.NATIVE:
        return math.gcd(a, math.factorial(root))
    fact = factorial_term(root, tail_backend)
    return gcd_term(a, fact, budget)


def factor_T(n, backend=None, tail_backend=EvalBackend.NATIVE, budget=None):
    start = time.perf_counter()
    chi_n, omega_n, root, used = _divisor_inputs(n, backend, budget)
    q = _tail(n // chi_n, root, tail_backend, budget)
    used["factorial"] = used["gcd"] = EvalBackend(tail_backend)
    return FactorReport(
        n=n, method="T", divisor=q, cofactor=n // q, chi=chi_n, omega=omega_n,
        root=root, backend=used["chi"], elapsed=time.perf_counter() - start,
        composite=not is_prime(n), backends=used,
    )


def factor_U(n, backend=None, tail_backend=EvalBackend.NATIVE, budget=None):
    start = time.perf_counter()
    chi_n, omega_n, root, used = _divisor_inputs(n, backend, budget)
    squarefree = max(2 - chi_n, 0)
    nonsquarefree = max(1 - squarefree, 0)
    q = squarefree * _tail(n, root, tail_backend, budget) + nonsquarefree * chi_n
    used["factorial"] = used["gcd"] = EvalBackend(tail_backend)
    return FactorReport(
        n=n, method="U", divisor=q, cofactor=n // q, chi=chi_n, omega=omega_n,
        root=root, backend=used["chi"], elapsed=time.perf_counter() - start,
        composite=not is_prime(n), backends=used,
    )


def factor(n, method="T", **kwargs):
    if method == "T":
        return factor_T(n, **kwargs)
    if method == "U":
        return factor_U(n, **kwargs)
    raise DomainError(f"unknown method {method!r}; expected 'T' or 'U'")


def factor_term(method, n="n"):
    """Hybrid term for T(n) or U(n); chi and omega stay full hypercube terms."""
    n = as_term(n)
    chi_n = hypercube.chi_term(n)
    omega_n = hypercube.omega_term(n)
    omega_n = omega_n + monus(1, omega_n)
    fact = Call("factorial", (Call("floor_root", (omega_n, n)),))
    if method == "T":
        return Call("gcd", (n // chi_n, fact))
    if method == "U":
        sqfree = monus(2, chi_n)
        return sqfree * Call("gcd", (n, fact)) + monus(1, sqfree) * chi_n
    raise DomainError(f"unknown method {method!r}; expected 'T' or 'U'")


def root_bound_check(n):
    """For squarefree composite n = p_1 ... p_k: p_1 <= floor(n^(1/k)) < p_k."""
    if n < 4 or oracles.is_prime(n):
        raise DomainError(f"root bound needs a composite n, got {n}")
    primes = sorted(oracles.trial_factorization(n).items())
    if any(e > 1 for _, e in primes):
        raise DomainError(f"root bound needs a squarefree n, got {n}")
    r = floor_root(len(primes), n)
    return primes[0][0] <= r < primes[-1][0]


# -- conjectured root formula ----------------------------------------------

@dataclass(frozen=True)
class ConjectureCheck:
    m: int
    n: int
    value: int | None
    expected: int

    @property
    def agrees(self):
        return self.value == self.expected


def conjecture_hypotheses(m, n):
    """List the violated hypotheses (empty when the formula applies)."""
    bad = []
    if n <= 2:
        bad.append("n > 2")
    if m <= 1:
        bad.append("m > 1")
    if n >= 1 and m > n.bit_length():
        bad.append("floor(log2 n) + 1 >= m")
    if n >= 0 and m >= 1 and is_perfect_power(n, m):
        bad.append("n is not a perfect m-th power")
    return bad


def floor_root_conjecture(m, n):
    """Evaluate floor((b^(K+1) mod N) / (b^K mod N) - 1) with K = 2nm,
    b = n^K + 1 and N = n^(2nm^2) - n, and compare it with floor_root.

    Never asserts the formula; a disagreement is returned as data.
    """
    bad = conjecture_hypotheses(m, n)
    if bad:
        raise DomainError("conjecture hypotheses violated: " + ", ".join(bad))
    K = 2 * n * m
    nn = gmpy2.mpz(n)
    base = nn**K + 1
    modulus = nn ** (K * m) - nn
    bottom = gmpy2.powmod(base, K, modulus)
    top = bottom * base % modulus
    value = None if bottom == 0 else int(top // bottom) - 1
    return ConjectureCheck(m, n, value, floor_root(m, n))


# -- the nine-variable witness equation --------------------------------------

def pow_equation_witnesses(m, n):
    """Witness tuples (x, y, z, w, g, s, r, q, d) for x^m <= n, x in [0, n]."""
    out = []
    for x in range(n + 1):
        if x**m > n:
            break
        z = 1 << (3 * m * x)
        s = 1 << (3 * m * m * x)
        q, r = divmod(s, z - x)
        out.append((x, n - x**m, z, x * q, z * q, s, r, q, z - x - r - 1))
    return out


def _pow2_diff_is_zero(a, b):
    # (2^a - 2^b)^2 vanishes iff a == b; 2^a itself can have 2^54 bits here
    return a == b


def witness_check_pow_equation(m, n):
    """Build the unique witness for every x with x^m <= n, check that the
    sum of squares

        (2^(3mx) - z)^2 + (2^(3mx) q - g)^2 + (w - xq)^2 + (2^(3m^2 x) - s)^2
        + (2^n - 2^(r+y))^2 + (2^(s+w) - 2^(g+r))^2 + (2^z - 2^(x+r+d+1))^2

    vanishes and that every coordinate lies in [0, 2^(6 n^3 m^2)]; return
    the number of witnesses.
    """
    if not (1 <= m <= 3 and 1 <= n <= 20):
        raise oracles.RangeError(f"witness check runs for 1 <= m <= 3, 1 <= n <= 20; got m={m}, n={n}")
    cube = 6 * n**3 * m * m
    names = "xyzwgsrqd"
    witnesses = pow_equation_witnesses(m, n)
    for tup in witnesses:
        x, y, z, w, g, s, r, q, d = tup
        squares = {
            "(2^(3mx) - z)^2": ((1 << (3 * m * x)) - z) ** 2 == 0,
            "(2^(3mx) q - g)^2": ((1 << (3 * m * x)) * q - g) ** 2 == 0,
            "(w - xq)^2": (w - x * q) ** 2 == 0,
            "(2^(3m^2 x) - s)^2": ((1 << (3 * m * m * x)) - s) ** 2 == 0,
            "(2^n - 2^(r+y))^2": _pow2_diff_is_zero(n, r + y),
            "(2^(s+w) - 2^(g+r))^2": _pow2_diff_is_zero(s + w, g + r),
            "(2^z - 2^(x+r+d+1))^2": _pow2_diff_is_zero(z, x + r + d + 1),
        }
        for label, zero in squares.items():
            if not zero:
                raise PropertyViolation(f"m={m}, n={n}, x={x}: {label} does not vanish")
        for name, value in zip(names, tup):
            if value < 0 or value.bit_length() > cube + 1 or (
                    value.bit_length() == cube + 1 and value != 1 << cube):
                raise PropertyViolation(
                    f"m={m}, n={n}, x={x}: {name} = {value} leaves the cube [0, 2^{cube}]")
    return len(witnesses)
