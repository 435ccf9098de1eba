"""Closed-form building blocks: binomials, gcd, 2-adic valuation, Hamming
weight, factorial, the block encoder delta, generalized geometric series
and the two-variable power formula.

Each formula exists twice: as a value-level function computing the
formula's own arithmetic exactly (bit-exact shifts and masks, no shortcut
through a library routine), and as a :class:`~closedform.terms.Term`
emitter.  Value-level functions take an :class:`EvalBackend` where a
sub-formula can be swapped for a native computation.
"""

from __future__ import annotations

import enum
import math

import gmpy2

from . import intmath
from .budget import bit_budget, check_bits
from .errors import CapacityError, ConsistencyError, DomainError
from .terms import Call, Const, Term, Var, as_term, monus

mpz = gmpy2.mpz


class EvalBackend(str, enum.Enum):
    """How a formula is evaluated.

    FULL_TERM computes every piece through its closed form.  LAYERED keeps
    the formula's outer closed form but computes named sub-formulas
    natively.  NATIVE skips closed forms altogether.
    """

    FULL_TERM = "term"
    LAYERED = "layered"
    NATIVE = "native"


class FormulaId(str, enum.Enum):
    HW = "hw"
    NU2 = "nu2"
    GCD = "gcd"
    BINOM1 = "binom1"
    BINOM2 = "binom2"
    FACTORIAL = "factorial"
    DELTA = "delta"
    GSERIES = "gseries"
    POW_LEMMA = "pow"
    CHI = "chi"
    OMEGA = "omega"


FORMULA_PARAMS = {
    FormulaId.HW: ("n",),
    FormulaId.NU2: ("n",),
    FormulaId.GCD: ("a", "b"),
    FormulaId.BINOM1: ("a", "b"),
    FormulaId.BINOM2: ("a", "b"),
    FormulaId.FACTORIAL: ("n",),
    FormulaId.DELTA: ("a", "b"),
    FormulaId.GSERIES: ("q", "t"),
    FormulaId.POW_LEMMA: ("x", "m"),
    FormulaId.CHI: ("n",),
    FormulaId.OMEGA: ("n",),
}

FACTORIAL_LIMITS = {EvalBackend.LAYERED: 8, EvalBackend.FULL_TERM: 2}


def _backend(b):
    return EvalBackend(b)


def _natural(name, value):
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise DomainError(f"{name} must be a natural number, got {value!r}")


# -- binomial coefficients -------------------------------------------------

def binom1_bits(a, b):
    return a * a + a


def binom1(a, b, budget=None):
    """floor((2^a + 1)^a / 2^(ab)) mod 2^a.

    Reads the b-th base-2^a digit of (2^a + 1)^a.  The digit equals
    C(a, b) only while every C(a, j) < 2^a, which fails at a = 0, where
    the window mod 2^0 is empty.
    """
    _natural("a", a)
    _natural("b", b)
    if b > a:
        raise DomainError(f"binom1 needs b <= a, got a={a}, b={b}")
    if a == 0:
        raise DomainError("binom1 is undefined at a = 0: C(0, 0) = 1 does "
                          "not fit the digit window mod 2^0")
    check_bits("binom1", binom1_bits(a, b), budget)
    x = (mpz(1) << a) + 1
    power = x**a
    return int((power >> (a * b)) & ((mpz(1) << a) - 1))


def binom2_bits(a, b):
    return 2 * (a + 2) * ((a + 1) ** 2 + b + 1)


def binom2(a, b, budget=None):
    """floor(2^(2(a+2)((a+1)^2+b+1)) / (2^(2(a+2)^2) - 2^(2(a+2)) - 1)) mod 2^(2(a+2))."""
    _natural("a", a)
    _natural("b", b)
    if b > a:
        raise DomainError(f"binom2 needs b <= a, got a={a}, b={b}")
    check_bits("binom2", binom2_bits(a, b), budget)
    w = 2 * (a + 2)
    numerator = mpz(1) << binom2_bits(a, b)
    denominator = (mpz(1) << (w * (a + 2))) - (mpz(1) << w) - 1
    return int((numerator // denominator) & ((mpz(1) << w) - 1))


# -- gcd, valuation, Hamming weight ----------------------------------------

def gcd_term_bits(a, b):
    ab = a * b
    return ab * (ab + a + b)


def gcd_term(a, b, budget=None):
    """(floor(2^(ab(ab+a+b)) / ((2^(a^2 b) - 1)(2^(a b^2) - 1))) mod 2^(ab)) - 1.

    The window mod 2^(ab) holds gcd(a, b) + 1, which overflows at
    a = b = 1 (the term evaluates to 0 there), so that point is refused.
    """
    _natural("a", a)
    _natural("b", b)
    if a < 1 or b < 1:
        raise DomainError(f"gcd term needs a, b >= 1, got a={a}, b={b}")
    if a == b == 1:
        raise DomainError("gcd term is undefined at a = b = 1: gcd + 1 = 2 "
                          "does not fit the digit window mod 2^1")
    check_bits("gcd term", gcd_term_bits(a, b), budget)
    ab = a * b
    numerator = mpz(1) << gcd_term_bits(a, b)
    denominator = ((mpz(1) << (a * ab)) - 1) * ((mpz(1) << (ab * b)) - 1)
    return int(((numerator // denominator) & ((mpz(1) << ab) - 1)) - 1)


def _nu2_outer(n, g, budget):
    # floor((g^(n+1) mod (2^(n+1) - 1)^2) / (2^(n+1) - 1)) with g = gcd(n, 2^n)
    check_bits("nu2 term", max((n + 1) * int(g).bit_length(), 2 * n + 2), budget)
    m = (mpz(1) << (n + 1)) - 1
    return int((mpz(g) ** (n + 1) % (m * m)) // m)


def nu2(n, backend=EvalBackend.FULL_TERM, budget=None):
    """2-adic valuation of n >= 1.

    FULL_TERM evaluates gcd(n, 2^n) with the gcd term (feasible only for
    tiny n); LAYERED computes that gcd natively and keeps the rest.
    """
    backend = _backend(backend)
    _natural("n", n)
    if n == 0:
        raise DomainError("nu2(0) is undefined")
    if backend is EvalBackend.NATIVE:
        return intmath.nu2_native(n)
    if backend is EvalBackend.FULL_TERM:
        g = gcd_term(n, 2**n, budget)
    else:
        check_bits("2^n", n + 1, budget)
        g = gmpy2.gcd(n, mpz(1) << n)
    return _nu2_outer(n, g, budget)


def hw(n, backend=EvalBackend.NATIVE, budget=None):
    """Hamming weight.  Non-native backends use Kummer: HW(n) = nu2(C(2n, n))."""
    backend = _backend(backend)
    _natural("n", n)
    if backend is EvalBackend.NATIVE:
        return intmath.popcount(n)
    # binom1's digit window is empty at a = 0; binom2 is cheap there
    c = binom2(0, 0, budget) if n == 0 else binom1(2 * n, n, budget)
    inner = EvalBackend.FULL_TERM if backend is EvalBackend.FULL_TERM else EvalBackend.NATIVE
    return nu2(c, inner, budget)


# -- factorial --------------------------------------------------------------

def factorial_term(n, backend=EvalBackend.LAYERED):
    """n! = floor(8^(n^3) / C(8^(n^2), n)).

    LAYERED takes the inner binomial natively (n <= 8); FULL_TERM takes it
    from binom1 at a = 8^(n^2), about 2^24 bits already at n = 2.
    """
    backend = _backend(backend)
    _natural("n", n)
    if backend is EvalBackend.NATIVE:
        return math.factorial(n)
    limit = FACTORIAL_LIMITS[backend]
    if n > limit:
        raise CapacityError(
            f"factorial term with the {backend.value} backend supports n <= {limit}, got n={n}")
    a = mpz(8) ** (n * n)
    if backend is EvalBackend.FULL_TERM:
        inner = binom1(int(a), n, budget=math.inf)
    else:
        inner = math.comb(int(a), n)
    return int((mpz(8) ** (n**3)) // inner)


# -- delta and the generalized geometric series ----------------------------

def delta(a, b):
    """(2^b - 1)(2^b - a + 1); its Hamming weight is 2b if a == 0 else b."""
    _natural("a", a)
    _natural("b", b)
    if a >= 1 << b:
        raise DomainError(f"delta needs a < 2^b, got a={a}, b={b}")
    p = mpz(1) << b
    return int((p - 1) * (p - a + 1))


# Numerators of G_r(q, t) = q^lead * N(q, x) / (q - 1)^(r + 1).  Each entry
# is (coefficients of a polynomial in x, low degree first, x-multiplier of
# the q exponent, q exponent offset); x is t for r = 0 and t - 1 otherwise.
_G_FORMS = {
    0: ("t", 0, (
        ((1,), 1, 0),
        ((-1,), 0, 0),
    )),
    1: ("t1", 1, (
        ((0, 1), 1, 1),
        ((-1, -1), 1, 0),
        ((1,), 0, 0),
    )),
    2: ("t1", 1, (
        ((0, 0, 1), 1, 2),
        ((1, -2, -2), 1, 1),
        ((1, 2, 1), 1, 0),
        ((-1,), 0, 1),
        ((-1,), 0, 0),
    )),
    4: ("t1", 1, (
        ((0, 0, 0, 0, 1), 1, 4),
        ((11, 12, -6, -12, -4), 1, 1),
        ((11, -12, -6, 12, 6), 1, 2),
        ((1, -4, 6, -4, -4), 1, 3),
        ((1, 4, 6, 4, 1), 1, 0),
        ((-1,), 0, 3),
        ((-11,), 0, 2),
        ((-11,), 0, 1),
        ((-1,), 0, 0),
    )),
}

# G_r(1, t) = sum of j^r for j < t, as (numerator polynomial in t, denominator)
_G_AT_ONE = {
    0: ((0, 1), 1),
    1: ((0, -1, 1), 2),
    2: ((0, 1, -3, 2), 6),
    4: ((0, -1, 0, 10, -15, 6), 30),
}

CLOSED_FORM_R = frozenset(_G_FORMS)


def _poly(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def g_series_naive(r, q, t):
    total, qj = 0, 1
    for j in range(t):
        total += j**r * qj
        qj *= q
    return total


def g_series(r, q, t):
    """G_r(q, t) = sum_{j<t} j^r q^j, closed form for r in {0, 1, 2, 4}."""
    _natural("r", r)
    _natural("t", t)
    if q < 1:
        raise DomainError(f"g_series needs q >= 1, got {q}")
    if r not in _G_FORMS:
        return g_series_naive(r, q, t)
    if t == 0:
        return 0
    if q == 1:
        coeffs, den = _G_AT_ONE[r]
        return _poly(coeffs, t) // den
    var, lead, rows = _G_FORMS[r]
    x = t if var == "t" else t - 1
    q = mpz(q)
    num = mpz(0)
    for coeffs, mult, offset in rows:
        num += _poly(coeffs, x) * q ** (mult * x + offset)
    num *= q**lead
    quotient, rem = divmod(num, (q - 1) ** (r + 1))
    if rem:
        raise ConsistencyError(f"G_{r}({q}, {t}) closed form left remainder {rem}")
    return int(quotient)


# -- x^m as a two-variable term --------------------------------------------

def pow_lemma_bits(x, m):
    return 3 * m * m * x + 1


def pow_lemma(x, m, budget=None):
    """x^m = 2^(3 m^2 x) mod (2^(3mx) -. x), for m >= 1."""
    _natural("x", x)
    _natural("m", m)
    if m < 1:
        raise DomainError("pow lemma needs m >= 1")
    check_bits("pow lemma", pow_lemma_bits(x, m), budget)
    modulus = (mpz(1) << (3 * m * x)) - x
    return int((mpz(1) << (3 * m * m * x)) % modulus)


# -- term emitters ---------------------------------------------------------

def _sum(terms):
    terms = list(terms)
    if not terms:
        return Const(0)
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    return acc


def _product(factors):
    factors = [f for f in factors if f != Const(1)]
    if not factors:
        return Const(1)
    acc = factors[0]
    for f in factors[1:]:
        acc = acc * f
    return acc


def _power(base, exp):
    if exp == Const(0):
        return Const(1)
    if exp == Const(1):
        return base
    return base ** exp


def _signed_sum(pos, neg):
    return monus(_sum(pos), _sum(neg)) if neg else _sum(pos)


def _poly_term(coeffs, x):
    pos, neg = [], []
    for i, c in enumerate(coeffs):
        if c:
            mono = _product([Const(abs(c)), _power(x, Const(i))])
            (pos if c > 0 else neg).append(mono)
    return _signed_sum(pos, neg)


def gseries_term(r, q, t):
    """Term for G_r(q, t), valid for every q >= 1.

    The q = 1 polynomial is switched in by 1 -. (q -. 1); the rational
    closed form then divides by zero, which evaluates to 0.
    """
    if r not in _G_FORMS:
        raise DomainError(f"no closed form for G_{r}; emission supports r in {sorted(_G_FORMS)}")
    q, t = as_term(q), as_term(t)
    var, lead, rows = _G_FORMS[r]
    x = t if var == "t" else monus(t, 1)
    pos, neg = [], []
    for coeffs, mult, offset in rows:
        if mult:
            exp = x + offset if offset else x
        else:
            exp = Const(offset)
        qpow = _power(q, exp)
        for i, c in enumerate(coeffs):
            if c:
                mono = _product([Const(abs(c)), _power(x, Const(i)), qpow])
                (pos if c > 0 else neg).append(mono)
    numerator = _signed_sum(pos, neg)
    if lead:
        numerator = q * numerator
    closed = numerator // _power(monus(q, 1), Const(r + 1))
    coeffs, den = _G_AT_ONE[r]
    at_one = _poly_term(coeffs, t)
    if den != 1:
        at_one = at_one // den
    return monus(1, monus(q, 1)) * at_one + closed


def delta_term(a, b):
    a, b = as_term(a), as_term(b)
    p = 2 ** b
    return monus(p, 1) * (monus(p, a) + 1)


def gcd_term_term(a, b):
    a, b = as_term(a), as_term(b)
    ab = a * b
    numerator = 2 ** (ab * (ab + a + b))
    denominator = monus(2 ** (a**2 * b), 1) * monus(2 ** (a * b**2), 1)
    return monus(numerator // denominator % 2**ab, 1)


def binom1_term(a, b):
    a, b = as_term(a), as_term(b)
    return (2**a + 1) ** a // 2 ** (a * b) % 2**a


def binom2_term(a, b):
    a, b = as_term(a), as_term(b)
    w = 2 * (a + 2)
    numerator = 2 ** (w * ((a + 1) ** 2 + b + 1))
    denominator = monus(monus(2 ** (w * (a + 2)), 2**w), 1)
    return numerator // denominator % 2**w


def nu2_term(n, hybrid=True):
    n = as_term(n)
    g = Call("gcd", (n, 2**n)) if hybrid else gcd_term_term(n, 2**n)
    m = monus(2 ** (n + 1), 1)
    return g ** (n + 1) % m**2 // m


def hw_term(n, hybrid=True):
    n = as_term(n)
    if hybrid:
        return Call("hw", (n,))
    return nu2_term(binom1_term(2 * n, n), hybrid=False)


def factorial_term_term(n):
    n = as_term(n)
    return 8 ** (n**3) // binom1_term(8 ** (n**2), n)


def pow_lemma_term(x, m):
    x, m = as_term(x), as_term(m)
    return 2 ** (3 * m**2 * x) % monus(2 ** (3 * m * x), x)


def emit_term(formula, hybrid=True, r=None, **params):
    """Build the term for ``formula``.

    Parameters default to variables of the same name; pass ints (or term
    text) to fix them.  ``r`` selects the power for the G-series.
    ``hybrid=False`` keeps to the pure language, where Hamming weight and
    gcd are expanded into their closed forms.
    """
    fid = FormulaId(formula)
    names = FORMULA_PARAMS[fid]
    unknown = set(params) - set(names)
    if unknown:
        raise DomainError(f"{fid.value} has no parameter(s) {sorted(unknown)}")
    args = [as_term(params[k]) if k in params else Var(k) for k in names]
    if fid is FormulaId.HW:
        return hw_term(*args, hybrid=hybrid)
    if fid is FormulaId.NU2:
        return nu2_term(*args, hybrid=hybrid)
    if fid is FormulaId.GCD:
        return gcd_term_term(*args)
    if fid is FormulaId.BINOM1:
        return binom1_term(*args)
    if fid is FormulaId.BINOM2:
        return binom2_term(*args)
    if fid is FormulaId.FACTORIAL:
        return factorial_term_term(*args)
    if fid is FormulaId.DELTA:
        return delta_term(*args)
    if fid is FormulaId.GSERIES:
        if r is None:
            raise DomainError("gseries emission needs r")
        return gseries_term(r, *args)
    if fid is FormulaId.POW_LEMMA:
        return pow_lemma_term(*args)
    from . import hypercube
    if fid is FormulaId.CHI:
        return hypercube.chi_term(*args, hybrid=hybrid)
    return hypercube.omega_term(*args, hybrid=hybrid)


def formula_value(formula, r=None, **params):
    """Value-level counterpart of :func:`emit_term` at concrete parameters."""
    fid = FormulaId(formula)
    names = FORMULA_PARAMS[fid]
    missing = [k for k in names if k not in params]
    if missing:
        raise DomainError(f"{fid.value} needs values for {missing}")
    args = [params[k] for k in names]
    if fid is FormulaId.HW:
        return hw(*args, backend=EvalBackend.NATIVE)
    if fid is FormulaId.NU2:
        return nu2(*args, backend=EvalBackend.LAYERED)
    if fid is FormulaId.GCD:
        return gcd_term(*args)
    if fid is FormulaId.BINOM1:
        return binom1(*args)
    if fid is FormulaId.BINOM2:
        return binom2(*args)
    if fid is FormulaId.FACTORIAL:
        return factorial_term(*args, backend=EvalBackend.LAYERED)
    if fid is FormulaId.DELTA:
        return delta(*args)
    if fid is FormulaId.GSERIES:
        if r is None:
            raise DomainError("gseries needs r")
        return g_series(r, *args)
    if fid is FormulaId.POW_LEMMA:
        return pow_lemma(*args)
    from . import hypercube
    if fid is FormulaId.CHI:
        return hypercube.chi(*args, backend=EvalBackend.FULL_TERM)
    return hypercube.omega(*args, backend=EvalBackend.FULL_TERM)


__all__ = [
    "EvalBackend", "FormulaId", "FORMULA_PARAMS", "CLOSED_FORM_R",
    "binom1", "binom2", "gcd_term", "nu2", "hw",
    "factorial_term", "delta", "g_series", "g_series_naive", "pow_lemma",
    "emit_term", "formula_value", "gseries_term", "delta_term",
    "gcd_term_term", "binom1_term", "binom2_term", "nu2_term", "hw_term",
    "factorial_term_term", "pow_lemma_term", "bit_budget",
]
