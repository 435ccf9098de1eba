"""Verification suites: closed forms against brute-force oracles.

Each suite expands an inclusive range into items and checks every item
independently, producing one :class:`ReportLine` per check.  Items can be
spread over a process pool; lines always come back in input order.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import factoring, formulas, hypercube, oracles
from .errors import ClosedFormError
from .formulas import EvalBackend
from .hypercube import HypercubeSpec, Monomial

__all__ = ["ReportLine", "SUITES", "DEFAULT_RANGES", "run_suite", "random_spec", "summarize"]


@dataclass(frozen=True)
class ReportLine:
    suite: str
    input: str
    expected: str
    got: str
    ok: bool
    bits: int
    micros: int

    def to_json(self):
        return json.dumps(asdict(self))

    def to_text(self):
        tag = "ok" if self.ok else ("CONJECTURE" if self.suite == "root-conjecture" else "FAIL")
        return f"{tag:10} {self.suite} {self.input}: expected {self.expected}, got {self.got} ({self.bits} bits, {self.micros} us)"


def _line(suite, label, expected, fn):
    """Run ``fn`` -> (got, bits) and wrap the outcome; errors become failing lines."""
    start = time.perf_counter()
    try:
        got, bits = fn()
        got = str(got)
    except ClosedFormError as exc:
        got, bits = f"error: {exc}", 0
    micros = int((time.perf_counter() - start) * 1e6)
    expected = str(expected)
    return ReportLine(suite, label, expected, got, expected == got, int(bits), micros)


def _bits(*values):
    return max(int(v).bit_length() for v in values)


# -- per-suite item generators and checks ------------------------------------

def _chi_check(n):
    a, b = oracles.largest_square_divisor_root(n), oracles.chi_residue_count(n)
    spec = hypercube.chi_spec(n)
    backend = hypercube.pick_backend(None, spec, None)
    bits = spec.m_bits() if backend is EvalBackend.FULL_TERM else 0
    expected = a if a == b else f"oracles disagree: {a} vs {b}"
    return [_line("chi", f"chi({n}) [{backend.value}]", expected,
                  lambda: (hypercube.chi(n, backend), bits))]


def _omega_check(n):
    a = oracles.distinct_prime_count(n)
    b = oracles.omega_residue_count(n).bit_length() - 2
    spec = hypercube.omega_spec(n)
    backend = hypercube.pick_backend(None, spec, None)
    bits = spec.m_bits() if backend is EvalBackend.FULL_TERM else 0
    expected = a if a == b else f"oracles disagree: {a} vs {b}"
    return [_line("omega", f"omega({n}) [{backend.value}]", expected,
                  lambda: (hypercube.omega(n, backend), bits))]


def _gcd_items(lo, hi):
    return [(a, b) for a in range(max(lo, 1), hi + 1) for b in range(max(lo, 1), hi + 1)]


def _gcd_check(item):
    a, b = item
    return [_line("gcd", f"gcd({a},{b})", oracles.euclid_gcd(a, b),
                  lambda: (formulas.gcd_term(a, b), formulas.gcd_term_bits(a, b)))]


def _nu2_check(n):
    lines = [_line("nu2", f"nu2({n}) [layered]", oracles.halving_nu2(n),
                   lambda: (formulas.nu2(n, EvalBackend.LAYERED), 2 * (n + 1) * n))]
    if n <= 7:
        lines.append(_line("nu2", f"nu2({n}) [term]", oracles.halving_nu2(n),
                           lambda: (formulas.nu2(n, EvalBackend.FULL_TERM), formulas.gcd_term_bits(n, 1 << n))))
    return lines


def _hw_check(n):
    cost = formulas.binom1_bits(2 * n, n) if n else 0
    return [_line("hw", f"hw({n}) [kummer]", oracles.binary_digit_count(n),
                  lambda: (formulas.hw(n, EvalBackend.LAYERED), cost))]


def _binom_items(lo, hi):
    return [(a, b) for a in range(max(lo, 0), hi + 1) for b in range(a + 1)]


def _binom_check(item):
    a, b = item
    want = oracles.pascal(a, b)
    return [
        _line("binom", f"binom1({a},{b})", want,
              lambda: (formulas.binom1(a, b), formulas.binom1_bits(a, b))),
        _line("binom", f"binom2({a},{b})", want,
              lambda: (formulas.binom2(a, b), formulas.binom2_bits(a, b))),
    ]


def _factorial_check(n):
    want = oracles.iterated_factorial(n)
    lines = [_line("factorial", f"factorial({n}) [layered]", want,
                   lambda: (formulas.factorial_term(n, EvalBackend.LAYERED), 3 * n**3 + 1))]
    if n <= formulas.FACTORIAL_LIMITS[EvalBackend.FULL_TERM]:
        lines.append(_line("factorial", f"factorial({n}) [term]", want,
                           lambda: (formulas.factorial_term(n, EvalBackend.FULL_TERM), 3 * n**3 + 1)))
    return lines


def _pow_items(lo, hi):
    return [(x, m) for x in range(max(lo, 0), hi + 1) for m in range(1, 9)]


def _pow_check(item):
    x, m = item
    return [_line("pow", f"pow({x},{m})", oracles.iterated_power(x, m),
                  lambda: (formulas.pow_lemma(x, m), formulas.pow_lemma_bits(x, m)))]


GSERIES_Q = tuple(range(1, 9)) + tuple(2**k for k in range(4, 13))


def _gseries_items(lo, hi):
    return [(r, q, t) for t in range(max(lo, 0), hi + 1) for r in sorted(formulas.CLOSED_FORM_R) for q in GSERIES_Q]


def _gseries_check(item):
    r, q, t = item

    def run():
        v = formulas.g_series(r, q, t)
        return v, _bits(v, 1)

    return [_line("gseries", f"G_{r}({q},{t})", oracles.naive_g_series(r, q, t), run)]


def random_spec(rng, max_points=400, max_side=24):
    """A random validated 1D/2D spec whose box has at most ``max_points`` points.

    Half the specs are squares of linear forms, which vanish along a line
    and so have many zeros; the rest are random monomial sums shifted so
    that their minimum over the box is zero.
    """
    k = rng.choice((1, 2))
    side = max_points if k == 1 else math.isqrt(max_points)
    t = rng.randint(1, min(side, max_side))
    ones = (1,) * k
    if rng.random() < 0.5:
        # (a . x - b)^2 with small non-negative a
        a = [rng.randint(0, 3) for _ in range(k)]
        b = rng.randint(0, 2 * t)
        monos = [Monomial(-2 * b * a[i], ones, tuple(int(j == i) for j in range(k))) for i in range(k)]
        monos += [Monomial(a[i] * a[i], ones, tuple(2 * int(j == i) for j in range(k))) for i in range(k)]
        if k == 2:
            monos.append(Monomial(2 * a[0] * a[1], ones, (1, 1)))
        c0 = b * b
    else:
        monos = []
        for _ in range(rng.randint(1, 3)):
            v = tuple(rng.randint(1, 3) for _ in range(k))
            r = tuple(rng.randint(0, 4) for _ in range(k))
            monos.append(Monomial(rng.choice((-3, -2, -1, 1, 2, 3)), v, r))
        c0 = 0
    monos = [m for m in monos if m.c != 0]
    probe = HypercubeSpec(k, t, 1, tuple(monos), c0)
    values = [probe.f(p) for p in _box(k, t)]
    low = min(values)
    if low < 0:
        c0 += -low
    elif low > 0 and rng.random() < 0.7:
        monos.append(Monomial(-low, ones, (0,) * k))
    high = max(values) + (c0 - probe.c0)
    u = max(high, 1).bit_length() + rng.randint(0, 2)
    spec = HypercubeSpec(k, t, u, tuple(monos), c0)
    spec.validate()
    return spec


def _box(k, t):
    return itertools.product(range(t), repeat=k)


def _hypercube_check(seed):
    spec = random_spec(random.Random(seed))
    return [_line("hypercube-random", f"seed={seed} {spec.to_json()}",
                  oracles.enumerate_box_zeros(spec),
                  lambda: (hypercube.count_solutions(spec), spec.m_bits()))]


def _systems_check(n):
    lines = []
    if 2 <= n <= 24:
        rep = oracles.smallest_divisor_system_count(n)
        lines.append(_line("systems", f"smallest-divisor({n})", rep.predicted, lambda: (rep.count, _bits(rep.count))))
    if 2 <= n <= 20:
        rep = oracles.greatest_prime_system_count(n)
        lines.append(_line("systems", f"greatest-prime({n})", rep.predicted, lambda: (rep.count, _bits(rep.count))))
    return lines


def _residues_check(n):
    a = oracles.chi_residue_report(n)
    b = oracles.omega_residue_report(n)
    return [
        _line("residues", f"a^2=0 mod {n}", a.predicted, lambda: (a.count, _bits(a.count))),
        _line("residues", f"a^2=1 mod {4 * n}", b.predicted, lambda: (b.count, _bits(b.count))),
    ]


def _conjecture_items(lo, hi):
    return [(m, n) for n in range(max(lo, 3), hi + 1) for m in range(2, 7)
            if not factoring.conjecture_hypotheses(m, n)]


def _conjecture_check(item):
    m, n = item

    def run():
        c = factoring.floor_root_conjecture(m, n)
        return ("undefined" if c.value is None else c.value), 2 * n * m * m * n.bit_length()

    return [_line("root-conjecture", f"root({m},{n})", factoring.floor_root(m, n), run)]


def _factor_check(n):
    if n < 4 or oracles.is_prime(n):
        return []
    lines = []
    for method in ("T", "U"):
        rep = factoring.factor(n, method, backend=EvalBackend.NATIVE)
        proper = 1 < rep.divisor < n and n % rep.divisor == 0
        lines.append(_line("factor", f"{method}({n})={rep.divisor}", 1, lambda: (int(proper), _bits(n))))
        if method == "T" and rep.chi > 1:
            p1 = oracles.smallest_prime_factor(n)
            lines.append(_line("factor", f"p1 | T({n}), p1={p1}", 0, lambda: (rep.divisor % p1, _bits(n))))
    if oracles.is_squarefree(n):
        lines.append(_line("factor", f"root-bound({n})", 1,
                           lambda: (int(factoring.root_bound_check(n)), _bits(n))))
    return lines


def _witness_items(lo, hi):
    return [(m, n) for n in range(max(lo, 1), min(hi, 20) + 1) for m in (1, 2, 3)]


def _witness_check(item):
    m, n = item
    return [_line("witness", f"witnesses({m},{n})", factoring.floor_root(m, n) + 1,
                  lambda: (factoring.witness_check_pow_equation(m, n), 6 * n**3 * m * m))]


def _ints(lo, hi):
    return list(range(lo, hi + 1))


def _from(start):
    return lambda lo, hi: list(range(max(lo, start), hi + 1))


# name -> (item generator, check, default range)
SUITES = {
    "chi": (_from(1), _chi_check, (1, 60)),
    "omega": (_from(1), _omega_check, (1, 24)),
    "gcd": (_gcd_items, _gcd_check, (1, 16)),
    "nu2": (_from(1), _nu2_check, (1, 64)),
    "hw": (_from(0), _hw_check, (1, 200)),
    "binom": (_binom_items, _binom_check, (0, 24)),
    "factorial": (_from(0), _factorial_check, (0, 8)),
    "pow": (_pow_items, _pow_check, (0, 50)),
    "gseries": (_gseries_items, _gseries_check, (0, 30)),
    "hypercube-random": (_ints, _hypercube_check, (0, 59)),
    "systems": (_from(2), _systems_check, (2, 24)),
    "residues": (_from(1), _residues_check, (1, 2000)),
    "root-conjecture": (_conjecture_items, _conjecture_check, (3, 500)),
    "factor": (_ints, _factor_check, (4, 2000)),
    "witness": (_witness_items, _witness_check, (1, 20)),
}

DEFAULT_RANGES = {name: spec[2] for name, spec in SUITES.items()}


def _run_item(job):
    suite, item = job
    return SUITES[suite][1](item)


def run_suite(suite, lo=None, hi=None, workers=1):
    """All report lines for ``suite`` over [lo, hi], in input order."""
    if suite not in SUITES:
        raise KeyError(suite)
    items_of, _, (dlo, dhi) = SUITES[suite]
    lo = dlo if lo is None else lo
    hi = dhi if hi is None else hi
    jobs = [(suite, item) for item in items_of(lo, hi)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_item, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [_run_item(job) for job in jobs]
    return [line for chunk in chunks for line in chunk]


def summarize(suite, lines):
    failed = sum(not line.ok for line in lines)
    return f"{suite}: {len(lines) - failed}/{len(lines)} ok, {failed} mismatched"
