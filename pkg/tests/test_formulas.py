import math

import pytest
from hypothesis import given, settings, strategies as st

from closedform import oracles
from closedform.errors import CapacityError, DomainError
from closedform.formulas import (CLOSED_FORM_R, EvalBackend, FormulaId, binom1, binom2,
                                 delta, emit_term, factorial_term, formula_value,
                                 g_series, gcd_term, gseries_term, hw, nu2, pow_lemma)
from closedform.intmath import popcount
from closedform.terms import evaluate, parse, render

LAYERED, TERM, NATIVE = EvalBackend.LAYERED, EvalBackend.FULL_TERM, EvalBackend.NATIVE


@pytest.mark.parametrize("n,want", [(0, 0), (28, 3), (3, 2), (255, 8)])
def test_hw_examples(n, want):
    for backend in (NATIVE, LAYERED):
        assert hw(n, backend) == want


def test_hw_full_term_small():
    # C(6, 3) = 20 already needs a gcd term over 2^20
    assert [hw(n, TERM) for n in range(3)] == [0, 1, 1]
    with pytest.raises(CapacityError):
        hw(3, TERM)


@pytest.mark.parametrize("n,want", [(12, 2), (1, 0), (64, 6)])
def test_nu2_examples(n, want):
    assert nu2(n, LAYERED) == want
    assert nu2(n, NATIVE) == want


def test_nu2_full_term_where_it_fits():
    assert [nu2(n, TERM) for n in range(1, 8)] == [0, 1, 0, 2, 0, 1, 0]


def test_nu2_rejects_zero():
    for backend in EvalBackend:
        with pytest.raises(DomainError):
            nu2(0, backend)


@pytest.mark.parametrize("a,b,want", [(10, 6, 2), (12, 18, 6), (7, 1, 1), (16, 16, 16)])
def test_gcd_examples(a, b, want):
    assert gcd_term(a, b) == want


def test_gcd_term_defect_at_one_one():
    # the digit window mod 2^(ab) is one bit wide and cannot hold gcd + 1
    with pytest.raises(DomainError):
        gcd_term(1, 1)


def test_gcd_capacity():
    with pytest.raises(CapacityError) as info:
        gcd_term(10, 5040)
    assert info.value.required_bits > 2_000_000


@pytest.mark.parametrize("a,b,want", [(5, 2, 10), (4, 0, 1), (8, 5, 56)])
def test_binom1_examples(a, b, want):
    assert binom1(a, b) == want


@pytest.mark.parametrize("a,b,want", [(5, 2, 10), (6, 6, 1), (10, 3, 120), (0, 0, 1)])
def test_binom2_examples(a, b, want):
    assert binom2(a, b) == want


def test_binom_domain():
    with pytest.raises(DomainError):
        binom1(3, 4)
    with pytest.raises(DomainError):
        binom2(3, 4)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 40).flatmap(lambda a: st.tuples(st.just(a), st.integers(0, a))))
def test_binomials_match_math_comb(ab):
    a, b = ab
    assert binom1(a, b) == math.comb(a, b) == binom2(a, b)


@pytest.mark.parametrize("n,want", [(0, 1), (5, 120), (8, 40320)])
def test_factorial_layered(n, want):
    assert factorial_term(n, LAYERED) == want


def test_factorial_full_term():
    assert [factorial_term(n, TERM) for n in range(3)] == [1, 1, 2]


def test_factorial_limits():
    with pytest.raises(CapacityError):
        factorial_term(9, LAYERED)
    with pytest.raises(CapacityError):
        factorial_term(3, TERM)


@pytest.mark.parametrize("a,b,want,weight", [(0, 3, 63, 6), (5, 3, 28, 3), (1, 1, 2, 1)])
def test_delta_examples(a, b, want, weight):
    assert delta(a, b) == want
    assert popcount(want) == weight


@settings(max_examples=200)
@given(st.integers(1, 24).flatmap(lambda b: st.tuples(st.integers(0, 2**b - 1), st.just(b))))
def test_delta_weight_rule(ab):
    a, b = ab
    assert popcount(delta(a, b)) == (2 * b if a == 0 else b)


def test_delta_domain():
    with pytest.raises(DomainError):
        delta(8, 3)


@pytest.mark.parametrize("r,q,t,want", [(0, 2, 5, 31), (1, 1, 4, 6), (4, 1, 3, 17), (2, 3, 0, 0)])
def test_gseries_examples(r, q, t, want):
    assert g_series(r, q, t) == want


@settings(max_examples=300)
@given(st.sampled_from(sorted(CLOSED_FORM_R)), st.integers(1, 2**64), st.integers(0, 40))
def test_gseries_matches_summation(r, q, t):
    assert g_series(r, q, t) == oracles.naive_g_series(r, q, t)


@pytest.mark.parametrize("x,m,want", [(3, 4, 81), (0, 5, 0), (5, 1, 5)])
def test_pow_lemma_examples(x, m, want):
    assert pow_lemma(x, m) == want


@given(st.integers(0, 60), st.integers(1, 10))
def test_pow_lemma_identity(x, m):
    assert pow_lemma(x, m) == x**m


def test_pow_lemma_capacity():
    with pytest.raises(CapacityError):
        pow_lemma(10**6, 2)


def test_emitted_terms_evaluate():
    assert evaluate(emit_term("delta", a=5, b=3)) == 28
    assert evaluate(emit_term("gcd", a=10, b=6)) == 2
    assert evaluate(emit_term("pow", x=3, m=4)) == 81
    assert evaluate(emit_term("binom1", a=8, b=5)) == 56
    assert evaluate(emit_term("binom2", a=10, b=3)) == 120
    assert evaluate(emit_term("factorial", n=1)) == 1
    # (2^4096 + 1)^4096 is about 2^24 bits, over the default budget
    assert evaluate(emit_term("factorial", n=2), max_bits=10**8) == 2
    assert evaluate(emit_term("nu2", n=12)) == 2
    assert evaluate(emit_term("nu2", hybrid=False, n=6)) == 1
    assert evaluate(emit_term("hw", n=28)) == 3
    assert evaluate(emit_term("hw", hybrid=False, n=2)) == 1


def test_emitted_terms_round_trip_through_text():
    for fid in FormulaId:
        if fid in (FormulaId.CHI, FormulaId.OMEGA):
            continue
        t = emit_term(fid, r=2)
        assert parse(render(t), hybrid=True) == t


@pytest.mark.parametrize("r", sorted(CLOSED_FORM_R))
@pytest.mark.parametrize("q", [1, 2, 5, 64])
def test_gseries_term_including_q_one(r, q):
    for t in range(0, 12):
        assert evaluate(gseries_term(r, q, t)) == oracles.naive_g_series(r, q, t)


def test_gseries_term_rejects_unsupported_r():
    with pytest.raises(DomainError):
        gseries_term(3, 2, 5)


def test_formula_value_dispatch():
    assert formula_value("gcd", a=12, b=18) == 6
    assert formula_value("gseries", r=1, q=1, t=4) == 6
    assert formula_value("chi", n=50) == 5
    with pytest.raises(DomainError):
        formula_value("delta", a=1)
