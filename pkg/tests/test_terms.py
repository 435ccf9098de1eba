import pytest
from hypothesis import assume, given, settings, strategies as st

from closedform.errors import CapacityError, DomainError, ParseError, UnboundVariableError
from closedform.terms import (Add, Call, Const, FloorDiv, Mod, Monus, Mul, Pow, Var,
                              evaluate, evaluate_traced, free_vars, monus, parse,
                              render, stats, substitute)

VARS = ("x", "y", "z")
leaves = st.one_of(st.integers(0, 20).map(Const), st.sampled_from(VARS).map(Var))


def _extend(children):
    binary = st.sampled_from([Add, Monus, Mul, FloorDiv, Mod])
    return st.one_of(
        st.builds(lambda op, a, b: op(a, b), binary, children, children),
        # keep exponents tiny so random trees stay cheap to evaluate
        st.builds(Pow, children, st.integers(0, 3).map(Const)),
    )


terms = st.recursive(leaves, _extend, max_leaves=12)
envs = st.fixed_dictionaries({v: st.integers(0, 30) for v in VARS})


def test_parse_examples():
    assert parse("5 -. 7") == Monus(Const(5), Const(7))
    assert parse("5 ∸ 7") == Monus(Const(5), Const(7))
    assert parse("2 ^ 3 ^ 2") == Pow(Const(2), Pow(Const(3), Const(2)))
    assert parse("x * (y + 1)") == Mul(Var("x"), Add(Var("y"), Const(1)))


def test_render_examples():
    assert render(Monus(Const(5), Const(7))) == "5 -. 7"
    assert render(Pow(Const(2), Add(Var("n"), Const(1)))) == "2 ^ (n + 1)"
    assert render(parse("(2 ^ 3) ^ 2")) == "(2 ^ 3) ^ 2"
    assert render(parse("a -. (b -. c)")) == "a -. (b -. c)"
    assert render(parse("(a -. b) -. c")) == "a -. b -. c"


def test_evaluate_examples():
    assert evaluate(parse("5 -. 7")) == 0
    assert evaluate(parse("1 % 0")) == 1
    assert evaluate(parse("7 / 2")) == 3
    assert evaluate(parse("7 / 0")) == 0
    assert evaluate(parse("0 ^ 0")) == 1
    assert evaluate(parse("2 ^ 10")) == 1024
    assert evaluate(parse("x * (y + 1)"), {"x": 3, "y": 4}) == 15


def test_stats_examples():
    assert tuple(stats(Const(5))) == (1, 1, 0)
    assert tuple(stats(Add(Const(1), Const(2)))) == (3, 2, 0)
    assert tuple(stats(Pow(Const(2), Var("n")))) == (3, 2, 1)


@pytest.mark.parametrize("text", ["5 - 7", "-3", "(1 + 2", "1 +", "", "2 ^", "1 2", "foo(1)", "x $ y"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse(text)


def test_calls_need_hybrid_mode():
    with pytest.raises(ParseError):
        parse("gcd(4, 6)")
    t = parse("gcd(4, 6) + hw(7) + factorial(3) + floor_root(2, 10)", hybrid=True)
    assert evaluate(t) == 2 + 3 + 6 + 3
    with pytest.raises(ParseError):
        parse("gcd(4)", hybrid=True)


def test_floor_root_call_at_zero_is_domain_error():
    with pytest.raises(DomainError):
        evaluate(Call("floor_root", (Const(0), Const(5))))


def test_unbound_variable():
    with pytest.raises(UnboundVariableError) as info:
        evaluate(parse("x + 1"))
    assert info.value.name == "x"


def test_negative_binding_rejected():
    with pytest.raises(DomainError):
        evaluate(parse("x"), {"x": -1})


def test_capacity_error_on_huge_power():
    with pytest.raises(CapacityError):
        evaluate(parse("3 ^ (2 ^ 40)"))
    with pytest.raises(CapacityError):
        evaluate(parse("2 ^ 5000"), max_bits=1000)


def test_traced_peak_bits():
    value, peak = evaluate_traced(parse("2 ^ 100 / 2 ^ 90"))
    assert value == 1024 and peak == 101


def test_huge_literals_round_trip():
    big = 7**20000
    assert evaluate(parse(render(Const(big)))) == big


def test_free_vars_and_substitute():
    t = parse("x * (y + x)")
    assert free_vars(t) == {"x", "y"}
    # substitution is simultaneous: the x introduced for y stays free
    u = substitute(t, {"x": 3, "y": "x + 1"})
    assert free_vars(u) == {"x"}
    assert evaluate(u, {"x": 10}) == 3 * (11 + 3)


def test_shared_subterms_evaluate_once():
    t = Var("x")
    for _ in range(200):
        t = t + t  # a DAG with 2^200 paths
    assert evaluate(t, {"x": 1}) == 2**200


@settings(max_examples=300, deadline=None)
@given(terms)
def test_render_parse_round_trip(t):
    assert parse(render(t)) == t


@settings(max_examples=300, deadline=None)
@given(terms, envs)
def test_round_trip_preserves_value(t, env):
    try:
        v = evaluate(t, env, max_bits=4096)
    except CapacityError:
        assume(False)
    assert evaluate(parse(render(t)), env, max_bits=4096) == v
    assert v >= 0


@given(st.integers(0, 10**30), st.integers(0, 10**30))
def test_monus_is_truncated_subtraction(a, b):
    assert evaluate(monus(a, b)) == max(a - b, 0)


@given(st.integers(0, 10**30), st.integers(0, 10**6))
def test_division_identity_including_zero_divisor(a, b):
    q = evaluate(FloorDiv(Const(a), Const(b)))
    r = evaluate(Mod(Const(a), Const(b)))
    assert a == b * q + r


@given(st.integers(0, 50), st.integers(0, 8))
def test_power_matches_python(a, b):
    assert evaluate(Pow(Const(a), Const(b))) == a**b
