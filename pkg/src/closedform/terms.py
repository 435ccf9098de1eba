"""The arithmetic-term language over the natural numbers.

A term is built from natural constants and variables with ``+``, monus
(``-.``, bounded subtraction), ``*``, floor division ``/``, ``%`` and
``^``.  Terms are immutable trees; :func:`parse` and :func:`render` are
exact inverses on canonical text, and :func:`evaluate` computes the exact
value with arbitrary-precision integers.

Division and remainder by zero follow ``a / 0 = 0`` and ``a % 0 = a`` so
that ``a = b * (a / b) + a % b`` holds for every ``b``.  ``0 ^ 0 = 1``.

Hybrid terms may also contain calls to a few reserved native functions
(``floor_root``, ``factorial``, ``gcd``, ``hw``).  They let a formula keep
its outer structure while delegating a sub-formula whose pure-term form is
far too large to evaluate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import gmpy2

from . import intmath
from .budget import bit_budget, check_bits
from .errors import DomainError, ParseError, UnboundVariableError

__all__ = [
    "Term", "Const", "Var", "Add", "Monus", "Mul", "FloorDiv", "Mod", "Pow",
    "Call", "RESERVED_CALLS", "TermStats", "monus", "as_term", "parse",
    "render", "evaluate", "evaluate_traced", "stats", "free_vars",
    "substitute",
]


class Term:
    """Base class of all term nodes.

    Python operators build nodes, so ``Var("n") + 4`` is ``Add(n, 4)``.
    Monus has no operator; use :func:`monus`.
    """

    __slots__ = ()

    def children(self):
        return ()

    def __add__(self, other):
        return Add(self, as_term(other))

    def __radd__(self, other):
        return Add(as_term(other), self)

    def __mul__(self, other):
        return Mul(self, as_term(other))

    def __rmul__(self, other):
        return Mul(as_term(other), self)

    def __floordiv__(self, other):
        return FloorDiv(self, as_term(other))

    def __rfloordiv__(self, other):
        return FloorDiv(as_term(other), self)

    def __mod__(self, other):
        return Mod(self, as_term(other))

    def __rmod__(self, other):
        return Mod(as_term(other), self)

    def __pow__(self, other):
        return Pow(self, as_term(other))

    def __rpow__(self, other):
        return Pow(as_term(other), self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=True, repr=False)
class Const(Term):
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or isinstance(self.value, bool):
            raise TypeError(f"Const needs an int, got {type(self.value).__name__}")
        if self.value < 0:
            raise DomainError(f"constants are natural numbers, got {self.value}")

    def __repr__(self):
        return f"Const({self.value})"


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, eq=True, repr=False)
class Var(Term):
    name: str

    def __post_init__(self):
        if not _IDENT_RE.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class _Binary(Term):
    left: Term
    right: Term

    symbol = "?"
    prec = 0

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Add(_Binary):
    symbol, prec = "+", 1


class Monus(_Binary):
    symbol, prec = "-.", 1


class Mul(_Binary):
    symbol, prec = "*", 2


class FloorDiv(_Binary):
    symbol, prec = "/", 2


class Mod(_Binary):
    symbol, prec = "%", 2


class Pow(_Binary):
    symbol, prec = "^", 3


RESERVED_CALLS = {"floor_root": 2, "factorial": 1, "gcd": 2, "hw": 1}


@dataclass(frozen=True, eq=True, repr=False)
class Call(Term):
    name: str
    args: tuple

    def __post_init__(self):
        arity = RESERVED_CALLS.get(self.name)
        if arity is None:
            raise ValueError(f"{self.name!r} is not a reserved call name")
        if len(self.args) != arity:
            raise ValueError(f"{self.name} takes {arity} argument(s), got {len(self.args)}")

    def children(self):
        return self.args

    def __repr__(self):
        return f"Call({self.name!r}, {self.args!r})"


def as_term(x):
    if isinstance(x, Term):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Const(x)
    if isinstance(x, str):
        return parse(x, hybrid=True)
    raise TypeError(f"cannot make a term from {type(x).__name__}")


def monus(a, b):
    return Monus(as_term(a), as_term(b))


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<nat>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>-\.|∸|[-+*/%^(),])"
)

_BINOPS = {
    "+": Add, "-.": Monus, "∸": Monus,
    "*": Mul, "/": FloorDiv, "%": Mod,
}


class _Token(NamedTuple):
    kind: str
    text: str
    pos: int


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind == "op" and m.group() == "-":
            raise ParseError("'-' is not an operator; use '-.' for monus "
                             "(negative literals are not allowed)", pos)
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, hybrid):
        self.tokens = _tokenize(text)
        self.i = 0
        self.hybrid = hybrid

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok.text != text:
            found = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", tok.pos)
        return tok

    def parse(self):
        term = self.sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return term

    def sum(self):
        left = self.prod()
        while self.peek().text in ("+", "-.", "∸"):
            op = _BINOPS[self.take().text]
            left = op(left, self.prod())
        return left

    def prod(self):
        left = self.expo()
        while self.peek().text in ("*", "/", "%"):
            op = _BINOPS[self.take().text]
            left = op(left, self.expo())
        return left

    def expo(self):
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            return Pow(base, self.expo())
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "nat":
            return Const(int(gmpy2.mpz(tok.text)))
        if tok.kind == "ident":
            if self.peek().text == "(":
                return self.call(tok)
            return Var(tok.text)
        if tok.text == "(":
            inner = self.sum()
            self.expect(")")
            return inner
        found = tok.text or "end of input"
        raise ParseError(f"expected a number, name or '(', found {found!r}", tok.pos)

    def call(self, name_tok):
        if not self.hybrid:
            raise ParseError(f"call to {name_tok.text!r} needs hybrid mode", name_tok.pos)
        if name_tok.text not in RESERVED_CALLS:
            raise ParseError(f"{name_tok.text!r} is not a reserved call name", name_tok.pos)
        self.expect("(")
        args = [self.sum()]
        while self.peek().text == ",":
            self.take()
            args.append(self.sum())
        self.expect(")")
        arity = RESERVED_CALLS[name_tok.text]
        if len(args) != arity:
            raise ParseError(f"{name_tok.text} takes {arity} argument(s)", name_tok.pos)
        return Call(name_tok.text, tuple(args))


def parse(text, hybrid=False):
    """Parse term text.  ``hybrid=True`` also accepts reserved calls."""
    return _Parser(text, hybrid).parse()


# -- rendering -------------------------------------------------------------

_ATOM_PREC = 4


def _prec(t):
    return t.prec if isinstance(t, _Binary) else _ATOM_PREC


def render(t):
    """Canonical text with the fewest parentheses that re-parse to ``t``."""
    parts = []
    _render_into(t, parts)
    return "".join(parts)


def _render_into(t, out):
    # explicit stack: emitted terms can be deep enough to hit recursion limits
    stack = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Const):
            out.append(gmpy2.mpz(item.value).digits())
        elif isinstance(item, Var):
            out.append(item.name)
        elif isinstance(item, Call):
            seq = [item.name + "("]
            for k, arg in enumerate(item.args):
                if k:
                    seq.append(", ")
                seq.append(arg)
            seq.append(")")
            stack.extend(reversed(seq))
        else:
            p = item.prec
            if isinstance(item, Pow):
                wrap_left = _prec(item.left) <= p
                wrap_right = _prec(item.right) < p
            else:
                wrap_left = _prec(item.left) < p
                wrap_right = _prec(item.right) <= p
            seq = []
            seq += ["(", item.left, ")"] if wrap_left else [item.left]
            seq.append(f" {item.symbol} ")
            seq += ["(", item.right, ")"] if wrap_right else [item.right]
            stack.extend(reversed(seq))


# -- evaluation ------------------------------------------------------------

def _call_floor_root(m, n):
    return gmpy2.mpz(intmath.floor_root(int(m), int(n)))


def _call_factorial(n, max_bits):
    n = int(n)
    # log2(n!) <= n * log2(n)
    check_bits("factorial", n * max(n.bit_length(), 1), max_bits)
    return gmpy2.fac(n)


def _call_gcd(a, b):
    return gmpy2.gcd(a, b)


def _call_hw(n):
    return gmpy2.mpz(gmpy2.popcount(n))


class _Evaluator:
    def __init__(self, env, max_bits):
        self.env = env
        self.max_bits = max_bits
        self.peak = 0
        self.memo = {}

    def run(self, root):
        # iterative post-order walk; shared subterms are evaluated once
        memo = self.memo
        stack = [(root, False)]
        while stack:
            node, ready = stack.pop()
            key = id(node)
            if key in memo:
                continue
            kids = node.children()
            if not ready and kids:
                stack.append((node, True))
                stack.extend((k, False) for k in kids if id(k) not in memo)
                continue
            value = self.apply(node, [memo[id(k)] for k in kids])
            memo[key] = value
            bits = value.bit_length()
            if bits > self.peak:
                self.peak = bits
        return memo[id(root)]

    def apply(self, node, args):
        if isinstance(node, Const):
            return gmpy2.mpz(node.value)
        if isinstance(node, Var):
            try:
                return gmpy2.mpz(self.env[node.name])
            except KeyError:
                raise UnboundVariableError(node.name) from None
        if isinstance(node, Call):
            if node.name == "floor_root":
                if args[0] == 0:
                    raise DomainError("floor_root with m = 0")
                return _call_floor_root(*args)
            if node.name == "factorial":
                return _call_factorial(args[0], self.max_bits)
            if node.name == "gcd":
                return _call_gcd(*args)
            return _call_hw(args[0])
        a, b = args
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Monus):
            return a - b if a > b else gmpy2.mpz(0)
        if isinstance(node, Mul):
            check_bits("product", a.bit_length() + b.bit_length(), self.max_bits)
            return a * b
        if isinstance(node, FloorDiv):
            return a // b if b else gmpy2.mpz(0)
        if isinstance(node, Mod):
            return a % b if b else a
        if isinstance(node, Pow):
            return self.power(a, b)
        raise TypeError(f"unknown node {node!r}")

    def power(self, base, exp):
        if exp == 0:
            return gmpy2.mpz(1)
        if base < 2:
            return base
        if base == 2:
            check_bits("power of two", int(exp) + 1, self.max_bits)
            return gmpy2.mpz(1) << int(exp)
        check_bits("power", int(exp) * base.bit_length(), self.max_bits)
        return base ** int(exp)


def _check_env(env):
    for name, value in env.items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise DomainError(f"binding {name}={value!r} is not a natural number")


def evaluate(t, env: Mapping[str, int] | None = None, *, max_bits=None):
    """Exact natural-number value of ``t`` under ``env``.

    ``max_bits`` caps the size of any power or product (defaults to the
    configured bit budget); exceeding it raises CapacityError.
    """
    return evaluate_traced(t, env, max_bits=max_bits)[0]


def evaluate_traced(t, env=None, *, max_bits=None):
    """Like :func:`evaluate` but also return the largest intermediate's bit length."""
    env = dict(env or {})
    _check_env(env)
    ev = _Evaluator(env, bit_budget() if max_bits is None else max_bits)
    value = ev.run(t)
    return int(value), ev.peak


# -- structure -------------------------------------------------------------

class TermStats(NamedTuple):
    node_count: int
    depth: int
    pow_count: int


def stats(t):
    """Tree statistics; shared subterms count once per occurrence."""
    memo = {}
    stack = [(t, False)]
    while stack:
        node, ready = stack.pop()
        if id(node) in memo:
            continue
        kids = node.children()
        if not ready and kids:
            stack.append((node, True))
            stack.extend((k, False) for k in kids if id(k) not in memo)
            continue
        sub = [memo[id(k)] for k in kids]
        memo[id(node)] = TermStats(
            1 + sum(s.node_count for s in sub),
            1 + max((s.depth for s in sub), default=0),
            int(isinstance(node, Pow)) + sum(s.pow_count for s in sub),
        )
    return memo[id(t)]


def free_vars(t):
    seen, names, stack = set(), set(), [t]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Var):
            names.add(node.name)
        stack.extend(node.children())
    return names


def substitute(t, bindings):
    """Replace variables by terms (ints are wrapped as constants)."""
    repl = {name: as_term(v) for name, v in bindings.items()}
    memo = {}

    def walk(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            out = repl.get(node.name, node)
        elif isinstance(node, _Binary):
            out = type(node)(walk(node.left), walk(node.right))
        elif isinstance(node, Call):
            out = Call(node.name, tuple(walk(a) for a in node.args))
        else:
            out = node
        memo[key] = out
        return out

    return walk(t)
