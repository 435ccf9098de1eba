"""Command-line front end.

Exit codes: 0 success, 1 a verification mismatch, 2 usage or capacity
errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import factoring, hypercube, verify
from .budget import ENV_VAR
from .errors import ClosedFormError, PropertyViolation
from .formulas import EvalBackend, FormulaId, emit_term
from .terms import evaluate, free_vars, parse, render, stats

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

EMITTABLE = [f.value for f in FormulaId] + ["T", "U"]


class UsageError(Exception):
    pass


def _natural(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {value}")
    return value


def _bindings(pairs):
    env = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"binding must look like name=value, got {pair!r}")
        try:
            env[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"binding {name.strip()} needs an integer value, got {value!r}") from None
    return env


def _range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like a..b, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _backend(text):
    return None if text == "auto" else EvalBackend(text)


# -- subcommands --------------------------------------------------------------

def cmd_eval(args):
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.term is not None:
        text = args.term
    else:
        raise UsageError("eval needs a term or --file")
    term = parse(text, hybrid=True)
    print(evaluate(term, _bindings(args.bind)))
    return EXIT_OK


def cmd_factor(args):
    if args.n < 2:
        raise UsageError(f"factor needs n >= 2, got {args.n}")
    rep = factoring.factor(args.n, args.method, backend=_backend(args.backend),
                           tail_backend=EvalBackend(args.tail))
    if args.json:
        print(json.dumps(rep.to_dict()))
    else:
        used = ", ".join(f"{k}={v.value}" for k, v in rep.backends.items())
        print(f"n        {rep.n}")
        print(f"method   {rep.method}")
        print(f"divisor  {rep.divisor}")
        print(f"cofactor {rep.cofactor}")
        print(f"chi      {rep.chi}")
        print(f"omega    {rep.omega}")
        print(f"root     {rep.root}")
        print(f"backends {used}")
        print(f"elapsed  {rep.elapsed * 1e3:.3f} ms")
        if not rep.composite:
            print(f"note     {rep.n} is prime; the formula is only guaranteed for composites")
    if rep.composite and not rep.proper:
        print(f"error: {rep.n} is composite but {rep.divisor} is not a proper divisor", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_chi(args):
    print(hypercube.chi(args.n, _backend(args.backend)))
    return EXIT_OK


def cmd_omega(args):
    print(hypercube.omega(args.n, _backend(args.backend)))
    return EXIT_OK


def cmd_emit(args):
    params = _bindings(args.params)
    hybrid = not args.pure
    if args.formula in ("T", "U"):
        extra = set(params) - {"n"}
        if extra:
            raise UsageError(f"{args.formula} has no parameter(s) {sorted(extra)}")
        term = factoring.factor_term(args.formula, params.get("n", "n"))
    else:
        term = emit_term(args.formula, hybrid=hybrid, r=args.r, **params)
    print(render(term))
    if args.stats:
        s = stats(term)
        print(f"node_count {s.node_count}")
        print(f"depth {s.depth}")
        print(f"pow_count {s.pow_count}")
    if args.eval:
        missing = free_vars(term)
        if missing:
            raise UsageError(f"--eval needs values for {sorted(missing)}")
        print(f"value {evaluate(term)}")
    return EXIT_OK


def cmd_count(args):
    if args.spec == "-":
        text = sys.stdin.read()
    elif args.spec.lstrip().startswith("{"):
        text = args.spec
    else:
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
    try:
        spec = hypercube.HypercubeSpec.from_json(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"spec is not valid JSON: {exc}") from None
    print(hypercube.count_solutions(spec, validate=not args.no_validate))
    return EXIT_OK


def cmd_verify(args):
    if args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(verify.SUITES)}")
    lo, hi = args.range if args.range else (None, None)
    lines = verify.run_suite(args.suite, lo, hi, workers=args.workers)
    for line in lines:
        if args.jsonl:
            print(line.to_json())
        elif args.verbose or not line.ok:
            print(line.to_text())
    print(verify.summarize(args.suite, lines), file=sys.stderr if args.jsonl else sys.stdout)
    if args.suite == "root-conjecture":
        return EXIT_OK
    return EXIT_OK if all(line.ok for line in lines) else EXIT_MISMATCH


def cmd_bench(args):
    spec_of = hypercube.chi_spec if args.formula == "chi" else hypercube.omega_spec
    rows, status = [], EXIT_OK
    print("n,bits,micros,count")
    for n in range(args.min_n, args.max_n + 1):
        spec = spec_of(n)
        start = time.perf_counter()
        M = hypercube.build_M(spec)
        count = hypercube.count_solutions(spec) if args.formula == "chi" else hypercube.omega(n, EvalBackend.FULL_TERM)
        micros = int((time.perf_counter() - start) * 1e6)
        bits = M.bit_length()
        rows.append((n, bits, micros))
        print(f"{n},{bits},{micros},{count}")
        if args.formula == "chi":
            target, slack = 2 * (n + 4) * n * n, 2 * (n + 4)
            if abs(bits - target) > slack:
                print(f"error: bits(M_chi({n})) = {bits} is outside {target} +- {slack}", file=sys.stderr)
                status = EXIT_MISMATCH
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "bits", "micros"])
            writer.writerows(rows)
    return status


# -- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="closedform",
        description="Closed-form arithmetic terms: evaluate, emit, count, factor, verify.",
        epilog=f"{ENV_VAR} overrides the bit budget (default 2000000 bits).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a term")
    e.add_argument("term", nargs="?", help="term text, e.g. '5 -. 7'")
    e.add_argument("bind", nargs="*", help="variable bindings name=value")
    e.add_argument("--file", help="read the term from a file")
    e.set_defaults(func=cmd_eval)

    backends = ["auto"] + [b.value for b in EvalBackend]

    f = sub.add_parser("factor", help="a proper divisor of n via T(n) or U(n)")
    f.add_argument("n", type=_natural)
    f.add_argument("--method", choices=["T", "U"], default="T")
    f.add_argument("--backend", choices=backends, default="auto",
                   help="backend for chi and omega (auto: term while it fits the budget)")
    f.add_argument("--tail", choices=[b.value for b in EvalBackend], default="native",
                   help="backend for the factorial and gcd")
    f.add_argument("--json", action="store_true", help="print the report as one JSON line")
    f.set_defaults(func=cmd_factor)

    for name, fn in (("chi", cmd_chi), ("omega", cmd_omega)):
        c = sub.add_parser(name, help=f"{name}(n) from the hypercube term")
        c.add_argument("n", type=_natural)
        c.add_argument("--backend", choices=backends, default="auto")
        c.set_defaults(func=fn)

    m = sub.add_parser("emit", help="print the term for a formula")
    m.add_argument("--formula", required=True, choices=EMITTABLE)
    m.add_argument("params", nargs="*", help="fix parameters, e.g. a=10 b=6")
    m.add_argument("--r", type=_natural, help="power for the gseries formula")
    m.add_argument("--pure", action="store_true", help="no hw/gcd calls; expand everything")
    m.add_argument("--stats", action="store_true", help="print node_count, depth, pow_count")
    m.add_argument("--eval", action="store_true", help="also evaluate the emitted term")
    m.set_defaults(func=cmd_emit)

    k = sub.add_parser("count", help="count zeros of a hypercube spec")
    k.add_argument("spec", help="JSON text, a JSON file path, or - for stdin")
    k.add_argument("--no-validate", action="store_true", help="skip the 0 <= f < 2^u check")
    k.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--range", type=_range, help="inclusive range a..b")
    v.add_argument("--jsonl", action="store_true", help="one JSON report line per check")
    v.add_argument("--workers", type=_natural, default=1)
    v.add_argument("--verbose", action="store_true", help="print passing lines too")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="bit growth of M for chi or omega")
    b.add_argument("--formula", choices=["chi", "omega"], default="chi")
    b.add_argument("--max-n", type=_natural, required=True)
    b.add_argument("--min-n", type=_natural, default=1)
    b.add_argument("--csv", help="write n,bits,micros to this file")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PropertyViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ClosedFormError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
