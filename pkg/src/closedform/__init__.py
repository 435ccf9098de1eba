"""Closed-form arithmetic terms for counting, factoring and floor roots."""

from .errors import (CapacityError, ClosedFormError, ConsistencyError,
                     DomainError, ParseError, PropertyViolation,
                     UnboundVariableError)
from .factoring import (FactorReport, factor, factor_T, factor_U, floor_root,
                        floor_root_conjecture, root_bound_check,
                        witness_check_pow_equation)
from .formulas import EvalBackend, FormulaId, emit_term, formula_value
from .hypercube import HypercubeSpec, Monomial, chi, count_solutions, omega
from .terms import evaluate, parse, render, stats

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "ClosedFormError", "ConsistencyError", "DomainError",
    "ParseError", "PropertyViolation", "UnboundVariableError",
    "FactorReport", "factor", "factor_T", "factor_U", "floor_root",
    "floor_root_conjecture", "root_bound_check", "witness_check_pow_equation",
    "EvalBackend", "FormulaId", "emit_term", "formula_value",
    "HypercubeSpec", "Monomial", "chi", "count_solutions", "omega",
    "evaluate", "parse", "render", "stats",
]
