"""Exception hierarchy shared by every module of the package."""


class ClosedFormError(Exception):
    """Base class for all errors raised by closedform."""


class ParseError(ClosedFormError, ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnboundVariableError(ClosedFormError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unbound variable {self.name!r}"


class DomainError(ClosedFormError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(ClosedFormError):
    """A computation would exceed the configured bit budget."""

    def __init__(self, message, required_bits=None, budget=None):
        super().__init__(message)
        self.required_bits = required_bits
        self.budget = budget


class ConsistencyError(ClosedFormError):
    """An internal identity failed, which signals an invalid input spec."""


class PropertyViolation(ClosedFormError):
    """A constructed witness or identity did not check out."""
