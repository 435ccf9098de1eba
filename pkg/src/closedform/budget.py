"""Bit-budget configuration.

Every formula whose intermediate values grow exponentially checks its
dominant exponent against a ceiling before doing any arithmetic.  The
ceiling defaults to 2 million bits and can be overridden through the
``CFF_BIT_BUDGET`` environment variable.
"""

import os

from .errors import CapacityError

DEFAULT_BIT_BUDGET = 2_000_000
ENV_VAR = "CFF_BIT_BUDGET"


def bit_budget():
    """Return the active bit ceiling."""
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_BIT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"{ENV_VAR} must be positive, got {value}")
    return value


def check_bits(what, required, budget=None):
    """Raise CapacityError when ``required`` exceeds the budget."""
    if budget is None:
        budget = bit_budget()
    if required > budget:
        raise CapacityError(
            f"{what} needs about {required} bits, budget is {budget} bits",
            required, budget)
