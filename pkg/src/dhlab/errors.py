"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: InputError -> 1,
verdict failures -> 2, InvariantViolation -> 3.
"""


class InputError(ValueError):
    """Malformed or semantically invalid user input (files, options, data)."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
