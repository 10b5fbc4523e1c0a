"""Exception types shared across the package.

The CLI maps each of these to a fixed exit code, so library code raises
them instead of returning sentinel values.
"""


class InvalidArgument(ValueError):
    pass


class UnsupportedMode(InvalidArgument):
    pass


class BudgetExhausted(RuntimeError):
    """A search hit its work budget before reaching a definite answer."""

    def __init__(self, message, work=None):
        super().__init__(message)
        self.work = work


class InvariantViolation(RuntimeError):
    """Two routes that must agree (closed form vs. oracle, formula vs.
    construction) did not."""
