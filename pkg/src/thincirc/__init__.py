"""Thin (k,l)-free Boolean circulant matrices: randomized construction,
exact freeness checks, and the sumset/exponent arithmetic behind them."""

from thincirc.errors import (
    BudgetExhausted,
    InvalidArgument,
    InvariantViolation,
    UnsupportedMode,
)

__version__ = "0.1.0"

MATRIX_FORMAT_VERSION = 1
SWEEP_CSV_VERSION = 1

__all__ = [
    "BudgetExhausted",
    "InvalidArgument",
    "InvariantViolation",
    "UnsupportedMode",
    "MATRIX_FORMAT_VERSION",
    "SWEEP_CSV_VERSION",
]
