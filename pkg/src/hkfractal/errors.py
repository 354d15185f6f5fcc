"""Exception types shared across the package.

The CLI maps these onto exit codes: ParseError -> 1, DomainError -> 2,
BudgetError -> 3.
"""

from __future__ import annotations

__all__ = ["HKFractalError", "ParseError", "DomainError", "BudgetError"]


class HKFractalError(Exception):
    """Base class for errors raised by this package."""


class ParseError(HKFractalError):
    """Malformed textual input (polynomial text, rational string, JSON file)."""


class DomainError(HKFractalError):
    """Input violates a mathematical precondition of the requested operation."""


class BudgetError(HKFractalError):
    """The truncated-algebra dimension exceeds the configured budget."""
