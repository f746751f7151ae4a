"""Exception types shared across the package."""

from __future__ import annotations


class SkeinError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZero(SkeinError, ZeroDivisionError):
    """Division by the zero polynomial or zero rational function."""


class MixedSystems(SkeinError):
    """Two operands belong to different twist systems."""


class InvalidIndex(SkeinError):
    """Generator or twist index outside 1..n."""


class DegreeTooHigh(SkeinError):
    """A degree bound (twist cap or span bound) was exceeded.

    Carries the offending degree and the bound so callers can report
    actionable diagnostics.
    """

    def __init__(self, degree: int, bound: int, what: str = "degree"):
        self.degree = degree
        self.bound = bound
        super().__init__(f"{what} {degree} exceeds bound {bound}")


class BudgetExceeded(SkeinError):
    """Word enumeration would exceed the configured budget."""

    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration needs {needed} words, budget is {budget}")


class WrongSystem(SkeinError):
    """Operation requires the two-generator system with intersection 1."""


class NotPrimitive(SkeinError):
    """Curve coordinates are not coprime (or both zero)."""


class ParseError(SkeinError):
    """Malformed text input; carries the position of the first bad token."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
