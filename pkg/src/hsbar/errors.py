"""Exception hierarchy shared by every module of the calculator."""

from __future__ import annotations


class HSBarError(Exception):
    """Base class for all calculator errors."""


class ValidationError(HSBarError):
    """Input data is inconsistent or malformed."""


class ParseError(ValidationError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.field = field
        self.line = line


class NotCubic(ValidationError):
    def __init__(self, monomial: int, n: int):
        from .f2core import subset_string

        super().__init__(
            f"Rokhlin map is not cubic: ANF coefficient of x_{{{subset_string(monomial)}}} "
            f"(degree {bin(monomial).count('1')}) is nonzero (n={n})"
        )
        self.monomial = monomial


class CubicPartMismatch(ValidationError):
    def __init__(self, triple: tuple[int, int, int], anf_bit: int, cup_bit: int):
        super().__init__(
            f"cubic ANF coefficient of triple {triple} is {anf_bit} but the cup form gives "
            f"{cup_bit} mod 2"
        )
        self.triple = triple


class NotARefinement(ValidationError):
    pass


class DimensionTooLarge(HSBarError):
    pass


class InconsistentPresentation(HSBarError):
    pass


class InvariantViolation(HSBarError):
    pass


class SquareNotZero(HSBarError):
    pass


class BudgetExceeded(HSBarError):
    pass


class NoConsistentAnswer(HSBarError):
    pass
