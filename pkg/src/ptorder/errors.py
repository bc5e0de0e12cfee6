"""Exception hierarchy shared by all ptorder modules."""

from typing import Optional, Tuple


class PtorderError(Exception):
    """Base class for every error raised by ptorder."""


class InvalidParameterError(PtorderError, ValueError):
    pass


class SpecValidationError(InvalidParameterError):
    pass


class ParseError(PtorderError, ValueError):
    pass


class DomainMismatchError(PtorderError, TypeError):
    """Raised when specialized and lifted elements are mixed."""


class CycZeroDivisionError(PtorderError, ZeroDivisionError):
    pass


class NotDivisibleError(PtorderError, ArithmeticError):
    """Raised when (q - eps) does not divide a Laurent polynomial, i.e. p(eps) != 0."""


class DecompositionError(PtorderError, ValueError):
    pass


class RelationViolationError(PtorderError, ValueError):
    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class InvalidExtensionError(PtorderError, ValueError):
    pass


class NormalizationError(PtorderError, ValueError):
    pass


class ResourceLimitError(PtorderError, RuntimeError):
    def __init__(self, cap: str, value: int, limit: int):
        super().__init__(f"{cap} exceeded: {value} > {limit}")
        self.cap = cap
        self.value = value
        self.limit = limit
