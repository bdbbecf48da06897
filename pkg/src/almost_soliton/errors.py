"""Exception hierarchy shared by every module of the package."""


class SolitonError(Exception):
    """Base class for all package errors."""


class DegenerateMetric(SolitonError):
    """The metric matrix is (numerically) singular at the queried point."""


class DomainViolation(SolitonError):
    """A point or parameter lies outside the validity domain of a field."""


class EvalDomainError(DomainViolation):
    """An elementary function was evaluated outside its real domain."""


class QuadratureFailure(SolitonError):
    """Adaptive quadrature could not reach the tolerance within its node budget."""


class ParseError(SolitonError):
    """Malformed profile expression.

    ``offset`` is the byte offset of the offending token and ``expected`` the
    set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")
