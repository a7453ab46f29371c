"""Exception hierarchy shared by every module.

Each error carries a ``name`` used by the CLI when reporting domain
errors on stderr; by default it is the class name.
"""


class InfinitesimalError(Exception):
    """Base class for domain errors raised by the arithmetic engine."""

    @property
    def name(self) -> str:
        return type(self).__name__


class DivisionByZero(InfinitesimalError, ZeroDivisionError):
    pass


class NotFinite(InfinitesimalError):
    """Standard part requested for an infinite element."""

    def __init__(self, message="element is infinite; standard part exists only for finite elements",
                 coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class PoleAtPoint(InfinitesimalError):
    pass


class EmptyWindow(InfinitesimalError):
    """No coefficient of a truncated series result is provably correct."""


class DomainError(InfinitesimalError):
    pass


class ModeError(InfinitesimalError):
    pass


class NotAvailable(InfinitesimalError):
    """Operation has no meaning in the chosen backend (e.g. sin in R(x))."""


class ParseError(InfinitesimalError):
    """Malformed expression text. Reported under the name ``SyntaxError``."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)

    @property
    def name(self) -> str:
        return "SyntaxError"


class UnknownFunction(ParseError):
    @property
    def name(self) -> str:
        return "UnknownFunction"


class NonIntegerExponent(ParseError):
    @property
    def name(self) -> str:
        return "NonIntegerExponent"


class UnboundVariable(InfinitesimalError):
    pass


class NonDifferentiableNode(InfinitesimalError):
    pass


class NotDifferentiableHere(InfinitesimalError):
    pass


class WindowTooSmall(InfinitesimalError):
    pass


class NotRepresentable(InfinitesimalError):
    pass


class UndefinedTerm(InfinitesimalError):
    pass


class IndexOutOfRange(InfinitesimalError):
    pass


class EmptyScene(InfinitesimalError):
    pass
