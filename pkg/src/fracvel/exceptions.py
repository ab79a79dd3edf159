class FracvelError(Exception):
    """Base class for all errors raised by fracvel."""


class DomainError(FracvelError, ValueError):
    """Evaluation outside the domain of a function (0**-a, x/0)."""

    def __init__(self, message, expr=None):
        super().__init__(message)
        self.expr = expr


class RangeError(FracvelError, ValueError):
    """Abscissa outside the support of a sampled signal."""


class ParameterError(FracvelError, ValueError):
    """Invalid order, ladder or generator parameter."""


class NotDifferentiableError(FracvelError, ValueError):
    """Symbolic derivative requested for a node without one."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NotRealError(FracvelError, ValueError):
    """Complex values where a real-valued function was required."""


class InsufficientDataError(FracvelError, ValueError):
    """Too few usable ladder samples to classify a limit."""


class FlatSignalError(InsufficientDataError):
    """Oscillation vanishes at the working resolution."""


class ParseError(FracvelError, ValueError):
    """Positioned error from the expression parser."""

    def __init__(self, message, position, expected=()):
        self.message = message
        self.position = position
        self.expected = tuple(expected)
        text = f"{message} at position {position}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        super().__init__(text)
