"""Exception hierarchy.

``InputError`` subclasses signal bad user data (CLI exit status 1);
``NumericalError`` subclasses signal a numerical failure (exit status 2).
"""


class GenPseudoError(Exception):
    pass


class InputError(GenPseudoError, ValueError):
    pass


class NumericalError(GenPseudoError, ArithmeticError):
    pass


class NotPositiveDefinite(InputError):
    pass


class NotHermitian(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class ModeMismatch(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEntry(ParseError):
    pass


class UnsupportedHeader(ParseError):
    pass


class NoConvergence(NumericalError):
    pass


class NearDefective(NumericalError):
    pass
