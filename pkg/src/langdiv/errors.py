"""Exception hierarchy."""


class LangDivError(Exception):
    """Base class for all errors raised by langdiv."""


class DimensionMismatch(LangDivError, ValueError):
    pass


class UnknownSymbol(LangDivError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown symbol"


class NonRealMatrix(LangDivError, ValueError):
    pass


class NotUnitary(LangDivError, ValueError):
    pass


class ValidationError(LangDivError, ValueError):
    """A machine definition violates a structural invariant."""


class OverlappingSubspaces(ValidationError):
    pass


class IncompleteCover(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class AlphabetMismatch(LangDivError, ValueError):
    pass


class HorizonMismatch(LangDivError, ValueError):
    pass


class EmptySweep(LangDivError, ValueError):
    pass


class MachineSyntaxError(LangDivError):
    """Machine file is not well-formed JSON."""

    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column
