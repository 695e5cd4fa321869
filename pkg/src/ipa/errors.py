"""Exception hierarchy shared by every layer of the engine."""


class IpaError(Exception):
    """Base class for all engine errors."""


class UndeclaredSymbol(IpaError):
    pass


class ArityMismatch(IpaError):
    pass


class SortMismatch(IpaError):
    pass


class UnboundSymbol(IpaError):
    pass


class FreeSymbolOutOfScope(IpaError):
    pass


class EmptySubstitutionSet(IpaError):
    pass


class ScopeTooLarge(IpaError):
    pass


class StateBudgetExceeded(IpaError):
    pass


class OutOfScope(IpaError):
    """An integer term left the finite scope used by explicit-state evaluation."""


class ExternalSolverFailure(IpaError):
    pass


class ParseError(IpaError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(IpaError):
    def __init__(self, message, diagnostics=()):
        self.diagnostics = list(diagnostics)
        super().__init__(message)
