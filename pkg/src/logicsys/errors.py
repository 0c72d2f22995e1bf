"""Exception hierarchy shared by the library and the CLI."""


class LogicSystemError(Exception):
    """Base class for every error raised by logicsys."""


class UnknownSymbolError(LogicSystemError):
    pass


class UnknownRelationError(LogicSystemError, LookupError):
    pass


class BudgetExceededError(LogicSystemError):
    """Raised when a closure needs more rule firings than its budget allows."""


class InvalidSystemError(LogicSystemError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"invalid rule system: {lines}")


class LanguageTooLargeError(LogicSystemError):
    pass


class LanguageMismatchError(LogicSystemError):
    pass


class NotAnOperatorError(LogicSystemError):
    """The table fails at least one of the consequence-operator axioms."""


class InvalidDerivationError(LogicSystemError):
    pass


class ParseError(LogicSystemError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
