"""Exception hierarchy shared by the engine, analysis, parser and CLI."""


class FunctionalEquationError(Exception):
    """Base class for all package errors."""


class UnresolvedFunctionError(FunctionalEquationError):
    pass


class NonHomogeneousError(FunctionalEquationError):
    pass


class ConditionError(FunctionalEquationError):
    pass


class SymmetrizationCapError(FunctionalEquationError):
    pass


class ScanCapError(FunctionalEquationError):
    pass


class NotNumericError(FunctionalEquationError):
    pass


class ParseError(FunctionalEquationError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{message} at line {line}, column {column}")


class SchemaError(FunctionalEquationError):
    pass
