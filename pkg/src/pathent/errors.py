"""Exception hierarchy shared across the package."""


class PathentError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(PathentError):
    """Operands live on different mode counts, or a state has the wrong shape."""


class ElementError(PathentError):
    """A circuit element is configured with invalid mode indices."""


class ZeroProbabilityError(PathentError):
    """A conditioning outcome has probability exactly zero.

    Distinct from a numerical error: it signals an impossible
    post-selection (for example demanding more photons at a detector
    than can ever arrive there).
    """


class OracleSizeError(PathentError):
    """The dense reference engine was asked to exceed its size guard."""


class CircuitParseError(PathentError):
    """Syntax error in a circuit description file."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class CircuitSemanticError(PathentError):
    """Structurally valid circuit text that violates circuit semantics."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{line}:{column or 1}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column
