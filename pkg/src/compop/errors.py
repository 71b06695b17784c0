"""Exception hierarchy shared by all modules."""


class CompopError(Exception):
    """Base class for library errors."""


class DomainError(CompopError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class ConvergenceError(CompopError, RuntimeError):
    """An iterative or refinement procedure failed to converge."""


class ConfigError(CompopError, ValueError):
    """A configuration value or symbol specification could not be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        elif column is not None:
            where = f" (column {column})"
        super().__init__(message + where)
