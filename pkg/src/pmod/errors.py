"""Exception hierarchy shared by the library and the command line."""


class PmodError(Exception):
    """Base class for every error raised by pmod."""


class ParameterError(PmodError, ValueError):
    """A numeric parameter (epsilon, shift, horizon, ...) is out of range."""


class DimensionError(PmodError, ValueError):
    """Matrix shapes do not compose."""


class OrderError(PmodError, ValueError):
    """A structure map was requested for x > y."""


class StabilityError(PmodError, ValueError):
    """A module is not lower stable at the required threshold."""


class ValidationError(PmodError, ValueError):
    """A value violates a type invariant (grid order, shapes, ...)."""


class UsageError(PmodError, ValueError):
    """An operation was applied to the wrong kind of object."""


class PreconditionError(PmodError, ValueError):
    """An input certificate does not satisfy an operation's precondition."""


class BudgetExceeded(PmodError, RuntimeError):
    """An exhaustive search would exceed its configured budget."""


class ParseError(PmodError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
