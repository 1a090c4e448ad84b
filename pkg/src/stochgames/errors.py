"""Exception types shared across the library."""


class GameFormatError(ValueError):
    """Malformed game document: syntax, schema, or label problems."""

    def __init__(self, message, *, line=None, column=None):
        location = ""
        if line is not None:
            location = f"line {line}: " if column is None else f"line {line}, column {column}: "
        super().__init__(location + message)
        self.line = line
        self.column = column


class StochasticityError(GameFormatError):
    """A transition row is negative or does not sum to one."""


class DegenerateSupportError(ValueError):
    """A transition row lost all of its mass to the zero threshold."""


class PreconditionError(ValueError):
    """An operation was invoked outside its documented domain."""


class GuardExceededError(RuntimeError):
    """A subset enumeration was requested above the dimension guard."""


class NumericFailureError(RuntimeError):
    """An iterative routine could not reach its tolerance."""
