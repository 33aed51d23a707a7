"""Exception hierarchy shared by the library and the command line."""


class ThompsonError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ThompsonError, ValueError):
    """An argument is well formed but outside the domain of the operation."""


class ParseError(ThompsonError, ValueError):
    """Text input does not match the expected grammar."""


class StructureError(ParseError):
    """A list of branch pairs is not a pair of complete, sorted prefix codes."""


class ConstraintError(DomainError):
    """A partial branch-pair constraint cannot be realized by an element of F.

    ``condition`` is the number (1-4) of the violated interval condition, or
    ``None`` when the constraint is malformed (unsorted, not prefix-free).
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class DepthError(DomainError):
    """Unrolling an expansion exceeded the configured depth cap."""
