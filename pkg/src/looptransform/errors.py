"""Exception hierarchy shared by all modules."""


class LoopTransformError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(LoopTransformError):
    """Malformed graph or word: unknown vertices, endpoint mismatch, disconnection."""


class CompositionError(StructuralError):
    """Two paths cannot be composed because their endpoints do not match."""


class ArgumentError(LoopTransformError, ValueError):
    """An argument violates an operation's precondition."""


class AliasingError(ArgumentError):
    """A sampling grid is too coarse to resolve a trigonometric polynomial."""


class RefinementError(LoopTransformError):
    """A level is not contained in the level it is being included into."""
