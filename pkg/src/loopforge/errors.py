"""Exception types shared across the package."""


class LoopforgeError(Exception):
    """Base class for all package-specific errors."""


class BoundsError(LoopforgeError):
    """A cell or edge lies outside the grid it was used with."""


class FormatError(LoopforgeError):
    """A puzzle, solution, template or descriptor file is malformed."""


class GenreMismatchError(LoopforgeError):
    """A solution was checked against a puzzle of a different genre."""


class CapabilityError(LoopforgeError):
    """The requested computation exceeds a configured capability limit."""


class SearchTimeout(LoopforgeError):
    """An exact search ran out of its time budget."""


class ReductionError(LoopforgeError):
    """A reduction or lifting step received inconsistent inputs."""
