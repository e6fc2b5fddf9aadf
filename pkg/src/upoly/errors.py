"""Exception types shared across the package."""


class UPolyError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(UPolyError):
    """An input is larger than the configured safety cap for an operation."""


class NotATree(UPolyError):
    """An operation that requires a tree received a non-tree graph."""


class LoopContraction(UPolyError):
    """Attempted to contract a loop edge."""


class MalformedPolynomial(UPolyError):
    """A polynomial does not have the structure the operation requires."""


class ReconstructionFailed(UPolyError):
    """No candidate branch divides the remaining polynomial."""


class VerificationFailed(UPolyError):
    """A verified identity did not hold; names the first violated assertion."""


class PolyParseError(UPolyError):
    """Malformed polynomial text or JSON; carries the offending position."""

    def __init__(self, message: str, position: int = -1):
        super().__init__(message if position < 0 else f"{message} (at position {position})")
        self.position = position


class TreeParseError(UPolyError):
    """Malformed tree text or JSON."""
