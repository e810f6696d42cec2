"""Exception types shared across the toolkit."""


class FoamBoundsError(Exception):
    """Base class for structured errors raised by this package."""


class DomainMembershipError(FoamBoundsError):
    """A point lies outside the domain it was declared to live in."""


class UnboundedInstanceError(FoamBoundsError):
    """No finite radius cap exists, so the area lower bound is infinite.

    Raised when a point has no boundary in sight and no curvature cap
    (h = 0), which makes the admissible-radii region unbounded.
    """


class DegeneratePolytopeError(FoamBoundsError):
    """The feasible region has empty interior (lower-dimensional)."""


class SubsetSizeError(FoamBoundsError):
    """Exact subset enumeration was refused because 2^N is too large."""


class NumericalError(FoamBoundsError):
    """A numerical routine failed beyond recoverable fallbacks."""


class MeshFormatError(FoamBoundsError):
    """Mesh file could not be parsed.

    Attributes:
        line: 1-based line number of the offending input line, if known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MeshInvariantError(FoamBoundsError):
    """Parsed mesh violates a structural invariant (names the element)."""
