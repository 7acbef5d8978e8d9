"""Exception types shared across the package.

Every error raised by the library derives from FFactorError so callers
(notably the CLI) can map failures to stable exit codes in one place.
"""


class FFactorError(Exception):
    """Base class for all library errors."""


class MalformedInstance(FFactorError):
    """Instance shape is broken: duplicate vertices, bad capacity values,
    or a capacity map that does not cover exactly the vertex set."""


class MalformedEdge(FFactorError):
    """An edge is a loop, a duplicate, or references an unknown vertex."""


class ClassCViolation(FFactorError):
    """Some vertex demands more incident edges than it has."""

    def __init__(self, vertex: str, message: str | None = None):
        self.vertex = vertex
        super().__init__(message or f"capacity exceeds degree at vertex {vertex!r}")


class NoSuchEdge(FFactorError):
    """The named edge is not present in the graph."""


class NotAFactor(FFactorError):
    """An edge set is not a valid factor of the problem it was paired with."""


class NotDeficient(FFactorError):
    """Trail search was started at a vertex that is already saturated."""


class NotAugmenting(FFactorError):
    """A flip was requested along a trail that is not augmenting."""


class InfiniteCapacityUnsupported(FFactorError):
    """The operation only supports finite capacities."""


class PropertyDoesNotHold(FFactorError):
    """A precondition required the property to hold on the input, but it does not."""


class InternalHereditaryFailure(FFactorError):
    """A hereditary extension step found no witness.  For the factor-existence,
    obstruction-free, and augmenting-trail properties this indicates an
    implementation bug; for the acyclic-factor property it is a measured
    outcome (that property is not known to be hereditary)."""


class BudgetExceeded(FFactorError):
    """A configured search budget (node count, edge cap, factor cap) ran out."""


class ChooserFailure(FFactorError):
    """An extension chooser could not extend the factor at the requested vertex."""


class DeclarationViolated(FFactorError):
    """A declared perfect factor failed a local degree check on the explored region."""


class InstanceParseError(FFactorError):
    """An instance document could not be parsed; the message names the field."""
