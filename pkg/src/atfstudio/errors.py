"""Exception taxonomy shared across the toolkit.

Every error raised by library code derives from AtfError so callers (CLI,
service) can map failures to exit codes / HTTP statuses in one place.
"""


class AtfError(Exception):
    """Base class for all toolkit errors."""


class ZeroVector(AtfError):
    """A nonzero vector was required."""


class BadParams(AtfError):
    """Arguments violate a documented precondition."""


class NotCoprime(BadParams):
    """p, q must be coprime (with (1, 0) counting as coprime)."""


class IndexOutOfRange(AtfError, IndexError):
    """Vertex / corner / node index does not exist."""


class NotACorner(AtfError):
    """The addressed vertex does not host the requested corner."""


class NotIsolated(AtfError):
    """Another corner shares the anchor; isolate first."""


class MoveError(AtfError):
    """Base class for errors raised by the move calculus."""


class NotDelzant(MoveError):
    """Nodal trade requires a bare Delzant vertex."""


class EpsilonTooLarge(MoveError):
    """The requested node parameter leaves the region or hits another cut."""


class LeavesRegion(MoveError):
    """A slide target would place the node or its cut outside the region."""


class NodeOrderViolated(MoveError):
    """A slide target would jump past a neighbouring node."""


class HitsNode(MoveError):
    """A slide target coincides with another node on the same cut."""


class CornerMerge(MoveError):
    """The eigenline exits through another corner with the same eigenline.

    Callers that iterate mutations apply their restart policy on this error
    instead of merging corners automatically.
    """


class EigenlineGrazesBoundary(MoveError):
    """The eigenline runs along a boundary edge."""


class EigenlineNoExit(MoveError):
    """The eigenline never exits through a genuine boundary edge
    (unbounded region), so the cut cannot re-anchor."""


class ObstructedCut(MoveError):
    """Another corner's cut segment crosses the shearing eigenline."""


class MoveInvalid(MoveError):
    """A move produced a diagram that fails validation."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotIntegrallyTransversal(AtfError):
    """Probe direction is not integrally transversal to the entry edge."""


class Unclearable(AtfError):
    """Nodes and cuts cannot be slid off the requested region."""


class OutOfRegion(AtfError):
    """Query point lies outside the diagram."""


class NotAModelGerm(AtfError):
    """The piecewise-linear germ is not in the min-of-two-integral-linear
    family produced by model almost toric fibres."""


class NonDelzantBareVertex(AtfError):
    """Walk preparation found a bare vertex that is not Delzant."""


class BadEdge(AtfError):
    """The named edge does not exist or is degenerate."""


class InsufficientData(AtfError):
    """Not enough trace data for the requested report."""
