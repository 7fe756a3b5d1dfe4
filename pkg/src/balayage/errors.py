"""Shared exception types.

Every failure mode that callers are expected to branch on gets its own
class.  Anything else (programming errors, violated internal assertions)
stays a plain ValueError / AssertionError.
"""


class Error(Exception):
    """Base class for all package-specific errors."""


class UndefinedSum(Error):
    """Adding opposite infinities has no value under our conventions."""


class DimensionMismatch(Error):
    """Operands live in spaces of different dimension."""


class LevelOutOfRange(Error):
    """Chain level index outside 1..depth."""


class NumericalBreakdown(Error):
    """A pivot candidate fell below the magnitude floor (1e-13)."""


class NotInterior(Error):
    """Operation requires an interior grid node."""


class InfiniteValue(Error):
    """A finite value was required but an infinity was supplied."""


class SingularSystem(Error):
    """A linear system that should be regular failed to solve."""


class NodeOutsideSubdomain(Error):
    """Node does not belong to the referenced subdomain."""


class InfiniteBoundaryValue(Error):
    """Dirichlet data must be finite on the boundary."""


class NotHarmonic(Error):
    """Stencil defect exceeds tolerance where harmonicity is required."""


class MultiplyConnected(Error):
    """Grid domain is not simply connected (or not connected)."""


class EmptyMargin(Error):
    """Subdomain touches the outer boundary; no room for a radius field."""


class BallLeavesDomain(Error):
    """A requested ball average sticks out of the stored domain."""


class SupportViolation(Error):
    """Measure support violates a stated containment."""


class RadiusTooSmall(Error):
    """Radius below one lattice step where a nondegenerate one is needed."""


class RingTooSparse(Error):
    """Too few grid nodes near the requested circle."""


class DomainMismatch(Error):
    """Two grid objects do not share the same domain."""


class NotFeasible(Error):
    """A construction was requested for an infeasible criterion instance."""


class ParseError(Error):
    """Problem description file could not be parsed."""
