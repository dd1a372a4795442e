"""Exception hierarchy shared by every ladderlab module."""


class LadderLabError(Exception):
    """Base class for all library errors."""


class HeightTooLow(LadderLabError, ValueError):
    """A height coordinate lies below the configured minimum."""


class OutOfRange(LadderLabError, ValueError):
    """A query falls outside the range covered by a ladder cache."""


class HeightAboveCache(OutOfRange):
    """A height lies above the largest cached checkpoint."""


class CacheMismatch(LadderLabError):
    """A persisted cache was written with different parameters."""


class OverlapDetected(LadderLabError):
    """Components of a disconnected set touch or overlap."""


class NotSeparated(LadderLabError, ValueError):
    """Two segments do not have a positive gap between them."""


class RangeTooLarge(LadderLabError, ValueError):
    pass


class NoConvergence(LadderLabError):
    """Adaptive quadrature hit its depth cap."""


class TargetOutsideRange(LadderLabError):
    """No sign change of ``fn - target`` was found on the scan grid."""


class NotBracketed(LadderLabError, ValueError):
    pass


class BadU(LadderLabError, ValueError):
    """Segment length outside the open interval (0, pi/4)."""


class TransportViolation(LadderLabError):
    """The change-of-variables identity of the ladder failed."""


class ZeroDenominator(LadderLabError):
    pass


class MismatchedParams(LadderLabError, ValueError):
    pass


class PointOutsideSet(LadderLabError):
    pass


class RhsNearZero(LadderLabError):
    pass


class UnequalK(LadderLabError, ValueError):
    pass


class EqualDeltas(LadderLabError, ValueError):
    pass
