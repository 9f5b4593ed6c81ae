"""Exception hierarchy shared by every ccbox module."""


class CCBoxError(Exception):
    """Base class for all library errors."""


class InvalidBox(CCBoxError, ValueError):
    pass


class NegativeProbability(InvalidBox):
    pass


class NotNormalized(InvalidBox):
    pass


class SignallingDetected(InvalidBox):
    pass


class WrongType(CCBoxError, ValueError):
    """Operation requires a specific box type (usually 2222)."""


class TypeMismatch(CCBoxError, ValueError):
    pass


class WeightError(CCBoxError, ValueError):
    pass


class BadParameter(CCBoxError, ValueError):
    pass


class BadAnchor(BadParameter):
    pass


class NotInvertible(CCBoxError, ValueError):
    pass


class ResourceLimit(CCBoxError):
    """An enumeration would exceed its configured cap."""


class AmbiguousBoundary(CCBoxError):
    """Approximate arithmetic cannot decide on which side of a facet a value lies."""


class ApproxUnsound(CCBoxError):
    """An LP decision on approximate data falls inside the tolerance margin."""


class FreeBoxClass(CCBoxError):
    """Free boxes form a single infinite equivalence class."""
