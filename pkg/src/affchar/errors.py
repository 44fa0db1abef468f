"""Exception types shared across the package."""


class AffcharError(Exception):
    """Base class for all errors raised by this package."""


class CriticalLevelError(AffcharError):
    """The weight sits on the critical hyperplane, where nothing is defined."""


class CutoffError(AffcharError):
    """An enumeration window or iteration guard was exhausted before the
    result stabilized.  Raise the cutoff and retry."""


class DomainError(AffcharError):
    """A numerical evaluation point lies outside the required domain."""


class PathError(AffcharError):
    """A pole-scan path left its domain or collided with another root
    hyperplane."""
