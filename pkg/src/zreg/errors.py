"""Exception hierarchy shared by every module."""


class ZregError(Exception):
    """Base class for all library errors."""


class DomainError(ZregError, ValueError):
    """Argument outside the region where an operation is defined."""


class PoleError(DomainError):
    """Argument at (or numerically indistinguishable from) a pole."""


class VanishingFactorError(DomainError):
    """A product factor or denominator is numerically zero."""


class CapacityError(ZregError, ValueError):
    """Requested size exceeds a configured cap."""


class FormatError(ZregError):
    """A persisted file is truncated or malformed."""


class InvariantError(ZregError):
    """Data violates a structural invariant (ordering, primality, ...)."""


class NonDivisibilityError(ZregError, ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""
