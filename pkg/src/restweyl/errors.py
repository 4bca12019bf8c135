"""Exception types shared across the package."""


class RestweylError(Exception):
    """Base class for package errors."""


class CapacityError(RestweylError):
    """A requested computation exceeds the configured dimension cap."""

    def __init__(self, message, dimension=None, cap=None):
        super().__init__(message)
        self.dimension = dimension
        self.cap = cap


class CapabilityError(RestweylError):
    """The operation is outside the supported range (e.g. oracle rank)."""


class IntegrityError(RestweylError):
    """An internal consistency check failed; indicates bad data or a bug."""


class CatalogError(RestweylError):
    """Unknown real-form label or parameters violating family constraints."""


class SignTableGapError(RestweylError):
    """The split sign table has no verified row for the requested weight."""


class CacheCorruptError(RestweylError):
    """A cache record failed its content-hash check."""


class CacheVersionError(RestweylError):
    """A cache record was written under an incompatible schema version."""
