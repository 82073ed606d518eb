"""Exception hierarchy shared by all qfloer modules."""


class QFloerError(Exception):
    """Base class for every error raised by this package."""


class SplittingError(QFloerError):
    """Characteristic polynomial does not split into linear factors over Q."""


class DivisibilityError(QFloerError):
    pass


class SizeMismatch(QFloerError):
    pass


class NotASphere(QFloerError):
    pass


class UnsupportedDimension(QFloerError):
    pass


class LatticeInvariantError(QFloerError):
    """Pairing matrix violates the sphere diagonal or the duality relation."""


class MissingTensor(QFloerError):
    pass


class NotEquivariant(QFloerError):
    pass


class SchemaError(QFloerError):
    """Input document is malformed or references things that do not exist."""


class IdentityFailure(QFloerError):
    """A chain-level identity that must hold by construction did not."""
