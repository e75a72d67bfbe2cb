"""Exception hierarchy shared by every module.

The CLI maps each family onto an exit code, so new errors should subclass
one of the families below rather than :class:`FlatHoloError` directly.
"""


class FlatHoloError(Exception):
    """Base class for all errors raised by flatholo."""


class ParseError(FlatHoloError, ValueError):
    """Input could not be read at all (bad JSON, wrong schema)."""


class ValidationError(FlatHoloError, ValueError):
    """Input is well formed but mathematically invalid."""


class CapExceeded(FlatHoloError):
    """A configured size limit was hit."""


class InvariantViolation(FlatHoloError):
    """An internal consistency check failed; always indicates a bug."""


class OrderCapExceeded(CapExceeded):
    pass


class GroupTooLarge(CapExceeded):
    pass


class PointGroupInfinite(CapExceeded):
    pass


class TrivialGroup(ValidationError):
    pass


class InvalidPrime(ValidationError):
    pass


class NonCharacter(ValidationError):
    pass


class EmbeddingInvalid(ValidationError):
    pass


class ZeroRank(ValidationError):
    pass


class NotCyclic(ValidationError):
    pass


class NotACocycle(ValidationError):
    pass


class LatticeRankDeficient(ValidationError):
    pass


class NotBieberbach(ValidationError):
    pass


class FixtureInvalid(ValidationError):
    pass


class InternalFreePartDetected(InvariantViolation):
    pass


class PropertyViolated(InvariantViolation):
    pass


class OracleDisagreement(InvariantViolation):
    pass
