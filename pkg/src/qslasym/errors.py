"""Exception hierarchy.

Everything derives from :class:`QSLError` so callers (and the CLI) can catch
the whole family; the two intermediate classes decide the CLI exit code.
"""


class QSLError(ValueError):
    """Base class for all library errors."""


class ValidationError(QSLError):
    """Input data is well-formed but violates a mathematical precondition."""


class ParseError(QSLError):
    """Input text or file could not be decoded."""


class NotHermitian(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class NotPermutation(ValidationError):
    pass


class InvalidOrder(ValidationError):
    pass


class SupportError(ValidationError):
    pass


class InvalidEpsilon(ValidationError):
    pass


class InvalidHorizon(ValidationError):
    pass


class NotTracePreserving(ValidationError):
    pass


class NotIncoherentTarget(ValidationError):
    pass


class InvalidDilation(ValidationError):
    pass


class MissingCertificate(ValidationError):
    pass
