"""Exception hierarchy shared by the exact and numerical layers."""


class QMaassError(Exception):
    pass


class UnsupportedPhaseError(QMaassError):
    pass


class UnsupportedExponentError(QMaassError):
    pass


class NonUnitError(QMaassError):
    pass


class DomainError(QMaassError, ValueError):
    pass


class InsufficientPrecisionError(QMaassError):
    pass


class CatalogError(QMaassError):
    """A catalog entry is inconsistent (usually a transcription error)."""


class NonTerminatingSumError(QMaassError):
    pass


class PrecisionError(QMaassError):
    """A numerical sum could not reach the requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
