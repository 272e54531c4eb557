"""Shared exception types."""


class PresentationError(ValueError):
    """A constructor was handed data violating its presentation contract."""


class CertificateRefusal(Exception):
    """A certificate could not be produced below the brute-force bound.

    Carries enough structure to name the first failing obligation.
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class UndecidedAtDepth(Exception):
    """A depth-bounded check ran out of budget without deciding either way."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details
