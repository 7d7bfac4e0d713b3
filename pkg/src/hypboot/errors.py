"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class HorizonError(LookupError):
    """A query needs spectral data beyond the horizon that was computed/loaded.

    Distinct from DomainError: the question is well posed, we just don't
    hold enough of the spectrum to answer it.
    """


class ParseError(ValueError):
    """A serialized spectrum document is malformed.

    Carries a human-readable location (field path / entry number) so CLI
    errors can point at the offending entry.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CancellationError(ArithmeticError):
    """The crossing-cancellation linear system could not be solved exactly.

    Structurally this should never happen (the system is triangular with a
    positive diagonal); if it fires it signals a defect in the reduction.
    `residuals` holds the offending column coefficients.
    """

    def __init__(self, message: str, residuals=None):
        self.residuals = residuals
        super().__init__(message)


class NoThresholdError(ValueError):
    """A polynomial is not eventually positive, so no positivity threshold exists."""
