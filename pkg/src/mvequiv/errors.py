"""Exception hierarchy shared across the package.

Validation errors (bad user input or data) are kept separate from numeric
failures (quadrature / internal consistency) so the CLI can map them to
distinct exit codes.
"""


class MvequivError(Exception):
    """Base class for all package errors."""


class ValidationError(MvequivError, ValueError):
    """Invalid argument, data, or configuration."""


class DimensionMismatchError(ValidationError):
    pass


class AsymmetricMatrixError(ValidationError):
    pass


class NotPositiveDefiniteError(ValidationError):
    pass


class SampleTooSmallError(ValidationError):
    pass


class DegenerateFrontierError(ValidationError):
    """Slope parameter is (numerically) zero where a positive one is required."""


class ParseError(ValidationError):
    """Malformed input file; carries row/column location when known."""

    def __init__(self, message, row=None, column=None):
        loc = ""
        if row is not None:
            loc += f" (row {row}"
            loc += f", column {column})" if column is not None else ")"
        super().__init__(message + loc)
        self.row = row
        self.column = column


class NumericError(MvequivError, ArithmeticError):
    """Numeric computation failed to meet its accuracy contract."""


class QuadratureFailureError(NumericError):
    pass


class InternalConsistencyError(NumericError):
    """Two routes to the same quantity disagree beyond tolerance."""
