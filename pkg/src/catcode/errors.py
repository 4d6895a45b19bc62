"""Exception types raised across the package."""


class CatCodeError(Exception):
    """Base class for all package errors."""


class NonHermitian(CatCodeError, ValueError):
    pass


class NoConvergence(CatCodeError, ArithmeticError):
    pass


class NotPSD(CatCodeError, ValueError):
    pass


class DimensionMismatch(CatCodeError, ValueError):
    pass


class DegenerateQubit(CatCodeError, ValueError):
    """The requested qubit has (numerically) vanishing norm."""


class TruncationTooSmall(CatCodeError, ValueError):
    pass


class EmptySlice(CatCodeError, ValueError):
    pass


class InvalidSpec(CatCodeError, ValueError):
    """A sweep specification failed validation.

    ``field`` names the offending key so the CLI can point at it.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
