"""Exception hierarchy shared by every module of the package."""


class CMError(Exception):
    """Base class for all errors raised by :mod:`cmlegendre`."""


class PrecisionExhausted(CMError):
    """Root separation or certification failed at the maximum allowed precision."""


class DegreeTooSmall(CMError, ValueError):
    pass


class VariantParityMismatch(CMError, ValueError):
    pass


class SquareVariantForbidden(CMError, ValueError):
    pass


class DegenerateSolution(CMError):
    pass


class NoSolutionsFound(CMError):
    pass


class DivergedDuringRefine(CMError):
    pass


class LambdaDegenerate(CMError, ValueError):
    pass


class DenominatorZero(CMError, ZeroDivisionError):
    pass


class NotInUpperHalfPlane(CMError, ValueError):
    pass


class AmbiguousMatch(CMError):
    pass


class InsufficientPrecision(CMError):
    pass


class DegenerateBranch(CMError, ZeroDivisionError):
    pass


class RowMismatch(CMError):
    """A recomputed table row disagrees with the golden value."""

    def __init__(self, row, message=""):
        self.row = row
        super().__init__(f"row {row!r}: {message}" if message else f"row {row!r}")
