"""Exception hierarchy shared by every fastsobel module."""


class SobelError(Exception):
    """Base class for all library errors."""


class NonPositiveParam(SobelError, ValueError):
    pass


class NonIntegralWeight(SobelError, ValueError):
    def __init__(self, direction, row, col, value):
        self.direction = direction
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            f"K_{direction.lower()}[{row}][{col}] = {value} is not an integer"
        )


class WeightOverflow(SobelError, ValueError):
    pass


class ImageTooSmall(SobelError, ValueError):
    pass


class RowTooShort(SobelError, ValueError):
    pass


class ParityViolation(SobelError, ArithmeticError):
    pass


class MissingRow(SobelError, LookupError):
    pass


class VariantMismatch(SobelError, LookupError):
    pass


class LaneTooNarrow(SobelError, ValueError):
    pass


class DimMismatch(SobelError, ValueError):
    pass


class EmptyPlane(SobelError, ValueError):
    pass


class UnsupportedFormat(SobelError, ValueError):
    pass


class CorruptFile(SobelError, ValueError):
    pass


class UnsupportedExtension(SobelError, ValueError):
    pass
