"""Exception types raised across the package."""


class DeblurError(Exception):
    """Base class for computation errors."""


class DimensionError(DeblurError, ValueError):
    """Array shapes are incompatible with the requested operation."""


class DegenerateKernelError(DeblurError):
    """A kernel lost all of its mass after projection onto the simplex."""

    def __init__(self, message, level=None):
        if level is not None:
            message = f"{message} (pyramid level {level})"
        super().__init__(message)
        self.level = level


class SingularSystemError(DeblurError):
    """A frequency-domain denominator vanished."""


class ImageFormatError(ValueError):
    """An image file could not be parsed or written."""
