"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class UndefinedRatioError(ArithmeticError):
    """A ratio would divide by zero."""


class DecodeError(ValueError):
    """A compressed payload could not be decoded.

    ``offset`` is the byte position in the payload where decoding broke down.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (payload offset {offset})"
        super().__init__(message)
        self.offset = offset


class StageError(RuntimeError):
    """A pipeline stage failed on a particular input file."""

    def __init__(self, stage, path, cause):
        super().__init__(f"{stage} failed for {path}: {cause}")
        self.stage = stage
        self.path = str(path)
        self.cause = cause
