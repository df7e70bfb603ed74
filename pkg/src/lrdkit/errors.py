"""Exception hierarchy. Every error raised by lrdkit derives from ``LrdError``."""


class LrdError(Exception):
    pass


class ParseError(LrdError, ValueError):
    """Malformed input row. ``row`` is the 1-based line number in the file."""

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DuplicateTimestampError(LrdError, ValueError):
    pass


class GapError(LrdError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class InsufficientDataError(LrdError, ValueError):
    pass


class EmptySelectionError(LrdError, ValueError):
    pass


class DegenerateError(LrdError, ArithmeticError):
    """Zero variance, singular regressors or an otherwise undefined statistic."""


class ConfigError(LrdError, ValueError):
    pass
