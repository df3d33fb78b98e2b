"""Exception hierarchy. Every library error derives from :class:`CFAError`."""


class CFAError(Exception):
    """Base class for all cfakit errors."""


class NonFiniteScore(CFAError, ValueError):
    pass


class LengthMismatch(CFAError, ValueError):
    pass


class DegenerateLength(CFAError, ValueError):
    pass


class NeedTwoSystems(CFAError, ValueError):
    pass


class InvalidMinSize(CFAError, ValueError):
    pass


class UnknownSystem(CFAError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class SubsetTooSmall(CFAError, ValueError):
    pass


class NegativeWeight(CFAError, ValueError):
    pass


class ItemSetMismatch(CFAError, ValueError):
    pass


class TooLarge(CFAError, ValueError):
    pass


class InvalidSpec(CFAError, ValueError):
    pass


class ValidationError(CFAError, ValueError):
    """A record or value violates a stated invariant."""


class ParseError(CFAError, ValueError):
    """Malformed input; the message carries the source location."""

    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ScorerFailure(CFAError, RuntimeError):
    pass


class IoError(CFAError, OSError):
    pass
