class SturmlabError(Exception):
    """Base class for errors raised by sturmlab."""


class PrecisionError(SturmlabError, ValueError):
    """
    Not enough digits (or not a long enough word prefix) to certify the requested
    quantity. The message should say how much more precision is needed when that
    is known.
    """


class SpecError(SturmlabError, ValueError):
    """A number spec could not be parsed into a word and an enclosing interval."""


class NotUniqueError(SturmlabError, ValueError):
    """Raised when a word has zero or several right special factors of a given length."""

    def __init__(self, message: str, candidates=frozenset()):
        super().__init__(message)
        self.candidates = frozenset(candidates)


class InvariantViolation(SturmlabError, AssertionError):
    """An internal cross-check failed. This should be guaranteed by the math, so it indicates a bug."""
