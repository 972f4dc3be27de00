"""Exception types shared across the package."""


class DfaparError(Exception):
    """Base class for errors raised by dfapar."""


class DfaFormatError(DfaparError, ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class AutFormatError(DfaFormatError):
    pass


class InvalidPartitionError(DfaparError, ValueError):
    """A partition mixes acceptance or is not closed under transitions."""


class NonTransitiveApartError(DfaparError, ValueError):
    pass


class MissingInitialError(DfaparError, ValueError):
    pass


class AlphabetMismatchError(DfaparError, ValueError):
    pass


class ResourceError(DfaparError, MemoryError):
    """A configured size budget would be exceeded."""

    def __init__(self, message: str, required: int = 0, limit: int = 0):
        super().__init__(message)
        self.required = required
        self.limit = limit


class BudgetTimeout(DfaparError, TimeoutError):
    """A wall-clock deadline passed before the computation finished."""
