"""Exception hierarchy.

The CLI maps each family to an exit code, so every error raised by the
library derives from one of the four bases below.
"""


class RLogConvexError(Exception):
    """Base class for all library errors."""


class UnsupportedInput(RLogConvexError):
    """Input is well formed but outside what the tool handles (exit code 2)."""


class ParseError(RLogConvexError):
    """Malformed recurrence, sequence or certificate text (exit code 3)."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SearchExhausted(RLogConvexError):
    """Bounded search ended without a witness. Not a disproof (exit code 4)."""


# exact arithmetic

class NeverPositive(RLogConvexError):
    """A rational function is not eventually positive."""


# series

class NotInvertible(RLogConvexError):
    pass


class NonPositiveLeading(RLogConvexError):
    pass


class DivergentComposition(RLogConvexError):
    pass


class InsufficientTruncation(RLogConvexError):
    def __init__(self, message, level=None):
        self.level = level
        super().__init__(message)


class ZeroDeviation(InsufficientTruncation):
    pass


# recurrences and sequences

class LeadingCoefficientVanishes(RLogConvexError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"leading coefficient vanishes at n={n}")


class NotWithinWindow(RLogConvexError):
    pass


# asymptotics

class IrrationalOrComplexBranch(UnsupportedInput):
    def __init__(self, message, factor=None):
        self.factor = factor
        super().__init__(message)


class DominanceAmbiguous(UnsupportedInput):
    pass


class RamificationExceeded(UnsupportedInput):
    pass


class DegenerateOrder(UnsupportedInput):
    pass


# certification

class NotAsymptoticallyLogConvex(RLogConvexError):
    pass


class BaseWindowNotFound(SearchExhausted):
    def __init__(self, limit):
        self.limit = limit
        super().__init__(f"no base window found below n={limit}")
